#include "cramer/scalar_kernel.hpp"

#include <cmath>

namespace cramer {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)
constexpr double kInvSqrt2 = 0.7071067811865475244;    // 1/sqrt(2)
// Past this point Phi, phi and the U/V tails are exactly 0/1 in double
// precision, so the asymptotes are exact.
constexpr double kTailCutoff = 40.0;
}  // namespace

double phi_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double phi_cdf_centered(double x) noexcept { return 0.5 * std::erf(x * kInvSqrt2); }

double phi_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double u_fn(double x) noexcept {
  if (x >= kTailCutoff) return x;
  if (x <= -kTailCutoff) return 0.0;
  return x * phi_cdf(x) + phi_pdf(x);
}

double v_fn(double x) noexcept {
  const double a = std::fabs(x);
  if (a >= kTailCutoff) return 0.5 * a;
  return a * phi_cdf_centered(a) + phi_pdf(a);
}

double cross_term(double m1, double s1, double m2, double s2) noexcept {
  const double d = m1 - m2;
  if (d == 0.0) {
    // U(0) = phi(0); no softening needed since the 0/0 ratio never forms.
    return std::sqrt(s1 * s1 + s2 * s2) * kInvSqrt2Pi;
  }
  const double z = std::sqrt(s1 * s1 + s2 * s2 + kVarianceSoftening);
  return z * u_fn(d / z);
}

double v_term(double m1, double s1, double m2, double s2) noexcept {
  const double d = m1 - m2;
  if (d == 0.0) {
    return std::sqrt(s1 * s1 + s2 * s2) * kInvSqrt2Pi;
  }
  const double z = std::sqrt(s1 * s1 + s2 * s2 + kVarianceSoftening);
  return z * v_fn(d / z);
}

}  // namespace cramer
