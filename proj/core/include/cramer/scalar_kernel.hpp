#pragma once

namespace cramer {

// Softening constant added under the square root of combined variances so
// that the pair terms stay differentiable when both components degenerate
// to point masses.
inline constexpr double kVarianceSoftening = 1e-20;

/// Standard normal CDF, computed through erfc for full relative accuracy
/// in both tails.
double phi_cdf(double x) noexcept;

/// Centered CDF, phi_cdf(x) - 0.5, without cancellation near x = 0.
double phi_cdf_centered(double x) noexcept;

/// Standard normal density exp(-x^2/2)/sqrt(2*pi).
double phi_pdf(double x) noexcept;

/// Antiderivative of the standard normal CDF: U(x) = x*Phi(x) + phi(x).
/// Satisfies U'(x) = Phi(x) and U(x) = GELU(x) + phi(x).
double u_fn(double x) noexcept;

/// Symmetrized antiderivative V(x) = (U(x) + U(-x))/2 = x*(Phi(x) - 1/2) + phi(x).
/// Even in x (evaluated through |x| so the symmetry is bitwise).
double v_fn(double x) noexcept;

/// Integral of (1 - Phi_{m1,s1^2}(x)) * Phi_{m2,s2^2}(x) over the real line:
/// z * U((m1 - m2)/z) with z = sqrt(s1^2 + s2^2 + softening). Both standard
/// deviations may be zero; the degenerate/degenerate limit is max(m1 - m2, 0).
double cross_term(double m1, double s1, double m2, double s2) noexcept;

/// Symmetric pair term z * V((m1 - m2)/z), equal to
/// (cross_term(m1,s1,m2,s2) + cross_term(m2,s2,m1,s1)) / 2.
double v_term(double m1, double s1, double m2, double s2) noexcept;

}  // namespace cramer
