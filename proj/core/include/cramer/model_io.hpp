#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cramer/gmm1.hpp"
#include "cramer/gmm_nd.hpp"

namespace cramer {

/// Shortest decimal representation that parses back to exactly the same
/// double (the canonical float format used in every file this library writes).
std::string format_double(double v);

/// Model files are JSON objects
///   {"components": [{"mean": [...], "scale": [[...], ...], "weight": w}, ...],
///    "dim": m}
/// with 1D models stored as dim = 1, one-element means and 1x1 scales.
/// Serialization is canonical: saving a loaded file reproduces it byte for
/// byte.
std::string model_to_json(const GmmN& g);
std::string model_to_json(const Gmm1& g);
GmmN model_from_json(const std::string& text);

void save_model(const std::string& path, const GmmN& g);
void save_model(const std::string& path, const Gmm1& g);
GmmN load_model(const std::string& path);

/// A dim=1 model as a univariate mixture (sigma = the 1x1 scale entry).
Gmm1 to_univariate(const GmmN& g);
GmmN to_multivariate(const Gmm1& g);

struct CsvError : std::runtime_error {
  CsvError(std::size_t row_, std::size_t column_, const std::string& message)
      : std::runtime_error("row " + std::to_string(row_) + ", column " +
                           std::to_string(column_) + ": " + message),
        row(row_),
        column(column_) {}
  std::size_t row;     // 1-based
  std::size_t column;  // 1-based
};

/// Comma-separated decimal floats, one point per row, no header unless
/// `skip_header`. Throws CsvError with row/column diagnostics on malformed
/// input or inconsistent column counts.
std::vector<std::vector<double>> load_points_csv(const std::string& path,
                                                 bool skip_header = false);

void save_points_csv(const std::string& path,
                     const std::vector<std::vector<double>>& points);

/// Loss-history CSV with a "step,loss" header.
void save_history_csv(const std::string& path, const std::vector<double>& history);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace cramer
