#include "cramer/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace cramer {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

namespace {
nlohmann::json model_json(const GmmN& g) {
  g.validate();
  nlohmann::json root;
  root["dim"] = g.dim;
  nlohmann::json comps = nlohmann::json::array();
  for (std::size_t j = 0; j < g.size(); ++j) {
    nlohmann::json c;
    c["weight"] = g.weights[j];
    nlohmann::json mean = nlohmann::json::array();
    for (int d = 0; d < g.dim; ++d) mean.push_back(g.means[j][d]);
    c["mean"] = std::move(mean);
    nlohmann::json scale = nlohmann::json::array();
    for (int r = 0; r < g.dim; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int col = 0; col < g.dim; ++col) row.push_back(g.scales[j](r, col));
      scale.push_back(std::move(row));
    }
    c["scale"] = std::move(scale);
    comps.push_back(std::move(c));
  }
  root["components"] = std::move(comps);
  return root;
}
}  // namespace

std::string model_to_json(const GmmN& g) { return model_json(g).dump(2) + "\n"; }

std::string model_to_json(const Gmm1& g) { return model_to_json(to_multivariate(g)); }

GmmN model_from_json(const std::string& text) {
  const nlohmann::json root = nlohmann::json::parse(text);
  GmmN g;
  g.dim = root.at("dim").get<int>();
  if (g.dim < 1) throw std::invalid_argument("model: dim must be positive");
  for (const auto& c : root.at("components")) {
    g.weights.push_back(c.at("weight").get<double>());
    const auto& mean = c.at("mean");
    if (static_cast<int>(mean.size()) != g.dim)
      throw std::invalid_argument("model: mean length disagrees with dim");
    Eigen::VectorXd mu(g.dim);
    for (int d = 0; d < g.dim; ++d) mu[d] = mean[d].get<double>();
    g.means.push_back(std::move(mu));
    const auto& scale = c.at("scale");
    if (static_cast<int>(scale.size()) != g.dim)
      throw std::invalid_argument("model: scale must be dim x dim");
    Eigen::MatrixXd s(g.dim, g.dim);
    for (int r = 0; r < g.dim; ++r) {
      if (static_cast<int>(scale[r].size()) != g.dim)
        throw std::invalid_argument("model: scale must be dim x dim");
      for (int col = 0; col < g.dim; ++col) s(r, col) = scale[r][col].get<double>();
    }
    g.scales.push_back(std::move(s));
  }
  g.validate();
  return g;
}

void save_model(const std::string& path, const GmmN& g) { write_file(path, model_to_json(g)); }

void save_model(const std::string& path, const Gmm1& g) {
  save_model(path, to_multivariate(g));
}

GmmN load_model(const std::string& path) { return model_from_json(read_file(path)); }

Gmm1 to_univariate(const GmmN& g) {
  if (g.dim != 1) throw std::invalid_argument("to_univariate: model is not one-dimensional");
  Gmm1 out;
  out.weights = g.weights;
  for (std::size_t j = 0; j < g.size(); ++j) {
    out.means.push_back(g.means[j][0]);
    out.stds.push_back(g.scales[j](0, 0));
  }
  out.validate();
  return out;
}

GmmN to_multivariate(const Gmm1& g) {
  g.validate();
  GmmN out;
  out.dim = 1;
  out.weights = g.weights;
  for (std::size_t j = 0; j < g.size(); ++j) {
    Eigen::VectorXd mu(1);
    mu[0] = g.means[j];
    out.means.push_back(std::move(mu));
    Eigen::MatrixXd s(1, 1);
    s(0, 0) = g.stds[j];
    out.scales.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<double>> load_points_csv(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw CsvError{0, 0, "cannot open " + path};
  std::vector<std::vector<double>> points;
  std::string line;
  std::size_t row = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (row == 1 && skip_header) continue;
    if (line.empty()) continue;
    std::vector<double> point;
    std::size_t col = 0;
    const char* p = line.data();
    const char* end = p + line.size();
    while (true) {
      ++col;
      const char* field_end = p;
      while (field_end != end && *field_end != ',') ++field_end;
      double v;
      const auto [ptr, ec] = std::from_chars(p, field_end, v);
      if (ec != std::errc{} || ptr != field_end)
        throw CsvError{row, col, "not a decimal number"};
      point.push_back(v);
      if (field_end == end) break;
      p = field_end + 1;
    }
    if (columns == 0) {
      columns = point.size();
    } else if (point.size() != columns) {
      throw CsvError{row, point.size(), "expected " + std::to_string(columns) + " columns"};
    }
    points.push_back(std::move(point));
  }
  return points;
}

void save_points_csv(const std::string& path,
                     const std::vector<std::vector<double>>& points) {
  std::ostringstream out;
  for (const auto& point : points) {
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (i) out << ',';
      out << format_double(point[i]);
    }
    out << '\n';
  }
  write_file(path, out.str());
}

void save_history_csv(const std::string& path, const std::vector<double>& history) {
  std::ostringstream out;
  out << "step,loss\n";
  for (std::size_t i = 0; i < history.size(); ++i)
    out << i << ',' << format_double(history[i]) << '\n';
  write_file(path, out.str());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace cramer
