#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cts {

using Vec = std::vector<double>;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValueError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dense row-major matrix, just enough for the tagger.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::size_t size() const { return data.size(); }
  void zero() { std::fill(data.begin(), data.end(), 0.0); }
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline bool all_finite(const Vec& v) {
  for (const double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// log(1 + sum_k exp(a_k)) with max subtraction
inline double log1p_sum_exp(const std::vector<double>& a) {
  double m = 0.0;  // the implicit "1" term has exponent 0
  for (const double x : a) m = std::max(m, x);
  double s = std::exp(-m);
  for (const double x : a) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace cts
