#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace contract_rl {

// Deterministic RNG used throughout the library. std::mt19937_64 has a
// standardized output sequence, and the double mapping below is explicit,
// so seeded runs are bit-reproducible across platforms. Distribution
// classes from <random> are implementation-defined and must not be used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    return std::min(n - 1, static_cast<int>(uniform() * static_cast<double>(n)));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Samples an index from a probability vector. Rounding slack goes to the
  // last index with positive mass.
  int categorical(std::span<const double> probs) {
    double u = uniform();
    double cum = 0.0;
    int last_positive = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] > 0.0) last_positive = i;
      cum += probs[i];
      if (u < cum) return i;
    }
    return last_positive;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Dense row-major (rows x cols) table of doubles.
struct Table2 {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Table2() = default;
  Table2(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  std::span<const double> row(int r) const { return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
  std::span<double> row(int r) { return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
};

inline double sup_distance(const Table2& a, const Table2& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("sup_distance: shape mismatch");
  double d = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) d = std::max(d, std::abs(a.data[i] - b.data[i]));
  return d;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Index of the largest entry; ties within tol go to the lowest index.
inline int argmax_lowest(std::span<const double> v, double tol = 0.0) {
  double m = *std::max_element(v.begin(), v.end());
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    if (v[i] >= m - tol) return i;
  }
  return 0;
}

inline double max_of(std::span<const double> v) {
  return *std::max_element(v.begin(), v.end());
}

// Fixed-width float formatting for CSV output: 9 significant digits.
inline std::string format_float(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

}  // namespace contract_rl
