#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace tropdiv {

// Centralized tolerances. Coefficient/degree comparisons use kTol unless a
// caller overrides; LP residual certificates use kLpTol.
inline constexpr double kTol = 1e-9;
inline constexpr double kLpTol = 1e-8;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Evaluating the empty (bottom = -infinity) polynomial.
struct bottom_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Lattice-mode operation on non-integer degrees.
struct lattice_error : std::domain_error {
  using std::domain_error::domain_error;
};

// LP cycling guard exceeded, solver divergence, NaN loss.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic RNG. Draws are derived from raw mt19937_64 output rather
// than std:: distributions so that sequences are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Uniform in [0, n). n must be positive.
  int uniform_int(int n) {
    if (n <= 0) throw input_error("Rng::uniform_int: n must be positive");
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
  }

  // Box-Muller; one variate per call, no spare caching.
  double gaussian() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 eng_;
};

inline bool nearly_equal(double a, double b, double tol = kTol) {
  return std::abs(a - b) <= tol;
}

}  // namespace tropdiv
