#ifndef SEMILOCAL_CORE_HPP_
#define SEMILOCAL_CORE_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semilocal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Global numerical tolerances shared by every module.
struct Tolerances {
  static constexpr double feasibility = 1e-9;   ///< constraint satisfaction
  static constexpr double dedup = 1e-7;         ///< point identification
  static constexpr double distance = 1e-12;     ///< numerators below this count as 0
  static constexpr double pivot = 1e-11;        ///< singular pivots in small dense solves
};

// Error hierarchy. Each carries the process exit code the CLI maps it to.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 4; }
};

/// Malformed inputs: dimension mismatches, bad packing, invalid options.
class ArgumentError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

/// A numerical routine hit its iteration cap or a singular system.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, Vector best_iterate = {})
      : Error(what), best_iterate_(std::move(best_iterate)) {}
  const Vector& best_iterate() const { return best_iterate_; }

 private:
  Vector best_iterate_;
};

/// A mathematical precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Sizes beyond what an exhaustive routine is allowed to enumerate.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

/// A nonnegative real or +infinity.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  explicit ExtendedReal(double v) : value_(v) {
    if (std::isnan(v) || v < 0.0) {
      throw ArgumentError("ExtendedReal must be nonnegative, got " + std::to_string(v));
    }
  }
  static ExtendedReal infinity() { return ExtendedReal(kInf); }
  static ExtendedReal zero() { return ExtendedReal(0.0); }

  bool is_infinite() const { return std::isinf(value_); }
  bool is_finite() const { return !is_infinite(); }
  double value() const { return value_; }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    return ExtendedReal(a.value_ + b.value_);
  }
  friend ExtendedReal max(ExtendedReal a, ExtendedReal b) {
    return a.value_ >= b.value_ ? a : b;
  }
  friend auto operator<=>(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  double value_ = 0.0;
};

enum class NormKind { chebyshev, euclidean };

inline double norm(const Vector& v, NormKind kind) {
  if (v.size() == 0) return 0.0;
  return kind == NormKind::chebyshev ? v.lpNorm<Eigen::Infinity>() : v.norm();
}

inline double distance(const Vector& a, const Vector& b, NormKind kind) {
  return norm(a - b, kind);
}

inline const char* to_string(NormKind kind) {
  return kind == NormKind::chebyshev ? "chebyshev" : "euclidean";
}

inline NormKind norm_from_string(const std::string& s) {
  if (s == "chebyshev") return NormKind::chebyshev;
  if (s == "euclidean") return NormKind::euclidean;
  throw ArgumentError("unknown norm '" + s + "' (expected chebyshev or euclidean)");
}

/// Norm pair used by every quotient of one experiment.
struct NormSpec {
  NormKind parameter_norm = NormKind::chebyshev;
  NormKind image_norm = NormKind::euclidean;
  bool operator==(const NormSpec&) const = default;
};

// Portable deterministic randomness. std::normal_distribution differs across
// standard libraries, so everything is derived from splitmix64 directly.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(a + 0x632be59bd9b4e019ULL)) ^
                    splitmix64(b + 0x85157af5ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64(state_);
  }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  Vector normal_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

 private:
  std::uint64_t state_;
};

inline std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline Vector from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Vector scalar_vector(double x) { return Vector::Constant(1, x); }

}  // namespace semilocal

#endif  // SEMILOCAL_CORE_HPP_
