#ifndef SEMILOCAL_SCALAR_FUNCTION_HPP_
#define SEMILOCAL_SCALAR_FUNCTION_HPP_

// Closed-form scalar functions and sign-change root isolation for their
// sub-level sets on a compact interval.

#include "semilocal/set_geometry.hpp"

namespace semilocal {

/// f - alpha touches zero without crossing, or vanishes on a whole cell.
class DegenerateLevelSetError : public Error {
 public:
  using Error::Error;
};

class ScalarFunction {
 public:
  enum class Kind { sine, cosine, polynomial };

  static ScalarFunction sine() { return ScalarFunction(Kind::sine, {}); }
  static ScalarFunction cosine() { return ScalarFunction(Kind::cosine, {}); }
  /// Coefficients in ascending order: c0 + c1 x + c2 x^2 + ...
  static ScalarFunction polynomial(std::vector<double> coefficients) {
    if (coefficients.empty()) coefficients.push_back(0.0);
    return ScalarFunction(Kind::polynomial, std::move(coefficients));
  }

  Kind kind() const { return kind_; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double value(double x) const {
    switch (kind_) {
      case Kind::sine: return std::sin(x);
      case Kind::cosine: return std::cos(x);
      case Kind::polynomial: {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
      }
    }
    return 0.0;
  }

  double derivative(double x) const {
    switch (kind_) {
      case Kind::sine: return std::cos(x);
      case Kind::cosine: return -std::sin(x);
      case Kind::polynomial: {
        double acc = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * coeffs_[k];
        return acc;
      }
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::sine: return "sin";
      case Kind::cosine: return "cos";
      case Kind::polynomial: return "polynomial";
    }
    return "";
  }

  bool operator==(const ScalarFunction&) const = default;

 private:
  ScalarFunction(Kind k, std::vector<double> c) : kind_(k), coeffs_(std::move(c)) {}
  Kind kind_;
  std::vector<double> coeffs_;
};

struct SublevelSet {
  IntervalUnion set;             ///< {x in [lo, hi] : f(x) <= alpha}
  std::vector<double> boundary;  ///< solutions of f(x) = alpha in [lo, hi], sorted
};

struct RootIsolationOptions {
  int grid_points = 4001;
  double root_tol = 1e-12;     ///< bisection width
  double tangency_tol = 1e-9;  ///< |f - alpha| dips below this without crossing -> error
};

/// f tabulated on the uniform root-isolation grid of [lo, hi]; independent of the level.
struct FunctionGrid {
  ScalarFunction function;
  std::vector<double> xs, fs;

  FunctionGrid(const ScalarFunction& f, double lo, double hi, int grid_points) : function(f) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw ArgumentError("sublevel_set: domain must be a finite interval with lo < hi");
    }
    if (grid_points < 3) throw ArgumentError("sublevel_set: need at least 3 grid points");
    const int N = grid_points;
    for (int i = 0; i < N; ++i) {
      const double x = i == N - 1 ? hi : lo + (hi - lo) * i / (N - 1);
      xs.push_back(x);
      fs.push_back(f.value(x));
    }
  }
};

/// Sub-level set of f on the tabulated domain by grid sign changes refined with bisection.
inline SublevelSet sublevel_set(const ScalarFunction& f, double alpha, const FunctionGrid& grid,
                                const RootIsolationOptions& opt = {}) {
  const double ztol = 1e-12 * (1.0 + std::abs(alpha));
  auto g = [&](double x) { return f.value(x) - alpha; };
  auto sgn = [&](double v) { return v > ztol ? 1 : (v < -ztol ? -1 : 0); };

  const std::vector<double>& xs = grid.xs;
  const int N = static_cast<int>(xs.size());
  const double lo = xs.front(), hi = xs.back();
  std::vector<double> gs(xs.size());
  std::vector<int> ss(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    gs[i] = grid.fs[i] - alpha;
    ss[i] = sgn(gs[i]);
  }

  auto bisect = [&](double a, double b) {
    double ga = g(a);
    while (b - a > opt.root_tol) {
      const double m = 0.5 * (a + b);
      const double gm = g(m);
      if (sgn(gm) == 0) return m;
      if ((gm > 0) == (ga > 0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };

  std::vector<double> roots;
  for (int i = 0; i < N; ++i) {
    const auto I = static_cast<std::size_t>(i);
    if (ss[I] == 0) {
      const int left = i > 0 ? ss[I - 1] : 2;
      const int right = i < N - 1 ? ss[I + 1] : 2;
      if (left == 0 || right == 0) {
        throw DegenerateLevelSetError("sublevel_set: f equals alpha on a whole grid cell near x = " +
                                      std::to_string(xs[I]));
      }
      if (left == right) {
        throw DegenerateLevelSetError("sublevel_set: tangential root at x = " + std::to_string(xs[I]));
      }
      roots.push_back(xs[I]);
      continue;
    }
    if (i + 1 < N && ss[I] * ss[I + 1] == -1) roots.push_back(bisect(xs[I], xs[I + 1]));
    // A dip toward zero between grid points that never registers a sign change.
    if (i > 0 && i + 1 < N && ss[I - 1] == ss[I] && ss[I + 1] == ss[I] &&
        std::abs(gs[I]) <= std::abs(gs[I - 1]) && std::abs(gs[I]) <= std::abs(gs[I + 1])) {
      const int s = ss[I];
      double arg = xs[I];
      const double lowest = detail::golden_min([&](double x) { return s * g(x); }, xs[I - 1],
                                               xs[I + 1], &arg);
      if (lowest < -ztol) {
        roots.push_back(bisect(xs[I - 1], arg));
        roots.push_back(bisect(arg, xs[I + 1]));
      } else if (lowest <= opt.tangency_tol) {
        throw DegenerateLevelSetError("sublevel_set: tangential root near x = " + std::to_string(arg));
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double a, double b) { return b - a <= 10 * opt.root_tol; }),
              roots.end());

  std::vector<double> cuts{lo};
  for (double r : roots) {
    if (r > cuts.back()) cuts.push_back(r);
  }
  if (hi > cuts.back()) cuts.push_back(hi);

  std::vector<Interval> pieces;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    if (g(0.5 * (cuts[j] + cuts[j + 1])) < 0.0) {
      if (!pieces.empty() && pieces.back().hi == cuts[j]) {
        pieces.back().hi = cuts[j + 1];
      } else {
        pieces.push_back(Interval::closed(cuts[j], cuts[j + 1]));
      }
    }
  }
  for (double r : roots) {
    const bool covered = std::any_of(pieces.begin(), pieces.end(),
                                     [&](const Interval& p) { return r >= p.lo && r <= p.hi; });
    if (!covered) pieces.push_back(Interval::point(r));
  }
  return {IntervalUnion(std::move(pieces)), std::move(roots)};
}

inline SublevelSet sublevel_set(const ScalarFunction& f, double alpha, double lo, double hi,
                                const RootIsolationOptions& opt = {}) {
  return sublevel_set(f, alpha, FunctionGrid(f, lo, hi, opt.grid_points), opt);
}

}  // namespace semilocal

#endif  // SEMILOCAL_SCALAR_FUNCTION_HPP_
