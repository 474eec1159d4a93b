#pragma once

#include <cstdint>
#include <functional>

namespace stable_exit {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  /// Panels whose sampled magnitude stays below this fraction of the
  /// running peak are accepted without further refinement.
  double tail_cutoff_ratio = 1e-16;

  /// Throws DomainError on non-positive tolerances or subdivisions.
  void validate() const;
};

struct SeriesConfig {
  double rel_tol = 1e-14;
  std::int64_t max_terms = 1'000'000;
  /// Levin u-transform on the partial sums.
  bool accelerate = true;

  void validate() const;
};

/// A computed transform or density value with a heuristic error estimate.
struct TransformResult {
  double value = 0.0;
  double abs_err_estimate = 0.0;
  std::int64_t evaluations = 0;
};

using RealFunction = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) quadrature on the finite interval [a, b].
/// Endpoints are never evaluated. Throws NonConvergence when the
/// subdivision budget is exhausted before the tolerance is met.
TransformResult integrate(const RealFunction& f, double a, double b,
                          const QuadratureConfig& cfg = {});

/// Integral of f over (0, inf).
///
/// The half-line is mapped to the real line by x = exp(q s) with
/// q = 1 / (1 + p), where p is the caller's hint for an x^p endpoint
/// behaviour at 0 (p > -1). Algebraic decay at infinity and algebraic
/// singularities at 0 both become exponential decay in s, which the
/// adaptive rule resolves. Throws DomainError when p <= -1.
TransformResult integrate_semi_infinite(const RealFunction& f, const QuadratureConfig& cfg = {},
                                        double singularity_exponent = 0.0);

/// Sum of term(k) for k = first, first + 1, ...
///
/// Stops once |term_k| <= rel_tol |S_k| on three consecutive terms, or once
/// three consecutive Levin u estimates agree to rel_tol when acceleration
/// is enabled. Throws NonConvergence after max_terms.
TransformResult sum_series(const std::function<double(std::int64_t)>& term,
                           const SeriesConfig& cfg = {}, std::int64_t first = 1);

}  // namespace stable_exit
