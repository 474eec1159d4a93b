#pragma once

#include <optional>

#include "stable_exit/numerics.hpp"
#include "stable_exit/stable_law.hpp"

namespace stable_exit {

/// How the logarithmic series treats alpha values where sin(m pi / alpha)
/// or sin(alpha k pi) vanish (all rational alpha eventually do).
enum class RationalAlphaPolicy {
  /// Average two evaluations at alpha (1 +/- perturbation).
  Perturb,
  /// Combine each resonant (m, k) pair analytically into its finite limit.
  PairedCancellation,
};

/// Evaluator for the normalized ascending ladder exponent kappa(1, theta),
/// kappa(1, 0) = 1.
struct KappaEvaluator {
  explicit KappaEvaluator(StableLaw l) : law(l) {}

  StableLaw law;
  SeriesConfig series_cfg{};
  RationalAlphaPolicy rational_alpha_policy = RationalAlphaPolicy::Perturb;
  double perturbation = 1e-7;
  /// The power series is summed when min(theta, 1/theta) is at most this
  /// value; closer to theta = 1 the Mellin-Barnes contour integral is used.
  double series_cutoff = 0.6;

  /// Throws DomainError when perturbation is outside (0, 1e-4] or the
  /// cutoff outside (0, 1).
  void validate() const;
};

/// |sin| below this marks a resonant term of the series.
inline constexpr double kResonanceThreshold = 1e-8;

/// kappa(1, theta) for theta >= 0. Throws DomainError for negative theta.
double kappa(const KappaEvaluator& ev, double theta);

/// kappa of the dual law, i.e. kappa-hat(1, theta).
double kappa_dual(const KappaEvaluator& ev, double theta);

/// log kappa(1, theta) from the two logarithmic power series, theta in (0, 1).
/// Throws NonConvergence when theta is too close to 1 for series_cfg.max_terms.
double log_kappa_series(const KappaEvaluator& ev, double theta);

/// Series route for every theta > 0 (theta > 1 through the scaling
/// relation kappa(1, theta) = theta^(alpha rho) kappa(1, 1/theta)); theta = 1
/// is not reachable and raises NonConvergence.
double kappa_series(const KappaEvaluator& ev, double theta);

/// log kappa(1, theta) from the Mellin-Barnes integral
///   (1/pi) int_0^inf Re[theta^{-s} K(s)] dy,  s = c + i y,
///   K(s) = pi sin(pi rho s) / (s sin(pi s) sin(pi s / alpha)),
/// whose residue sums are the two power series.
double log_kappa_contour(const StableLaw& law, double theta);

double kappa_contour(const StableLaw& law, double theta);

/// Closed forms used as oracles: 1 + theta for spectrally negative laws
/// with alpha > 1, (theta^{2 alpha} - 2 theta^alpha cos(alpha pi) + 1)/(1 + theta)
/// on the dual Doney class. Empty otherwise.
std::optional<double> kappa_closed_form(const StableLaw& law, double theta);

/// Density l(x) with int_0^inf l(x) / (x + theta) dx = 1 / kappa(1, theta).
/// Requires rho in (0, 1] and rho != 1/alpha.
double stieltjes_density_l(const KappaEvaluator& ev, double x);

/// Quadrature value of int_0^inf l(x) / (x + theta) dx.
TransformResult inv_kappa_via_stieltjes(const KappaEvaluator& ev, double theta,
                                        const QuadratureConfig& qcfg = {});

}  // namespace stable_exit
