#pragma once

#include <string_view>

#include "stable_exit/kappa.hpp"
#include "stable_exit/numerics.hpp"
#include "stable_exit/stable_law.hpp"

namespace stable_exit {

/// Law of tau = inf{t >= 0 : X_t <= 0} for X started at `start` > 0.
struct ExitLaw {
  /// Throws DomainError when start <= 0 or the law is the Brownian limit.
  explicit ExitLaw(StableLaw l, double start = 1.0);

  StableLaw law;
  double start;
  KappaEvaluator kev;
  QuadratureConfig qcfg{};
};

/// Density of M_{alpha,rho}; rho in [0,1) and rho != 1 - 1/alpha.
struct MDensity {
  explicit MDensity(StableLaw l);

  StableLaw law;
  KappaEvaluator kev;
  QuadratureConfig qcfg{};
};

enum class DensityRegime {
  /// alpha > 1: mixture of a 1/alpha-stable subordinator density against m.
  SubordinatorMixture,
  /// alpha > 1, only upward jumps: tau is itself 1/alpha-stable.
  SpectrallyPositive,
  Cauchy,
  /// alpha = 2/3, rho = 1/2.
  SymmetricTwoThirds,
};

std::string_view to_string(DensityRegime r);

/// Regime used by density_tau; throws UnsupportedRegime when none applies.
DensityRegime density_regime(const StableLaw& law);

/// E^y exp(-t tau). Exactly 1 at t = 0.
TransformResult laplace_tau_result(const ExitLaw& el, double t);
double laplace_tau(const ExitLaw& el, double t);

/// Density of tau at s > 0 under the law's start point.
TransformResult density_tau_result(const ExitLaw& el, double s);
double density_tau(const ExitLaw& el, double s);

double m_density(const MDensity& md, double x);

/// (sin(alpha pi)/pi) Gamma(alpha) Gamma(1-alpha, z) e^z with z = t^{1/alpha}, start 1.
double laplace_tau_doney(const StableLaw& law, double t);

/// E^1 [1 / (x + tau)] on the dual Doney class, by quadrature over u of
/// e^{-u} e^w Gamma(1-alpha, w) / (x Gamma(1-alpha)),  w = (u/x)^{1/alpha}.
TransformResult stieltjes_tau_doney(const StableLaw& law, double x,
                                    const QuadratureConfig& qcfg = {});

/// Start-1 density of tau for the symmetric 2/3-stable process.
TransformResult density_tau_sym23(double x, const QuadratureConfig& qcfg = {});

/// Oscillating kernel of the 2/3 density,
///   sin(y) + y^{1/3} 1F2(1; 2/3, 7/6; -y^2/4) / Gamma(4/3),  y = t^{3/2},
/// split as sqrt(3) sin(y + pi/6) - sym23_remainder(y).
double sym23_kernel(double t);

/// Smooth, non-oscillating part sqrt(3) sin(y + pi/6) - kernel; decays like
/// (2/3) y^{-5/3} / Gamma(1/3).
double sym23_remainder(double y);

}  // namespace stable_exit
