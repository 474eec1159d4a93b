#pragma once

#include <cstdint>

namespace stable_exit {

/// Rising factorial (a)_k = a (a+1) ... (a+k-1), (a)_0 = 1.
double pochhammer(double a, std::int64_t k);

/// 1 / Gamma(x); exactly zero at the poles x = 0, -1, -2, ...
double rgamma(double x);

/// Upper incomplete gamma Gamma(a, z) for a > 0, z >= 0.
double gamma_upper(double a, double z);

/// exp(z) Gamma(a, z), finite for large z where Gamma(a, z) underflows.
double gamma_upper_scaled(double a, double z);

/// Kummer's function 1F1(a; b; z). Negative z goes through Kummer's
/// transformation so the summed series has no sign changes for a, b > 0.
double hyp1f1(double a, double b, double z);

/// Tricomi U(a, b, z) for z > 0 and non-integer b.
double hypU(double a, double b, double z);

/// U through the 1F1 reflection combination. Loses about log10(e^z)
/// digits to cancellation, so it is only used for small z.
double hypU_reflection(double a, double b, double z);

/// U through (1/Gamma(a)) int_0^inf exp(-z t) t^(a-1) (1+t)^(b-a-1) dt.
double hypU_integral(double a, double b, double z);

/// 1F2(a; b, c; z) by direct summation.
double hyp1f2(double a, double b, double c, double z);

/// Default threshold on x t^(-1/gamma) above which the large-x series is used.
inline constexpr double kSubordinatorCrossover = 1.5;

enum class SubordinatorMethod { SeriesLargeX, IntegralSmallX, ClosedFormHalf };

struct SubordinatorDensityMethod {
  SubordinatorMethod method = SubordinatorMethod::SeriesLargeX;
  double crossover_x = kSubordinatorCrossover;
};

/// Method that subordinator_density would use at the given point.
SubordinatorDensityMethod select_subordinator_method(double gamma, double t, double x,
                                                     double crossover_x = kSubordinatorCrossover);

/// Transition density eta_gamma(t, x) of the gamma-stable subordinator,
/// normalized by int_0^inf exp(-s x) eta_gamma(t, x) dx = exp(-t s^gamma).
double subordinator_density(double gamma, double t, double x, double crossover_x = kSubordinatorCrossover);

/// Same density forced through one evaluation route (for cross-checks).
double subordinator_density_with(double gamma, double t, double x, SubordinatorMethod method);

/// P(N(gamma) <= x) where E exp(-s N(gamma)) = exp(-s^gamma).
double positive_stable_cdf(double gamma, double x);

}  // namespace stable_exit
