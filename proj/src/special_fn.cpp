#include "stable_exit/special_fn.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "stable_exit/errors.hpp"
#include "stable_exit/numerics.hpp"

namespace stable_exit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(double b) { return b <= 0.0 && b == std::nearbyint(b); }

bool is_integer(double b) { return std::abs(b - std::nearbyint(b)) < 1e-12; }

// Lower incomplete gamma series: gamma(a, z) = z^a e^{-z} sum z^n / (a)_{n+1}.
double lower_series_without_prefactor(double a, double z) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= z / (a + n);
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return sum;
}

// Legendre continued fraction (modified Lentz) for exp(z) z^{-a} Gamma(a, z).
double upper_cf_without_prefactor(double a, double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 4.0 * kEps) return h;
  }
  throw NonConvergence("gamma_upper: continued fraction did not converge", h, std::abs(h));
}

void check_gamma_args(double a, double z) {
  if (!(a > 0.0)) throw DomainError("gamma_upper: a must be positive");
  if (!(z >= 0.0)) throw DomainError("gamma_upper: z must be non-negative");
}

}  // namespace

double pochhammer(double a, std::int64_t k) {
  if (k < 0) throw DomainError("pochhammer: k must be non-negative");
  double p = 1.0;
  for (std::int64_t i = 0; i < k; ++i) p *= a + static_cast<double>(i);
  return p;
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 171.0) return 0.0;
  return 1.0 / std::tgamma(x);
}

double gamma_upper(double a, double z) {
  check_gamma_args(a, z);
  if (z == 0.0) return std::tgamma(a);
  if (std::isinf(z)) return 0.0;
  if (z < a + 1.0) {
    return std::tgamma(a) - std::exp(a * std::log(z) - z) * lower_series_without_prefactor(a, z);
  }
  return std::exp(a * std::log(z) - z) * upper_cf_without_prefactor(a, z);
}

double gamma_upper_scaled(double a, double z) {
  check_gamma_args(a, z);
  if (z == 0.0) return std::tgamma(a);
  if (std::isinf(z)) return a < 1.0 ? 0.0 : (a == 1.0 ? 1.0 : z);
  if (z < a + 1.0) {
    return std::exp(z) * std::tgamma(a) - std::pow(z, a) * lower_series_without_prefactor(a, z);
  }
  return std::pow(z, a) * upper_cf_without_prefactor(a, z);
}

double hyp1f1(double a, double b, double z) {
  if (is_nonpositive_integer(b)) throw DomainError("hyp1f1: b must not be a non-positive integer");
  if (z == 0.0) return 1.0;
  if (a == b) return std::exp(z);
  if (z < 0.0) return std::exp(z) * hyp1f1(b - a, b, -z);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 100000; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1.0));
    sum += term;
    if (term == 0.0) return sum;
    if (k > z && std::abs(term) < 0.5 * kEps * std::abs(sum)) return sum;
  }
  throw NonConvergence("hyp1f1: series did not converge", sum, std::abs(term));
}

namespace {

// 1F1 for z > 0 in extended precision; the reflection combination below
// cancels terms of size e^z z^{a-b} down to roughly z^{-a}.
long double hyp1f1_extended(long double a, long double b, long double z) {
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 0; k < 100000; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1.0L));
    sum += term;
    if (term == 0.0L) return sum;
    if (k > z && std::fabs(term) < std::numeric_limits<long double>::epsilon() * std::fabs(sum)) return sum;
  }
  throw NonConvergence("hypU: 1F1 series did not converge", static_cast<double>(sum), static_cast<double>(term));
}

long double rgamma_extended(long double x) {
  if (x <= 0.0L && x == std::nearbyint(x)) return 0.0L;
  return 1.0L / std::tgamma(x);
}

}  // namespace

double hypU_reflection(double a, double b, double z) {
  if (!(z > 0.0)) throw DomainError("hypU: z must be positive");
  if (is_integer(b)) throw DomainError("hypU: integer b is not supported");
  const long double al = a;
  const long double bl = b;
  const long double zl = z;
  const long double first = hyp1f1_extended(al, bl, zl) * rgamma_extended(1.0L + al - bl) * rgamma_extended(bl);
  const long double second = std::pow(zl, 1.0L - bl) * hyp1f1_extended(1.0L + al - bl, 2.0L - bl, zl) *
                             rgamma_extended(al) * rgamma_extended(2.0L - bl);
  const long double pi = std::numbers::pi_v<long double>;
  return static_cast<double>(pi / std::sin(pi * bl) * (first - second));
}

double hypU_integral(double a, double b, double z) {
  if (!(z > 0.0)) throw DomainError("hypU: z must be positive");
  if (!(a > 0.0)) throw DomainError("hypU_integral: a must be positive");
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-13;
  cfg.abs_tol = 1e-300;
  const auto r = integrate_semi_infinite(
      [&](double t) {
        return std::exp(-z * t + (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t));
      },
      cfg, a - 1.0);
  return r.value * rgamma(a);
}

double hypU(double a, double b, double z) {
  if (!(z > 0.0)) throw DomainError("hypU: z must be positive");
  if (is_integer(b)) throw DomainError("hypU: integer b is not supported");
  if (z < 2.0 || !(a > 0.0)) return hypU_reflection(a, b, z);
  return hypU_integral(a, b, z);
}

double hyp1f2(double a, double b, double c, double z) {
  if (is_nonpositive_integer(b) || is_nonpositive_integer(c)) {
    throw DomainError("hyp1f2: b and c must not be non-positive integers");
  }
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 100000; ++k) {
    term *= (a + k) * z / ((b + k) * (c + k) * (k + 1.0));
    sum += term;
    if (term == 0.0) return sum;
    if (k * k > std::abs(z) && std::abs(term) < 0.5 * kEps * std::abs(sum)) return sum;
  }
  throw NonConvergence("hyp1f2: series did not converge", sum, std::abs(term));
}

namespace {

void check_subordinator_args(double gamma, double t, double x) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("subordinator_density: gamma must lie in (0,1)");
  if (!(t > 0.0)) throw DomainError("subordinator_density: t must be positive");
  if (!(x > 0.0)) throw DomainError("subordinator_density: x must be positive");
}

// Kanter's function A(phi) on (0, pi).
double kanter_a(double gamma, double phi) {
  const double sg = std::sin(gamma * phi);
  const double s = std::sin(phi);
  return std::pow(sg / s, 1.0 / (1.0 - gamma)) * std::sin((1.0 - gamma) * phi) / sg;
}

double unit_density_series(double gamma, double y) {
  // (1/pi) sum_{k>=1} (-1)^{k+1} Gamma(gamma k + 1) sin(pi gamma k) y^{-gamma k - 1} / k!
  const double log_y = std::log(y);
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 5000; ++k) {
    const double log_mag = std::lgamma(gamma * k + 1.0) - std::lgamma(k + 1.0) - (gamma * k + 1.0) * log_y;
    const double s = std::sin(kPi * gamma * k);
    const double term = ((k % 2 == 1) ? 1.0 : -1.0) * s * std::exp(log_mag);
    sum += term;
    const double mag = std::exp(log_mag);
    if (k > 3 && mag < prev && mag < 1e-17 * std::abs(sum)) break;
    prev = mag;
  }
  return sum / kPi;
}

// Minimum of kanter_a over (0, pi), attained as phi -> 0.
double kanter_a_min(double gamma) {
  return (1.0 - gamma) * std::pow(gamma, gamma / (1.0 - gamma));
}

double unit_density_integral(double gamma, double y) {
  const double expo = gamma / (1.0 - gamma);
  const double c = std::pow(y, -expo);
  if (c * kanter_a_min(gamma) > 745.0) return 0.0;
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-300;
  const auto r = integrate(
      [&](double phi) {
        const double a = kanter_a(gamma, phi);
        const double e = c * a;
        if (e > 745.0) return 0.0;
        return a * std::exp(-e);
      },
      0.0, kPi, cfg);
  return expo * c / y * r.value / kPi;
}

double unit_density_half(double y) {
  return std::exp(-0.25 / y - 1.5 * std::log(y)) / (2.0 * std::sqrt(kPi));
}

}  // namespace

SubordinatorDensityMethod select_subordinator_method(double gamma, double t, double x,
                                                     double crossover_x) {
  check_subordinator_args(gamma, t, x);
  if (!(crossover_x > 0.0)) throw DomainError("subordinator_density: crossover must be positive");
  if (gamma == 0.5) return {SubordinatorMethod::ClosedFormHalf, crossover_x};
  const double y = x * std::pow(t, -1.0 / gamma);
  if (y > crossover_x) return {SubordinatorMethod::SeriesLargeX, crossover_x};
  return {SubordinatorMethod::IntegralSmallX, crossover_x};
}

double subordinator_density_with(double gamma, double t, double x, SubordinatorMethod method) {
  check_subordinator_args(gamma, t, x);
  const double scale = std::pow(t, -1.0 / gamma);
  const double y = x * scale;
  double unit = 0.0;
  switch (method) {
    case SubordinatorMethod::ClosedFormHalf:
      if (gamma != 0.5) throw DomainError("subordinator_density: closed form needs gamma = 1/2");
      unit = unit_density_half(y);
      break;
    case SubordinatorMethod::SeriesLargeX:
      unit = unit_density_series(gamma, y);
      break;
    case SubordinatorMethod::IntegralSmallX:
      unit = unit_density_integral(gamma, y);
      break;
  }
  return scale * std::max(unit, 0.0);
}

double subordinator_density(double gamma, double t, double x, double crossover_x) {
  return subordinator_density_with(gamma, t, x,
                                   select_subordinator_method(gamma, t, x, crossover_x).method);
}

double positive_stable_cdf(double gamma, double x) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("positive_stable_cdf: gamma must lie in (0,1)");
  if (!(x > 0.0)) return 0.0;
  if (gamma == 0.5) return std::erfc(0.5 / std::sqrt(x));
  const double c = std::pow(x, -gamma / (1.0 - gamma));
  if (c * kanter_a_min(gamma) > 745.0) return 0.0;
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-300;
  const auto r = integrate(
      [&](double phi) {
        const double e = c * kanter_a(gamma, phi);
        return e > 745.0 ? 0.0 : std::exp(-e);
      },
      0.0, kPi, cfg);
  return std::min(1.0, r.value / kPi);
}

}  // namespace stable_exit
