#include "stable_exit/exit_law.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "stable_exit/errors.hpp"
#include "stable_exit/special_fn.hpp"

namespace stable_exit {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

bool near(double a, double b) { return std::abs(a - b) <= kClassTol; }

// Below this y the 1F2 series is used for the 2/3 kernel, above it the
// continued fraction of Gamma(1/3, iy).
constexpr double kSym23SeriesLimit = 6.0;

// sin(y) + y^{1/3} 1F2(1; 2/3, 7/6; -y^2/4) / Gamma(4/3)
double sym23_kernel_series(double y) {
  return std::sin(y) +
         std::cbrt(y) * hyp1f2(1.0, 2.0 / 3.0, 7.0 / 6.0, -0.25 * y * y) / std::tgamma(4.0 / 3.0);
}

// Re[y^{1/3} / f(iy)] / Gamma(1/3), where Gamma(1/3, z) = e^{-z} z^{1/3} / f(z)
// and f is the Legendre continued fraction, evaluated by modified Lentz.
double sym23_remainder_cf(double y) {
  using cplx = std::complex<double>;
  constexpr double a = 1.0 / 3.0;
  constexpr double tiny = 1e-300;
  const cplx z(0.0, y);
  cplx f = z + 1.0 - a;
  cplx c = f;
  cplx d = 0.0;
  for (int n = 1; n <= 1000; ++n) {
    const double an = -n * (n - a);
    const cplx bn = z + (2.0 * n + 1.0 - a);
    d = bn + an * d;
    if (std::abs(d) < tiny) d = tiny;
    c = bn + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-15) {
      return (std::cbrt(y) / f).real() / std::tgamma(a);
    }
  }
  throw NonConvergence("sym23_remainder: continued fraction did not converge", 0.0,
                       std::numeric_limits<double>::infinity());
}

// Above this x the 2/3 density is taken from its large-x expansion; the two
// quadratures below cancel to O(x^{-1/2}) relative there.
constexpr double kSym23ExpansionX = 30.0;

// Term-by-term Laplace transform of the kernel's power series in t^{1/2}:
//   sum_k (-1/4)^k Gamma(3/2 + 3k) / ((2/3)_k (7/6)_k Gamma(4/3)) x^{-3/2-3k}
// + sum_j (-1)^j Gamma(5/2 + 3j) / (2j+1)! x^{-5/2-3j}, all over pi.
// Asymptotic; for x >= 30 the terms fall below rounding long before they turn.
TransformResult sym23_expansion(double x) {
  const double lx = std::log(x);
  const double g43 = std::lgamma(4.0 / 3.0);
  double sum = 0.0;
  double last = 0.0;
  double log_poch = 0.0;  // log((2/3)_k (7/6)_k 4^k)
  for (int k = 0; k < 200; ++k) {
    if (k > 0) log_poch += std::log((2.0 / 3.0 + k - 1) * (7.0 / 6.0 + k - 1) * 4.0);
    const double pk = 1.5 + 3.0 * k;
    const double a = std::exp(std::lgamma(pk) - log_poch - g43 - pk * lx);
    const double pj = 2.5 + 3.0 * k;
    const double b = std::exp(std::lgamma(pj) - std::lgamma(2.0 * k + 2.0) - pj * lx);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * (a + b);
    last = a + b;
    if (last < 1e-17 * std::abs(sum)) break;
  }
  return {sum / kPi, last / kPi, 0};
}

// Laplace kernel x^{alpha-1} kappa(1,x) / (x^{2 alpha} + 2 x^alpha cos(a) + 1),
// written so large x cannot overflow.
double laplace_kernel(const KappaEvaluator& kev, double x, double cos_angle) {
  const double a = kev.law.alpha();
  const double xa = std::pow(x, a);
  return kappa(kev, x) / (x * (xa + 2.0 * cos_angle + 1.0 / xa));
}

TransformResult mixture_density(const ExitLaw& el, double s) {
  MDensity md(el.law);
  md.kev = el.kev;
  md.kev.law = el.law;
  const double gamma = 1.0 / el.law.alpha();
  auto f = [&](double u) {
    const double y = s / u;
    if (!(y > 0.0) || std::isinf(y)) return 0.0;
    const double eta = subordinator_density(gamma, 1.0, y);
    if (eta == 0.0) return 0.0;
    return m_density(md, u) * eta / u;
  };
  return integrate_semi_infinite(f, el.qcfg);
}

}  // namespace

ExitLaw::ExitLaw(StableLaw l, double s) : law(l), start(s), kev(l) {
  if (!(start > 0.0) || !std::isfinite(start)) throw DomainError("ExitLaw: start must be positive");
  if (law.is_limiting_brownian()) throw DomainError("ExitLaw: alpha = 2 is not supported");
}

MDensity::MDensity(StableLaw l) : law(l), kev(l) {
  if (law.is_limiting_brownian()) throw DomainError("MDensity: alpha = 2 is not supported");
  if (near(law.rho(), 1.0)) throw DomainError("MDensity: rho = 1 is excluded");
  if (near(law.rho(), 1.0 - 1.0 / law.alpha())) {
    throw DomainError("MDensity: rho = 1 - 1/alpha is excluded");
  }
}

std::string_view to_string(DensityRegime r) {
  switch (r) {
    case DensityRegime::SubordinatorMixture: return "subordinator_mixture";
    case DensityRegime::SpectrallyPositive: return "spectrally_positive";
    case DensityRegime::Cauchy: return "cauchy";
    case DensityRegime::SymmetricTwoThirds: return "symmetric_two_thirds";
  }
  return "subordinator_mixture";
}

DensityRegime density_regime(const StableLaw& law) {
  const double a = law.alpha();
  if (law.is_limiting_brownian()) throw UnsupportedRegime("density_tau: alpha = 2 is not supported");
  if (a == 1.0) return DensityRegime::Cauchy;
  if (a > 1.0) {
    return classify(law) == Classification::SpectrallyPositive ? DensityRegime::SpectrallyPositive
                                                               : DensityRegime::SubordinatorMixture;
  }
  if (near(a, 2.0 / 3.0) && near(law.rho(), 0.5)) return DensityRegime::SymmetricTwoThirds;
  throw UnsupportedRegime("density_tau: no density formula for alpha < 1 outside alpha = 2/3, rho = 1/2");
}

TransformResult laplace_tau_result(const ExitLaw& el, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("laplace_tau: t must be a finite value >= 0");
  if (t == 0.0) return {1.0, 0.0, 0};
  const double a = el.law.alpha();
  const double r = el.law.rho();
  const double ts = t * std::pow(el.start, a);
  if (a > 1.0 && classify(el.law) == Classification::SpectrallyPositive) {
    return {std::exp(-std::pow(ts, 1.0 / a)), 0.0, 0};
  }
  if (a < 1.0 && near(r, 1.0)) {
    throw DomainError("laplace_tau: an increasing process never leaves (0, inf)");
  }
  const double z = std::pow(ts, 1.0 / a);
  const double angle = (1.0 - r) * a * kPi;
  const double c = std::cos(angle);
  auto f = [&](double x) {
    const double damp = std::exp(-z * x);
    if (damp == 0.0) return 0.0;
    return damp * laplace_kernel(el.kev, x, c);
  };
  TransformResult res = integrate_semi_infinite(f, el.qcfg, a - 1.0);
  const double pref = std::sin(angle) / kPi;
  res.value *= pref;
  res.abs_err_estimate *= pref;
  return res;
}

double laplace_tau(const ExitLaw& el, double t) { return laplace_tau_result(el, t).value; }

TransformResult density_tau_result(const ExitLaw& el, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("density_tau: s must be positive");
  const DensityRegime regime = density_regime(el.law);
  const double a = el.law.alpha();
  if (regime == DensityRegime::SpectrallyPositive) {
    return {subordinator_density(1.0 / a, el.start, s), 0.0, 0};
  }
  // h^y(s) = y^{-alpha} h(s y^{-alpha})
  const double scale = std::pow(el.start, a);
  const double x = s / scale;
  TransformResult r{};
  switch (regime) {
    case DensityRegime::Cauchy:
      r = {kappa(el.kev, x) / (kPi * (x * x + 1.0)), 0.0, 0};
      break;
    case DensityRegime::SymmetricTwoThirds:
      r = density_tau_sym23(x, el.qcfg);
      break;
    default:
      r = mixture_density(el, x);
      break;
  }
  r.value /= scale;
  r.abs_err_estimate /= scale;
  return r;
}

double density_tau(const ExitLaw& el, double s) { return density_tau_result(el, s).value; }

double m_density(const MDensity& md, double x) {
  if (!(x >= 0.0)) throw DomainError("m_density: x must be non-negative");
  if (std::isinf(x)) return 0.0;
  const double a = md.law.alpha();
  const double angle = (1.0 - md.law.rho()) * a * kPi;
  const double denom = x * x + 2.0 * x * std::cos(angle) + 1.0;
  if (std::isinf(denom)) return 0.0;
  return std::sin(angle) / (kPi * a) * kappa(md.kev, std::pow(x, 1.0 / a)) / denom;
}

double laplace_tau_doney(const StableLaw& law, double t) {
  if (classify(law) != Classification::DoneyC11Dual) {
    throw UnsupportedRegime("laplace_tau_doney: law is not in the dual Doney class");
  }
  if (!(t >= 0.0)) throw DomainError("laplace_tau_doney: t must be non-negative");
  if (t == 0.0) return 1.0;
  const double a = law.alpha();
  const double z = std::pow(t, 1.0 / a);
  return std::sin(a * kPi) / kPi * std::tgamma(a) * gamma_upper_scaled(1.0 - a, z);
}

TransformResult stieltjes_tau_doney(const StableLaw& law, double x, const QuadratureConfig& qcfg) {
  if (classify(law) != Classification::DoneyC11Dual) {
    throw UnsupportedRegime("stieltjes_tau_doney: law is not in the dual Doney class");
  }
  if (!(x > 0.0)) throw DomainError("stieltjes_tau_doney: x must be positive");
  const double a = law.alpha();
  auto f = [&](double u) {
    const double e = std::exp(-u);
    if (e == 0.0) return 0.0;
    return e * gamma_upper_scaled(1.0 - a, std::pow(u / x, 1.0 / a));
  };
  TransformResult r = integrate_semi_infinite(f, qcfg);
  const double scale = x * std::tgamma(1.0 - a);
  r.value /= scale;
  r.abs_err_estimate /= scale;
  return r;
}

double sym23_remainder(double y) {
  if (!(y >= 0.0)) throw DomainError("sym23_remainder: y must be non-negative");
  if (std::isinf(y)) return 0.0;
  if (y <= kSym23SeriesLimit) return kSqrt3 * std::sin(y + kPi / 6.0) - sym23_kernel_series(y);
  return sym23_remainder_cf(y);
}

double sym23_kernel(double t) {
  if (!(t >= 0.0)) throw DomainError("sym23_kernel: t must be non-negative");
  const double y = std::pow(t, 1.5);
  if (y <= kSym23SeriesLimit) return sym23_kernel_series(y);
  return kSqrt3 * std::sin(y + kPi / 6.0) - sym23_remainder_cf(y);
}

TransformResult density_tau_sym23(double x, const QuadratureConfig& qcfg) {
  if (!(x > 0.0)) throw DomainError("density_tau_sym23: x must be positive");
  if (x >= kSym23ExpansionX) return sym23_expansion(x);
  // The sqrt(3) sin(t^{3/2} + pi/6) part, with the contour turned to arg t = pi/3
  // where the oscillation becomes decay. Both integrals run over v = t * w so
  // the e^{-tx} scale sits near v = 1 when x is large.
  const double w = std::max(x, 1.0);
  auto rotated = [&](double v) {
    const double r = v / w;
    const double e = std::exp(-0.5 * x * r - std::pow(r, 1.5));
    if (e == 0.0) return 0.0;
    return e * std::cos(0.5 * kSqrt3 * x * r) / w;
  };
  auto smooth = [&](double v) {
    const double t = v / w;
    const double e = std::exp(-t * x);
    if (e == 0.0) return 0.0;
    return e * sym23_remainder(std::pow(t, 1.5)) / w;
  };
  const TransformResult s = integrate_semi_infinite(rotated, qcfg);
  const TransformResult q = integrate_semi_infinite(smooth, qcfg);
  return {(kSqrt3 * s.value - q.value) / kPi,
          (kSqrt3 * s.abs_err_estimate + q.abs_err_estimate) / kPi, s.evaluations + q.evaluations};
}

}  // namespace stable_exit
