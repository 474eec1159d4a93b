#include "stable_exit/kappa.hpp"

#include <cmath>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>

#include "stable_exit/errors.hpp"

namespace stable_exit {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

// Terms below this absolute size are dropped from the log series.
constexpr double kSeriesFloor = 1e-18;

double sign_pow(std::int64_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// sin(pi a k) with the integer part removed exactly, so the value keeps full
// relative accuracy when a k is close to an integer.
double sin_pi_product(double a, double k) {
  const double n = std::nearbyint(a * k);
  const double frac = std::fma(a, k, -n);
  const double s = std::sin(kPi * frac);
  return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

// sin(pi m / a) with the same exact reduction.
double sin_pi_quotient(double m, double a) {
  const double q = m / a;
  const double n = std::nearbyint(q);
  const double remainder = std::fma(-a, q, m);
  const double frac = (q - n) + remainder / a;
  const double s = std::sin(kPi * frac);
  return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

struct SeriesRange {
  std::int64_t m_max;
  std::int64_t k_max;
};

SeriesRange series_range(double alpha, double theta, std::int64_t max_terms, double guess) {
  const double log_theta = std::log(theta);
  const double m_needed = std::ceil(std::log(kSeriesFloor) / log_theta) + 2.0;
  const double k_needed = std::ceil(m_needed / alpha) + 2.0;
  if (m_needed > static_cast<double>(max_terms) || k_needed > static_cast<double>(max_terms)) {
    throw NonConvergence("kappa series: theta too close to 1 for max_terms", guess,
                         std::numeric_limits<double>::infinity());
  }
  return {static_cast<std::int64_t>(m_needed), static_cast<std::int64_t>(k_needed)};
}

double m_term(double alpha, double rho, double theta, std::int64_t m) {
  const double md = static_cast<double>(m);
  return sign_pow(m + 1) * std::pow(theta, md) * std::sin(rho * md * kPi) /
         (md * sin_pi_quotient(md, alpha));
}

double k_term(double alpha, double rho, double theta, std::int64_t k) {
  const double kd = static_cast<double>(k);
  return sign_pow(k + 1) * std::pow(theta, alpha * kd) * std::sin(rho * alpha * kd * kPi) /
         (kd * sin_pi_product(alpha, kd));
}

// Plain summation of both series; resonant terms are added as they come.
double direct_sum(double alpha, double rho, double theta, const SeriesRange& r) {
  double sum = 0.0;
  for (std::int64_t m = r.m_max; m >= 1; --m) sum += m_term(alpha, rho, theta, m);
  for (std::int64_t k = r.k_max; k >= 1; --k) sum += k_term(alpha, rho, theta, k);
  return sum;
}

// Resonant pairs m = alpha0 * j, keyed by m.
std::map<std::int64_t, std::int64_t> resonant_pairs(double alpha, const SeriesRange& r) {
  std::map<std::int64_t, std::int64_t> pairs;
  for (std::int64_t k = 1; k <= r.k_max; ++k) {
    if (std::abs(sin_pi_product(alpha, static_cast<double>(k))) < kResonanceThreshold) {
      pairs.emplace(std::llround(alpha * static_cast<double>(k)), k);
    }
  }
  for (std::int64_t m = 1; m <= r.m_max; ++m) {
    if (std::abs(sin_pi_quotient(static_cast<double>(m), alpha)) < kResonanceThreshold) {
      pairs.emplace(m, std::llround(static_cast<double>(m) / alpha));
    }
  }
  return pairs;
}

// Finite limit of the resonant pair (m-term at m, k-term at j) as alpha -> m/j
// with rho held fixed; the two simple poles cancel.
double paired_limit(double rho, double theta, std::int64_t m, std::int64_t j) {
  const double md = static_cast<double>(m);
  const double jd = static_cast<double>(j);
  const double a0 = md / jd;
  const double pm = std::pow(theta, md);
  const double s = std::sin(rho * md * kPi);
  const double c = std::cos(rho * md * kPi);
  const double A0 = sign_pow(m + 1) * pm * s / md;
  const double f1 = sign_pow(j) * (-md * kPi / (a0 * a0));
  const double f2 = sign_pow(j) * (2.0 * md * kPi / (a0 * a0 * a0));
  const double g1 = jd * kPi * sign_pow(m);
  const double B1 = sign_pow(j + 1) / jd * pm * (jd * std::log(theta) * s + rho * jd * kPi * c);
  return -A0 * f2 / (2.0 * f1 * f1) + B1 / g1;
}

double paired_sum(double alpha, double rho, double theta, const SeriesRange& r,
                  const std::map<std::int64_t, std::int64_t>& pairs) {
  std::map<std::int64_t, bool> paired_k;
  for (const auto& [m, k] : pairs) paired_k[k] = true;
  double sum = 0.0;
  for (std::int64_t m = r.m_max; m >= 1; --m) {
    if (!pairs.contains(m)) sum += m_term(alpha, rho, theta, m);
  }
  for (std::int64_t k = r.k_max; k >= 1; --k) {
    if (!paired_k.contains(k)) sum += k_term(alpha, rho, theta, k);
  }
  for (const auto& [m, k] : pairs) sum += paired_limit(rho, theta, m, k);
  return sum;
}

// sin(z) exp(-|Im z|), finite for any imaginary part.
cplx scaled_sin(cplx z) {
  const double x = z.real();
  const double v = std::abs(z.imag());
  const double sgn = z.imag() >= 0.0 ? 1.0 : -1.0;
  // sin(x + i sgn v) = (e^{i x} e^{-sgn v} - e^{-i x} e^{sgn v}) / (2i)
  const cplx eix = std::polar(1.0, x);
  const cplx emix = std::polar(1.0, -x);
  const double e2 = std::exp(-2.0 * v);
  cplx r;
  if (sgn > 0) {
    r = (eix * e2 - emix) / cplx(0.0, 2.0);
  } else {
    r = (eix - emix * e2) / cplx(0.0, 2.0);
  }
  return r;
}

}  // namespace

void KappaEvaluator::validate() const {
  if (!(perturbation > 0.0 && perturbation <= 1e-4)) {
    throw DomainError("KappaEvaluator: perturbation must lie in (0, 1e-4]");
  }
  if (!(series_cutoff > 0.0 && series_cutoff < 1.0)) {
    throw DomainError("KappaEvaluator: series_cutoff must lie in (0, 1)");
  }
  series_cfg.validate();
}

double log_kappa_series(const KappaEvaluator& ev, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("log_kappa_series: theta must lie in (0,1)");
  const double alpha = ev.law.alpha();
  const double rho = ev.law.rho();
  if (rho == 0.0) return 0.0;
  const SeriesRange r = series_range(std::max(alpha, 1.0), theta, ev.series_cfg.max_terms, 0.0);
  const SeriesRange rk = series_range(alpha, theta, ev.series_cfg.max_terms, 0.0);
  const SeriesRange range{r.m_max, rk.k_max};
  const auto pairs = resonant_pairs(alpha, range);
  if (pairs.empty()) return direct_sum(alpha, rho, theta, range);
  if (ev.rational_alpha_policy == RationalAlphaPolicy::PairedCancellation) {
    return paired_sum(alpha, rho, theta, range, pairs);
  }
  const double up = alpha * (1.0 + ev.perturbation);
  const double down = alpha * (1.0 - ev.perturbation);
  const SeriesRange range_down{range.m_max, series_range(down, theta, ev.series_cfg.max_terms, 0.0).k_max};
  return 0.5 * (direct_sum(up, rho, theta, range) + direct_sum(down, rho, theta, range_down));
}

double kappa_series(const KappaEvaluator& ev, double theta) {
  if (!(theta >= 0.0)) throw DomainError("kappa: theta must be non-negative");
  if (theta == 0.0) return 1.0;
  if (theta == 1.0) {
    throw NonConvergence("kappa_series: the power series does not converge at theta = 1", 0.0,
                         std::numeric_limits<double>::infinity());
  }
  if (theta < 1.0) return std::exp(log_kappa_series(ev, theta));
  const double ar = ev.law.alpha() * ev.law.rho();
  return std::exp(ar * std::log(theta) + log_kappa_series(ev, 1.0 / theta));
}

double log_kappa_contour(const StableLaw& law, double theta) {
  if (!(theta > 0.0)) throw DomainError("log_kappa_contour: theta must be positive");
  const double alpha = law.alpha();
  const double rho = law.rho();
  if (rho == 0.0) return 0.0;
  const double c = -0.5 * std::min(1.0, alpha);
  const double decay = kPi * (1.0 + 1.0 / alpha - rho);
  const double y_max = 45.0 / decay;
  const double log_theta = std::log(theta);
  auto integrand = [&](double y) {
    const cplx s(c, y);
    const cplx ratio = kPi * scaled_sin(kPi * rho * s) /
                       (s * scaled_sin(kPi * s) * scaled_sin(kPi * s / alpha));
    const cplx value = std::exp(-s * log_theta + decay * (-y)) * ratio;
    return value.real();
  };
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-13;
  cfg.abs_tol = 1e-15;
  cfg.max_subdivisions = 4000;
  const TransformResult r = integrate(integrand, 0.0, y_max, cfg);
  return r.value / kPi;
}

double kappa_contour(const StableLaw& law, double theta) {
  if (!(theta >= 0.0)) throw DomainError("kappa: theta must be non-negative");
  if (theta == 0.0) return 1.0;
  return std::exp(log_kappa_contour(law, theta));
}

double kappa(const KappaEvaluator& ev, double theta) {
  if (!(theta >= 0.0)) throw DomainError("kappa: theta must be non-negative");
  if (theta == 0.0) return 1.0;
  if (std::isinf(theta)) return std::numeric_limits<double>::infinity();
  const bool inverted = theta > 1.0;
  const double near = inverted ? 1.0 / theta : theta;
  double log_k = 0.0;
  if (near <= ev.series_cutoff) {
    log_k = log_kappa_series(ev, near);
  } else {
    log_k = log_kappa_contour(ev.law, near);
  }
  if (inverted) log_k += ev.law.alpha() * ev.law.rho() * std::log(theta);
  return std::exp(log_k);
}

double kappa_dual(const KappaEvaluator& ev, double theta) {
  KappaEvaluator d = ev;
  d.law = dual(ev.law);
  return kappa(d, theta);
}

std::optional<double> kappa_closed_form(const StableLaw& law, double theta) {
  if (!(theta >= 0.0)) throw DomainError("kappa_closed_form: theta must be non-negative");
  const Classification cls = classify(law);
  const double a = law.alpha();
  if (cls == Classification::SpectrallyNegative && a > 1.0) return 1.0 + theta;
  if (cls == Classification::DoneyC11Dual) {
    const double ta = std::pow(theta, a);
    return (ta * ta - 2.0 * ta * std::cos(a * kPi) + 1.0) / (1.0 + theta);
  }
  return std::nullopt;
}

double stieltjes_density_l(const KappaEvaluator& ev, double x) {
  const double a = ev.law.alpha();
  const double r = ev.law.rho();
  if (r <= 0.0) throw DomainError("stieltjes_density_l: rho must be positive");
  if (std::abs(r - 1.0 / a) <= kClassTol) {
    throw DomainError("stieltjes_density_l: rho = 1/alpha is excluded");
  }
  if (!(x > 0.0)) throw DomainError("stieltjes_density_l: x must be positive");
  const double xa = std::pow(x, a);
  const double angle = r * a * kPi;
  // x^a / (x^{2a} + 2 x^a cos + 1) rewritten to stay finite for large x.
  const double denom = xa + 2.0 * std::cos(angle) + 1.0 / xa;
  return std::sin(angle) / kPi * kappa_dual(ev, x) / denom;
}

TransformResult inv_kappa_via_stieltjes(const KappaEvaluator& ev, double theta,
                                        const QuadratureConfig& qcfg) {
  if (!(theta > 0.0)) throw DomainError("inv_kappa_via_stieltjes: theta must be positive");
  // Validate the law up front so the error is a domain error, not a quadrature one.
  (void)stieltjes_density_l(ev, 1.0);
  return integrate_semi_infinite(
      [&](double x) { return stieltjes_density_l(ev, x) / (x + theta); }, qcfg);
}

}  // namespace stable_exit
