#include "stable_exit/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <vector>

#include "stable_exit/errors.hpp"

namespace stable_exit {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(tail_cutoff_ratio > 0.0)) {
    throw DomainError("QuadratureConfig: tolerances must be positive");
  }
  if (max_subdivisions < 1) throw DomainError("QuadratureConfig: max_subdivisions must be >= 1");
}

void SeriesConfig::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("SeriesConfig: rel_tol must be positive");
  if (max_terms < 10) throw DomainError("SeriesConfig: max_terms must be >= 10");
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double err;
  double peak;
  bool at_roundoff;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gauss_kronrod(const RealFunction& f, double a, double b, std::int64_t& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  double peak = std::abs(fc);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double lo = f(center - dx);
    const double hi = f(center + dx);
    f1[j] = lo;
    f2[j] = hi;
    resk += kWgk[j] * (lo + hi);
    resabs += kWgk[j] * (std::abs(lo) + std::abs(hi));
    peak = std::max({peak, std::abs(lo), std::abs(hi)});
    if (j % 2 == 1) resg += kWg[j / 2] * (lo + hi);
  }
  evals += 15;
  const double mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  resk *= half;
  resg *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  bool at_roundoff = false;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps) && err <= 50.0 * eps * resabs) {
    err = 50.0 * eps * resabs;
    at_roundoff = true;
  }
  if (!std::isfinite(resk)) err = std::numeric_limits<double>::infinity();
  return {a, b, resk, err, peak, at_roundoff};
}

}  // namespace

namespace {

// Adaptive refinement starting from the panels between consecutive breakpoints.
TransformResult integrate_from(const RealFunction& f, const std::vector<double>& breaks,
                               const QuadratureConfig& cfg) {
  std::int64_t evals = 0;
  std::priority_queue<Panel> live;
  std::vector<Panel> settled;
  double peak = 0.0;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Panel p = gauss_kronrod(f, breaks[i], breaks[i + 1], evals);
    peak = std::max(peak, p.peak);
    total += p.value;
    total_err += p.err;
    live.push(p);
  }

  auto tolerance = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };

  int subdivisions = 1;
  while (!live.empty() && total_err > tolerance()) {
    if (subdivisions >= cfg.max_subdivisions) {
      throw NonConvergence("integrate: subdivision budget exhausted", total, total_err);
    }
    Panel worst = live.top();
    live.pop();
    // Panels in the far tail, or whose error is pure roundoff, cannot improve.
    const bool negligible = worst.peak <= cfg.tail_cutoff_ratio * peak;
    if ((negligible || worst.at_roundoff) && std::isfinite(worst.value)) {
      total_err -= worst.err;
      if (negligible) worst.err = 0.0;
      settled.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NonConvergence("integrate: interval collapsed to machine precision", total, total_err);
    }
    Panel left = gauss_kronrod(f, worst.a, mid, evals);
    Panel right = gauss_kronrod(f, mid, worst.b, evals);
    ++subdivisions;
    peak = std::max({peak, left.peak, right.peak});
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    live.push(left);
    live.push(right);
  }
  // Re-sum from the panels to shed accumulated cancellation in the running total.
  double sum = 0.0;
  double err = 0.0;
  for (const Panel& p : settled) {
    sum += p.value;
    err += p.err;
  }
  while (!live.empty()) {
    sum += live.top().value;
    err += live.top().err;
    live.pop();
  }
  if (!std::isfinite(sum)) {
    throw NonConvergence("integrate: non-finite integrand values", sum, err);
  }
  return {sum, err, evals};
}

}  // namespace

TransformResult integrate(const RealFunction& f, double a, double b, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(a < b)) {
    if (a == b) return {0.0, 0.0, 0};
    TransformResult r = integrate(f, b, a, cfg);
    r.value = -r.value;
    return r;
  }
  return integrate_from(f, {a, b}, cfg);
}

TransformResult integrate_semi_infinite(const RealFunction& f, const QuadratureConfig& cfg,
                                        double singularity_exponent) {
  if (!(singularity_exponent > -1.0)) {
    throw DomainError("integrate_semi_infinite: singularity exponent must exceed -1");
  }
  const double q = 1.0 / (1.0 + singularity_exponent);
  // s = t / (1 - t^2) sends (-1, 1) onto the real line; x = exp(q s).
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t * t;
    if (one_minus <= 0.0) return 0.0;
    const double s = t / one_minus;
    const double log_x = q * s;
    if (log_x > 709.0 || log_x < -745.0) return 0.0;
    const double x = std::exp(log_x);
    const double ds_dt = (1.0 + t * t) / (one_minus * one_minus);
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return v * x * q * ds_dt;
  };
  // Start from panels bounded at s = 0, +-2, +-5, ..., +-40 so that mass far
  // from x = 1 is seen before the first convergence test.
  std::vector<double> breaks{-1.0};
  for (double sb : {-40.0, -20.0, -10.0, -5.0, -2.0, 0.0, 2.0, 5.0, 10.0, 20.0, 40.0}) {
    breaks.push_back(sb == 0.0 ? 0.0 : (std::sqrt(1.0 + 4.0 * sb * sb) - 1.0) / (2.0 * sb));
  }
  breaks.push_back(1.0);
  cfg.validate();
  return integrate_from(mapped, breaks, cfg);
}

namespace {

// Levin u-transform over a window of partial sums, see Fessler, Ford & Smith.
class LevinU {
 public:
  explicit LevinU(std::size_t window) : window_(window) {}

  // Returns false when the estimate is unavailable (zero term in window).
  bool push(double partial_sum, double term, std::int64_t index, double& estimate) {
    sums_.push_back(partial_sum);
    omegas_.push_back(static_cast<double>(index + 1) * term);
    if (sums_.size() > window_) {
      sums_.pop_front();
      omegas_.pop_front();
      ++offset_;
    }
    const std::size_t k = sums_.size() - 1;
    if (k < 2) return false;
    double num = 0.0;
    double den = 0.0;
    double binom = 1.0;
    const double beta = 1.0;
    const double n0 = static_cast<double>(offset_);
    for (std::size_t j = 0; j <= k; ++j) {
      if (omegas_[j] == 0.0 || !std::isfinite(omegas_[j])) return false;
      const double ratio = (n0 + beta + static_cast<double>(j)) / (n0 + beta + static_cast<double>(k));
      const double c = ((j % 2 == 0) ? 1.0 : -1.0) * binom * std::pow(ratio, static_cast<double>(k) - 1.0);
      num += c * sums_[j] / omegas_[j];
      den += c / omegas_[j];
      binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
    if (den == 0.0 || !std::isfinite(num / den)) return false;
    estimate = num / den;
    return true;
  }

 private:
  std::size_t window_;
  std::size_t offset_ = 0;
  std::deque<double> sums_;
  std::deque<double> omegas_;
};

}  // namespace

TransformResult sum_series(const std::function<double(std::int64_t)>& term, const SeriesConfig& cfg,
                           std::int64_t first) {
  cfg.validate();
  double sum = 0.0;
  double compensation = 0.0;
  int small_run = 0;
  int stable_run = 0;
  double last_term = 0.0;
  double previous_estimate = std::numeric_limits<double>::quiet_NaN();
  LevinU levin(30);
  for (std::int64_t i = 0; i < cfg.max_terms; ++i) {
    const std::int64_t k = first + i;
    const double a = term(k);
    if (!std::isfinite(a)) {
      throw NonConvergence("sum_series: non-finite term", sum, std::abs(last_term));
    }
    // Kahan summation keeps long slowly converging sums honest.
    const double y = a - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
    last_term = a;

    if (std::abs(a) <= cfg.rel_tol * std::abs(sum)) {
      if (++small_run >= 3) return {sum, std::abs(a), i + 1};
    } else {
      small_run = 0;
    }

    if (cfg.accelerate && i < 200) {
      double estimate = 0.0;
      if (levin.push(sum, a, i, estimate)) {
        if (std::isfinite(previous_estimate) &&
            std::abs(estimate - previous_estimate) <= cfg.rel_tol * std::abs(estimate)) {
          if (++stable_run >= 3 && i >= 5) {
            return {estimate, std::abs(estimate - previous_estimate), i + 1};
          }
        } else {
          stable_run = 0;
        }
        previous_estimate = estimate;
      } else {
        stable_run = 0;
        previous_estimate = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  throw NonConvergence("sum_series: max_terms exceeded", sum, std::abs(last_term));
}

}  // namespace stable_exit
