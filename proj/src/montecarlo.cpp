#include "stable_exit/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <thread>

#include "stable_exit/errors.hpp"
#include "stable_exit/special_fn.hpp"

namespace stable_exit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kChunk = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t state = splitmix64(seed) ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL);
  std::vector<std::uint32_t> words;
  for (int i = 0; i < 8; ++i) {
    state = splitmix64(state);
    words.push_back(static_cast<std::uint32_t>(state));
    words.push_back(static_cast<std::uint32_t>(state >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

// Fixed-parameter stable sampler for the unit time increment.
class StableSampler {
 public:
  explicit StableSampler(const StableLaw& law)
      : alpha_(law.alpha()),
        shift_(kPi * (0.5 - law.rho())),
        inv_alpha_(1.0 / law.alpha()),
        tail_power_((1.0 - law.alpha()) / law.alpha()) {}

  double operator()(RngStream& rng) const {
    const double u = kPi * (rng.uniform() - 0.5);
    if (alpha_ == 1.0) return std::tan(u);
    const double e = rng.exponential();
    const double a = alpha_ * (u - shift_);
    return std::sin(a) / std::pow(std::cos(u), inv_alpha_) *
           std::pow(std::cos(u - a) / e, tail_power_);
  }

 private:
  double alpha_;
  double shift_;
  double inv_alpha_;
  double tail_power_;
};

double kanter_a(double gamma, double phi) {
  const double sg = std::sin(gamma * phi);
  return std::pow(sg / std::sin(phi), 1.0 / (1.0 - gamma)) * std::sin((1.0 - gamma) * phi) / sg;
}

// Runs `fill(chunk_rng, count)` over chunks of kChunk draws on the worker
// pool; results come back in chunk order whatever the thread count.
template <class R, class Fill>
std::vector<R> run_chunks(std::int64_t n, const RngStream& rng, Fill fill) {
  const std::int64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<R> out(static_cast<std::size_t>(chunks));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t c = next++; c < chunks; c = next++) {
      RngStream sub = rng.substream(static_cast<std::uint64_t>(c));
      const std::int64_t count = std::min(kChunk, n - c * kChunk);
      out[static_cast<std::size_t>(c)] = fill(sub, count);
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(worker_count(), std::max<std::int64_t>(chunks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

SampleMeta base_meta(const RngStream& rng, std::int64_t n) {
  SampleMeta m;
  m.seed = rng.seed();
  m.stream_id = rng.stream_id();
  m.n = n;
  return m;
}

// Fritsch-Butland slopes: monotone piecewise cubic Hermite derivatives.
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> sec(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) sec[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
  d[0] = sec[0];
  d[n - 1] = sec[n - 2];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (sec[k - 1] * sec[k] <= 0.0) {
      d[k] = 0.0;
      continue;
    }
    const double h0 = x[k] - x[k - 1];
    const double h1 = x[k + 1] - x[k];
    const double w1 = 2.0 * h1 + h0;
    const double w2 = h1 + 2.0 * h0;
    d[k] = (w1 + w2) / (w1 / sec[k - 1] + w2 / sec[k]);
  }
  return d;
}

double hermite(const std::vector<double>& x, const std::vector<double>& y,
               const std::vector<double>& d, std::size_t k, double xv) {
  const double h = x[k + 1] - x[k];
  const double s = (xv - x[k]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y[k] + (s3 - 2 * s2 + s) * h * d[k] +
         (-2 * s3 + 3 * s2) * y[k + 1] + (s3 - s2) * h * d[k + 1];
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

double inv_logit(double l) { return l >= 0 ? 1.0 / (1.0 + std::exp(-l)) : std::exp(l) / (1.0 + std::exp(l)); }

// Grid w_i = w0 + i*dw, i = 0..count-1.
struct LogGrid {
  double w0;
  double dw;
  std::size_t count;
  double at(std::ptrdiff_t i) const { return w0 + static_cast<double>(i) * dw; }
};

// Locates [w_lo, w_hi] holding all but kTableTailMass in each tail on a coarse
// grid, then recomputes the CDF on `nodes` points across that range.
template <class CdfOnGrid>
InverseCdfTable two_pass_table(CdfOnGrid cdf_on_grid, std::size_t nodes) {
  const LogGrid coarse{-40.0, 0.125, 961};
  const std::vector<double> f = cdf_on_grid(coarse);
  std::size_t lo = 0;
  std::size_t hi = coarse.count - 1;
  for (std::size_t i = 0; i < coarse.count; ++i) {
    if (f[i] <= kTableTailMass) lo = i;
  }
  for (std::size_t i = coarse.count; i-- > 0;) {
    if (1.0 - f[i] <= kTableTailMass) hi = i;
  }
  if (hi <= lo + 1) throw NonConvergence("inverse CDF table: degenerate quantile range", 0.0, 1.0);
  const LogGrid fine{coarse.at(static_cast<std::ptrdiff_t>(lo)),
                     (coarse.at(static_cast<std::ptrdiff_t>(hi)) - coarse.at(static_cast<std::ptrdiff_t>(lo))) /
                         static_cast<double>(nodes - 1),
                     nodes};
  const std::vector<double> ff = cdf_on_grid(fine);
  std::vector<double> w(nodes);
  for (std::size_t i = 0; i < nodes; ++i) w[i] = fine.at(static_cast<std::ptrdiff_t>(i));
  return InverseCdfTable(std::move(w), ff);
}

// CDF of M on a log grid: 4-point cell rule on g(w) = m(e^w) e^w, tails by
// quadrature, normalized by the total.
std::vector<double> m_cdf_on_grid(const MDensity& md, const LogGrid& grid) {
  auto g = [&](double w) {
    const double x = std::exp(w);
    if (x == 0.0 || std::isinf(x)) return 0.0;
    return m_density(md, x) * x;
  };
  const std::size_t n = grid.count;
  std::vector<double> gv(n + 2);
  for (std::size_t i = 0; i < n + 2; ++i) gv[i] = g(grid.at(static_cast<std::ptrdiff_t>(i) - 1));
  auto G = [&](std::size_t i) { return gv[i + 1]; };  // g at node i, i in [-1, n]
  QuadratureConfig qc;
  qc.rel_tol = 1e-11;
  const double w_first = grid.at(0);
  const double w_last = grid.at(static_cast<std::ptrdiff_t>(n) - 1);
  const double lower = integrate_semi_infinite([&](double v) { return g(w_first - v); }, qc).value;
  const double upper = integrate_semi_infinite([&](double v) { return g(w_last + v); }, qc).value;
  std::vector<double> cum(n);
  cum[0] = lower;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double cell =
        grid.dw * (-gv[i] + 13.0 * G(i) + 13.0 * G(i + 1) - gv[i + 3]) / 24.0;
    cum[i + 1] = cum[i] + cell;
  }
  const double total = cum[n - 1] + upper;
  for (double& c : cum) c /= total;
  return cum;
}

// CDF of tau = M x N(1/alpha) on a log grid:
//   F(e^w) = int m(e^v) e^v F_N(e^{w - v}) dv,
// a trapezoid sum on the same spacing, exponentially accurate since the
// integrand is smooth and decays at both ends.
std::vector<double> tau_cdf_on_grid(const MDensity& md, double gamma, const LogGrid& grid) {
  const double dw = grid.dw;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid.count);
  const std::ptrdiff_t j_lo = -static_cast<std::ptrdiff_t>(std::ceil((40.0 + std::max(0.0, grid.w0)) / dw));
  const std::ptrdiff_t j_hi = n - 1 + static_cast<std::ptrdiff_t>(std::ceil(12.0 / dw));
  std::vector<double> gv(static_cast<std::size_t>(j_hi - j_lo + 1));
  double total = 0.0;
  for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j) {
    const double x = std::exp(grid.at(j));
    const double v = m_density(md, x) * x;
    gv[static_cast<std::size_t>(j - j_lo)] = v;
    total += v;
  }
  // F_N(e^{k dw}) for k = i - j in [-(j_hi), n - 1 - j_lo]
  const std::ptrdiff_t k_lo = -j_hi;
  const std::ptrdiff_t k_hi = n - 1 - j_lo;
  std::vector<double> fn(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) {
    fn[static_cast<std::size_t>(k - k_lo)] = positive_stable_cdf(gamma, std::exp(static_cast<double>(k) * dw));
  }
  std::vector<double> f(grid.count);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j) {
      s += gv[static_cast<std::size_t>(j - j_lo)] * fn[static_cast<std::size_t>(i - j - k_lo)];
    }
    f[static_cast<std::size_t>(i)] = s / total;
  }
  return f;
}

SamplePool draw_from_table(const InverseCdfTable& table, std::int64_t n, const RngStream& rng) {
  auto chunks = run_chunks<std::vector<double>>(n, rng, [&](RngStream& r, std::int64_t count) {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (auto& x : v) x = table.quantile(r.uniform());
    return v;
  });
  SamplePool pool;
  pool.meta = base_meta(rng, n);
  pool.values.reserve(static_cast<std::size_t>(n));
  for (const auto& c : chunks) pool.values.insert(pool.values.end(), c.begin(), c.end());
  return pool;
}

struct ExitChunk {
  std::vector<double> coarse;
  std::vector<double> fine;
  std::int64_t censored_coarse = 0;
  std::int64_t censored_fine = 0;
};

ExitChunk simulate_chunk(const StableLaw& law, const PathConfig& pc, std::int64_t count, RngStream& rng,
                         bool coupled) {
  const StableSampler draw(law);
  const double a = law.alpha();
  const double inv_a = 1.0 / a;
  ExitChunk out;
  out.coarse.reserve(static_cast<std::size_t>(count));
  if (coupled) out.fine.reserve(static_cast<std::size_t>(count));
  const double fixed_dt = coupled ? 0.5 * pc.step : pc.step;
  const double fixed_scale = std::pow(fixed_dt, inv_a);
  for (std::int64_t p = 0; p < count; ++p) {
    double x = pc.start;
    double t = 0.0;
    double fine_time = -1.0;
    for (;;) {
      const double sub_dt = pc.adaptive ? fixed_dt * std::pow(x, a) : fixed_dt;
      const double scale = pc.adaptive ? std::pow(sub_dt, inv_a) : fixed_scale;
      if (coupled) {
        x += scale * draw(rng);
        t += sub_dt;
        if (x <= 0.0) {
          if (fine_time < 0.0) fine_time = t;
        }
        x += scale * draw(rng);
        t += sub_dt;
        if (x <= 0.0 && fine_time < 0.0) fine_time = t;
      } else {
        x += scale * draw(rng);
        t += sub_dt;
      }
      if (x <= 0.0) {
        out.coarse.push_back(t);
        break;
      }
      if (t >= pc.horizon) {
        out.coarse.push_back(pc.horizon);
        ++out.censored_coarse;
        break;
      }
    }
    if (coupled) {
      if (fine_time < 0.0) {
        fine_time = pc.horizon;
        ++out.censored_fine;
      }
      out.fine.push_back(std::min(fine_time, pc.horizon));
    }
  }
  return out;
}

CoupledExitTimes run_exit(const StableLaw& law, const PathConfig& pc, std::int64_t n, const RngStream& rng,
                          bool coupled) {
  pc.validate();
  if (n < 0) throw DomainError("simulate_exit_time: n must be non-negative");
  if (law.is_limiting_brownian()) throw DomainError("simulate_exit_time: alpha = 2 is not supported");
  if (law.alpha() < 1.0 && law.rho() == 1.0) {
    throw DomainError("simulate_exit_time: an increasing process never leaves (0, inf)");
  }
  auto chunks = run_chunks<ExitChunk>(n, rng, [&](RngStream& r, std::int64_t count) {
    return simulate_chunk(law, pc, count, r, coupled);
  });
  CoupledExitTimes res;
  for (SamplePool* pool : {&res.coarse, &res.fine}) {
    pool->law_tag = law_tag(law);
    pool->meta = base_meta(rng, n);
    pool->meta.start = pc.start;
    pool->meta.horizon = pc.horizon;
  }
  res.coarse.meta.step = pc.step;
  res.fine.meta.step = 0.5 * pc.step;
  for (const auto& c : chunks) {
    res.coarse.values.insert(res.coarse.values.end(), c.coarse.begin(), c.coarse.end());
    res.fine.values.insert(res.fine.values.end(), c.fine.begin(), c.fine.end());
    res.coarse.meta.censored += c.censored_coarse;
    res.fine.meta.censored += c.censored_fine;
  }
  if (!coupled) res.fine = SamplePool{};
  return res;
}

std::vector<double> sorted_values(const SamplePool& p) {
  std::vector<double> v = p.values;
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(seed_, splitmix64(stream_id_ * 0x100000001b3ULL + index + 1));
}

double RngStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential() { return -std::log(uniform()); }

void PathConfig::validate() const {
  if (!(step > 0.0) || !(horizon > 0.0) || !(step <= horizon / 10.0)) {
    throw DomainError("PathConfig: need 0 < step <= horizon / 10");
  }
  if (!(start > 0.0) || !std::isfinite(start)) throw DomainError("PathConfig: start must be positive");
}

PathConfig default_path_config(const StableLaw& law, double start) {
  PathConfig pc;
  pc.start = start;
  pc.horizon = law.alpha() > 1.0 ? 50.0 * std::pow(start, law.alpha()) : 1e3;
  return pc;
}

std::string law_tag(const StableLaw& law) {
  std::ostringstream os;
  os.precision(17);
  os << "alpha=" << law.alpha() << ",rho=" << law.rho();
  return os.str();
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STABLE_EXIT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

double sample_stable_increment(const StableLaw& law, double dt, RngStream& rng) {
  if (!(dt > 0.0)) throw DomainError("sample_stable_increment: dt must be positive");
  if (law.is_limiting_brownian()) throw DomainError("sample_stable_increment: alpha = 2 is not supported");
  return std::pow(dt, 1.0 / law.alpha()) * StableSampler(law)(rng);
}

SamplePool sample_positive_stable(double gamma, std::int64_t n, const RngStream& rng) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("sample_positive_stable: gamma must lie in (0,1)");
  if (n < 0) throw DomainError("sample_positive_stable: n must be non-negative");
  const double power = (1.0 - gamma) / gamma;
  auto chunks = run_chunks<std::vector<double>>(n, rng, [&](RngStream& r, std::int64_t count) {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (auto& x : v) {
      const double phi = kPi * r.uniform();
      x = std::pow(kanter_a(gamma, phi) / r.exponential(), power);
    }
    return v;
  });
  SamplePool pool;
  pool.meta = base_meta(rng, n);
  std::ostringstream os;
  os.precision(17);
  os << "positive_stable,gamma=" << gamma;
  pool.law_tag = os.str();
  for (const auto& c : chunks) pool.values.insert(pool.values.end(), c.begin(), c.end());
  return pool;
}

InverseCdfTable::InverseCdfTable(std::vector<double> log_x, std::vector<double> cdf) {
  if (log_x.size() != cdf.size()) throw DomainError("InverseCdfTable: size mismatch");
  for (std::size_t i = 0; i < log_x.size(); ++i) {
    const double f = cdf[i];
    if (!(f > 0.0 && f < 1.0)) continue;
    const double l = logit(f);
    if (!logit_.empty() && !(l > logit_.back() && log_x[i] > log_x_.back())) continue;
    log_x_.push_back(log_x[i]);
    logit_.push_back(l);
  }
  if (log_x_.size() < 4) throw NonConvergence("InverseCdfTable: too few usable nodes", 0.0, 1.0);
  dw_dl_ = monotone_slopes(logit_, log_x_);
  dl_dw_ = monotone_slopes(log_x_, logit_);
  // Tail slopes of logit F against log x, fitted over the outermost decade.
  const double decade = std::log(10.0);
  std::size_t k = 1;
  while (k + 1 < log_x_.size() && log_x_[k] - log_x_.front() < decade) ++k;
  lo_slope_ = (logit_[k] - logit_.front()) / (log_x_[k] - log_x_.front());
  k = log_x_.size() - 2;
  while (k > 0 && log_x_.back() - log_x_[k] < decade) --k;
  hi_slope_ = (logit_.back() - logit_[k]) / (log_x_.back() - log_x_[k]);
}

double InverseCdfTable::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("InverseCdfTable::quantile: u must lie in (0,1)");
  const double l = logit(u);
  double w;
  if (l <= logit_.front()) {
    w = log_x_.front() + (l - logit_.front()) / lo_slope_;
  } else if (l >= logit_.back()) {
    w = log_x_.back() + (l - logit_.back()) / hi_slope_;
  } else {
    const auto it = std::upper_bound(logit_.begin(), logit_.end(), l);
    const std::size_t k = static_cast<std::size_t>(it - logit_.begin()) - 1;
    w = hermite(logit_, log_x_, dw_dl_, k, l);
  }
  return std::exp(w);
}

double InverseCdfTable::cdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double w = std::log(x);
  double l;
  if (w <= log_x_.front()) {
    l = logit_.front() + (w - log_x_.front()) * lo_slope_;
  } else if (w >= log_x_.back()) {
    l = logit_.back() + (w - log_x_.back()) * hi_slope_;
  } else {
    const auto it = std::upper_bound(log_x_.begin(), log_x_.end(), w);
    const std::size_t k = static_cast<std::size_t>(it - log_x_.begin()) - 1;
    l = hermite(log_x_, logit_, dl_dw_, k, w);
  }
  return inv_logit(l);
}

InverseCdfTable build_m_table(const MDensity& md, std::size_t nodes) {
  if (nodes < 16) throw DomainError("build_m_table: need at least 16 nodes");
  return two_pass_table([&](const LogGrid& g) { return m_cdf_on_grid(md, g); }, nodes);
}

InverseCdfTable build_tau_table(const ExitLaw& el, std::size_t nodes) {
  if (!(el.law.alpha() > 1.0)) throw UnsupportedRegime("build_tau_table: requires alpha > 1");
  if (classify(el.law) == Classification::SpectrallyPositive) {
    throw UnsupportedRegime("build_tau_table: tau is 1/alpha-stable here; sample it directly");
  }
  if (el.start != 1.0) throw DomainError("build_tau_table: tabulated for start = 1");
  if (nodes < 16) throw DomainError("build_tau_table: need at least 16 nodes");
  MDensity md(el.law);
  md.kev = el.kev;
  const double gamma = 1.0 / el.law.alpha();
  return two_pass_table([&](const LogGrid& g) { return tau_cdf_on_grid(md, gamma, g); }, nodes);
}

SamplePool sample_M(const MDensity& md, std::int64_t n, const RngStream& rng) {
  if (n < 0) throw DomainError("sample_M: n must be non-negative");
  if (md.law.alpha() == 1.0) throw DomainError("sample_M: M is used for alpha != 1 only");
  SamplePool pool;
  if (n > 0) pool = draw_from_table(build_m_table(md), n, rng);
  pool.meta = base_meta(rng, n);
  pool.law_tag = "M," + law_tag(md.law);
  return pool;
}

SamplePool sample_tau_inverse_cdf(const ExitLaw& el, std::int64_t n, const RngStream& rng) {
  if (n < 0) throw DomainError("sample_tau_inverse_cdf: n must be non-negative");
  SamplePool pool;
  if (n > 0) pool = draw_from_table(build_tau_table(el), n, rng);
  pool.meta = base_meta(rng, n);
  pool.meta.start = el.start;
  pool.law_tag = "tau," + law_tag(el.law);
  return pool;
}

SamplePool simulate_exit_time(const StableLaw& law, const PathConfig& pc, std::int64_t n,
                              const RngStream& rng) {
  return run_exit(law, pc, n, rng, false).coarse;
}

CoupledExitTimes simulate_exit_time_coupled(const StableLaw& law, const PathConfig& pc,
                                            std::int64_t n, const RngStream& rng) {
  return run_exit(law, pc, n, rng, true);
}

LaplaceEstimate empirical_laplace(const SamplePool& pool, double t) {
  if (pool.values.empty()) throw DomainError("empirical_laplace: empty pool");
  if (!(t >= 0.0)) throw DomainError("empirical_laplace: t must be non-negative");
  if (t == 0.0) return {1.0, 0.0};
  double mean = 0.0;
  double m2 = 0.0;
  std::int64_t k = 0;
  for (double v : pool.values) {
    const double e = std::exp(-t * v);
    ++k;
    const double delta = e - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (e - mean);
  }
  const double n = static_cast<double>(pool.values.size());
  const double var = k > 1 ? m2 / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

double ks_two_sample(const SamplePool& a, const SamplePool& b) {
  if (a.values.empty() || b.values.empty()) throw DomainError("ks_two_sample: empty pool");
  const std::vector<double> x = sorted_values(a);
  const std::vector<double> y = sorted_values(b);
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_one_sample(const SamplePool& a, const std::function<double(double)>& cdf) {
  if (a.values.empty()) throw DomainError("ks_one_sample: empty pool");
  const std::vector<double> x = sorted_values(a);
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

VerificationReport convolution_check(const StableLaw& law, const ConvolutionOptions& opt) {
  const double a = law.alpha();
  if (a == 1.0) throw UnsupportedRegime("convolution_check: alpha = 1 has no M factorization");
  if (opt.n < 1) throw DomainError("convolution_check: n must be positive");
  VerificationReport report;
  report.suite = "convolution";
  const MDensity md(law);
  const SamplePool m = sample_M(md, opt.n, RngStream(opt.seed, 2));
  std::map<std::string, double> params{{"alpha", a}, {"rho", law.rho()}, {"n", static_cast<double>(opt.n)},
                                       {"seed", static_cast<double>(opt.seed)}};
  if (a > 1.0) {
    const double threshold = opt.threshold.value_or(0.015);
    const ExitLaw el(law);
    const SamplePool tau = sample_tau_inverse_cdf(el, opt.n, RngStream(opt.seed, 1));
    const SamplePool nn = sample_positive_stable(1.0 / a, opt.n, RngStream(opt.seed, 3));
    SamplePool prod = m;
    for (std::size_t i = 0; i < prod.values.size(); ++i) prod.values[i] *= nn.values[i];
    report.add(make_case("ks(tau, M x N(1/alpha))", params, ks_two_sample(tau, prod), 0.0, threshold,
                         Comparison::Absolute));
    return report;
  }
  const double threshold = opt.threshold.value_or(0.05);
  PathConfig pc;
  if (opt.path) {
    pc = *opt.path;
  } else {
    pc.step = 1e-3;
    pc.adaptive = true;
    pc.horizon = 1e12;
  }
  const CoupledExitTimes paths = simulate_exit_time_coupled(law, pc, opt.n, RngStream(opt.seed, 1));
  const SamplePool nn = sample_positive_stable(a, opt.n, RngStream(opt.seed, 3));
  auto product = [&](const SamplePool& tau) {
    SamplePool p = tau;
    for (std::size_t i = 0; i < p.values.size(); ++i) p.values[i] *= std::pow(nn.values[i], a);
    return p;
  };
  const double ks_h = ks_two_sample(product(paths.coarse), m);
  const double ks_h2 = ks_two_sample(product(paths.fine), m);
  params["step"] = pc.step;
  params["adaptive"] = pc.adaptive ? 1.0 : 0.0;
  params["horizon"] = pc.horizon;
  std::ostringstream note;
  note.precision(6);
  note << "step-halved statistic " << ks_h2 << ", change " << std::abs(ks_h - ks_h2) << "; censored "
       << paths.coarse.meta.censored << " of " << opt.n;
  report.add(make_case("ks(tau_hat x N(alpha)^alpha, M)", params, ks_h, 0.0, threshold, Comparison::Absolute,
                       note.str()));
  auto half = params;
  half["step"] = 0.5 * pc.step;
  report.add(make_case("ks(tau_hat x N(alpha)^alpha, M), half step", half, ks_h2, 0.0, threshold,
                       Comparison::Absolute));
  report.add(make_case("censored fraction", params,
                       static_cast<double>(paths.coarse.meta.censored) / static_cast<double>(opt.n), 0.0,
                       0.01, Comparison::Absolute));
  return report;
}

}  // namespace stable_exit
