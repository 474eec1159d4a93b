#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stable_exit/exit_law.hpp"
#include "stable_exit/report.hpp"
#include "stable_exit/stable_law.hpp"

namespace stable_exit {

/// Reproducible random stream: identical (seed, stream_id) give identical draws.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Independent child stream, used to split work into chunks.
  RngStream substream(std::uint64_t index) const;

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard exponential.
  double exponential();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

struct SampleMeta {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::int64_t n = 0;
  std::optional<double> step;
  std::optional<double> start;
  std::optional<double> horizon;
  /// Paths still inside (0, inf) at the horizon; their value is the horizon.
  std::int64_t censored = 0;
};

struct SamplePool {
  std::vector<double> values;
  std::string law_tag;
  SampleMeta meta;
};

struct PathConfig {
  double step = 1e-3;
  double horizon = 50.0;
  double start = 1.0;
  /// Scale each step by the current position: dt = step * X^alpha. The
  /// skeleton is then equally fine at every distance from the boundary,
  /// which keeps heavy-tailed exit times affordable.
  bool adaptive = false;

  /// Throws DomainError unless 0 < step <= horizon / 10 and start > 0.
  void validate() const;
};

/// Default horizon 50 start^alpha for alpha > 1, 1e3 otherwise.
PathConfig default_path_config(const StableLaw& law, double start = 1.0);

/// Tag used in pool metadata, e.g. "alpha=1.5,rho=0.5".
std::string law_tag(const StableLaw& law);

/// Worker count: hardware concurrency capped by STABLE_EXIT_THREADS.
unsigned worker_count();

/// Draws of X_dt - X_0 by the uniform-angle / exponential transformation.
double sample_stable_increment(const StableLaw& law, double dt, RngStream& rng);

/// n draws of N(gamma), E exp(-x N) = exp(-x^gamma).
SamplePool sample_positive_stable(double gamma, std::int64_t n, const RngStream& rng);

/// Inverse-CDF table on a log grid, interpolated monotonically in
/// (logit F, log x) with power-law tails.
class InverseCdfTable {
 public:
  InverseCdfTable(std::vector<double> log_x, std::vector<double> cdf);

  double quantile(double u) const;
  double cdf(double x) const;
  std::size_t size() const { return log_x_.size(); }
  double lower_tail_exponent() const { return lo_slope_; }
  double upper_tail_exponent() const { return hi_slope_; }

 private:
  std::vector<double> log_x_;
  std::vector<double> logit_;
  std::vector<double> dw_dl_;  // slopes of log x against logit F
  std::vector<double> dl_dw_;  // slopes of logit F against log x
  double lo_slope_ = 1.0;
  double hi_slope_ = 1.0;
};

inline constexpr std::size_t kTableNodes = 2048;
inline constexpr double kTableTailMass = 1e-6;

/// CDF table of M_{alpha,rho}.
InverseCdfTable build_m_table(const MDensity& md, std::size_t nodes = kTableNodes);

/// CDF table of tau (start 1) for alpha > 1 from tau = M x N(1/alpha).
InverseCdfTable build_tau_table(const ExitLaw& el, std::size_t nodes = kTableNodes);

SamplePool sample_M(const MDensity& md, std::int64_t n, const RngStream& rng);

/// Draws of tau by inverse CDF (alpha > 1 only).
SamplePool sample_tau_inverse_cdf(const ExitLaw& el, std::int64_t n, const RngStream& rng);

/// n skeleton exit times tau_hat = first grid time with X <= 0.
SamplePool simulate_exit_time(const StableLaw& law, const PathConfig& pc, std::int64_t n,
                              const RngStream& rng);

/// Step h and step h/2 exit times from the same paths: the coarse skeleton
/// is every other point of the fine one.
struct CoupledExitTimes {
  SamplePool coarse;
  SamplePool fine;
};

CoupledExitTimes simulate_exit_time_coupled(const StableLaw& law, const PathConfig& pc,
                                            std::int64_t n, const RngStream& rng);

struct LaplaceEstimate {
  double value;
  double std_error;
};

/// Mean of exp(-t tau) and its standard error. Throws DomainError on an empty pool.
LaplaceEstimate empirical_laplace(const SamplePool& pool, double t);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(const SamplePool& a, const SamplePool& b);

/// One-sample Kolmogorov-Smirnov distance against a CDF.
double ks_one_sample(const SamplePool& a, const std::function<double(double)>& cdf);

struct ConvolutionOptions {
  std::int64_t n = 100000;
  std::uint64_t seed = 7;
  /// KS threshold; defaults to 0.015 for alpha > 1 and 0.05 for alpha < 1.
  std::optional<double> threshold;
  /// Path settings for alpha < 1.
  std::optional<PathConfig> path;
};

/// alpha > 1: KS(tau by inverse CDF, M x N(1/alpha)).
/// alpha < 1: KS(tau_hat x N(alpha)^alpha, M), with the step-halved statistic in the report.
VerificationReport convolution_check(const StableLaw& law, const ConvolutionOptions& opt = {});

}  // namespace stable_exit
