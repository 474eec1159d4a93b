#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "stable_exit/report.hpp"
#include "stable_exit/stable_law.hpp"

namespace stable_exit {

/// Acceptance suites, in criterion order, plus `All`.
enum class Suite {
  Stieltjes,
  Doney,
  KappaSeries,
  Scaling,
  Normalization,
  Sym23,
  MonteCarlo,
  Convolution,
  Subordinator,
  RationalAlpha,
  TrigSeries,
  All,
};

std::string_view to_string(Suite s);
std::optional<Suite> parse_suite(std::string_view name);

/// The eleven criterion suites in order (excludes All).
const std::vector<Suite>& criterion_suites();

/// True for suites that draw random numbers and therefore need a seed.
bool is_random(Suite s);

struct VerifyOptions {
  std::uint64_t seed = 7;
  /// Overrides the sample size of the randomized suites.
  std::optional<std::int64_t> n;
  /// Overrides the path step of the randomized suites.
  std::optional<double> step;
  /// Restricts montecarlo / convolution to a single law.
  std::optional<StableLaw> law;
};

VerificationReport run_suite(Suite s, const VerifyOptions& opt = {});

}  // namespace stable_exit
