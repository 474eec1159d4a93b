#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stable_exit/stable_law.hpp"

namespace stable_exit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitDomain = 2,
  kExitNonConvergence = 3,
  kExitIo = 4,
};

/// Raised for unreadable output paths and failed writes.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A decimal number or a fraction "p/q". Throws DomainError on junk.
double parse_number(std::string_view text);

/// Comma list whose items are numbers or geometric ranges "a:b:n"
/// (0 < a, b; n >= 1 points), e.g. "0,0.1:10:5,2/3".
std::vector<double> parse_grid(std::string_view text);

/// A decimal rho within this distance of a band edge or class boundary
/// (1/alpha, 1 - 1/alpha, 2 - 1/alpha, 0, 1) is moved onto it when it lies
/// just outside the band, or when it reads as that boundary rounded to three
/// or more decimals (0.6667 for 2/3).
inline constexpr double kRhoSnap = 5e-4;

struct LawChoice {
  StableLaw law;
  /// Set when rho was snapped; describes the adjustment.
  std::optional<std::string> note;
};

/// Law from --alpha plus exactly one of --rho / --beta (as typed).
LawChoice make_law(const std::string& alpha, const std::optional<std::string>& rho,
                   const std::optional<std::string>& beta);

/// 17 significant digits, independent of the global locale.
std::string format_number(double v);

struct CsvRow {
  double x;
  double value;
  double abs_err;
};

std::string transform_csv(const std::vector<CsvRow>& rows);
std::string sample_csv(const std::vector<double>& values);

/// Writes through a temporary sibling file and a rename. Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace stable_exit::cli
