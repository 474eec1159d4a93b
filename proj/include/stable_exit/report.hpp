#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stable_exit {

inline constexpr int kReportSchema = 1;

/// How lhs and rhs are compared against the tolerance.
enum class Comparison { Absolute, Relative };

struct VerificationCase {
  std::string name;
  std::map<std::string, double> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::Absolute;
  std::string note;
  bool pass = false;

  /// |lhs - rhs| or |lhs - rhs| / |rhs|.
  double error() const;
};

VerificationCase make_case(std::string name, std::map<std::string, double> params, double lhs,
                           double rhs, double tolerance, Comparison comparison,
                           std::string note = {});

struct VerificationReport {
  std::string suite;
  std::vector<VerificationCase> cases;

  bool overall() const;
  void add(VerificationCase c) { cases.push_back(std::move(c)); }
  void append(const VerificationReport& other);
};

std::string to_json(const VerificationReport& report, int indent = 2);

/// Throws std::invalid_argument on malformed input or a schema mismatch.
VerificationReport report_from_json(std::string_view text);

}  // namespace stable_exit
