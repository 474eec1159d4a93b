#include "cli_support.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>
#include <unistd.h>

#include "stable_exit/errors.hpp"

namespace stable_exit::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_plain(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    throw DomainError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

double parse_number(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_plain(text);
  const double num = parse_plain(text.substr(0, slash));
  const double den = parse_plain(text.substr(slash + 1));
  if (den == 0.0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

namespace {

std::vector<double> parse_range(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) throw DomainError("range must read a:b:n, got '" + std::string(text) + "'");
  const double a = parse_number(parts[0]);
  const double b = parse_number(parts[1]);
  const double nd = parse_number(parts[2]);
  if (!(a > 0.0 && b > 0.0)) throw DomainError("geometric range needs positive end points");
  if (!(nd >= 1.0) || nd != std::floor(nd) || nd > 1e6) throw DomainError("range count must be a positive integer");
  const auto n = static_cast<std::size_t>(nd);
  std::vector<double> grid(n);
  grid[0] = a;
  if (n == 1) return grid;
  const double step = std::log(b / a) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i + 1 < n; ++i) grid[i] = a * std::exp(step * static_cast<double>(i));
  grid.back() = b;
  return grid;
}

// Digits after the decimal point of a plain decimal, -1 for other forms.
int decimals(std::string_view s) {
  s = trim(s);
  if (s.find_first_of("eE/") != std::string_view::npos) return -1;
  const auto dot = s.find('.');
  return dot == std::string_view::npos ? 0 : static_cast<int>(s.size() - dot - 1);
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> grid;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(',', start);
    const std::string_view item = text.substr(start, pos - start);
    if (item.find(':') != std::string_view::npos) {
      const auto r = parse_range(item);
      grid.insert(grid.end(), r.begin(), r.end());
    } else {
      grid.push_back(parse_number(item));
    }
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return grid;
}

LawChoice make_law(const std::string& alpha_text, const std::optional<std::string>& rho_text,
                   const std::optional<std::string>& beta_text) {
  if (rho_text.has_value() == beta_text.has_value()) {
    throw DomainError("give exactly one of --rho and --beta");
  }
  const double alpha = parse_number(alpha_text);
  if (beta_text) return {StableLaw::from_alpha_beta(alpha, parse_number(*beta_text)), std::nullopt};
  double rho = parse_number(*rho_text);
  std::optional<std::string> note;
  if (alpha > 0.0 && alpha <= 2.0) {
    const RhoBand band = admissible_rho_band(alpha);
    const bool outside = rho < band.lo || rho > band.hi;
    const int digits = decimals(*rho_text);
    const std::array<double, 5> marks{1.0 / alpha, 1.0 - 1.0 / alpha, 2.0 - 1.0 / alpha, 0.0, 1.0};
    for (double m : marks) {
      if (!(m >= 0.0 && m <= 1.0) || m == rho || std::abs(rho - m) > kRhoSnap) continue;
      // A typed value such as 0.6667 is read as the rounding of 2/3.
      const double unit = digits >= 3 ? std::pow(10.0, -digits) : 0.0;
      const bool rounded = digits >= 3 && std::abs(std::nearbyint(m / unit) * unit - rho) < 0.25 * unit;
      if (outside || rounded) {
        note = "rho " + format_number(rho) + " taken as " + format_number(m);
        rho = m;
        break;
      }
    }
  }
  return {StableLaw::from_alpha_rho(alpha, rho), note};
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

std::string transform_csv(const std::vector<CsvRow>& rows) {
  std::string out = "x,value,abs_err\n";
  for (const CsvRow& r : rows) {
    out += format_number(r.x) + ',' + format_number(r.value) + ',' + format_number(r.abs_err) + '\n';
  }
  return out;
}

std::string sample_csv(const std::vector<double>& values) {
  std::string out = "value\n";
  for (double v : values) out += format_number(v) + '\n';
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

}  // namespace stable_exit::cli
