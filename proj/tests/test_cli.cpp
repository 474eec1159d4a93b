#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <clocale>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli_support.hpp"
#include "oracles.hpp"
#include "stable_exit/errors.hpp"
#include "stable_exit/special_fn.hpp"

using namespace stable_exit;
namespace fs = std::filesystem;

namespace {

struct ScratchDir {
  fs::path path = fs::temp_directory_path() / ("stable_exit_cli_" + std::to_string(::getpid()));
  ScratchDir() { fs::create_directories(path); }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path scratch_dir() {
  static const ScratchDir dir;
  return dir.path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  const fs::path out = scratch_dir() / "stdout.txt";
  const fs::path err = scratch_dir() / "stderr.txt";
  const std::string cmd = std::string(STABLE_EXIT_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

// Value column of the first data row of a transform CSV.
double first_value(const std::string& csv) {
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  const auto c1 = row.find(',');
  const auto c2 = row.find(',', c1 + 1);
  return std::stod(row.substr(c1 + 1, c2 - c1 - 1));
}

}  // namespace

TEST_CASE("parse_number") {
  CHECK(cli::parse_number("1.5") == 1.5);
  CHECK(cli::parse_number("2/3") == 2.0 / 3.0);
  CHECK(cli::parse_number("1e-3") == 1e-3);
  CHECK(cli::parse_number("-0.25") == -0.25);
  CHECK_THROWS_AS(cli::parse_number("abc"), DomainError);
  CHECK_THROWS_AS(cli::parse_number("1.5x"), DomainError);
  CHECK_THROWS_AS(cli::parse_number("1/0"), DomainError);
  CHECK_THROWS_AS(cli::parse_number(""), DomainError);
}

TEST_CASE("parse_grid") {
  CHECK(cli::parse_grid("0.5") == std::vector<double>{0.5});
  CHECK(cli::parse_grid("0,1,2/3") == std::vector<double>{0.0, 1.0, 2.0 / 3.0});
  const auto g = cli::parse_grid("0.1:10:3");
  REQUIRE(g.size() == 3);
  CHECK(g[0] == doctest::Approx(0.1));
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(g[2] == doctest::Approx(10.0));
  CHECK(cli::parse_grid("0,1:100:3,7").size() == 5);
  CHECK(cli::parse_grid("2:2:1") == std::vector<double>{2.0});
  CHECK_THROWS_AS(cli::parse_grid(""), DomainError);
  CHECK_THROWS_AS(cli::parse_grid("1,,2"), DomainError);
  CHECK_THROWS_AS(cli::parse_grid("0:1:3"), DomainError);
  CHECK_THROWS_AS(cli::parse_grid("1:2:0"), DomainError);
  CHECK_THROWS_AS(cli::parse_grid("1:2"), DomainError);
}

TEST_CASE("make_law") {
  const auto snapped = cli::make_law("1.5", std::string("0.6667"), std::nullopt);
  CHECK(snapped.law.rho() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(snapped.note.has_value());
  const auto plain = cli::make_law("0.6667", std::string("0.5"), std::nullopt);
  CHECK(plain.law.rho() == 0.5);
  CHECK(!plain.note.has_value());
  const auto fraction = cli::make_law("2/3", std::string("1/2"), std::nullopt);
  CHECK(fraction.law.alpha() == 2.0 / 3.0);
  const auto beta = cli::make_law("1.5", std::nullopt, std::string("0"));
  CHECK(beta.law.rho() == doctest::Approx(0.5));
  CHECK_THROWS_AS(cli::make_law("1", std::nullopt, std::string("0.5")), DomainError);
  CHECK_THROWS_AS(cli::make_law("1.5", std::string("0.5"), std::string("0")), DomainError);
  CHECK_THROWS_AS(cli::make_law("1.5", std::nullopt, std::nullopt), DomainError);
  CHECK_THROWS_AS(cli::make_law("1.5", std::string("0.2"), std::nullopt), DomainError);
}

TEST_CASE("number formatting is locale independent") {
  CHECK(cli::format_number(0.5) == "0.5");
  CHECK(cli::format_number(1.0 / 3.0) == "0.33333333333333331");
  CHECK(std::stod(cli::format_number(std::numbers::pi)) == std::numbers::pi);
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
    CHECK(cli::format_number(0.5) == "0.5");
    std::setlocale(LC_NUMERIC, "C");
  }
  CHECK(cli::transform_csv({{1.0, 2.0, 0.0}}) == "x,value,abs_err\n1,2,0\n");
  CHECK(cli::sample_csv({0.25, 4.0}) == "value\n0.25\n4\n");
}

TEST_CASE("atomic writes") {
  const fs::path p = scratch_dir() / "atomic.txt";
  cli::write_atomic(p, "first");
  cli::write_atomic(p, "second");
  CHECK(slurp(p) == "second");
  for (const auto& e : fs::directory_iterator(scratch_dir())) {
    CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
  }
  CHECK_THROWS_AS(cli::write_atomic(scratch_dir() / "missing" / "x.txt", "x"), cli::IoError);
}

TEST_CASE("kappa command") {
  const Run r = run("kappa --alpha 1.5 --rho 0.6667 --theta 0.5");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("x,value,abs_err\n", 0) == 0);
  CHECK(first_value(r.out) == doctest::Approx(1.5).epsilon(1e-9));

  const Run sym = run("kappa --alpha 0.6667 --rho 0.5 --theta 1");
  CHECK(sym.code == 0);
  CHECK(first_value(sym.out) == doctest::Approx(1.5).epsilon(1e-3));
  const Run exact = run("kappa --alpha 2/3 --rho 1/2 --theta 1");
  CHECK(first_value(exact.out) == doctest::Approx(1.5).epsilon(1e-10));

  CHECK(run("kappa --alpha 1 --beta 0.5 --theta 1").code == 2);
  CHECK(run("kappa --alpha 1.5 --rho 0.5 --beta 0 --theta 1").code == 2);
  CHECK(run("kappa --alpha 1.5 --rho 0.5 --theta -1").code == 2);
  CHECK(run("kappa --alpha 1.5 --rho 0.5").code == 2);

  const Run grid = run("kappa --alpha 1.5 --rho 0.5 --theta 0.1:10:5");
  CHECK(grid.code == 0);
  CHECK(std::count(grid.out.begin(), grid.out.end(), '\n') == 6);
}

TEST_CASE("laplace, density and mdensity commands") {
  const Run lap = run("laplace --alpha 0.6667 --rho 0.5 --t 1");
  CHECK(lap.code == 0);
  const double closed = std::sqrt(3.0) / (2.0 * std::numbers::pi) * std::tgamma(2.0 / 3.0) * gamma_upper(1.0 / 3.0, 1.0) *
                        std::exp(1.0);
  CHECK(first_value(lap.out) == doctest::Approx(closed).epsilon(1e-3));
  CHECK(first_value(run("laplace --alpha 2/3 --rho 1/2 --t 1").out) == doctest::Approx(closed).epsilon(1e-10));
  CHECK(first_value(run("laplace --alpha 1.5 --rho 0.5 --t 0").out) == 1.0);

  const Run den = run("density --alpha 1 --rho 0.5 --s 1");
  CHECK(den.code == 0);
  CHECK(first_value(den.out) ==
        doctest::Approx(oracle::kappa_symmetric(1.0, 1.0) / (2.0 * std::numbers::pi)).epsilon(1e-9));
  CHECK(den.err.find("regime: cauchy") != std::string::npos);
  CHECK(run("density --alpha 0.7 --rho 0.5 --s 1").code == 2);

  const Run m = run("mdensity --alpha 1.5 --rho 2/3 --x 1");
  CHECK(m.code == 0);
  CHECK(first_value(m.out) == doctest::Approx(2.0 / (3.0 * std::numbers::pi)).epsilon(1e-10));
  CHECK(run("mdensity --alpha 1.5 --rho 0.5 --x -1").code == 2);

  const fs::path out = scratch_dir() / "lap.csv";
  CHECK(run("laplace --alpha 1.5 --rho 0.5 --t 0,1,2 --out " + out.string()).code == 0);
  const std::string lap_csv = slurp(out);
  CHECK(std::count(lap_csv.begin(), lap_csv.end(), '\n') == 4);
  CHECK(run("laplace --alpha 1.5 --rho 0.5 --t 1 --out " + (scratch_dir() / "nope" / "x.csv").string()).code == 4);
}

TEST_CASE("verify command") {
  const Run r = run("verify stieltjes");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["suite"] == "stieltjes");
  CHECK(j["overall"] == true);
  CHECK(run("verify doney").code == 0);
  CHECK(run("verify convolution --alpha 1.5 --rho 0.5 --n 20000").code == 2);  // no seed
  const Run conv = run("verify convolution --alpha 1.5 --rho 0.5 --n 20000 --seed 7");
  CHECK(conv.code == 0);
  CHECK(nlohmann::json::parse(conv.out)["overall"] == true);
  CHECK(run("verify nonsense").code == 2);
}

TEST_CASE("sample command") {
  const fs::path a = scratch_dir() / "tau_a.csv";
  const fs::path b = scratch_dir() / "tau_b.csv";
  const std::string flags = "sample tau --alpha 1.5 --rho 0.5 --n 1000 --step 1e-3 --seed 1 --out ";
  CHECK(run(flags + a.string()).code == 0);
  CHECK(run(flags + b.string()).code == 0);
  const std::string csv = slurp(a);
  CHECK(csv == slurp(b));
  CHECK(csv.rfind("value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1001);
  const auto meta = nlohmann::json::parse(slurp(a.string() + ".json"));
  CHECK(meta["seed"] == 1);
  CHECK(meta["n"] == 1000);
  CHECK(meta["step"] == 1e-3);
  CHECK(meta["method"] == "path");
  CHECK(meta.contains("horizon"));
  CHECK(meta.contains("censored"));

  CHECK(run("sample M --alpha 1 --rho 0.5 --n 10 --seed 1 --out " + (scratch_dir() / "m.csv").string()).code == 2);
  CHECK(run("sample M --alpha 1.5 --rho 0.5 --n 10 --out " + (scratch_dir() / "m.csv").string()).code == 2);
  CHECK(run("sample M --alpha 1.5 --rho 0.5 --n 10 --seed 1 --out " + (scratch_dir() / "no" / "m.csv").string())
            .code == 4);
  const fs::path ps = scratch_dir() / "ps.csv";
  CHECK(run("sample positive_stable --gamma 0.5 --n 50 --seed 3 --out " + ps.string()).code == 0);
  const std::string pcsv = slurp(ps);
  CHECK(std::count(pcsv.begin(), pcsv.end(), '\n') == 51);
}

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
}
