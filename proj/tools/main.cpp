#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "cli_support.hpp"
#include "stable_exit/errors.hpp"
#include "stable_exit/exit_law.hpp"
#include "stable_exit/kappa.hpp"
#include "stable_exit/montecarlo.hpp"
#include "stable_exit/report.hpp"
#include "stable_exit/verify.hpp"

namespace se = stable_exit;
namespace cli = stable_exit::cli;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LawFlags {
  std::string alpha;
  std::optional<std::string> rho;
  std::optional<std::string> beta;

  void attach(CLI::App* app, bool required) {
    auto* a = app->add_option("--alpha", alpha, "stability index, decimal or p/q");
    if (required) a->required();
    auto* r = app->add_option("--rho", rho, "positivity coefficient P(X_t >= 0)");
    auto* b = app->add_option("--beta", beta, "skewness");
    r->excludes(b);
    b->excludes(r);
  }

  bool given() const { return !alpha.empty(); }

  se::StableLaw law() const {
    cli::LawChoice c = cli::make_law(alpha, rho, beta);
    if (c.note) std::cerr << "note: " << *c.note << '\n';
    return c.law;
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    cli::write_atomic(out, text);
  }
}

// Deviation from an independent route, NaN when none is available.
double kappa_cross_check(const se::KappaEvaluator& ev, double theta, double value) {
  if (theta == 0.0) return 0.0;
  if (auto c = se::kappa_closed_form(ev.law, theta)) return std::abs(*c - value);
  const double m = std::min(theta, 1.0 / theta);
  try {
    const double alt = m <= ev.series_cutoff ? se::kappa_contour(ev.law, theta) : se::kappa_series(ev, theta);
    return std::abs(alt - value);
  } catch (const se::NonConvergence&) {
    return kNaN;
  }
}

std::string sidecar(const std::string& target, const se::SamplePool& pool, const std::string& method) {
  nlohmann::ordered_json j;
  j["schema"] = se::kReportSchema;
  j["target"] = target;
  j["method"] = method;
  j["law_tag"] = pool.law_tag;
  j["seed"] = pool.meta.seed;
  j["stream_id"] = pool.meta.stream_id;
  j["n"] = pool.meta.n;
  j["step"] = pool.meta.step ? nlohmann::json(*pool.meta.step) : nlohmann::json(nullptr);
  j["start"] = pool.meta.start ? nlohmann::json(*pool.meta.start) : nlohmann::json(nullptr);
  j["horizon"] = pool.meta.horizon ? nlohmann::json(*pool.meta.horizon) : nlohmann::json(nullptr);
  j["censored"] = pool.meta.censored;
  return j.dump(2) + '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exit times of stable processes from the half-line"};
  app.require_subcommand(1);

  // kappa
  auto* kappa_cmd = app.add_subcommand("kappa", "ascending ladder exponent kappa(1, theta)");
  LawFlags kappa_law;
  kappa_law.attach(kappa_cmd, true);
  std::string theta_grid;
  std::string policy = "perturb";
  std::string kappa_out;
  kappa_cmd->add_option("--theta", theta_grid, "grid: comma list or a:b:n")->required();
  kappa_cmd->add_option("--policy", policy, "rational alpha handling")
      ->check(CLI::IsMember({"perturb", "paired"}));
  kappa_cmd->add_option("--out", kappa_out, "CSV file (default stdout)");

  // laplace / density
  auto* laplace_cmd = app.add_subcommand("laplace", "Laplace transform of the exit time");
  auto* density_cmd = app.add_subcommand("density", "density of the exit time");
  LawFlags tau_law;
  std::string tau_grid;
  double start = 1.0;
  std::string tau_out;
  for (auto* c : {laplace_cmd, density_cmd}) {
    tau_law.attach(c, true);
    c->add_option("--start", start, "starting point > 0")->capture_default_str();
    c->add_option("--out", tau_out, "CSV file (default stdout)");
  }
  laplace_cmd->add_option("--t", tau_grid, "grid: comma list or a:b:n")->required();
  density_cmd->add_option("--s", tau_grid, "grid: comma list or a:b:n")->required();

  // mdensity
  auto* m_cmd = app.add_subcommand("mdensity", "density of M_{alpha,rho}");
  LawFlags m_law;
  m_law.attach(m_cmd, true);
  std::string m_grid;
  std::string m_out;
  m_cmd->add_option("--x", m_grid, "grid: comma list or a:b:n")->required();
  m_cmd->add_option("--out", m_out, "CSV file (default stdout)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run an acceptance suite and print a JSON report");
  std::string suite_name;
  std::string suite_names = "all";
  for (se::Suite s : se::criterion_suites()) suite_names += std::string(", ") + std::string(se::to_string(s));
  verify_cmd->add_option("suite", suite_name, suite_names)->required();
  LawFlags verify_law;
  verify_law.attach(verify_cmd, false);
  std::optional<std::uint64_t> verify_seed;
  std::optional<std::int64_t> verify_n;
  std::optional<double> verify_step;
  std::string verify_out;
  verify_cmd->add_option("--seed", verify_seed, "required by randomized suites");
  verify_cmd->add_option("--n", verify_n, "sample size override");
  verify_cmd->add_option("--step", verify_step, "path step override");
  verify_cmd->add_option("--out", verify_out, "JSON file (default stdout)");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "draw a reproducible sample pool");
  std::string target;
  sample_cmd->add_option("target", target, "stable, positive_stable, M or tau")
      ->required()
      ->check(CLI::IsMember({"stable", "positive_stable", "M", "tau"}));
  LawFlags sample_law;
  sample_law.attach(sample_cmd, false);
  std::string gamma_text;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::optional<double> step;
  std::optional<double> horizon;
  double dt = 1.0;
  double sample_start = 1.0;
  std::string method;
  std::string sample_out;
  sample_cmd->add_option("--gamma", gamma_text, "index of N(gamma) for positive_stable");
  sample_cmd->add_option("--n", n, "number of draws")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", seed, "random seed")->required();
  sample_cmd->add_option("--step", step, "path step h (tau by paths)");
  sample_cmd->add_option("--horizon", horizon, "path censoring horizon");
  sample_cmd->add_option("--start", sample_start, "starting point for tau")->capture_default_str();
  sample_cmd->add_option("--dt", dt, "time increment for stable draws")->capture_default_str();
  sample_cmd->add_option("--method", method, "tau: path or table")->check(CLI::IsMember({"path", "table"}));
  sample_cmd->add_option("--out", sample_out, "CSV file; the sidecar is <out>.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitDomain;
  }

  try {
    if (*kappa_cmd) {
      se::KappaEvaluator ev(kappa_law.law());
      ev.rational_alpha_policy =
          policy == "paired" ? se::RationalAlphaPolicy::PairedCancellation : se::RationalAlphaPolicy::Perturb;
      std::vector<cli::CsvRow> rows;
      for (double theta : cli::parse_grid(theta_grid)) {
        const double v = se::kappa(ev, theta);
        rows.push_back({theta, v, kappa_cross_check(ev, theta, v)});
      }
      emit(cli::transform_csv(rows), kappa_out);
      return cli::kExitOk;
    }
    if (*laplace_cmd || *density_cmd) {
      const se::ExitLaw el(tau_law.law(), start);
      if (*density_cmd) std::cerr << "regime: " << se::to_string(se::density_regime(el.law)) << '\n';
      std::vector<cli::CsvRow> rows;
      for (double x : cli::parse_grid(tau_grid)) {
        const se::TransformResult r = *laplace_cmd ? se::laplace_tau_result(el, x) : se::density_tau_result(el, x);
        rows.push_back({x, r.value, r.abs_err_estimate});
      }
      emit(cli::transform_csv(rows), tau_out);
      return cli::kExitOk;
    }
    if (*m_cmd) {
      const se::MDensity md(m_law.law());
      std::vector<cli::CsvRow> rows;
      for (double x : cli::parse_grid(m_grid)) rows.push_back({x, se::m_density(md, x), kNaN});
      emit(cli::transform_csv(rows), m_out);
      return cli::kExitOk;
    }
    if (*verify_cmd) {
      const auto suite = se::parse_suite(suite_name);
      if (!suite) throw se::DomainError("unknown suite '" + suite_name + "'; expected " + suite_names);
      se::VerifyOptions opt;
      if (se::is_random(*suite)) {
        if (!verify_seed) throw se::DomainError("suite '" + suite_name + "' is randomized; pass --seed");
        opt.seed = *verify_seed;
      }
      opt.n = verify_n;
      opt.step = verify_step;
      if (verify_law.given()) opt.law = verify_law.law();
      const se::VerificationReport rep = se::run_suite(*suite, opt);
      emit(se::to_json(rep) + '\n', verify_out);
      return rep.overall() ? cli::kExitOk : cli::kExitVerificationFailed;
    }
    if (*sample_cmd) {
      const se::RngStream rng(seed, 1);
      se::SamplePool pool;
      std::string used = "direct";
      if (target == "positive_stable") {
        if (gamma_text.empty()) throw se::DomainError("positive_stable needs --gamma");
        pool = se::sample_positive_stable(cli::parse_number(gamma_text), n, rng);
      } else {
        if (!sample_law.given()) throw se::DomainError(target + " needs --alpha and --rho or --beta");
        const se::StableLaw law = sample_law.law();
        if (target == "stable") {
          se::RngStream r = rng;
          pool.values.resize(static_cast<std::size_t>(n));
          for (double& v : pool.values) v = se::sample_stable_increment(law, dt, r);
          pool.law_tag = se::law_tag(law);
          pool.meta.seed = seed;
          pool.meta.stream_id = rng.stream_id();
          pool.meta.n = n;
          pool.meta.step = dt;
        } else if (target == "M") {
          if (law.alpha() == 1.0) throw se::DomainError("M is not defined for alpha = 1");
          pool = se::sample_M(se::MDensity(law), n, rng);
          used = "inverse_cdf_table";
        } else {
          const bool table_ok = law.alpha() > 1.0 && se::classify(law) != se::Classification::SpectrallyPositive;
          const std::string how = method.empty() ? (table_ok && !step ? "table" : "path") : method;
          if (how == "table") {
            if (sample_start != 1.0) throw se::DomainError("table method is tabulated for --start 1");
            pool = se::sample_tau_inverse_cdf(se::ExitLaw(law, sample_start), n, rng);
            used = "inverse_cdf_table";
          } else {
            se::PathConfig pc = se::default_path_config(law, sample_start);
            if (step) pc.step = *step;
            if (horizon) pc.horizon = *horizon;
            pool = se::simulate_exit_time(law, pc, n, rng);
            used = "path";
            if (pool.meta.censored > 0) {
              std::cerr << "note: " << pool.meta.censored << " of " << n << " paths censored at horizon "
                        << cli::format_number(pc.horizon) << '\n';
            }
          }
        }
      }
      cli::write_atomic(sample_out, cli::sample_csv(pool.values));
      cli::write_atomic(sample_out + ".json", sidecar(target, pool, used));
      return cli::kExitOk;
    }
  } catch (const cli::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitIo;
  } catch (const se::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitDomain;
  } catch (const se::NonConvergence& e) {
    std::cerr << "error: " << e.what() << " (best estimate " << cli::format_number(e.best_estimate())
              << ", error " << cli::format_number(e.abs_err()) << ")\n";
    return cli::kExitNonConvergence;
  }
  return cli::kExitDomain;
}
