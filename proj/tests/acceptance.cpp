#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <string>

#include "stable_exit/verify.hpp"

using namespace stable_exit;

int main() {
  VerifyOptions opt;
  opt.seed = 7;
  int failed = 0;
  int index = 0;
  for (Suite s : criterion_suites()) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport r;
    std::string error;
    try {
      r = run_suite(s, opt);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = error.empty() && r.overall();
    double worst = 0.0;
    for (const auto& c : r.cases) worst = std::max(worst, c.error() / c.tolerance);
    std::printf("criterion %2d (%s): %s  cases=%zu  worst err/tol=%.3g  %.1fs\n", index,
                std::string(to_string(s)).c_str(), pass ? "PASS" : "FAIL", r.cases.size(), worst, secs);
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    for (const auto& c : r.cases) {
      if (!c.pass || is_random(s)) {
        std::printf("    %s %s: lhs=%.10g rhs=%.10g tol=%.3g%s%s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(), c.lhs,
                    c.rhs, c.tolerance, c.note.empty() ? "" : "  ", c.note.c_str());
      }
    }
    std::fflush(stdout);
    if (!pass) ++failed;
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
