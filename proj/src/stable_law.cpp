#include "stable_exit/stable_law.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "stable_exit/errors.hpp"

namespace stable_exit {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= kClassTol; }

std::string describe(double alpha, double rho) {
  std::ostringstream os;
  os.precision(17);
  os << "(alpha=" << alpha << ", rho=" << rho << ")";
  return os.str();
}

}  // namespace

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::SpectrallyPositive: return "spectrally_positive";
    case Classification::SpectrallyNegative: return "spectrally_negative";
    case Classification::Symmetric: return "symmetric";
    case Classification::DoneyC11Dual: return "doney_c11_dual";
    case Classification::General: return "general";
  }
  return "general";
}

RhoBand admissible_rho_band(double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 2.0)) {
    throw AdmissibilityError("alpha must lie in (0,2]");
  }
  if (alpha < 1.0) return {0.0, 1.0};
  if (alpha == 1.0 || alpha == 2.0) return {0.5, 0.5};
  return {1.0 - 1.0 / alpha, 1.0 / alpha};
}

StableLaw StableLaw::from_alpha_rho(double alpha, double rho) {
  if (!std::isfinite(alpha) || !std::isfinite(rho)) {
    throw AdmissibilityError("non-finite stable parameters");
  }
  if (!(alpha > 0.0) || alpha > 2.0) {
    throw AdmissibilityError("alpha outside (0,2]: " + describe(alpha, rho));
  }
  const RhoBand band = admissible_rho_band(alpha);
  if (rho < band.lo - kClassTol || rho > band.hi + kClassTol) {
    throw AdmissibilityError("rho outside the admissible band: " + describe(alpha, rho));
  }
  // Snap values within the class tolerance onto the band edge.
  rho = std::min(std::max(rho, band.lo), band.hi);
  return StableLaw(alpha, rho, std::nullopt);
}

double rho_from_beta(double alpha, double beta) {
  if (!std::isfinite(alpha) || !(alpha > 0.0) || !(alpha < 2.0)) {
    throw DomainError("rho_from_beta: alpha must lie in (0,2)");
  }
  if (!std::isfinite(beta) || beta < -1.0 || beta > 1.0) {
    throw DomainError("rho_from_beta: beta must lie in [-1,1]");
  }
  if (alpha == 1.0) {
    if (beta != 0.0) throw DomainError("rho_from_beta: beta must be 0 when alpha = 1");
    return 0.5;
  }
  const double rho = 0.5 + std::atan(beta * std::tan(std::numbers::pi * alpha / 2.0)) /
                               (std::numbers::pi * alpha);
  const RhoBand band = admissible_rho_band(alpha);
  return std::min(std::max(rho, band.lo), band.hi);
}

StableLaw StableLaw::from_alpha_beta(double alpha, double beta) {
  const double rho = rho_from_beta(alpha, beta);
  StableLaw law = from_alpha_rho(alpha, rho);
  law.beta_ = beta;
  return law;
}

StableLaw dual(const StableLaw& law) {
  StableLaw d = law;
  d.rho_ = 1.0 - law.rho_;
  if (law.beta_) d.beta_ = -*law.beta_;
  return d;
}

Classification classify(const StableLaw& law) {
  const double a = law.alpha();
  const double r = law.rho();
  if (a >= 0.5 && a < 1.0 && near(1.0 - r, 1.0 / a - 1.0)) {
    return Classification::DoneyC11Dual;
  }
  // Jump direction decides the label: for alpha < 1 an increasing
  // subordinator (rho = 1) has only positive jumps.
  if (a > 1.0 && a < 2.0) {
    if (near(r, 1.0 - 1.0 / a)) return Classification::SpectrallyPositive;
    if (near(r, 1.0 / a)) return Classification::SpectrallyNegative;
  } else if (a < 1.0) {
    if (near(r, 1.0)) return Classification::SpectrallyPositive;
    if (near(r, 0.0)) return Classification::SpectrallyNegative;
  }
  if (near(r, 0.5)) return Classification::Symmetric;
  return Classification::General;
}

}  // namespace stable_exit
