#pragma once

#include <optional>
#include <string_view>

namespace stable_exit {

/// Equality tolerance used for every special-class test on (alpha, rho).
inline constexpr double kClassTol = 1e-12;

enum class Classification {
  SpectrallyPositive,
  SpectrallyNegative,
  Symmetric,
  DoneyC11Dual,
  General,
};

std::string_view to_string(Classification c);

/// A strictly alpha-stable law identified by its index and positivity
/// coefficient rho = P(X_t >= 0). The skewness beta is kept only when the
/// law was built from it.
///
/// The characteristic exponent used throughout is the unit-modulus form
///   -log E exp(i z X_1) = |z|^alpha exp(i pi alpha (1/2 - rho) sgn z),
/// which makes the spectrally negative ladder exponent exactly 1 + theta.
class StableLaw {
 public:
  /// Throws AdmissibilityError outside the admissible band. alpha == 2 is
  /// accepted (with rho = 1/2) as a limiting parameter for ladder-exponent
  /// checks only.
  static StableLaw from_alpha_rho(double alpha, double rho);

  /// Throws DomainError when alpha is outside (0,2), beta outside [-1,1],
  /// or alpha == 1 with beta != 0.
  static StableLaw from_alpha_beta(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double rho() const noexcept { return rho_; }
  std::optional<double> beta() const noexcept { return beta_; }

  bool is_limiting_brownian() const noexcept { return alpha_ == 2.0; }

  friend bool operator==(const StableLaw&, const StableLaw&) = default;
  friend StableLaw dual(const StableLaw& law);

 private:
  StableLaw(double alpha, double rho, std::optional<double> beta)
      : alpha_(alpha), rho_(rho), beta_(beta) {}

  double alpha_;
  double rho_;
  std::optional<double> beta_;
};

/// rho = 1/2 + arctan(beta tan(pi alpha / 2)) / (pi alpha), principal branch.
double rho_from_beta(double alpha, double beta);

/// Admissible rho interval for a given alpha.
struct RhoBand {
  double lo;
  double hi;
};
RhoBand admissible_rho_band(double alpha);

/// Law of -X: rho -> 1 - rho, beta -> -beta.
StableLaw dual(const StableLaw& law);

Classification classify(const StableLaw& law);

}  // namespace stable_exit
