#pragma once

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace levyq {

enum class Side { SpectrallyPositive, SpectrallyNegative };

/// X_t = d t + sigma B_t. Carries no jumps, so either side tag applies.
struct BrownianMotion {
  double drift;
  double variance;
  bool operator==(const BrownianMotion&) const = default;
};

/// Gamma subordinator with Levy measure (beta/x) e^{-gamma x} dx minus the
/// linear drift rho t. Spectrally positive; stable when rho > beta/gamma.
struct GammaMinusDrift {
  double gamma;
  double beta;
  double rho;
  bool operator==(const GammaMinusDrift&) const = default;
};

/// Upward drift c minus a compound Poisson stream (rate lambda) of
/// Exp(mu)-distributed jumps. Spectrally negative; stable when c < lambda/mu.
struct CompoundPoissonExpNeg {
  double lambda;
  double mu;
  double c;
  bool operator==(const CompoundPoissonExpNeg&) const = default;
};

using Family = std::variant<BrownianMotion, GammaMinusDrift, CompoundPoissonExpNeg>;

/// Immutable parametric spectrally one-sided Levy input process.
class LevyModel {
 public:
  static LevyModel brownian(double drift, double variance,
                            Side side = Side::SpectrallyPositive);
  static LevyModel gamma_minus_drift(double gamma, double beta, double rho);
  static LevyModel compound_poisson_exp(double lambda, double mu, double c);

  const Family& family() const noexcept { return family_; }
  Side side() const noexcept { return side_; }

  /// E X_1.
  double mean_increment() const noexcept;
  /// Short identifier used in configs: "bm", "gamma" or "cpexp".
  std::string_view family_name() const noexcept;
  std::string describe() const;

  friend bool operator==(const LevyModel&, const LevyModel&) = default;

 private:
  LevyModel(Family family, Side side) : family_(family), side_(side) {}

  Family family_;
  Side side_;
};

/// phi(alpha) = log E e^{-alpha X_1}, its derivative at zero and curvature at
/// zero (or the same for Phi on the negative side).
struct ExponentValue {
  double value;
  double derivative1_at0;
  double derivative2_at0;
};

// Spectrally positive side. The long double overloads feed the 2^n-term
// expansions, where per-term rounding is amplified by cancellation.
long double phi(const LevyModel& model, long double alpha);
double phi(const LevyModel& model, double alpha);
long double phi_derivative(const LevyModel& model, long double alpha);
long double psi(const LevyModel& model, long double q);
double psi(const LevyModel& model, double q);

// Spectrally negative side.
long double big_phi(const LevyModel& model, long double beta);
double big_phi(const LevyModel& model, double beta);
std::complex<double> big_phi(const LevyModel& model, std::complex<double> beta);
long double big_phi_derivative(const LevyModel& model, long double beta);
long double big_psi(const LevyModel& model, long double q);
double big_psi(const LevyModel& model, double q);

/// Dispatches to phi or big_phi according to the model's side tag.
ExponentValue evaluate_exponent(const LevyModel& model, double argument);

/// Generalized Pollaczek-Khintchine transform alpha phi'(0) / phi(alpha).
double stationary_lst(const LevyModel& model, double alpha);
/// phi''(0) / (2 phi'(0)).
double stationary_mean(const LevyModel& model);

/// Parses `key = value` lines: family = "bm" | "gamma" | "cpexp", numeric
/// parameters, optional side = "pos" | "neg". Unknown keys are rejected.
LevyModel parse_model_config(std::string_view text);
LevyModel model_from_entries(const std::map<std::string, std::string>& entries);
std::map<std::string, std::string> model_to_entries(const LevyModel& model);
std::string model_to_config(const LevyModel& model);

}  // namespace levyq
