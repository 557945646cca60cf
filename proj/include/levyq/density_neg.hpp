#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "levyq/levy_model.hpp"
#include "levyq/scale_fn.hpp"
#include "levyq/transform_pos.hpp"

namespace levyq {

/// (-1)^popcount(2^n - index).
int sign_neg(std::uint64_t index, int n);

/// min{k : ceil(index / 2^k) = 1}, i.e. the bit length of index - 1.
int m_index(std::uint64_t index);

/// One exponential-in-y term: scalar * rate * exp(-rate * y) * z_chain(l, x).
struct NegCoefficient {
  TermLabel label{};
  int sign = 1;
  int m = 0;
  /// Signed: sign * prod_{i != m} q_i * (rate-difference products).
  long double scalar = 0.0L;
  /// Psi(q_m).
  double rate = 0.0;

  double value_at(double y) const;
};

NegCoefficient coefficient_neg(const LevyModel& model, int level, std::uint64_t j,
                               const PhaseVector& phases);

/// All 2^n - 1 labelled terms in index order (index 1 is the W-chain term).
std::vector<NegCoefficient> expand_terms_neg(const LevyModel& model, const PhaseVector& phases,
                                             int max_phases = kDefaultMaxPhases);

/// Density of Q at T_1 + ... + T_n started from x, with everything that does
/// not depend on y precomputed.
class DensityEvaluator {
 public:
  DensityEvaluator(const LevyModel& model, double x, const PhaseVector& phases,
                   int max_phases = kDefaultMaxPhases);

  double operator()(double y) const;
  /// Integral over [0, inf) in closed form.
  double total_mass() const;
  /// Integral over (y_max, inf); the W-chain part vanishes once y_max >= x.
  double tail_mass(double y_max) const;
  /// Smallest y with every exponential tail below `tol`.
  double tail_cutoff(double tol = 1e-10) const;

  const std::vector<NegCoefficient>& terms() const noexcept { return terms_; }
  const std::vector<double>& z_chain_values() const noexcept { return z_values_; }
  int sign_first() const noexcept { return sign_first_; }

 private:
  LevyModel model_;
  double x_;
  std::vector<double> rates_;
  std::vector<ScaleFunction> scale_;
  std::vector<long double> fraction_weights_;
  long double rate_product_ = 1.0L;
  int sign_first_ = 1;
  std::vector<NegCoefficient> terms_;
  // z_chain(l, x) per level l = 1..n.
  std::vector<double> z_values_;
  std::vector<long double> z_precise_;
};

double density_neg(const LevyModel& model, double x, double y, const PhaseVector& phases);

struct DensityResult {
  std::vector<double> y;
  std::vector<double> density;
  std::vector<NegCoefficient> terms;
  double total_mass = 0.0;
  double tail_mass = 0.0;

  void write_csv(std::ostream& out) const;
};

/// Uniform grid over [0, y_max]; y_max <= 0 picks the tail cutoff.
DensityResult density_neg_grid(const LevyModel& model, double x, const PhaseVector& phases,
                               double y_max, int points);

/// int_0^inf e^{-beta x} E_x e^{-alpha Q_{T_1+...+T_n}} dx.
double triple_transform(const LevyModel& model, double alpha, double beta,
                        const PhaseVector& phases);

/// Per-term coefficients as a JSON array, for debugging.
std::string terms_to_json(const std::vector<NegCoefficient>& terms);

}  // namespace levyq
