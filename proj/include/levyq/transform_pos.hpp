#pragma once

#include <cstdint>
#include <vector>

#include "levyq/levy_model.hpp"

namespace levyq {

inline constexpr int kDefaultMaxPhases = 20;

/// Value plus diagnostics for the signed 2^n-term expansions.
struct TransientResult {
  double value = 0.0;
  std::uint64_t term_count = 0;
  double max_abs_term = 0.0;
  /// max |term| / |sum|; 1 when nothing cancels.
  double cancellation = 1.0;
  /// Set when the cancellation is large enough to eat into long double precision.
  bool condition_warning = false;
};

/// Ordered, pairwise distinct positive exponential rates q_1..q_n.
class PhaseVector {
 public:
  static constexpr double kMinRelativeGap = 1e-9;

  explicit PhaseVector(std::vector<double> rates);

  int size() const noexcept { return static_cast<int>(rates_.size()); }
  double operator[](int i) const { return rates_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& rates() const noexcept { return rates_; }
  /// First k rates.
  PhaseVector prefix(int k) const;
  /// Expected total time sum 1/q_i.
  double mean_total() const;

 private:
  std::vector<double> rates_;
};

/// Nonnegative transform arguments alpha_1..alpha_n.
class AlphaVector {
 public:
  explicit AlphaVector(std::vector<double> alphas);
  /// alpha_1 = ... = alpha_{n-1} = 0, alpha_n = alpha.
  static AlphaVector last_only(int n, double alpha);

  int size() const noexcept { return static_cast<int>(alphas_.size()); }
  double operator[](int i) const { return alphas_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const noexcept { return alphas_; }

 private:
  std::vector<double> alphas_;
};

/// Label (level l, position j) of index = 2^l j - 2^{l-1} + 1. Index 1 has level 0.
struct TermLabel {
  std::uint64_t index;
  int level;
  std::uint64_t j;
};

TermLabel label_from_index(std::uint64_t index, int n);
std::uint64_t index_from_label(int level, std::uint64_t j);

/// (-1)^popcount(index - 1).
int sign_pos(std::uint64_t index, int n);

/// d[i] for i = 0..n with d[n] = 0. telescoping[i] marks rows where
/// d[i] = alpha_{i+1} + d[i+1] holds by construction (i < n).
struct DChain {
  std::uint64_t index = 0;
  std::vector<long double> d;
  std::vector<bool> telescoping;
};

DChain d_chain(std::uint64_t index, int n, const AlphaVector& alphas,
               const std::vector<long double>& psi_values);

struct CoefficientTerm {
  int sign = 1;
  TermLabel label{};
  /// Signed coefficient.
  long double coefficient = 0.0L;
  /// The term contributes coefficient * exp(-exponent * x).
  long double exponent = 0.0L;
};

std::vector<long double> psi_values(const LevyModel& model, const PhaseVector& phases);

CoefficientTerm coefficient_pos(const LevyModel& model, std::uint64_t index,
                                const PhaseVector& phases, const AlphaVector& alphas,
                                const std::vector<long double>& psi_vals);
CoefficientTerm coefficient_pos(const LevyModel& model, int level, std::uint64_t j,
                                const PhaseVector& phases, const AlphaVector& alphas);

/// All 2^n terms in index order.
std::vector<CoefficientTerm> expand_terms_pos(const LevyModel& model, const PhaseVector& phases,
                                              const AlphaVector& alphas,
                                              int max_phases = kDefaultMaxPhases);

/// E_x exp(-sum_i alpha_i Q_{T_1+...+T_i}).
TransientResult joint_lst_pos(const LevyModel& model, double x, const PhaseVector& phases,
                              const AlphaVector& alphas, int max_phases = kDefaultMaxPhases);

/// E_x exp(-alpha Q_{T_1+...+T_n}).
TransientResult lst_sum_pos(const LevyModel& model, double x, const PhaseVector& phases,
                            double alpha, int max_phases = kDefaultMaxPhases);

/// Closed single-epoch transform at an Exp(q) time.
double single_epoch_lst(const LevyModel& model, double x, double q, double alpha);

/// Phases traversed in order; after phase k the time continues with
/// probability continue_prob[k], the last of which must be 0.
struct CoxianSpec {
  std::vector<double> rates;
  std::vector<double> continue_prob;

  void validate() const;
  /// Probability that exactly k + 1 phases are used.
  std::vector<double> exit_weights() const;
};

double lst_coxian(const LevyModel& model, double x, const CoxianSpec& coxian, double alpha);

/// Neumaier summation in long double, largest magnitude first.
struct CompensatedSum {
  long double sum;
  long double max_abs;
};
CompensatedSum compensated_sum(std::vector<long double> terms);

}  // namespace levyq
