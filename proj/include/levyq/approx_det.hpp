#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "levyq/levy_model.hpp"
#include "levyq/transform_pos.hpp"

namespace levyq {

enum class RateSchemeKind {
  /// alpha_i = eps*i for i <= n/2, -eps*i above, middle 0 for odd n. Reproduces the tables.
  PaperLiteral,
  /// alpha_i = eps*(i - (n+1)/2); the perturbations sum to zero.
  ZeroSum,
};

RateSchemeKind parse_rate_scheme(std::string_view name);
std::string_view to_string(RateSchemeKind kind);

struct RateScheme {
  double t = 1.0;
  int n = 1;
  RateSchemeKind kind = RateSchemeKind::ZeroSum;
  double epsilon = 0.01;
};

/// 1/q_i = (t/n)(1 + alpha_i).
PhaseVector choose_phase_rates(const RateScheme& scheme);

/// E_x e^{-alpha Q_t} approximated by a sum of n exponential epochs.
TransientResult lst_at_time(const LevyModel& model, double x, const RateScheme& scheme,
                            double alpha);

struct MeanEstimate {
  /// (1 - L(a)) / a.
  double first_order = 0.0;
  /// 2 f(a) - f(2a), removing the O(a) term.
  double richardson = 0.0;
  double alpha_probe = 0.0;
  double cancellation = 1.0;
};

MeanEstimate mean_at_time(const LevyModel& model, double x, const RateScheme& scheme,
                          double alpha_probe = 1e-4);

/// E_x e^{-alpha Q_t} for Brownian motion reflected at zero, from its transition law.
double exact_rbm_lst(double drift, double variance, double x, double t, double alpha);

struct MeanCurvePoint {
  double t;
  MeanEstimate mean;
};

std::vector<MeanCurvePoint> mean_curve(const LevyModel& model, double x,
                                       const std::vector<double>& t_grid, int n,
                                       RateSchemeKind kind, double epsilon = 0.01,
                                       double alpha_probe = 1e-4);

void write_mean_curve_csv(std::ostream& out, const std::vector<MeanCurvePoint>& curve);

}  // namespace levyq
