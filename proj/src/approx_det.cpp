#include "levyq/approx_det.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <ostream>

#include "levyq/errors.hpp"
#include "levyq/io.hpp"

namespace levyq {

RateSchemeKind parse_rate_scheme(std::string_view name) {
  if (name == "paper_literal") return RateSchemeKind::PaperLiteral;
  if (name == "zero_sum") return RateSchemeKind::ZeroSum;
  throw ValidationError("unknown rate scheme '" + std::string(name) +
                        "' (expected paper_literal or zero_sum)");
}

std::string_view to_string(RateSchemeKind kind) {
  return kind == RateSchemeKind::PaperLiteral ? "paper_literal" : "zero_sum";
}

PhaseVector choose_phase_rates(const RateScheme& scheme) {
  if (!(scheme.t > 0.0) || !std::isfinite(scheme.t)) throw DomainError("time t must be > 0");
  if (scheme.n < 1) throw DomainError("phase count n must be >= 1");
  if (!(scheme.epsilon >= 0.0)) throw DomainError("perturbation epsilon must be >= 0");
  const int n = scheme.n;
  std::vector<double> rates;
  rates.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    double a = 0.0;
    if (scheme.kind == RateSchemeKind::ZeroSum) {
      a = scheme.epsilon * (i - 0.5 * (n + 1));
    } else if (n % 2 == 1 && 2 * i == n + 1) {
      a = 0.0;
    } else {
      a = 2 * i <= n ? scheme.epsilon * i : -scheme.epsilon * i;
    }
    if (!(1.0 + a > 0.0)) {
      throw DomainError("perturbation epsilon too large for n=" + std::to_string(n) +
                        ": a phase mean would be nonpositive");
    }
    rates.push_back(1.0 / (scheme.t / n * (1.0 + a)));
  }
  return PhaseVector(std::move(rates));
}

TransientResult lst_at_time(const LevyModel& model, double x, const RateScheme& scheme,
                            double alpha) {
  return lst_sum_pos(model, x, choose_phase_rates(scheme), alpha);
}

MeanEstimate mean_at_time(const LevyModel& model, double x, const RateScheme& scheme,
                          double alpha_probe) {
  if (!(alpha_probe > 0.0)) throw DomainError("alpha_probe must be > 0");
  const PhaseVector phases = choose_phase_rates(scheme);
  const TransientResult at1 = lst_sum_pos(model, x, phases, alpha_probe);
  const TransientResult at2 = lst_sum_pos(model, x, phases, 2.0 * alpha_probe);
  const double f1 = (1.0 - at1.value) / alpha_probe;
  const double f2 = (1.0 - at2.value) / (2.0 * alpha_probe);
  return {f1, 2.0 * f1 - f2, alpha_probe, std::max(at1.cancellation, at2.cancellation)};
}

double exact_rbm_lst(double drift, double variance, double x, double t, double alpha) {
  if (!(variance > 0.0)) throw DomainError("exact_rbm_lst: sigma2 must be > 0");
  if (!(t > 0.0)) throw DomainError("exact_rbm_lst: t must be > 0");
  if (!(x >= 0.0)) throw DomainError("exact_rbm_lst: x must be >= 0");
  if (!(alpha >= 0.0)) throw DomainError("exact_rbm_lst: alpha must be >= 0");
  if (alpha == 0.0) return 1.0;
  const double sd = std::sqrt(variance * t);
  auto normal_cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  // P(Q_t <= y | Q_0 = x)
  auto cdf = [&](double y) {
    const double main = normal_cdf((y - x - drift * t) / sd);
    const double tail = normal_cdf((-y - x - drift * t) / sd);
    if (tail == 0.0) return main;
    return main - std::exp(2.0 * drift * y / variance + std::log(tail));
  };
  auto integrand = [&](double y) { return alpha * std::exp(-alpha * y) * cdf(y); };
  const double split = x + std::fabs(drift) * t + 10.0 * sd;
  using boost::math::quadrature::gauss_kronrod;
  double err1 = 0.0;
  double err2 = 0.0;
  const double body = gauss_kronrod<double, 61>::integrate(integrand, 0.0, split, 15, 1e-14, &err1);
  const double tail = gauss_kronrod<double, 61>::integrate(
      integrand, split, std::numeric_limits<double>::infinity(), 15, 1e-14, &err2);
  const double value = body + tail;
  if (!std::isfinite(value) || err1 + err2 > 1e-9) {
    throw NumericError("exact_rbm_lst: quadrature did not converge (error estimate " +
                       std::to_string(err1 + err2) + ")");
  }
  return value;
}

std::vector<MeanCurvePoint> mean_curve(const LevyModel& model, double x,
                                       const std::vector<double>& t_grid, int n,
                                       RateSchemeKind kind, double epsilon, double alpha_probe) {
  std::vector<MeanCurvePoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    out.push_back({t, mean_at_time(model, x, RateScheme{t, n, kind, epsilon}, alpha_probe)});
  }
  return out;
}

void write_mean_curve_csv(std::ostream& out, const std::vector<MeanCurvePoint>& curve) {
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.size());
  for (const auto& p : curve) rows.push_back({p.t, p.mean.first_order, p.mean.richardson});
  write_csv(out, {"t", "mean", "mean_richardson"}, rows);
}

}  // namespace levyq
