#include "levyq/scale_fn.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "levyq/errors.hpp"
#include "levyq/io.hpp"
#include "levyq/transform_pos.hpp"

namespace levyq {

std::string_view to_string(ScaleMethod method) {
  return method == ScaleMethod::ClosedForm ? "closed_form" : "inversion";
}

double euler_invert(const std::function<std::complex<double>(std::complex<double>)>& transform,
                    double t, const InversionParams& params) {
  if (!(t > 0.0)) throw DomainError("euler_invert: t must be > 0");
  const int total = params.terms + params.euler_terms;
  const double a = params.damping;
  std::vector<double> partial(static_cast<std::size_t>(total) + 1);
  double running = 0.5 * transform({a / (2.0 * t), 0.0}).real();
  partial[0] = running;
  for (int k = 1; k <= total; ++k) {
    const std::complex<double> s(a / (2.0 * t), k * std::numbers::pi / t);
    const double term = transform(s).real();
    running += (k % 2 == 0 ? term : -term);
    partial[static_cast<std::size_t>(k)] = running;
  }
  auto euler_average = [&](int n) {
    double binom = 1.0;
    double acc = 0.0;
    const int m = params.euler_terms;
    for (int k = 0; k <= m; ++k) {
      acc += binom * partial[static_cast<std::size_t>(n + k)];
      binom = binom * (m - k) / (k + 1);
    }
    return acc * std::ldexp(1.0, -m);
  };
  const double scale = std::exp(a / 2.0) / t;
  const double value = scale * euler_average(params.terms);
  const double check = scale * euler_average(params.terms - 1);
  if (!std::isfinite(value) ||
      std::fabs(value - check) > params.convergence_tol * std::max(1.0, std::fabs(value))) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "Laplace inversion did not converge at t=" << t << " (A=" << a
        << ", N=" << params.terms << ", M=" << params.euler_terms << "): estimates " << value
        << " vs " << check;
    throw NumericError(msg.str());
  }
  return value;
}

ScaleFunction::ScaleFunction(const LevyModel& model, double q, InversionParams params)
    : model_(model), q_(q), psi_(0.0), method_(ScaleMethod::Inversion), params_(params) {
  if (model.side() != Side::SpectrallyNegative) {
    throw DomainError("scale functions need a spectrally negative model, got " +
                      model.describe());
  }
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("scale function rate q must be > 0");
  psi_ = big_psi(model, q);
  if (const auto* bm = std::get_if<BrownianMotion>(&model.family())) {
    if (bm->variance > 0.0) {
      method_ = ScaleMethod::ClosedForm;
      const long double d = bm->drift;
      const long double s2 = bm->variance;
      root_gap_ = std::sqrt(d * d + 2.0L * s2 * q);
      theta_plus_ = (-d + root_gap_) / s2;
      theta_minus_ = (-d - root_gap_) / s2;
      w0_ = 0.0;
    } else {
      w0_ = 1.0 / bm->drift;
    }
  } else if (const auto* cp = std::get_if<CompoundPoissonExpNeg>(&model.family())) {
    w0_ = 1.0 / cp->c;
  }
}

double ScaleFunction::w_inverted(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return w0_;
  const double shift = psi_;
  // e^{-Psi x} W(x) is bounded; its transform is 1/(Phi(s + Psi) - q).
  const double damped = euler_invert(
      [&](std::complex<double> s) { return 1.0 / (big_phi(model_, s + shift) - q_); }, x,
      params_);
  return std::exp(shift * x) * damped;
}

double ScaleFunction::w(double x) const { return static_cast<double>(w_ld(x)); }

long double ScaleFunction::w_ld(double x) const {
  if (x < 0.0) return 0.0L;
  if (method_ == ScaleMethod::Inversion) return w_inverted(x);
  const long double lx = x;
  return (std::exp(theta_plus_ * lx) - std::exp(theta_minus_ * lx)) / root_gap_;
}

double ScaleFunction::z(double x) const { return static_cast<double>(z_ld(x)); }

long double ScaleFunction::z_ld(double x) const {
  if (x <= 0.0) return 1.0L;
  if (method_ == ScaleMethod::ClosedForm) {
    const long double lx = x;
    return 1.0L + q_ / root_gap_ *
                      (std::expm1(theta_plus_ * lx) / theta_plus_ -
                       std::expm1(theta_minus_ * lx) / theta_minus_);
  }
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double y) { return w(y); }, 0.0, x, 12, 1e-11, &error);
  return 1.0 + q_ * integral;
}

double scale_w(const LevyModel& model, double q, double x) {
  return ScaleFunction(model, q).w(x);
}

double scale_z(const LevyModel& model, double q, double x) {
  return ScaleFunction(model, q).z(x);
}

ScaleFunctionGrid ScaleFunctionGrid::build(const LevyModel& model, double q, double x_max,
                                           int steps) {
  if (!(x_max > 0.0) || steps < 1) throw DomainError("grid needs x_max > 0 and steps >= 1");
  const ScaleFunction sf(model, q);
  ScaleFunctionGrid grid;
  grid.q = q;
  grid.x_max = x_max;
  grid.h = x_max / steps;
  grid.method = sf.method();
  const auto n = static_cast<std::size_t>(steps) + 1;
  grid.x.resize(n);
  grid.w.resize(n);
  grid.z.resize(n);
  double z_running = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    grid.x[k] = static_cast<double>(k) * grid.h;
    grid.w[k] = sf.w(grid.x[k]);
    if (sf.method() == ScaleMethod::ClosedForm) {
      grid.z[k] = sf.z(grid.x[k]);
    } else {
      if (k > 0) {
        z_running += q * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                             [&](double y) { return sf.w(y); }, grid.x[k - 1], grid.x[k], 0);
      }
      grid.z[k] = z_running;
    }
  }
  return grid;
}

void ScaleFunctionGrid::write_csv(std::ostream& out) const {
  out << "# q=" << format_number(q) << " h=" << format_number(h)
      << " method=" << to_string(method);
  if (method == ScaleMethod::Inversion) {
    out << " A=" << format_number(inversion.damping) << " N=" << inversion.terms
        << " M=" << inversion.euler_terms;
  }
  out << '\n';
  std::vector<std::vector<double>> rows;
  rows.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) rows.push_back({x[k], w[k], z[k]});
  levyq::write_csv(out, {"x", "W", "Z"}, rows);
}

namespace {

// A_i = prod_{k != i} 1/(q_i - q_k) over the first `count` rates.
std::vector<long double> partial_fraction_weights(const std::vector<double>& rates,
                                                  std::size_t count) {
  std::vector<long double> weights(count, 1.0L);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t k = 0; k < count; ++k) {
      if (k != i) weights[i] /= static_cast<long double>(rates[i]) - rates[k];
    }
  }
  return weights;
}

void check_rates(const std::vector<double>& rates, std::size_t count) {
  if (count == 0 || count > rates.size()) throw DomainError("chain needs at least one rate");
  PhaseVector(std::vector<double>(rates.begin(), rates.begin() + static_cast<long>(count)));
}

// Integral over [0, x] of the W-chain of the first `count` rates.
long double integrated_w_chain(const std::vector<ScaleFunction>& sf, std::size_t count,
                               const std::vector<double>& rates, double x) {
  const auto weights = partial_fraction_weights(rates, count);
  std::vector<long double> terms;
  for (std::size_t i = 0; i < count; ++i) {
    terms.push_back(weights[i] * (sf[i].z_ld(x) - 1.0L) / rates[i]);
  }
  return compensated_sum(std::move(terms)).sum;
}

std::vector<ScaleFunction> make_scale_functions(const LevyModel& model,
                                                const std::vector<double>& rates,
                                                std::size_t count) {
  std::vector<ScaleFunction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(model, rates[i]);
  return out;
}

}  // namespace

double w_chain(const LevyModel& model, const std::vector<double>& rates, double x) {
  check_rates(rates, rates.size());
  if (x < 0.0) return 0.0;
  const auto weights = partial_fraction_weights(rates, rates.size());
  std::vector<long double> terms;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    terms.push_back(weights[i] * ScaleFunction(model, rates[i]).w_ld(x));
  }
  return static_cast<double>(compensated_sum(std::move(terms)).sum);
}

double z_chain(const LevyModel& model, int l, const std::vector<double>& rates, double x) {
  return static_cast<double>(z_chain_ld(model, l, rates, x));
}

long double z_chain_ld(const LevyModel& model, int l, const std::vector<double>& rates,
                       double x) {
  if (l < 1) throw DomainError("z_chain: l must be >= 1");
  const auto count = static_cast<std::size_t>(l);
  check_rates(rates, count);
  if (l == 1) return ScaleFunction(model, rates[0]).z_ld(x);
  if (x <= 0.0) return 0.0L;
  // Z_l = 1 + q_l * int W_l, so Z_l * w_{1..l-1} = int w_{1..l-1} + q_l int w_{1..l}.
  const auto sf = make_scale_functions(model, rates, count);
  const long double lower = integrated_w_chain(sf, count - 1, rates, x);
  const long double upper = integrated_w_chain(sf, count, rates, x);
  return lower + static_cast<long double>(rates[count - 1]) * upper;
}

namespace {

std::vector<double> sample(const std::function<double(double)>& f, double h, int steps,
                           double at_zero) {
  std::vector<double> v(static_cast<std::size_t>(steps) + 1);
  v[0] = at_zero;
  for (int k = 1; k <= steps; ++k) v[static_cast<std::size_t>(k)] = f(k * h);
  return v;
}

// Trapezoid rule for (f * g)(k h) with k = 0..steps (or only the last point).
std::vector<double> convolve(const std::vector<double>& f, const std::vector<double>& g, double h,
                             bool last_only) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = last_only ? n - 1 : 1; k < n; ++k) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i <= k; ++i) acc += static_cast<long double>(f[k - i]) * g[i];
    acc -= 0.5L * (static_cast<long double>(f[k]) * g[0] + static_cast<long double>(f[0]) * g[k]);
    out[k] = static_cast<double>(acc * h);
  }
  return out;
}

double chain_on_grid(const LevyModel& model, int z_level, const std::vector<double>& rates,
                     std::size_t count, double x, int steps) {
  const double h = x / steps;
  auto w_grid = [&](std::size_t i) {
    const ScaleFunction sf(model, rates[i]);
    return sample([&](double y) { return sf.w(y); }, h, steps, sf.w_at_zero());
  };
  const std::size_t w_count = z_level > 0 ? count - 1 : count;
  std::vector<double> acc = w_grid(0);
  for (std::size_t i = 1; i < w_count; ++i) {
    acc = convolve(w_grid(i), acc, h, z_level == 0 && i + 1 == w_count);
  }
  if (z_level > 0) {
    const ScaleFunction sf(model, rates[count - 1]);
    const auto z = sample([&](double y) { return sf.z(y); }, h, steps, 1.0);
    acc = convolve(z, acc, h, true);
  }
  return acc.back();
}

double richardson(const std::function<double(int)>& at_steps, int steps) {
  const double coarse = at_steps(steps);
  const double fine = at_steps(2 * steps);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

double w_chain_convolution(const LevyModel& model, const std::vector<double>& rates, double x,
                           int steps) {
  check_rates(rates, rates.size());
  if (steps < 2) throw DomainError("convolution needs at least 2 steps");
  if (x < 0.0) return 0.0;
  if (rates.size() == 1) return scale_w(model, rates[0], x);
  if (x == 0.0) return 0.0;
  return richardson(
      [&](int s) { return chain_on_grid(model, 0, rates, rates.size(), x, s); }, steps);
}

double z_chain_convolution(const LevyModel& model, int l, const std::vector<double>& rates,
                           double x, int steps) {
  if (l < 1) throw DomainError("z_chain: l must be >= 1");
  if (steps < 2) throw DomainError("convolution needs at least 2 steps");
  const auto count = static_cast<std::size_t>(l);
  check_rates(rates, count);
  if (l == 1) return scale_z(model, rates[0], x);
  if (x <= 0.0) return 0.0;
  return richardson([&](int s) { return chain_on_grid(model, l, rates, count, x, s); }, steps);
}

}  // namespace levyq
