#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "levyq/levy_model.hpp"

namespace levyq {

enum class ScaleMethod { ClosedForm, Inversion };

std::string_view to_string(ScaleMethod method);

/// Abate-Whitt Euler summation: damping A, N series terms, M-term binomial average.
struct InversionParams {
  double damping = 18.420680743952367;  // ln(1e8)
  int terms = 38;
  int euler_terms = 12;
  /// Relative disagreement allowed between the N and N-1 estimates.
  double convergence_tol = 1e-5;
};

/// Inverts a Laplace transform at t > 0. Throws NumericError when the N and
/// N-1 estimates disagree by more than convergence_tol.
double euler_invert(const std::function<std::complex<double>(std::complex<double>)>& transform,
                    double t, const InversionParams& params = {});

/// W^(q) and Z^(q) of one spectrally negative model at one rate.
class ScaleFunction {
 public:
  ScaleFunction(const LevyModel& model, double q, InversionParams params = {});

  double w(double x) const;
  double z(double x) const;
  /// Same values carried in long double; only the closed form gains digits.
  long double w_ld(double x) const;
  long double z_ld(double x) const;
  /// Always takes the numerical inversion path; used to calibrate the closed form.
  double w_inverted(double x) const;

  double q() const noexcept { return q_; }
  double psi() const noexcept { return psi_; }
  /// W(0+): 0 with a Gaussian part, 1/drift for bounded variation.
  double w_at_zero() const noexcept { return w0_; }
  ScaleMethod method() const noexcept { return method_; }

 private:
  LevyModel model_;
  double q_;
  double psi_;
  double w0_ = 0.0;
  ScaleMethod method_;
  InversionParams params_;
  // Closed form roots of Phi(beta) = q for Brownian input.
  long double theta_plus_ = 0.0L;
  long double theta_minus_ = 0.0L;
  long double root_gap_ = 0.0L;
};

double scale_w(const LevyModel& model, double q, double x);
double scale_z(const LevyModel& model, double q, double x);

/// W and Z tabulated at x_k = k h, k = 0..steps.
struct ScaleFunctionGrid {
  double q = 0.0;
  double x_max = 0.0;
  double h = 0.0;
  ScaleMethod method = ScaleMethod::ClosedForm;
  InversionParams inversion{};
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> z;

  static ScaleFunctionGrid build(const LevyModel& model, double q, double x_max,
                                 int steps = 4096);
  void write_csv(std::ostream& out) const;
};

/// (W^(q_n) * ... * W^(q_1))(x) by partial fractions.
double w_chain(const LevyModel& model, const std::vector<double>& rates, double x);
/// (Z^(q_l) * W^(q_{l-1}) * ... * W^(q_1))(x), using the first l rates.
double z_chain(const LevyModel& model, int l, const std::vector<double>& rates, double x);
long double z_chain_ld(const LevyModel& model, int l, const std::vector<double>& rates,
                       double x);

/// Independent slow paths: trapezoid convolution on a uniform grid over [0, x]
/// with one Richardson step (h and h/2).
double w_chain_convolution(const LevyModel& model, const std::vector<double>& rates, double x,
                           int steps = 4096);
double z_chain_convolution(const LevyModel& model, int l, const std::vector<double>& rates,
                           double x, int steps = 4096);

}  // namespace levyq
