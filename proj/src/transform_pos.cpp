#include "levyq/transform_pos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyq/errors.hpp"

namespace levyq {

namespace {

void check_phase_count(int n, int max_phases) {
  if (n < 1) throw DomainError("phase count must be >= 1");
  if (n > max_phases || n > 62) {
    throw CapacityError("phase count " + std::to_string(n) + " exceeds the cap of " +
                        std::to_string(max_phases) + " (2^n terms)");
  }
}

void check_index(std::uint64_t index, int n) {
  if (n < 1 || n > 62) throw DomainError("phase count out of range");
  if (index < 1 || index > (std::uint64_t{1} << n)) {
    throw DomainError("term index " + std::to_string(index) + " outside [1, 2^" +
                      std::to_string(n) + "]");
  }
}

}  // namespace

PhaseVector::PhaseVector(std::vector<double> rates) : rates_(std::move(rates)) {
  if (rates_.empty()) throw DomainError("phase vector must contain at least one rate");
  for (double q : rates_) {
    if (!(q > 0.0) || !std::isfinite(q)) {
      throw DomainError("phase rates must be finite and > 0");
    }
  }
  for (std::size_t a = 0; a < rates_.size(); ++a) {
    for (std::size_t b = a + 1; b < rates_.size(); ++b) {
      const double gap = std::fabs(rates_[a] - rates_[b]);
      if (gap < kMinRelativeGap * std::max(rates_[a], rates_[b])) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "phase rates q_" << a + 1 << "=" << rates_[a] << " and q_" << b + 1 << "="
            << rates_[b] << " are (nearly) equal; equal rates are not supported, perturb "
            << "them apart (e.g. the zero_sum rate scheme)";
        throw UnsupportedCaseError(msg.str());
      }
    }
  }
}

PhaseVector PhaseVector::prefix(int k) const {
  if (k < 1 || k > size()) throw DomainError("prefix length out of range");
  return PhaseVector(std::vector<double>(rates_.begin(), rates_.begin() + k));
}

double PhaseVector::mean_total() const {
  double total = 0.0;
  for (double q : rates_) total += 1.0 / q;
  return total;
}

AlphaVector::AlphaVector(std::vector<double> alphas) : alphas_(std::move(alphas)) {
  for (double a : alphas_) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("alphas must be finite and >= 0");
  }
}

AlphaVector AlphaVector::last_only(int n, double alpha) {
  if (n < 1) throw DomainError("phase count must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  v.back() = alpha;
  return AlphaVector(std::move(v));
}

TermLabel label_from_index(std::uint64_t index, int n) {
  check_index(index, n);
  if (index == 1) return {1, 0, 0};
  const std::uint64_t m = index - 1;
  const int shift = std::countr_zero(m);
  return {index, shift + 1, ((m >> shift) + 1) / 2};
}

std::uint64_t index_from_label(int level, std::uint64_t j) {
  if (level < 1 || level > 62 || j < 1) throw DomainError("invalid term label");
  return (std::uint64_t{1} << level) * j - (std::uint64_t{1} << (level - 1)) + 1;
}

int sign_pos(std::uint64_t index, int n) {
  check_index(index, n);
  return std::popcount(index - 1) % 2 == 0 ? 1 : -1;
}

DChain d_chain(std::uint64_t index, int n, const AlphaVector& alphas,
               const std::vector<long double>& psi_vals) {
  check_index(index, n);
  if (alphas.size() != n || static_cast<int>(psi_vals.size()) != n) {
    throw DomainError("d_chain: alphas and psi values must have length n");
  }
  DChain chain;
  chain.index = index;
  chain.d.assign(static_cast<std::size_t>(n) + 1, 0.0L);
  chain.telescoping.assign(static_cast<std::size_t>(n) + 1, false);
  for (int i = n - 1; i >= 0; --i) {
    const std::uint64_t ceil_part = ((index - 1) >> i) + 1;
    const auto ui = static_cast<std::size_t>(i);
    if (ceil_part % 2 == 1) {
      chain.d[ui] = static_cast<long double>(alphas[i]) + chain.d[ui + 1];
      chain.telescoping[ui] = true;
    } else {
      chain.d[ui] = psi_vals[ui];
    }
  }
  return chain;
}

std::vector<long double> psi_values(const LevyModel& model, const PhaseVector& phases) {
  std::vector<long double> out;
  out.reserve(static_cast<std::size_t>(phases.size()));
  for (double q : phases.rates()) out.push_back(psi(model, static_cast<long double>(q)));
  return out;
}

CoefficientTerm coefficient_pos(const LevyModel& model, std::uint64_t index,
                                const PhaseVector& phases, const AlphaVector& alphas,
                                const std::vector<long double>& psi_vals) {
  const int n = phases.size();
  const DChain chain = d_chain(index, n, alphas, psi_vals);
  CoefficientTerm term;
  term.label = label_from_index(index, n);
  term.sign = sign_pos(index, n);
  long double value = term.sign;
  for (int i = 1; i <= n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const long double arg = static_cast<long double>(alphas[i - 1]) + chain.d[ui];
    const long double q = phases[i - 1];
    const long double denom = q - phi(model, arg);
    if (std::fabs(denom) <= 1e-12L * q) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "rate q_" << i << "=" << static_cast<double>(q) << " coincides with phi("
          << static_cast<double>(arg) << ") in term " << index
          << "; perturb the rates or alphas slightly";
      throw SingularParameterError(msg.str());
    }
    value *= q / denom;
    // Odd rows satisfy d[i-1] = alpha_i + d[i]; their ratio is exactly 1.
    if (!chain.telescoping[ui - 1]) value *= arg / chain.d[ui - 1];
  }
  term.coefficient = value;
  term.exponent = chain.d[0];
  return term;
}

CoefficientTerm coefficient_pos(const LevyModel& model, int level, std::uint64_t j,
                                const PhaseVector& phases, const AlphaVector& alphas) {
  const int n = phases.size();
  if (level < 1 || level > n || j < 1 || j > (std::uint64_t{1} << (n - level))) {
    throw DomainError("coefficient_pos: label (l, j) out of range");
  }
  return coefficient_pos(model, index_from_label(level, j), phases, alphas,
                         psi_values(model, phases));
}

std::vector<CoefficientTerm> expand_terms_pos(const LevyModel& model, const PhaseVector& phases,
                                              const AlphaVector& alphas, int max_phases) {
  const int n = phases.size();
  check_phase_count(n, max_phases);
  if (alphas.size() != n) throw DomainError("alphas and phases must have the same length");
  const auto psi_vals = psi_values(model, phases);
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<CoefficientTerm> terms;
  terms.reserve(count);
  for (std::uint64_t index = 1; index <= count; ++index) {
    terms.push_back(coefficient_pos(model, index, phases, alphas, psi_vals));
  }
  return terms;
}

CompensatedSum compensated_sum(std::vector<long double> terms) {
  std::sort(terms.begin(), terms.end(),
            [](long double a, long double b) { return std::fabs(a) > std::fabs(b); });
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (long double t : terms) {
    const long double s = sum + t;
    if (std::fabs(sum) >= std::fabs(t)) {
      carry += (sum - s) + t;
    } else {
      carry += (t - s) + sum;
    }
    sum = s;
  }
  return {sum + carry, terms.empty() ? 0.0L : std::fabs(terms.front())};
}

TransientResult joint_lst_pos(const LevyModel& model, double x, const PhaseVector& phases,
                              const AlphaVector& alphas, int max_phases) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("initial workload x must be >= 0");
  const auto terms = expand_terms_pos(model, phases, alphas, max_phases);
  std::vector<long double> values;
  values.reserve(terms.size());
  for (const auto& t : terms) {
    values.push_back(t.coefficient == 0.0L ? 0.0L : t.coefficient * std::exp(-t.exponent * x));
  }
  const CompensatedSum s = compensated_sum(std::move(values));
  TransientResult result;
  result.value = static_cast<double>(s.sum);
  result.term_count = terms.size();
  result.max_abs_term = static_cast<double>(s.max_abs);
  result.cancellation = s.sum != 0.0L ? static_cast<double>(s.max_abs / std::fabs(s.sum))
                                      : std::numeric_limits<double>::infinity();
  // Long double keeps ~19 digits; warn once fewer than ~9 survive.
  result.condition_warning = result.cancellation > 1e10;
  if (!std::isfinite(result.value)) {
    throw NumericError("joint_lst_pos: non-finite result for " + model.describe());
  }
  return result;
}

TransientResult lst_sum_pos(const LevyModel& model, double x, const PhaseVector& phases,
                            double alpha, int max_phases) {
  return joint_lst_pos(model, x, phases, AlphaVector::last_only(phases.size(), alpha),
                       max_phases);
}

double single_epoch_lst(const LevyModel& model, double x, double q, double alpha) {
  if (!(x >= 0.0)) throw DomainError("initial workload x must be >= 0");
  if (!(q > 0.0)) throw DomainError("rate q must be > 0");
  if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  const long double lq = q;
  const long double la = alpha;
  const long double denom = lq - phi(model, la);
  if (std::fabs(denom) <= 1e-12L * lq) {
    throw SingularParameterError("single_epoch_lst: q equals phi(alpha); perturb q or alpha");
  }
  const long double root = psi(model, lq);
  const long double value =
      lq / denom * (std::exp(-la * x) - la / root * std::exp(-root * static_cast<long double>(x)));
  return static_cast<double>(value);
}

void CoxianSpec::validate() const {
  if (rates.empty()) throw DomainError("Coxian spec needs at least one phase");
  if (continue_prob.size() != rates.size()) {
    throw DomainError("Coxian spec: one continuation probability per phase is required");
  }
  for (double p : continue_prob) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("Coxian probabilities must lie in [0, 1]");
  }
  if (continue_prob.back() != 0.0) {
    throw DomainError("Coxian spec: the last continuation probability must be 0");
  }
  PhaseVector{rates};
}

std::vector<double> CoxianSpec::exit_weights() const {
  std::vector<double> w(rates.size());
  double reach = 1.0;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    w[k] = (1.0 - continue_prob[k]) * reach;
    reach *= continue_prob[k];
  }
  return w;
}

double lst_coxian(const LevyModel& model, double x, const CoxianSpec& coxian, double alpha) {
  coxian.validate();
  const auto weights = coxian.exit_weights();
  double total_weight = 0.0;
  for (double w : weights) total_weight += w;
  if (std::fabs(total_weight - 1.0) > 1e-12) {
    throw NumericError("lst_coxian: mixture weights sum to " + std::to_string(total_weight));
  }
  const PhaseVector all(coxian.rates);
  double value = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == 0.0) continue;
    value += weights[k] * lst_sum_pos(model, x, all.prefix(static_cast<int>(k) + 1), alpha).value;
  }
  return value;
}

}  // namespace levyq
