#include "levyq/density_neg.hpp"

#include <bit>
#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "levyq/errors.hpp"
#include "levyq/io.hpp"

namespace levyq {

namespace {

void check_index(std::uint64_t index, int n) {
  if (n < 1 || n > 62 || index < 1 || index > (std::uint64_t{1} << n)) {
    throw DomainError("term index " + std::to_string(index) + " out of range for n=" +
                      std::to_string(n));
  }
}

void check_cap(int n, int max_phases) {
  if (n > max_phases || n > 62) {
    throw CapacityError("phase count " + std::to_string(n) + " exceeds the cap of " +
                        std::to_string(max_phases));
  }
}

}  // namespace

int sign_neg(std::uint64_t index, int n) {
  check_index(index, n);
  return std::popcount((std::uint64_t{1} << n) - index) % 2 == 0 ? 1 : -1;
}

int m_index(std::uint64_t index) {
  if (index < 1) throw DomainError("m_index: index must be >= 1");
  return std::bit_width(index - 1);
}

double NegCoefficient::value_at(double y) const {
  return static_cast<double>(scalar * rate * std::exp(-static_cast<long double>(rate) * y));
}

namespace {

// Walks rows l+1..n of the coefficient tree. Bit (k-l-1) of j-1 set means the
// exponential index moves to row k; every row contributes 1/(q_current - q_k).
NegCoefficient build_coefficient(std::uint64_t index, int n, const std::vector<double>& rates,
                                 const std::vector<double>& psi_vals) {
  NegCoefficient c;
  c.label = label_from_index(index, n);
  c.sign = sign_neg(index, n);
  const int l = c.label.level;
  int current = l;
  long double value = 1.0L;
  for (int k = l + 1; k <= n; ++k) {
    const long double gap = static_cast<long double>(rates[current - 1]) - rates[k - 1];
    if (std::fabs(gap) <= 1e-12L * std::max(rates[current - 1], rates[k - 1])) {
      throw SingularParameterError("rates q_" + std::to_string(current) + " and q_" +
                                   std::to_string(k) + " collide; perturb them apart");
    }
    value /= gap;
    if (((c.label.j - 1) >> (k - l - 1)) & 1U) current = k;
  }
  c.m = current;
  for (int i = 1; i <= n; ++i) {
    if (i != c.m) value *= rates[i - 1];
  }
  c.scalar = c.sign * value;
  c.rate = psi_vals[static_cast<std::size_t>(c.m - 1)];
  return c;
}

std::vector<double> neg_psi_values(const LevyModel& model, const PhaseVector& phases) {
  if (model.side() != Side::SpectrallyNegative) {
    throw DomainError("density_neg needs a spectrally negative model, got " + model.describe());
  }
  std::vector<double> out;
  for (double q : phases.rates()) out.push_back(big_psi(model, q));
  return out;
}

}  // namespace

NegCoefficient coefficient_neg(const LevyModel& model, int level, std::uint64_t j,
                               const PhaseVector& phases) {
  const int n = phases.size();
  if (level < 1 || level > n || j < 1 || j > (std::uint64_t{1} << (n - level))) {
    throw DomainError("coefficient_neg: label (l, j) out of range");
  }
  return build_coefficient(index_from_label(level, j), n, phases.rates(),
                           neg_psi_values(model, phases));
}

std::vector<NegCoefficient> expand_terms_neg(const LevyModel& model, const PhaseVector& phases,
                                             int max_phases) {
  const int n = phases.size();
  check_cap(n, max_phases);
  const auto psi_vals = neg_psi_values(model, phases);
  std::vector<NegCoefficient> out;
  const std::uint64_t count = std::uint64_t{1} << n;
  out.reserve(count - 1);
  for (std::uint64_t index = 2; index <= count; ++index) {
    out.push_back(build_coefficient(index, n, phases.rates(), psi_vals));
  }
  return out;
}

DensityEvaluator::DensityEvaluator(const LevyModel& model, double x, const PhaseVector& phases,
                                   int max_phases)
    : model_(model), x_(x), rates_(phases.rates()) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("initial workload x must be >= 0");
  terms_ = expand_terms_neg(model, phases, max_phases);
  const int n = phases.size();
  sign_first_ = sign_neg(1, n);
  for (double q : rates_) {
    scale_.emplace_back(model, q);
    rate_product_ *= q;
  }
  fraction_weights_.assign(rates_.size(), 1.0L);
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    for (std::size_t k = 0; k < rates_.size(); ++k) {
      if (k != i) fraction_weights_[i] /= static_cast<long double>(rates_[i]) - rates_[k];
    }
  }
  for (int l = 1; l <= n; ++l) {
    z_precise_.push_back(z_chain_ld(model, l, rates_, x));
    z_values_.push_back(static_cast<double>(z_precise_.back()));
  }
}

double DensityEvaluator::operator()(double y) const {
  if (!(y >= 0.0)) throw DomainError("density argument y must be >= 0");
  std::vector<long double> parts;
  parts.reserve(terms_.size() + rates_.size());
  const double u = x_ - y;
  if (u >= 0.0) {
    for (std::size_t i = 0; i < rates_.size(); ++i) {
      parts.push_back(sign_first_ * rate_product_ * fraction_weights_[i] * scale_[i].w_ld(u));
    }
  }
  for (const auto& t : terms_) {
    const long double rate = t.rate;
    parts.push_back(t.scalar * rate * std::exp(-rate * y) *
                    z_precise_[static_cast<std::size_t>(t.label.level - 1)]);
  }
  return static_cast<double>(compensated_sum(std::move(parts)).sum);
}

double DensityEvaluator::total_mass() const {
  std::vector<long double> parts;
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    // int_0^x W_i = (Z_i(x) - 1) / q_i
    parts.push_back(sign_first_ * rate_product_ * fraction_weights_[i] *
                    (scale_[i].z_ld(x_) - 1.0L) / rates_[i]);
  }
  for (const auto& t : terms_) {
    parts.push_back(t.scalar * z_precise_[static_cast<std::size_t>(t.label.level - 1)]);
  }
  return static_cast<double>(compensated_sum(std::move(parts)).sum);
}

double DensityEvaluator::tail_mass(double y_max) const {
  if (y_max < x_) throw DomainError("tail_mass: y_max must be >= x");
  long double tail = 0.0L;
  for (const auto& t : terms_) {
    tail += t.scalar * z_precise_[static_cast<std::size_t>(t.label.level - 1)] *
            std::exp(-static_cast<long double>(t.rate) * y_max);
  }
  return static_cast<double>(tail);
}

double DensityEvaluator::tail_cutoff(double tol) const {
  double slowest = terms_.front().rate;
  for (const auto& t : terms_) slowest = std::min(slowest, t.rate);
  // slowest * exp(-slowest * y) < tol
  const double y = std::log(slowest / tol) / slowest;
  return std::max(x_, y);
}

double density_neg(const LevyModel& model, double x, double y, const PhaseVector& phases) {
  return DensityEvaluator(model, x, phases)(y);
}

DensityResult density_neg_grid(const LevyModel& model, double x, const PhaseVector& phases,
                               double y_max, int points) {
  if (points < 2) throw DomainError("density grid needs at least 2 points");
  const DensityEvaluator eval(model, x, phases);
  if (!(y_max > 0.0)) y_max = eval.tail_cutoff();
  DensityResult result;
  result.terms = eval.terms();
  result.total_mass = eval.total_mass();
  result.tail_mass = y_max >= x ? eval.tail_mass(y_max) : std::nan("");
  for (int k = 0; k < points; ++k) {
    const double y = y_max * k / (points - 1);
    result.y.push_back(y);
    result.density.push_back(eval(y));
  }
  return result;
}

void DensityResult::write_csv(std::ostream& out) const {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < y.size(); ++k) rows.push_back({y[k], density[k]});
  levyq::write_csv(out, {"y", "density"}, rows);
}

double triple_transform(const LevyModel& model, double alpha, double beta,
                        const PhaseVector& phases) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("triple_transform needs alpha, beta > 0");
  const auto terms = expand_terms_neg(model, phases);
  const int n = phases.size();
  const long double big = big_phi(model, static_cast<long double>(beta));
  // prefix[l] = prod_{i <= l} 1/(Phi(beta) - q_i)
  std::vector<long double> prefix(static_cast<std::size_t>(n) + 1, 1.0L);
  for (int i = 1; i <= n; ++i) {
    const long double gap = big - phases[i - 1];
    if (std::fabs(gap) <= 1e-12L * phases[i - 1]) {
      throw SingularParameterError("triple_transform: Phi(beta) equals q_" + std::to_string(i) +
                                   "; move beta slightly");
    }
    prefix[static_cast<std::size_t>(i)] = prefix[static_cast<std::size_t>(i - 1)] / gap;
  }
  long double rate_product = 1.0L;
  for (double q : phases.rates()) rate_product *= q;
  std::vector<long double> parts;
  parts.push_back(sign_neg(1, n) * rate_product / (static_cast<long double>(alpha) + beta) *
                  prefix[static_cast<std::size_t>(n)]);
  for (const auto& t : terms) {
    parts.push_back(t.scalar * t.rate / (static_cast<long double>(alpha) + t.rate) *
                    prefix[static_cast<std::size_t>(t.label.level)] * big / beta);
  }
  return static_cast<double>(compensated_sum(std::move(parts)).sum);
}

std::string terms_to_json(const std::vector<NegCoefficient>& terms) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms) {
    arr.push_back({{"index", t.label.index},
                   {"l", t.label.level},
                   {"j", t.label.j},
                   {"m", t.m},
                   {"sign", t.sign},
                   {"scalar", static_cast<double>(t.scalar)},
                   {"psi_m", t.rate}});
  }
  return arr.dump(2);
}

}  // namespace levyq
