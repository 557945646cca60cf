#include "levyq/levy_model.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyq/errors.hpp"

namespace levyq {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string("parameter ") + name + " must be finite");
  }
}

void require_positive(double v, const char* name) {
  require_finite(v, name);
  if (!(v > 0.0)) {
    throw DomainError(std::string("parameter ") + name + " must be > 0");
  }
}

void require_side(const LevyModel& model, Side side, const char* op) {
  if (model.side() != side) {
    throw DomainError(std::string(op) + " requires a spectrally " +
                      (side == Side::SpectrallyPositive ? "positive" : "negative") +
                      " model, got " + model.describe());
  }
}

void require_argument(long double arg, const char* op) {
  if (!(arg >= 0.0L) || !std::isfinite(static_cast<double>(arg))) {
    throw DomainError(std::string(op) + ": argument must be finite and >= 0");
  }
}

// Largest root of f(a) = q on [0, inf) for a convex f with f(0) = 0.
// Bracket [lo, hi] with hi doubled until f(hi) > q, then Newton from the
// right (monotone for convex increasing f) with bisection fallback.
template <class F, class DF>
long double right_inverse(F f, DF df, long double q, const char* op) {
  if (!(q >= 0.0L) || !std::isfinite(static_cast<double>(q))) {
    throw DomainError(std::string(op) + ": q must be finite and >= 0");
  }
  long double lo = 0.0L;
  if (q == 0.0L) {
    if (df(0.0L) >= 0.0L) return 0.0L;
    // Nonnegative drift: the positive root sits to the right of the argmin.
    long double right = 1.0L;
    while (df(right) <= 0.0L) {
      right *= 2.0L;
      if (right > 1e300L) throw NumericError(std::string(op) + ": no argmin found");
    }
    long double left = 0.0L;
    for (int it = 0; it < 200 && right - left > 1e-18L * right; ++it) {
      const long double mid = 0.5L * (left + right);
      (df(mid) > 0.0L ? right : left) = mid;
    }
    lo = right;
    if (!(f(lo) < 0.0L)) return lo;
  }
  long double hi = std::max(1.0L, 2.0L * lo);
  while (f(hi) <= q) {
    hi *= 2.0L;
    if (hi > 1e300L) {
      std::ostringstream msg;
      msg << op << ": failed to bracket root for q=" << static_cast<double>(q);
      throw NumericError(msg.str());
    }
  }
  long double x = hi;
  for (int it = 0; it < 400; ++it) {
    const long double fx = f(x) - q;
    if (fx == 0.0L) return x;
    (fx > 0.0L ? hi : lo) = x;
    const long double slope = df(x);
    long double next = slope > 0.0L ? x - fx / slope : 0.5L * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
    const long double step = std::fabs(next - x);
    x = next;
    if (step <= 4.0L * std::numeric_limits<long double>::epsilon() * std::max(1.0L, x) ||
        hi - lo <= 4.0L * std::numeric_limits<long double>::epsilon() * std::max(1.0L, x)) {
      return x;
    }
  }
  std::ostringstream msg;
  msg << op << ": root iteration did not converge for q=" << static_cast<double>(q)
      << " (bracket [" << static_cast<double>(lo) << ", " << static_cast<double>(hi) << "])";
  throw NumericError(msg.str());
}

// sqrt(d^2 + 2 s q) + d without cancellation when d < 0, divided by s.
long double quadratic_root(long double d, long double s2, long double q) {
  const long double r = std::sqrt(d * d + 2.0L * s2 * q);
  if (d >= 0.0L) return (d + r) / s2;
  return 2.0L * q / (r - d);
}

}  // namespace

LevyModel LevyModel::brownian(double drift, double variance, Side side) {
  require_finite(drift, "d");
  require_finite(variance, "sigma2");
  if (variance < 0.0) throw DomainError("parameter sigma2 must be >= 0");
  return LevyModel(BrownianMotion{drift, variance}, side);
}

LevyModel LevyModel::gamma_minus_drift(double gamma, double beta, double rho) {
  require_positive(gamma, "gamma");
  require_positive(beta, "beta");
  require_finite(rho, "rho");
  return LevyModel(GammaMinusDrift{gamma, beta, rho}, Side::SpectrallyPositive);
}

LevyModel LevyModel::compound_poisson_exp(double lambda, double mu, double c) {
  require_positive(lambda, "lambda");
  require_positive(mu, "mu");
  require_positive(c, "c");
  return LevyModel(CompoundPoissonExpNeg{lambda, mu, c}, Side::SpectrallyNegative);
}

double LevyModel::mean_increment() const noexcept {
  return std::visit(Overloaded{
                        [](const BrownianMotion& m) { return m.drift; },
                        [](const GammaMinusDrift& m) { return m.beta / m.gamma - m.rho; },
                        [](const CompoundPoissonExpNeg& m) { return m.c - m.lambda / m.mu; },
                    },
                    family_);
}

std::string_view LevyModel::family_name() const noexcept {
  return std::visit(Overloaded{
                        [](const BrownianMotion&) { return std::string_view("bm"); },
                        [](const GammaMinusDrift&) { return std::string_view("gamma"); },
                        [](const CompoundPoissonExpNeg&) { return std::string_view("cpexp"); },
                    },
                    family_);
}

std::string LevyModel::describe() const {
  std::ostringstream out;
  out.precision(10);
  std::visit(Overloaded{
                 [&](const BrownianMotion& m) {
                   out << "BM(d=" << m.drift << ", sigma2=" << m.variance << ")";
                 },
                 [&](const GammaMinusDrift& m) {
                   out << "Gamma(gamma=" << m.gamma << ", beta=" << m.beta << ", rho=" << m.rho
                       << ")";
                 },
                 [&](const CompoundPoissonExpNeg& m) {
                   out << "CPExp(lambda=" << m.lambda << ", mu=" << m.mu << ", c=" << m.c << ")";
                 },
             },
             family_);
  out << (side_ == Side::SpectrallyPositive ? "[pos]" : "[neg]");
  return out.str();
}

long double phi(const LevyModel& model, long double alpha) {
  require_side(model, Side::SpectrallyPositive, "phi");
  require_argument(alpha, "phi");
  return std::visit(Overloaded{
                        [&](const BrownianMotion& m) {
                          return -alpha * m.drift + 0.5L * alpha * alpha * m.variance;
                        },
                        [&](const GammaMinusDrift& m) {
                          return -static_cast<long double>(m.beta) *
                                     std::log1p(alpha / static_cast<long double>(m.gamma)) +
                                 static_cast<long double>(m.rho) * alpha;
                        },
                        [&](const CompoundPoissonExpNeg&) -> long double {
                          throw DomainError("unreachable");
                        },
                    },
                    model.family());
}

double phi(const LevyModel& model, double alpha) {
  return static_cast<double>(phi(model, static_cast<long double>(alpha)));
}

long double phi_derivative(const LevyModel& model, long double alpha) {
  require_side(model, Side::SpectrallyPositive, "phi_derivative");
  return std::visit(Overloaded{
                        [&](const BrownianMotion& m) {
                          return -static_cast<long double>(m.drift) + alpha * m.variance;
                        },
                        [&](const GammaMinusDrift& m) {
                          return -static_cast<long double>(m.beta) / (m.gamma + alpha) + m.rho;
                        },
                        [&](const CompoundPoissonExpNeg&) -> long double {
                          throw DomainError("unreachable");
                        },
                    },
                    model.family());
}

long double psi(const LevyModel& model, long double q) {
  require_side(model, Side::SpectrallyPositive, "psi");
  if (const auto* bm = std::get_if<BrownianMotion>(&model.family()); bm && bm->variance > 0.0) {
    if (!(q >= 0.0L)) throw DomainError("psi: q must be >= 0");
    if (q == 0.0L) return bm->drift > 0.0 ? 2.0L * bm->drift / bm->variance : 0.0L;
    return quadratic_root(bm->drift, bm->variance, q);
  }
  return right_inverse([&](long double a) { return phi(model, a); },
                       [&](long double a) { return phi_derivative(model, a); }, q, "psi");
}

double psi(const LevyModel& model, double q) {
  return static_cast<double>(psi(model, static_cast<long double>(q)));
}

long double big_phi(const LevyModel& model, long double beta) {
  require_side(model, Side::SpectrallyNegative, "big_phi");
  require_argument(beta, "big_phi");
  return std::visit(Overloaded{
                        [&](const BrownianMotion& m) {
                          return beta * m.drift + 0.5L * beta * beta * m.variance;
                        },
                        [&](const GammaMinusDrift&) -> long double {
                          throw DomainError("unreachable");
                        },
                        [&](const CompoundPoissonExpNeg& m) {
                          return static_cast<long double>(m.c) * beta -
                                 static_cast<long double>(m.lambda) * beta / (m.mu + beta);
                        },
                    },
                    model.family());
}

double big_phi(const LevyModel& model, double beta) {
  return static_cast<double>(big_phi(model, static_cast<long double>(beta)));
}

std::complex<double> big_phi(const LevyModel& model, std::complex<double> beta) {
  require_side(model, Side::SpectrallyNegative, "big_phi");
  return std::visit(Overloaded{
                        [&](const BrownianMotion& m) {
                          return beta * m.drift + 0.5 * beta * beta * m.variance;
                        },
                        [&](const GammaMinusDrift&) -> std::complex<double> {
                          throw DomainError("unreachable");
                        },
                        [&](const CompoundPoissonExpNeg& m) {
                          return m.c * beta - m.lambda * beta / (m.mu + beta);
                        },
                    },
                    model.family());
}

long double big_phi_derivative(const LevyModel& model, long double beta) {
  require_side(model, Side::SpectrallyNegative, "big_phi_derivative");
  return std::visit(Overloaded{
                        [&](const BrownianMotion& m) {
                          return static_cast<long double>(m.drift) + beta * m.variance;
                        },
                        [&](const GammaMinusDrift&) -> long double {
                          throw DomainError("unreachable");
                        },
                        [&](const CompoundPoissonExpNeg& m) {
                          const long double s = m.mu + beta;
                          return static_cast<long double>(m.c) -
                                 static_cast<long double>(m.lambda) * m.mu / (s * s);
                        },
                    },
                    model.family());
}

long double big_psi(const LevyModel& model, long double q) {
  require_side(model, Side::SpectrallyNegative, "big_psi");
  if (const auto* bm = std::get_if<BrownianMotion>(&model.family()); bm && bm->variance > 0.0) {
    if (!(q >= 0.0L)) throw DomainError("big_psi: q must be >= 0");
    if (q == 0.0L) return bm->drift < 0.0 ? -2.0L * bm->drift / bm->variance : 0.0L;
    return quadratic_root(-static_cast<long double>(bm->drift), bm->variance, q);
  }
  return right_inverse([&](long double b) { return big_phi(model, b); },
                       [&](long double b) { return big_phi_derivative(model, b); }, q,
                       "big_psi");
}

double big_psi(const LevyModel& model, double q) {
  return static_cast<double>(big_psi(model, static_cast<long double>(q)));
}

ExponentValue evaluate_exponent(const LevyModel& model, double argument) {
  if (model.side() == Side::SpectrallyPositive) {
    const double second = std::visit(
        Overloaded{
            [](const BrownianMotion& m) { return m.variance; },
            [](const GammaMinusDrift& m) { return m.beta / (m.gamma * m.gamma); },
            [](const CompoundPoissonExpNeg&) -> double { throw DomainError("unreachable"); },
        },
        model.family());
    return {phi(model, argument), static_cast<double>(phi_derivative(model, 0.0L)), second};
  }
  const double second = std::visit(
      Overloaded{
          [](const BrownianMotion& m) { return m.variance; },
          [](const GammaMinusDrift&) -> double { throw DomainError("unreachable"); },
          [](const CompoundPoissonExpNeg& m) { return 2.0 * m.lambda / (m.mu * m.mu); },
      },
      model.family());
  return {big_phi(model, argument), static_cast<double>(big_phi_derivative(model, 0.0L)), second};
}

namespace {

ExponentValue stable_summary(const LevyModel& model, const char* op) {
  require_side(model, Side::SpectrallyPositive, op);
  const ExponentValue ev = evaluate_exponent(model, 0.0);
  if (!(ev.derivative1_at0 > 0.0)) {
    throw StabilityError(std::string(op) + ": model " + model.describe() +
                         " has nonnegative mean drift; no stationary distribution");
  }
  return ev;
}

}  // namespace

double stationary_lst(const LevyModel& model, double alpha) {
  const ExponentValue ev = stable_summary(model, "stationary_lst");
  require_argument(alpha, "stationary_lst");
  if (alpha == 0.0) return 1.0;
  return alpha * ev.derivative1_at0 / phi(model, alpha);
}

double stationary_mean(const LevyModel& model) {
  const ExponentValue ev = stable_summary(model, "stationary_mean");
  return ev.derivative2_at0 / (2.0 * ev.derivative1_at0);
}

// ---------------------------------------------------------------------------
// Config text

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::map<std::string, std::string>& entries, const std::string& key,
                    double fallback, bool required) {
  const auto it = entries.find(key);
  if (it == entries.end()) {
    if (required) throw ValidationError("model config: missing key '" + key + "'");
    return fallback;
  }
  double value = 0.0;
  const std::string& text = it->second;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("model config: key '" + key + "' is not a number: '" + text + "'");
  }
  return value;
}

}  // namespace

LevyModel model_from_entries(const std::map<std::string, std::string>& entries) {
  const auto fam = entries.find("family");
  if (fam == entries.end()) throw ValidationError("model config: missing key 'family'");
  Side side = Side::SpectrallyPositive;
  bool side_given = false;
  if (const auto s = entries.find("side"); s != entries.end()) {
    side_given = true;
    if (s->second == "pos") {
      side = Side::SpectrallyPositive;
    } else if (s->second == "neg") {
      side = Side::SpectrallyNegative;
    } else {
      throw ValidationError("model config: side must be \"pos\" or \"neg\", got '" + s->second +
                            "'");
    }
  }
  auto reject_unknown = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : entries) {
      if (key == "family" || key == "side") continue;
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) {
        throw ValidationError("model config: unknown key '" + key + "' for family '" +
                              fam->second + "'");
      }
    }
  };
  if (fam->second == "bm") {
    reject_unknown({"d", "sigma2"});
    return LevyModel::brownian(parse_number(entries, "d", -1.0, false),
                               parse_number(entries, "sigma2", 1.0, false), side);
  }
  if (fam->second == "gamma") {
    reject_unknown({"gamma", "beta", "rho"});
    if (side_given && side != Side::SpectrallyPositive) {
      throw ValidationError("model config: family 'gamma' is spectrally positive only");
    }
    return LevyModel::gamma_minus_drift(parse_number(entries, "gamma", 1.0, false),
                                        parse_number(entries, "beta", 1.0, false),
                                        parse_number(entries, "rho", 2.0, false));
  }
  if (fam->second == "cpexp") {
    reject_unknown({"lambda", "mu", "c"});
    if (side_given && side != Side::SpectrallyNegative) {
      throw ValidationError("model config: family 'cpexp' is spectrally negative only");
    }
    return LevyModel::compound_poisson_exp(parse_number(entries, "lambda", 1.0, false),
                                           parse_number(entries, "mu", 1.0, false),
                                           parse_number(entries, "c", 0.5, false));
  }
  throw ValidationError("model config: unknown family '" + fam->second +
                        "' (expected bm, gamma or cpexp)");
}

LevyModel parse_model_config(std::string_view text) {
  std::map<std::string, std::string> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("model config line " + std::to_string(line_no) +
                            ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty() || value.empty()) {
      throw ValidationError("model config line " + std::to_string(line_no) +
                            ": empty key or value");
    }
    if (!entries.emplace(key, std::string(value)).second) {
      throw ValidationError("model config line " + std::to_string(line_no) +
                            ": duplicate key '" + key + "'");
    }
  }
  return model_from_entries(entries);
}

std::map<std::string, std::string> model_to_entries(const LevyModel& model) {
  std::map<std::string, std::string> out;
  auto num = [](double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  out["family"] = std::string(model.family_name());
  out["side"] = model.side() == Side::SpectrallyPositive ? "pos" : "neg";
  std::visit(Overloaded{
                 [&](const BrownianMotion& m) {
                   out["d"] = num(m.drift);
                   out["sigma2"] = num(m.variance);
                 },
                 [&](const GammaMinusDrift& m) {
                   out["gamma"] = num(m.gamma);
                   out["beta"] = num(m.beta);
                   out["rho"] = num(m.rho);
                 },
                 [&](const CompoundPoissonExpNeg& m) {
                   out["lambda"] = num(m.lambda);
                   out["mu"] = num(m.mu);
                   out["c"] = num(m.c);
                 },
             },
             model.family());
  return out;
}

std::string model_to_config(const LevyModel& model) {
  std::ostringstream out;
  for (const auto& [key, value] : model_to_entries(model)) {
    const bool quoted = key == "family" || key == "side";
    out << key << " = " << (quoted ? "\"" : "") << value << (quoted ? "\"" : "") << '\n';
  }
  return out.str();
}

}  // namespace levyq
