#include "levyq/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <thread>

#include "levyq/errors.hpp"

namespace levyq {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

PathRng::PathRng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t mixed = splitmix64(state) ^ (stream * 0xD1B54A32D192ED03ULL);
  state = mixed;
  for (auto& word : s_) word = splitmix64(state);
}

PathRng::result_type PathRng::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double PathRng::uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

double PathRng::normal() {
  // Box-Muller without caching so each draw depends only on the stream position.
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double PathRng::exponential(double rate) { return -std::log(uniform()) / rate; }

Horizon Horizon::fixed(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("horizon t must be finite and >= 0");
  Horizon h;
  h.kind = Kind::Fixed;
  h.t = t;
  return h;
}

Horizon Horizon::phases(const PhaseVector& phases) {
  Horizon h;
  h.kind = Kind::PhaseSum;
  h.rates = phases.rates();
  return h;
}

double Horizon::draw(PathRng& rng) const {
  if (kind == Kind::Fixed) return t;
  double total = 0.0;
  for (double q : rates) total += rng.exponential(q);
  return total;
}

void SimConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("simulation step must be > 0");
  if (paths < 1) throw DomainError("simulation needs at least one path");
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LEVYQ_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

double brownian_step(double q, double dt, const BrownianMotion& m, BrownianStep scheme,
                     PathRng& rng) {
  const double sd = std::sqrt(m.variance * dt);
  const double dx = m.drift * dt + sd * rng.normal();
  if (scheme == BrownianStep::Euler) return std::max(q + dx, 0.0);
  // Minimum over the step of a Brownian bridge from 0 to dx.
  const double low = 0.5 * (dx - std::sqrt(dx * dx - 2.0 * sd * sd * std::log(rng.uniform())));
  return dx + std::max(q, -low);
}

double gamma_step(double q, double dt, const GammaMinusDrift& m, PathRng& rng) {
  std::gamma_distribution<double> increment(m.beta * dt, 1.0 / m.gamma);
  const double jump = increment(rng);
  // The whole increment lands at one uniform time inside the step.
  const double u = rng.uniform();
  q = std::max(q - m.rho * u * dt, 0.0) + jump;
  return std::max(q - m.rho * (1.0 - u) * dt, 0.0);
}

double compound_poisson_step(double q, double dt, const CompoundPoissonExpNeg& m, PathRng& rng) {
  std::poisson_distribution<int> count(m.lambda * dt);
  const int k = count(rng);
  if (k == 0) return q + m.c * dt;
  std::vector<double> times(static_cast<std::size_t>(k));
  for (auto& s : times) s = rng.uniform() * dt;
  std::sort(times.begin(), times.end());
  double now = 0.0;
  for (double s : times) {
    q += m.c * (s - now);
    now = s;
    q = std::max(q - rng.exponential(m.mu), 0.0);
  }
  return q + m.c * (dt - now);
}

}  // namespace

double simulate_reflected_path(const LevyModel& model, double x, double horizon,
                               const SimConfig& cfg, PathRng& rng) {
  if (!(x >= 0.0)) throw DomainError("initial workload x must be >= 0");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be >= 0");
  double q = x;
  double remaining = horizon;
  while (remaining > 0.0) {
    const double dt = std::min(cfg.step, remaining);
    // Absorb a last sliver left by rounding into the current step.
    const bool last = remaining - dt <= 1e-12 * horizon;
    const double h = last ? remaining : dt;
    q = std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, BrownianMotion>) {
            return brownian_step(q, h, m, cfg.brownian, rng);
          } else if constexpr (std::is_same_v<T, GammaMinusDrift>) {
            return gamma_step(q, h, m, rng);
          } else {
            return compound_poisson_step(q, h, m, rng);
          }
        },
        model.family());
    remaining = last ? 0.0 : remaining - h;
  }
  return q;
}

double simulate_reflected_path(const LevyModel& model, double x, const Horizon& horizon,
                               const SimConfig& cfg, std::uint64_t path_index) {
  cfg.validate();
  PathRng rng(cfg.seed, path_index);
  const double t = horizon.draw(rng);
  return simulate_reflected_path(model, x, t, cfg, rng);
}

std::vector<double> simulate_terminal_workloads(const LevyModel& model, double x,
                                                const Horizon& horizon, const SimConfig& cfg) {
  cfg.validate();
  std::vector<double> out(cfg.paths);
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_thread_count(cfg.threads), cfg.paths));
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t p = begin; p < end; ++p) {
      out[p] = simulate_reflected_path(model, x, horizon, cfg, p);
    }
  };
  if (threads <= 1) {
    work(0, cfg.paths);
    return out;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (cfg.paths + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    const std::uint64_t begin = k * chunk;
    const std::uint64_t end = std::min(cfg.paths, begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
  return out;
}

McEstimate mc_lst_estimate(const LevyModel& model, double x, const Horizon& horizon,
                           double alpha, const SimConfig& cfg) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  const auto q = simulate_terminal_workloads(model, x, horizon, cfg);
  // Path-order sums keep results independent of the thread count.
  double sum = 0.0;
  for (double v : q) sum += std::exp(-alpha * v);
  const double n = static_cast<double>(q.size());
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : q) {
    const double d = std::exp(-alpha * v) - mean;
    sq += d * d;
  }
  const double se = q.size() > 1 ? std::sqrt(sq / (n - 1.0) / n) : 0.0;
  return {mean, se, cfg.paths};
}

HistogramDensity mc_density_estimate(const LevyModel& model, double x, const PhaseVector& phases,
                                     const std::vector<double>& edges, const SimConfig& cfg) {
  if (edges.size() < 2) throw DomainError("histogram needs at least two edges");
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (!(edges[k] > edges[k - 1])) throw DomainError("histogram edges must increase");
  }
  const auto q = simulate_terminal_workloads(model, x, Horizon::phases(phases), cfg);
  std::vector<std::uint64_t> counts(edges.size() - 1, 0);
  std::uint64_t inside = 0;
  for (double v : q) {
    if (v < edges.front() || v >= edges.back()) continue;
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    ++counts[static_cast<std::size_t>(it - edges.begin() - 1)];
    ++inside;
  }
  HistogramDensity h;
  h.edges = edges;
  h.paths = cfg.paths;
  const double n = static_cast<double>(cfg.paths);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double width = edges[k + 1] - edges[k];
    const double p = static_cast<double>(counts[k]) / n;
    h.density.push_back(p / width);
    h.standard_error.push_back(std::sqrt(p * (1.0 - p) / n) / width);
  }
  h.mass = static_cast<double>(inside) / n;
  return h;
}

}  // namespace levyq
