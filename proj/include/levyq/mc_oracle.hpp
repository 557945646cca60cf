#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "levyq/levy_model.hpp"
#include "levyq/transform_pos.hpp"

namespace levyq {

/// xoshiro256** seeded through splitmix64; one independent stream per (seed, path).
class PathRng {
 public:
  using result_type = std::uint64_t;

  PathRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on (0, 1).
  double uniform();
  double normal();
  double exponential(double rate);

 private:
  std::uint64_t s_[4];
};

/// Where each path stops: a fixed time or a fresh sum of Exp(q_i) per path.
struct Horizon {
  enum class Kind { Fixed, PhaseSum };
  Kind kind = Kind::Fixed;
  double t = 1.0;
  std::vector<double> rates;

  static Horizon fixed(double t);
  static Horizon phases(const PhaseVector& phases);

  double draw(PathRng& rng) const;
};

enum class BrownianStep {
  /// Gaussian increment plus the exact law of the running minimum in the step.
  ExactMinimum,
  /// Q <- max(Q + dX, 0) on the grid only; biased by O(sqrt(h)).
  Euler,
};

struct SimConfig {
  double step = 1e-3;
  std::uint64_t paths = 100000;
  std::uint64_t seed = 1;
  /// 0: LEVYQ_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
  BrownianStep brownian = BrownianStep::ExactMinimum;

  void validate() const;
};

/// Workload at `horizon` for a path started at x.
double simulate_reflected_path(const LevyModel& model, double x, double horizon,
                               const SimConfig& cfg, PathRng& rng);
/// Deterministic single path number `path_index` under cfg.seed.
double simulate_reflected_path(const LevyModel& model, double x, const Horizon& horizon,
                               const SimConfig& cfg, std::uint64_t path_index = 0);

/// Terminal workloads of all cfg.paths paths, in path order.
std::vector<double> simulate_terminal_workloads(const LevyModel& model, double x,
                                                const Horizon& horizon, const SimConfig& cfg);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t paths = 0;
};

McEstimate mc_lst_estimate(const LevyModel& model, double x, const Horizon& horizon,
                           double alpha, const SimConfig& cfg);

struct HistogramDensity {
  std::vector<double> edges;
  /// count / (paths * width) per bin.
  std::vector<double> density;
  std::vector<double> standard_error;
  /// Fraction of paths landing inside [edges.front(), edges.back()).
  double mass = 0.0;
  std::uint64_t paths = 0;
};

HistogramDensity mc_density_estimate(const LevyModel& model, double x, const PhaseVector& phases,
                                     const std::vector<double>& edges, const SimConfig& cfg);

unsigned resolve_thread_count(unsigned requested);

}  // namespace levyq
