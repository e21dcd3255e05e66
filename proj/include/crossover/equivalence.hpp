#pragma once

// Data-parallel synchronous SGD on synthetic problems, executed either job by
// job or in the crossover interleaving. Each job's arithmetic is identical in
// both orders, so trajectories must match bit for bit.

#include <cmath>
#include <cstring>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "crossover/errors.hpp"

namespace crossover::sgd {

enum class Loss { LeastSquares, LogisticRegression };

inline std::string_view to_string(Loss l) noexcept {
  return l == Loss::LeastSquares ? "least_squares" : "logistic";
}

struct SgdConfig {
  double learning_rate = 0.1;
  int workers = 1;
  Loss loss = Loss::LeastSquares;
  std::uint64_t dataset_seed = 0;
};

// One simulated training application.
struct JobConfig {
  std::string name;
  SgdConfig sgd;
  int dim = 4;
  int samples = 256;
  int batch_size = 8;
  double noise = 0.1;
  std::uint64_t init_seed = 0;
};

struct TrainingState {
  std::vector<double> parameters;
  int iteration = 0;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const TrainingState&, const TrainingState&) = default;
};

struct GradientBatch {
  std::vector<std::vector<double>> per_worker_gradients;
};

struct Sample {
  std::vector<double> features;
  double target = 0.0;
};

namespace detail {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer over a running combine
  std::uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double symmetric(std::mt19937_64& rng) { return 2.0 * unit(rng) - 1.0; }

inline double gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - unit(rng);
  const double u2 = unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": length " + std::to_string(b) +
                     " does not match " + std::to_string(a));
  }
}

}  // namespace detail

// Mean loss over a batch.
inline double batch_loss(std::span<const double> params, std::span<const Sample> batch,
                         Loss loss) {
  double total = 0.0;
  for (const auto& s : batch) {
    detail::require_same_length(params.size(), s.features.size(), "batch_loss");
    const double z = detail::dot(params, s.features);
    if (loss == Loss::LeastSquares) {
      const double r = z - s.target;
      total += 0.5 * r * r;
    } else {
      // log(1 + e^z) - y z, stable for large |z|
      total += (z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) - s.target * z;
    }
  }
  return batch.empty() ? 0.0 : total / static_cast<double>(batch.size());
}

// Analytic mean gradient over a batch.
inline std::vector<double> batch_gradient(std::span<const double> params,
                                          std::span<const Sample> batch, Loss loss) {
  std::vector<double> g(params.size(), 0.0);
  for (const auto& s : batch) {
    detail::require_same_length(params.size(), s.features.size(), "batch_gradient");
    const double z = detail::dot(params, s.features);
    const double coeff = loss == Loss::LeastSquares ? z - s.target : detail::sigmoid(z) - s.target;
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += coeff * s.features[k];
  }
  if (!batch.empty()) {
    for (auto& v : g) v /= static_cast<double>(batch.size());
  }
  return g;
}

// A job's synthetic dataset plus its sampling rule.
class Problem {
 public:
  explicit Problem(JobConfig config) : config_(std::move(config)) {
    if (config_.sgd.learning_rate <= 0) throw DomainError("learning_rate must be > 0");
    if (config_.sgd.workers < 1) throw DomainError("workers must be >= 1");
    if (config_.dim < 1 || config_.samples < 1 || config_.batch_size < 1) {
      throw DomainError("dim, samples and batch_size must be >= 1");
    }
    std::mt19937_64 rng(detail::mix(config_.sgd.dataset_seed, 0x5eed));
    solution_.resize(static_cast<std::size_t>(config_.dim));
    for (auto& w : solution_) w = detail::symmetric(rng);
    data_.reserve(static_cast<std::size_t>(config_.samples));
    for (int n = 0; n < config_.samples; ++n) {
      Sample s;
      s.features.resize(solution_.size());
      for (auto& x : s.features) x = detail::symmetric(rng);
      const double z = detail::dot(solution_, s.features);
      if (config_.sgd.loss == Loss::LeastSquares) {
        s.target = config_.noise > 0 ? z + config_.noise * detail::gaussian(rng) : z;
      } else {
        s.target = detail::unit(rng) < detail::sigmoid(3.0 * z) ? 1.0 : 0.0;
      }
      data_.push_back(std::move(s));
    }
  }

  const JobConfig& config() const noexcept { return config_; }
  const std::vector<Sample>& data() const noexcept { return data_; }
  // Generating weights; the exact least-squares optimum when noise is 0.
  const std::vector<double>& solution() const noexcept { return solution_; }

  TrainingState initial_state() const {
    std::mt19937_64 rng(detail::mix(config_.init_seed, 0x1417));
    TrainingState s;
    s.parameters.resize(solution_.size());
    for (auto& p : s.parameters) p = detail::symmetric(rng);
    s.rng_seed = detail::mix(config_.init_seed, 0xba7c);
    return s;
  }

  // Mini-batch of `worker` for the iteration that follows `state`, drawn
  // from (rng_seed, worker, iteration) only.
  std::vector<Sample> minibatch(const TrainingState& state, int worker) const {
    const std::uint64_t seed = detail::mix(
        detail::mix(state.rng_seed, static_cast<std::uint64_t>(worker)),
        static_cast<std::uint64_t>(state.iteration + 1));
    std::mt19937_64 rng(seed);
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(config_.batch_size));
    for (int b = 0; b < config_.batch_size; ++b) {
      out.push_back(data_[rng() % data_.size()]);
    }
    return out;
  }

  double full_loss(std::span<const double> params) const {
    return batch_loss(params, data_, config_.sgd.loss);
  }

 private:
  JobConfig config_;
  std::vector<double> solution_;
  std::vector<Sample> data_;
};

inline std::vector<double> local_gradient(const Problem& problem, const TrainingState& state,
                                          int worker_index) {
  if (worker_index < 0 || worker_index >= problem.config().sgd.workers) {
    throw crossover::RangeError("worker index " + std::to_string(worker_index) +
                                " outside [0, " +
                                std::to_string(problem.config().sgd.workers) + ")");
  }
  const auto batch = problem.minibatch(state, worker_index);
  return batch_gradient(state.parameters, batch, problem.config().sgd.loss);
}

// Element-wise mean, summed strictly in worker order.
inline std::vector<double> average_gradients(const GradientBatch& batch) {
  const auto& g = batch.per_worker_gradients;
  if (g.empty()) throw ShapeError("average_gradients: empty batch");
  std::vector<double> sum = g.front();
  for (std::size_t w = 1; w < g.size(); ++w) {
    detail::require_same_length(sum.size(), g[w].size(), "average_gradients");
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += g[w][k];
  }
  const double n = static_cast<double>(g.size());
  for (auto& v : sum) v /= n;
  return sum;
}

inline TrainingState sgd_step(const TrainingState& state, std::span<const double> averaged,
                              const SgdConfig& config) {
  detail::require_same_length(state.parameters.size(), averaged.size(), "sgd_step");
  TrainingState next = state;
  for (std::size_t k = 0; k < next.parameters.size(); ++k) {
    next.parameters[k] = state.parameters[k] - config.learning_rate * averaged[k];
  }
  next.iteration = state.iteration + 1;
  return next;
}

// Gradient computation on every worker followed by the averaging collective.
inline std::vector<double> synchronized_gradient(const Problem& problem,
                                                 const TrainingState& state) {
  GradientBatch batch;
  const int workers = problem.config().sgd.workers;
  batch.per_worker_gradients.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    batch.per_worker_gradients.push_back(local_gradient(problem, state, w));
  }
  return average_gradients(batch);
}

using Trajectory = std::vector<TrainingState>;

// States after each of the T updates, one job alone.
inline Trajectory run_isolated(const Problem& problem, int iterations) {
  if (iterations < 1) throw crossover::RangeError("iterations must be >= 1");
  Trajectory out;
  out.reserve(static_cast<std::size_t>(iterations));
  TrainingState state = problem.initial_state();
  for (int t = 1; t <= iterations; ++t) {
    state = sgd_step(state, synchronized_gradient(problem, state), problem.config().sgd);
    out.push_back(state);
  }
  return out;
}

// Negative-control hook: nudges one parameter by one ulp right after the
// update that produces `iteration` of job `job`.
struct Perturbation {
  std::size_t job = 0;
  int iteration = 1;
  std::size_t index = 0;
};

// The crossover interleaving. For t = 1..T and i = 1..N: job i computes and
// sends its gradient, then the next job in rotation receives its pending
// averaged gradient and updates. Iteration 1 has nothing pending; a final
// drain applies whatever is still in flight.
inline std::vector<Trajectory> run_crossover(std::span<const Problem> problems, int iterations,
                                             std::optional<Perturbation> perturb = std::nullopt) {
  if (iterations < 1) throw crossover::RangeError("iterations must be >= 1");
  const std::size_t n = problems.size();
  std::vector<TrainingState> state;
  state.reserve(n);
  for (const auto& p : problems) state.push_back(p.initial_state());
  std::vector<std::optional<std::vector<double>>> in_flight(n);
  std::vector<Trajectory> out(n);

  auto receive_and_update = [&](std::size_t j) {
    if (!in_flight[j]) return;
    state[j] = sgd_step(state[j], *in_flight[j], problems[j].config().sgd);
    in_flight[j].reset();
    if (perturb && perturb->job == j && perturb->iteration == state[j].iteration) {
      auto& x = state[j].parameters.at(perturb->index);
      x = std::nextafter(x, HUGE_VAL);
    }
    out[j].push_back(state[j]);
  };

  for (int t = 1; t <= iterations; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      // A job never computes on stale parameters.
      receive_and_update(i);
      in_flight[i] = synchronized_gradient(problems[i], state[i]);
      receive_and_update((i + 1) % n);
    }
  }
  for (std::size_t j = 0; j < n; ++j) receive_and_update(j);
  return out;
}

struct Divergence {
  std::size_t job = 0;
  int iteration = 0;
  std::size_t index = 0;
};

struct TrajectoryDiff {
  double max_abs_deviation = 0.0;
  std::optional<Divergence> first;

  bool identical() const noexcept { return !first; }
};

// Bitwise comparison of per-job trajectories; `first` is the earliest
// (job, iteration, index) whose bits differ.
inline TrajectoryDiff compare_trajectories(std::span<const Trajectory> a,
                                           std::span<const Trajectory> b) {
  TrajectoryDiff d;
  if (a.size() != b.size()) throw ShapeError("trajectory sets differ in job count");
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].size() != b[j].size()) throw ShapeError("trajectories differ in length");
    for (std::size_t t = 0; t < a[j].size(); ++t) {
      const auto& x = a[j][t].parameters;
      const auto& y = b[j][t].parameters;
      detail::require_same_length(x.size(), y.size(), "compare_trajectories");
      for (std::size_t k = 0; k < x.size(); ++k) {
        const bool same = std::memcmp(&x[k], &y[k], sizeof(double)) == 0;
        if (!same) {
          d.max_abs_deviation = std::max(d.max_abs_deviation, std::fabs(x[k] - y[k]));
          if (!d.first) d.first = Divergence{j, a[j][t].iteration, k};
        }
      }
      if (a[j][t].iteration != b[j][t].iteration && !d.first) {
        d.first = Divergence{j, a[j][t].iteration, 0};
      }
    }
  }
  return d;
}

// Heterogeneous job set for one neutrality case: alternating losses,
// different dimensions and learning rates, seeds derived from `seed`.
inline std::vector<Problem> make_problems(std::uint64_t seed, int jobs, int workers) {
  std::vector<Problem> out;
  out.reserve(static_cast<std::size_t>(jobs));
  for (int k = 0; k < jobs; ++k) {
    JobConfig c;
    c.name = "job" + std::to_string(k + 1);
    c.sgd.loss = k % 2 == 0 ? Loss::LeastSquares : Loss::LogisticRegression;
    c.sgd.learning_rate = 0.05 + 0.02 * k;
    c.sgd.workers = workers;
    c.sgd.dataset_seed = detail::mix(seed, static_cast<std::uint64_t>(2 * k + 1));
    c.init_seed = detail::mix(seed, static_cast<std::uint64_t>(2 * k + 2));
    c.dim = 3 + k;
    c.samples = 128;
    c.batch_size = 8;
    out.emplace_back(std::move(c));
  }
  return out;
}

struct NeutralityCase {
  std::uint64_t seed = 0;
  int jobs = 1;
  int workers = 1;
  int iterations = 1;
  TrajectoryDiff diff;
};

struct NeutralityReport {
  std::vector<NeutralityCase> cases;

  double max_abs_deviation() const noexcept {
    double m = 0.0;
    for (const auto& c : cases) m = std::max(m, c.diff.max_abs_deviation);
    return m;
  }

  const NeutralityCase* first_failure() const noexcept {
    for (const auto& c : cases) {
      if (!c.diff.identical()) return &c;
    }
    return nullptr;
  }

  bool passed() const noexcept { return first_failure() == nullptr; }
};

inline NeutralityCase check_neutrality(std::uint64_t seed, int jobs, int workers, int iterations,
                                       std::optional<Perturbation> perturb = std::nullopt) {
  const auto problems = make_problems(seed, jobs, workers);
  std::vector<Trajectory> isolated;
  isolated.reserve(problems.size());
  for (const auto& p : problems) isolated.push_back(run_isolated(p, iterations));
  const auto interleaved = run_crossover(problems, iterations, perturb);
  return NeutralityCase{seed, jobs, workers, iterations,
                        compare_trajectories(isolated, interleaved)};
}

inline NeutralityReport neutrality_suite(std::span<const std::uint64_t> seeds,
                                         std::span<const int> job_counts,
                                         std::span<const int> worker_counts,
                                         std::span<const int> iteration_counts,
                                         std::optional<Perturbation> perturb = std::nullopt) {
  NeutralityReport r;
  for (auto seed : seeds)
    for (int n : job_counts)
      for (int w : worker_counts)
        for (int t : iteration_counts) {
          std::optional<Perturbation> p;
          if (perturb && perturb->job < static_cast<std::size_t>(n) && perturb->iteration <= t) {
            p = perturb;
          }
          r.cases.push_back(check_neutrality(seed, n, w, t, p));
        }
  return r;
}

}  // namespace crossover::sgd
