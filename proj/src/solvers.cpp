#include "symgames/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "symgames/errors.hpp"

namespace symgames {

namespace {

void record(Trace* trace, const Eigen::VectorXd& mixture) {
  if (trace) trace->push_back(mixture);
}

Eigen::VectorXd rd_step(const Eigen::Ref<const Eigen::VectorXd>& mixture,
                        const Eigen::Ref<const Eigen::VectorXd>& dev_pays, double offset) {
  Eigen::VectorXd weights = mixture.array() * (dev_pays.array() - offset);
  if (weights.minCoeff() < 0.0)
    throw NegativeWeight("replicator-dynamics offset exceeds a deviation payoff");
  const double total = weights.sum();
  if (!(total > 0.0))
    throw NegativeWeight("replicator-dynamics weights vanished; lower the offset");
  return weights / total;
}

std::int64_t best_response(const Eigen::Ref<const Eigen::VectorXd>& dev_pays) {
  std::int64_t best = 0;
  for (std::int64_t a = 1; a < dev_pays.size(); ++a)
    if (dev_pays(a) > dev_pays(best)) best = a;  // ties keep the lowest index
  return best;
}

double gd_step_at(const SolverConfig& config, std::int64_t t) {
  if (config.gd_step_schedule.empty()) return config.gd_step;
  const std::size_t i = std::min(static_cast<std::size_t>(t), config.gd_step_schedule.size() - 1);
  return config.gd_step_schedule[i];
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::replicator_dynamics: return "rd";
    case Method::gain_descent: return "gd";
    case Method::fictitious_play: return "fp";
    case Method::iterated_better_response: return "ibr";
  }
  return "unknown";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (Method m : kAllMethods)
    if (name == method_name(m)) return m;
  return std::nullopt;
}

Eigen::VectorXd replicator_dynamics(const SymmetricGame& game,
                                    const Eigen::Ref<const Eigen::VectorXd>& mix0,
                                    const SolverConfig& config, Trace* trace) {
  validate_mixture(mix0, game.actions());
  Eigen::VectorXd mixture = mix0;
  record(trace, mixture);
  for (std::int64_t t = 0; t < config.iters; ++t) {
    mixture = rd_step(mixture, game.deviation_payoffs(mixture), config.rd_offset);
    record(trace, mixture);
  }
  return mixture;
}

Eigen::MatrixXd replicator_dynamics_batch(const SymmetricGame& game,
                                          const Eigen::Ref<const Eigen::MatrixXd>& starts,
                                          const SolverConfig& config) {
  Eigen::MatrixXd mixtures = starts;
  for (Eigen::Index m = 0; m < mixtures.cols(); ++m) validate_mixture(mixtures.col(m), game.actions());
  for (std::int64_t t = 0; t < config.iters; ++t) {
    const Eigen::MatrixXd dev_pays = game.deviation_payoffs_batch(mixtures, config.parallel);
    for (Eigen::Index m = 0; m < mixtures.cols(); ++m)
      mixtures.col(m) = rd_step(mixtures.col(m), dev_pays.col(m), config.rd_offset);
  }
  return mixtures;
}

Eigen::VectorXd gain_vector(const SymmetricGame& game,
                            const Eigen::Ref<const Eigen::VectorXd>& mixture) {
  const Eigen::VectorXd dev_pays = game.deviation_payoffs(mixture);
  const double value = dev_pays.dot(mixture);
  return (dev_pays.array() - value).max(0.0).matrix();
}

double gain(const SymmetricGame& game, const Eigen::Ref<const Eigen::VectorXd>& mixture) {
  return gain_vector(game, mixture).sum();
}

Eigen::VectorXd gain_gradient(const SymmetricGame& game,
                              const Eigen::Ref<const Eigen::VectorXd>& mixture) {
  const Eigen::VectorXd dev_pays = game.deviation_payoffs(mixture);
  const double value = dev_pays.dot(mixture);
  const Eigen::MatrixXd jac = game.deviation_derivatives(mixture);
  // d(u . sigma)/d sigma_s = u_s + sum_a sigma_a J(a, s)
  const Eigen::VectorXd value_grad = dev_pays + jac.transpose() * mixture;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(game.actions());
  for (std::int64_t a = 0; a < game.actions(); ++a) {
    if (dev_pays(a) > value)  // exact ties excluded
      grad += (jac.row(a).transpose() - value_grad).eval();
  }
  return grad;
}

Eigen::VectorXd simplex_project(const Eigen::Ref<const Eigen::VectorXd>& point) {
  const Eigen::Index n = point.size();
  std::vector<double> sorted(point.data(), point.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += sorted[static_cast<std::size_t>(i)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[static_cast<std::size_t>(i)] > candidate) threshold = candidate;
  }
  return (point.array() - threshold).max(0.0).matrix();
}

Eigen::VectorXd gain_descent(const SymmetricGame& game,
                             const Eigen::Ref<const Eigen::VectorXd>& mix0,
                             const SolverConfig& config, Trace* trace) {
  validate_mixture(mix0, game.actions());
  Eigen::VectorXd mixture = mix0;
  record(trace, mixture);
  for (std::int64_t t = 0; t < config.iters; ++t) {
    mixture = simplex_project(mixture - gd_step_at(config, t) * gain_gradient(game, mixture));
    record(trace, mixture);
  }
  return mixture;
}

Eigen::VectorXd better_response_map(const SymmetricGame& game,
                                    const Eigen::Ref<const Eigen::VectorXd>& mixture) {
  const Eigen::VectorXd gains = gain_vector(game, mixture);
  return (mixture + gains) / (1.0 + gains.sum());
}

Eigen::VectorXd iterated_better_response(const SymmetricGame& game,
                                         const Eigen::Ref<const Eigen::VectorXd>& mix0,
                                         const SolverConfig& config, Trace* trace) {
  validate_mixture(mix0, game.actions());
  Eigen::VectorXd mixture = mix0;
  record(trace, mixture);
  for (std::int64_t t = 0; t < config.iters; ++t) {
    mixture = better_response_map(game, mixture);
    record(trace, mixture);
  }
  return mixture;
}

Eigen::VectorXd fictitious_play(const SymmetricGame& game,
                                const Eigen::Ref<const Eigen::VectorXd>& mix0,
                                const SolverConfig& config, Trace* trace) {
  validate_mixture(mix0, game.actions());
  const double initial =
      config.fp_initial_weight > 0.0 ? config.fp_initial_weight : static_cast<double>(game.actions());
  Eigen::VectorXd counts = initial * mix0;
  Eigen::VectorXd mixture = mix0;
  record(trace, mixture);
  for (std::int64_t t = 0; t < config.iters; ++t) {
    counts(best_response(game.deviation_payoffs(mixture))) += 1.0;
    mixture = counts / counts.sum();
    record(trace, mixture);
  }
  return mixture;
}

std::vector<Eigen::VectorXd> mixture_grid(std::int64_t actions, std::int64_t resolution) {
  if (actions < 1 || resolution < 0) throw InvalidArgument("mixture_grid: bad arguments");
  std::vector<Eigen::VectorXd> grid;
  if (resolution == 0) {
    grid.push_back(Eigen::VectorXd::Constant(actions, 1.0 / static_cast<double>(actions)));
    return grid;
  }
  combinatorics::for_each_count_vector(resolution, actions, [&](const combinatorics::CountVector& c) {
    Eigen::VectorXd m(actions);
    for (std::int64_t a = 0; a < actions; ++a)
      m(a) = static_cast<double>(c[static_cast<std::size_t>(a)]) / static_cast<double>(resolution);
    grid.push_back(std::move(m));
  });
  return grid;
}

std::vector<CandidateEquilibrium> find_equilibria(const SymmetricGame& game,
                                                  const std::vector<Method>& methods,
                                                  const std::vector<Eigen::VectorXd>& starts,
                                                  const SolverConfig& config) {
  struct Run {
    Eigen::VectorXd final;
    Method method;
    std::int64_t start;
    Trace trace;
  };
  std::vector<Run> runs;
  const std::int64_t n_starts = static_cast<std::int64_t>(starts.size());

  for (Method method : methods) {
    if (method == Method::replicator_dynamics && !config.record_traces && n_starts > 1) {
      // Batched lockstep path; identical to the per-start loop.
      Eigen::MatrixXd batch(game.actions(), n_starts);
      for (std::int64_t i = 0; i < n_starts; ++i) batch.col(i) = starts[static_cast<std::size_t>(i)];
      const Eigen::MatrixXd finals = replicator_dynamics_batch(game, batch, config);
      for (std::int64_t i = 0; i < n_starts; ++i)
        runs.push_back({finals.col(i), method, i, {}});
      continue;
    }

    std::vector<Run> method_runs(static_cast<std::size_t>(n_starts));
    const auto solve_range = [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t i = lo; i < hi; ++i) {
        Run& run = method_runs[static_cast<std::size_t>(i)];
        run.method = method;
        run.start = i;
        Trace* trace = config.record_traces ? &run.trace : nullptr;
        const Eigen::VectorXd& start = starts[static_cast<std::size_t>(i)];
        switch (method) {
          case Method::replicator_dynamics:
            run.final = replicator_dynamics(game, start, config, trace);
            break;
          case Method::gain_descent:
            run.final = gain_descent(game, start, config, trace);
            break;
          case Method::fictitious_play:
            run.final = fictitious_play(game, start, config, trace);
            break;
          case Method::iterated_better_response:
            run.final = iterated_better_response(game, start, config, trace);
            break;
        }
      }
    };
    const unsigned hw = std::thread::hardware_concurrency();
    if (config.parallel && hw >= 2 && n_starts > 1) {
      const std::int64_t n_threads = std::min<std::int64_t>(hw, n_starts);
      std::vector<std::thread> workers;
      for (std::int64_t t = 0; t < n_threads; ++t)
        workers.emplace_back(solve_range, n_starts * t / n_threads, n_starts * (t + 1) / n_threads);
      for (auto& w : workers) w.join();
    } else {
      solve_range(0, n_starts);
    }
    for (auto& run : method_runs) runs.push_back(std::move(run));
  }

  std::vector<CandidateEquilibrium> kept;
  for (auto& run : runs) {
    const double reg = regret(game, run.final);
    if (reg <= config.epsilon)
      kept.push_back({std::move(run.final), reg, run.method, run.start, std::move(run.trace)});
  }
  std::stable_sort(kept.begin(), kept.end(), [](const CandidateEquilibrium& a, const CandidateEquilibrium& b) {
    return a.regret < b.regret;
  });

  std::vector<CandidateEquilibrium> unique;
  for (auto& candidate : kept) {
    bool duplicate = false;
    for (const auto& existing : unique) {
      if ((candidate.mixture - existing.mixture).cwiseAbs().maxCoeff() <= config.dedup_dist) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) unique.push_back(std::move(candidate));
  }
  return unique;
}

nlohmann::json candidates_to_json(const std::vector<CandidateEquilibrium>& candidates) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : candidates) {
    nlohmann::json j;
    j["mixture"] = std::vector<double>(c.mixture.data(), c.mixture.data() + c.mixture.size());
    j["regret"] = c.regret;
    j["solver"] = method_name(c.solver);
    j["start"] = c.start_index;
    if (!c.trace.empty()) {
      nlohmann::json trace = nlohmann::json::array();
      for (const auto& m : c.trace)
        trace.push_back(std::vector<double>(m.data(), m.data() + m.size()));
      j["trace"] = std::move(trace);
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<CandidateEquilibrium> candidates_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw IoError("candidate file must be a JSON array");
  std::vector<CandidateEquilibrium> out;
  for (const auto& item : j) {
    CandidateEquilibrium c;
    const auto mix = item.at("mixture").get<std::vector<double>>();
    c.mixture = Eigen::Map<const Eigen::VectorXd>(mix.data(), static_cast<Eigen::Index>(mix.size()));
    c.regret = item.at("regret").get<double>();
    const auto method = method_from_name(item.at("solver").get<std::string>());
    if (!method) throw IoError("unknown solver tag in candidate file");
    c.solver = *method;
    c.start_index = item.value("start", std::int64_t{0});
    if (item.contains("trace")) {
      for (const auto& point : item.at("trace")) {
        const auto v = point.get<std::vector<double>>();
        c.trace.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace symgames
