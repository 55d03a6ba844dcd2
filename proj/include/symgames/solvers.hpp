#ifndef SYMGAMES_SOLVERS_HPP
#define SYMGAMES_SOLVERS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "symgames/representations.hpp"

namespace symgames {

enum class Method {
  replicator_dynamics,
  gain_descent,
  fictitious_play,
  iterated_better_response,
};

inline constexpr Method kAllMethods[] = {
    Method::replicator_dynamics,
    Method::gain_descent,
    Method::fictitious_play,
    Method::iterated_better_response,
};

const char* method_name(Method m);  // "rd", "gd", "fp", "ibr"
std::optional<Method> method_from_name(std::string_view name);

struct SolverConfig {
  std::int64_t iters = 1000;
  // Replicator dynamics subtracts this from the deviation payoffs before the
  // multiplicative update; payoffs minus offset must stay non-negative.
  double rd_offset = 0.0;
  // Constant step size on the game's native (normalized) scale, or an
  // explicit schedule; a schedule shorter than iters repeats its last entry.
  double gd_step = 1e-6;
  std::vector<double> gd_step_schedule;
  // Initial pseudo-count mass for fictitious play; <= 0 selects the action
  // count, one unit of weight per action on average.
  double fp_initial_weight = 0.0;
  double epsilon = 1e-3;
  double dedup_dist = 1e-2;
  bool record_traces = false;
  bool parallel = false;
};

// A solver endpoint that survived the regret filter. The regret is always
// recomputed from the final mixture, never trusted from the solver loop.
struct CandidateEquilibrium {
  Eigen::VectorXd mixture;
  double regret = 0.0;
  Method solver = Method::replicator_dynamics;
  std::int64_t start_index = 0;
  std::vector<Eigen::VectorXd> trace;
};

using Trace = std::vector<Eigen::VectorXd>;

// sigma_a <- sigma_a * (u_a(sigma) - offset), renormalized, for iters steps.
// Throws NegativeWeight when the offset exceeds some deviation payoff.
Eigen::VectorXd replicator_dynamics(const SymmetricGame& game,
                                    const Eigen::Ref<const Eigen::VectorXd>& mix0,
                                    const SolverConfig& config, Trace* trace = nullptr);

// Lockstep multi-start replicator dynamics over the columns of `starts`,
// column-for-column identical to the single-start runs. Uses the batched
// deviation-payoff kernel, the sanctioned vectorization path.
Eigen::MatrixXd replicator_dynamics_batch(const SymmetricGame& game,
                                          const Eigen::Ref<const Eigen::MatrixXd>& starts,
                                          const SolverConfig& config);

// Per-action deviation gains max(0, u_a - u.sigma) and their sum.
Eigen::VectorXd gain_vector(const SymmetricGame& game, const Eigen::Ref<const Eigen::VectorXd>& mixture);
double gain(const SymmetricGame& game, const Eigen::Ref<const Eigen::VectorXd>& mixture);

// Gradient of the sum of gains; requires deviation derivatives. Actions
// whose deviation payoff exactly ties the expected utility are excluded.
Eigen::VectorXd gain_gradient(const SymmetricGame& game, const Eigen::Ref<const Eigen::VectorXd>& mixture);

// Euclidean projection onto the probability simplex (sort-and-threshold).
Eigen::VectorXd simplex_project(const Eigen::Ref<const Eigen::VectorXd>& point);

// Projected descent on the sum of gains.
Eigen::VectorXd gain_descent(const SymmetricGame& game, const Eigen::Ref<const Eigen::VectorXd>& mix0,
                             const SolverConfig& config, Trace* trace = nullptr);

// B_a(sigma) = (sigma_a + g_a) / (1 + sum g); fixed points are exactly the
// symmetric Nash equilibria.
Eigen::VectorXd better_response_map(const SymmetricGame& game,
                                    const Eigen::Ref<const Eigen::VectorXd>& mixture);
Eigen::VectorXd iterated_better_response(const SymmetricGame& game,
                                         const Eigen::Ref<const Eigen::VectorXd>& mix0,
                                         const SolverConfig& config, Trace* trace = nullptr);

// Best response to the empirical action distribution, argmax ties broken by
// the lowest action index.
Eigen::VectorXd fictitious_play(const SymmetricGame& game,
                                const Eigen::Ref<const Eigen::VectorXd>& mix0,
                                const SolverConfig& config, Trace* trace = nullptr);

// Every mixture whose entries are multiples of 1/resolution; resolution 0
// degenerates to the uniform mixture alone.
std::vector<Eigen::VectorXd> mixture_grid(std::int64_t actions, std::int64_t resolution);

// Runs each method from each start, keeps finals with recomputed regret at
// most epsilon, merges points within dedup_dist (max-norm) keeping the
// lowest-regret representative, and sorts by regret ascending.
std::vector<CandidateEquilibrium> find_equilibria(const SymmetricGame& game,
                                                  const std::vector<Method>& methods,
                                                  const std::vector<Eigen::VectorXd>& starts,
                                                  const SolverConfig& config);

nlohmann::json candidates_to_json(const std::vector<CandidateEquilibrium>& candidates);
std::vector<CandidateEquilibrium> candidates_from_json(const nlohmann::json& j);

}  // namespace symgames

#endif  // SYMGAMES_SOLVERS_HPP
