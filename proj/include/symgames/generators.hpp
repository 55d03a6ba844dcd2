#ifndef SYMGAMES_GENERATORS_HPP
#define SYMGAMES_GENERATORS_HPP

#include <cstdint>
#include <string>

#include "json.hpp"
#include "symgames/game_spec.hpp"

namespace symgames {

// Parameters for the random game families. Identical params always produce
// bitwise-identical payoff tables.
struct GeneratorParams {
  std::string family;  // "worked-example" | "additive-sine" | "gmg"
  std::uint64_t seed = 0;
  std::int64_t players = 0;
  std::int64_t actions = 0;
  std::int64_t n_functions = 200;  // additive-sine function nodes
  double edge_prob = 0.5;          // additive-sine action-function edge probability
  std::int64_t n_gaussians = 4;    // gmg functions per action
};

nlohmann::json params_to_json(const GeneratorParams& params);
GeneratorParams params_from_json(const nlohmann::json& j);

// 3-player, 3-action example: a unique action pays its index (1-based), a
// pair on an action pays minus the index, a triple pays zero.
GameSpec worked_example_game();

// Bipartite action-graph game: actions attach to function nodes by an
// Erdos-Renyi process, every (action, function) pair gets a weight, and each
// function maps its neighborhood count (deviator included when the evaluated
// action is adjacent) through a random sine plus a random cubic.
GameSpec additive_sine_game(const GeneratorParams& params);

// Gaussian mixture game: per (action, function), a Dirichlet centroid scaled
// to the size-P simplex, a covariance assembled from an LKJ correlation with
// uniform marginal widths, and a multiplicative scale in [-1, 1].
GameSpec gaussian_mixture_game(const GeneratorParams& params);

// Dispatch on params.family.
GameSpec make_game(const GeneratorParams& params);

}  // namespace symgames

#endif  // SYMGAMES_GENERATORS_HPP
