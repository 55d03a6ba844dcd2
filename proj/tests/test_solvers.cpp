#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "symgames/errors.hpp"
#include "symgames/generators.hpp"
#include "symgames/solvers.hpp"

using namespace symgames;
using combinatorics::CountVector;

namespace {

// Action 0 strictly dominates everything else.
GameSpec dominance_spec(std::int64_t players, std::int64_t actions) {
  GameSpec spec;
  spec.players = players;
  spec.actions = actions;
  spec.payoffs = [actions](const CountVector&) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(actions);
    v(0) = 1.0;
    return v;
  };
  return spec;
}

// 2-player rock-paper-scissors; the unique symmetric equilibrium is uniform.
GameSpec rps_spec() {
  GameSpec spec;
  spec.players = 2;
  spec.actions = 3;
  spec.payoffs = [](const CountVector& c) {
    std::int64_t opponent = 0;
    for (std::int64_t b = 0; b < 3; ++b)
      if (c[static_cast<std::size_t>(b)] == 1) opponent = b;
    Eigen::VectorXd v(3);
    for (std::int64_t a = 0; a < 3; ++a) {
      if (a == opponent) v(a) = 0.0;
      else if ((opponent + 1) % 3 == a) v(a) = 1.0;  // a beats the opponent
      else v(a) = -1.0;
    }
    return v;
  };
  return spec;
}

// 2-player, 2-action anti-coordination (matching-pennies-style); best
// responses cycle and fictitious play never settles.
GameSpec pennies_spec() {
  GameSpec spec;
  spec.players = 2;
  spec.actions = 2;
  spec.payoffs = [](const CountVector& c) {
    Eigen::VectorXd v(2);
    v(0) = c[0] == 1 ? -1.0 : 1.0;
    v(1) = c[0] == 1 ? 1.0 : -1.0;
    return v;
  };
  return spec;
}

GameSpec constant_spec(std::int64_t players, std::int64_t actions, double value) {
  GameSpec spec;
  spec.players = players;
  spec.actions = actions;
  spec.payoffs = [actions, value](const CountVector&) {
    return Eigen::VectorXd::Constant(actions, value);
  };
  return spec;
}

Eigen::VectorXd uniform_mixture(std::int64_t actions) {
  return Eigen::VectorXd::Constant(actions, 1.0 / static_cast<double>(actions));
}

void check_valid_mixture(const Eigen::VectorXd& m) {
  CHECK(m.minCoeff() >= 0.0);
  CHECK(m.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

double fd_gain_gradient(const SymmetricGame& game, const Eigen::VectorXd& mix, std::int64_t s,
                        double h) {
  Eigen::VectorXd up = mix;
  Eigen::VectorXd down = mix;
  up(s) += h;
  down(s) -= h;
  return (gain(game, up) - gain(game, down)) / (2.0 * h);
}

}  // namespace

TEST_CASE("replicator dynamics fixes the uniform equilibrium of RPS") {
  // Raw-scale payoffs with a negative offset: deviation payoffs at uniform
  // are exactly equal, so the update leaves the mixture untouched.
  const auto game = build(rps_spec(), Variant::opp_config);
  SolverConfig config;
  config.iters = 250;
  config.rd_offset = -2.0;
  const Eigen::VectorXd out = replicator_dynamics(*game, uniform_mixture(3), config);
  CHECK((out - uniform_mixture(3)).cwiseAbs().maxCoeff() == 0.0);

  // On the normalized game a single step stays within float noise.
  const auto normalized = build(rps_spec(), Variant::log_weighted);
  SolverConfig one;
  one.iters = 1;
  const Eigen::VectorXd stepped = replicator_dynamics(*normalized, uniform_mixture(3), one);
  CHECK((stepped - uniform_mixture(3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("replicator dynamics solves a dominance game") {
  const auto game = build(dominance_spec(4, 2), Variant::log_weighted);
  SolverConfig config;
  const Eigen::VectorXd out = replicator_dynamics(*game, Eigen::Vector2d(0.5, 0.5), config);
  CHECK(out(0) >= 1.0 - 1e-6);
  CHECK(regret(*game, out) < 1e-6);
}

TEST_CASE("replicator dynamics keeps the worked-example equilibrium") {
  const auto game = build(worked_example_game(), Variant::log_weighted);
  SolverConfig config;
  const Eigen::VectorXd out = replicator_dynamics(*game, uniform_mixture(3), config);
  CHECK(regret(*game, out) <= 1e-3);
}

TEST_CASE("replicator dynamics rejects an offset that reaches a payoff") {
  const auto game = build(dominance_spec(3, 2), Variant::log_weighted);
  SolverConfig config;
  config.rd_offset = 2000.0;  // above the top of the normalized range
  CHECK_THROWS_AS(replicator_dynamics(*game, Eigen::Vector2d(0.5, 0.5), config), NegativeWeight);
}

TEST_CASE("batched replicator dynamics equals the single-start runs") {
  const auto game = build(worked_example_game(), Variant::log_weighted);
  SolverConfig config;
  config.iters = 100;
  const auto starts = mixture_grid(3, 3);
  Eigen::MatrixXd batch(3, static_cast<Eigen::Index>(starts.size()));
  for (std::size_t i = 0; i < starts.size(); ++i) batch.col(static_cast<Eigen::Index>(i)) = starts[i];
  const Eigen::MatrixXd finals = replicator_dynamics_batch(*game, batch, config);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Eigen::VectorXd single = replicator_dynamics(*game, starts[i], config);
    CHECK((finals.col(static_cast<Eigen::Index>(i)) - single).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("gains at the worked mixture") {
  const auto game = build(worked_example_game(), Variant::opp_config);  // raw scale
  const Eigen::Vector3d mix(0.1, 0.5, 0.4);
  const Eigen::VectorXd gains = gain_vector(*game, mix);
  CHECK(gains(0) == doctest::Approx(0.961).epsilon(1e-9));
  CHECK(gains(1) == 0.0);
  CHECK(gains(2) == 0.0);
  CHECK(gain(*game, mix) == doctest::Approx(0.961).epsilon(1e-9));
}

TEST_CASE("gain is zero exactly when regret is") {
  const auto game = build(worked_example_game(), Variant::log_weighted);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector3d mix(dist(rng), dist(rng), dist(rng));
    mix /= mix.sum();
    const double g = gain(*game, mix);
    const double reg = regret(*game, mix);
    if (g == 0.0) CHECK(reg <= 1e-12);
    if (reg <= 0.0) CHECK(g <= 1e-12);
    CHECK(g >= reg - 1e-12);  // the max gain is one of the summands
  }
}

TEST_CASE("pure dominated action gains its best deviation") {
  const auto game = build(dominance_spec(3, 2), Variant::opp_config);
  const Eigen::Vector2d pure(0.0, 1.0);
  const Eigen::VectorXd u = game->deviation_payoffs(pure);
  CHECK(gain(*game, pure) == doctest::Approx(u(0) - u(1)).epsilon(1e-12));
}

TEST_CASE("gain gradient vanishes with no gaining action") {
  const auto game = build(constant_spec(4, 4, 3.0), Variant::log_weighted);
  const Eigen::VectorXd grad = gain_gradient(*game, uniform_mixture(4));
  CHECK(grad.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("gain gradient matches finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(0.15, 1.0);
  GeneratorParams params;
  params.family = "additive-sine";
  params.seed = 3;
  params.players = 6;
  params.actions = 3;
  params.n_functions = 40;
  const auto game = build(make_game(params), Variant::log_weighted);
  const auto worked = build(worked_example_game(), Variant::log_weighted);

  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 20; ++trial) {
    Eigen::Vector3d mix(dist(rng), dist(rng), dist(rng));
    mix /= mix.sum();
    for (const SymmetricGame* g : {game.get(), worked.get()}) {
      // Skip mixtures too close to an indicator tie for stable differences.
      const Eigen::VectorXd dev = g->deviation_payoffs(mix);
      const double value = dev.dot(mix);
      if ((dev.array() - value).abs().minCoeff() < 1e-3) continue;
      const Eigen::VectorXd grad = gain_gradient(*g, mix);
      for (std::int64_t s = 0; s < 3; ++s) {
        const double fd = fd_gain_gradient(*g, mix, s, 1e-6);
        const double denom = std::max(1.0, std::abs(fd));
        CHECK(std::abs(grad(s) - fd) / denom < 1e-4);
      }
      ++checked;
    }
  }
  CHECK(checked >= 10);
}

TEST_CASE("simplex projection basics") {
  CHECK((simplex_project(Eigen::Vector3d(0.2, 0.5, 0.3)) - Eigen::Vector3d(0.2, 0.5, 0.3))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK((simplex_project(Eigen::Vector3d(1.0, 1.0, 1.0)) - uniform_mixture(3)).cwiseAbs().maxCoeff() <
        1e-15);
}

TEST_CASE("simplex projection agrees with a grid search") {
  const Eigen::Vector3d v(1.2, -0.1, 0.4);
  const Eigen::VectorXd projected = simplex_project(v);
  check_valid_mixture(projected);
  const std::int64_t k = 1000;
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector3d best_point = Eigen::Vector3d::Zero();
  for (std::int64_t i = 0; i <= k; ++i) {
    for (std::int64_t j = 0; j <= k - i; ++j) {
      const Eigen::Vector3d p(static_cast<double>(i) / k, static_cast<double>(j) / k,
                              static_cast<double>(k - i - j) / k);
      const double d = (p - v).squaredNorm();
      if (d < best) {
        best = d;
        best_point = p;
      }
    }
  }
  CHECK((projected - v).squaredNorm() <= best + 1e-9);
  CHECK((projected - best_point).cwiseAbs().maxCoeff() < 2.0 / static_cast<double>(k));
}

TEST_CASE("simplex projection is idempotent and 1-Lipschitz") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(4), y(4);
    for (int i = 0; i < 4; ++i) {
      x(i) = dist(rng);
      y(i) = dist(rng);
    }
    const Eigen::VectorXd px = simplex_project(x);
    const Eigen::VectorXd py = simplex_project(y);
    check_valid_mixture(px);
    CHECK((simplex_project(px) - px).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((px - py).norm() <= (x - y).norm() + 1e-12);
  }
}

TEST_CASE("gain descent stays at an exact equilibrium") {
  const auto game = build(constant_spec(3, 3, 1.0), Variant::log_weighted);
  SolverConfig config;
  config.iters = 50;
  const Eigen::Vector3d start(0.2, 0.3, 0.5);
  const Eigen::VectorXd out = gain_descent(*game, start, config);
  CHECK((out - start).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gain descent drives the dominance game to the dominant action") {
  const auto game = build(dominance_spec(4, 2), Variant::log_weighted);
  SolverConfig config;
  config.iters = 2000;
  config.gd_step = 1e-6;
  Trace trace;
  const Eigen::VectorXd out = gain_descent(*game, Eigen::Vector2d(0.5, 0.5), config, &trace);
  CHECK(regret(*game, out) <= 1e-3);
  double previous = std::numeric_limits<double>::infinity();
  for (const auto& point : trace) {
    const double reg = regret(*game, point);
    CHECK(reg <= previous + 1e-9);
    previous = reg;
  }
}

TEST_CASE("gain is non-increasing along small-step descent") {
  GeneratorParams params;
  params.family = "gmg";
  params.seed = 11;
  params.players = 5;
  params.actions = 3;
  const auto game = build(make_game(params), Variant::log_weighted);
  SolverConfig config;
  config.iters = 200;
  config.gd_step = 1e-7;
  Trace trace;
  gain_descent(*game, Eigen::Vector3d(0.3, 0.4, 0.3), config, &trace);
  double previous = std::numeric_limits<double>::infinity();
  for (const auto& point : trace) {
    const double g = gain(*game, point);
    CHECK(g <= previous + 1e-6);
    previous = g;
  }
}

TEST_CASE("gain descent accepts a step schedule") {
  const auto game = build(dominance_spec(4, 2), Variant::log_weighted);
  SolverConfig config;
  config.iters = 10;
  config.gd_step_schedule = {1e-5, 1e-6, 1e-7};
  CHECK_NOTHROW(gain_descent(*game, Eigen::Vector2d(0.5, 0.5), config));
}

TEST_CASE("better-response map at the worked mixture") {
  const auto game = build(worked_example_game(), Variant::opp_config);
  const Eigen::Vector3d mix(0.1, 0.5, 0.4);
  const Eigen::VectorXd mapped = better_response_map(*game, mix);
  CHECK(mapped(0) == doctest::Approx((0.1 + 0.961) / 1.961).epsilon(1e-9));
  CHECK(mapped(1) == doctest::Approx(0.5 / 1.961).epsilon(1e-9));
  CHECK(mapped(2) == doctest::Approx(0.4 / 1.961).epsilon(1e-9));
  check_valid_mixture(mapped);
}

TEST_CASE("better-response fixed points are equilibria") {
  const auto game = build(constant_spec(3, 3, 2.0), Variant::log_weighted);
  const Eigen::Vector3d mix(0.2, 0.5, 0.3);
  CHECK((better_response_map(*game, mix) - mix).cwiseAbs().maxCoeff() < 1e-12);

  SolverConfig config;
  config.iters = 25;
  CHECK((iterated_better_response(*game, mix, config) - mix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("iterated better-response approaches the dominant action") {
  const auto game = build(dominance_spec(4, 2), Variant::log_weighted);
  SolverConfig config;
  config.iters = 400;
  const Eigen::VectorXd out = iterated_better_response(*game, Eigen::Vector2d(0.5, 0.5), config);
  CHECK(out(0) > 0.99);
}

TEST_CASE("iterated better-response lands near fictitious play on a dominance game") {
  const auto game = build(dominance_spec(4, 2), Variant::log_weighted);
  SolverConfig config;
  config.iters = 1000;
  const Eigen::VectorXd via_ibr = iterated_better_response(*game, Eigen::Vector2d(0.4, 0.6), config);
  const Eigen::VectorXd via_fp = fictitious_play(*game, Eigen::Vector2d(0.4, 0.6), config);
  CHECK((via_ibr - via_fp).cwiseAbs().maxCoeff() <= 1e-2);
}

TEST_CASE("fictitious play count arithmetic on a dominance game") {
  const auto game = build(dominance_spec(3, 2), Variant::log_weighted);
  SolverConfig config;
  config.fp_initial_weight = 1.0;
  for (std::int64_t k : {1, 5, 40}) {
    config.iters = k;
    const Eigen::VectorXd out = fictitious_play(*game, Eigen::Vector2d(0.5, 0.5), config);
    const double expected = (0.5 + static_cast<double>(k)) / (1.0 + static_cast<double>(k));
    CHECK(out(0) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("fictitious play stays near a heavy pure start") {
  const auto game = build(dominance_spec(3, 2), Variant::log_weighted);
  SolverConfig config;
  config.fp_initial_weight = 1000.0;
  config.iters = 100;
  const Eigen::VectorXd out = fictitious_play(*game, Eigen::Vector2d(1.0, 0.0), config);
  CHECK((out - Eigen::Vector2d(1.0, 0.0)).cwiseAbs().maxCoeff() <= 1.0 / (1000.0 + 100.0));
}

TEST_CASE("fictitious play oscillates on matching pennies but stays valid") {
  const auto game = build(pennies_spec(), Variant::log_weighted);
  SolverConfig config;
  config.iters = 500;
  Trace trace;
  const Eigen::VectorXd out = fictitious_play(*game, Eigen::Vector2d(0.6, 0.4), config, &trace);
  for (const auto& point : trace) check_valid_mixture(point);
  CHECK(std::isfinite(regret(*game, out)));
}

TEST_CASE("mixture grids") {
  const auto grid = mixture_grid(3, 2);
  CHECK(grid.size() == 6);
  CHECK(static_cast<std::int64_t>(grid.size()) == combinatorics::num_profiles(2, 3));
  for (const auto& m : grid) {
    check_valid_mixture(m);
    for (int a = 0; a < 3; ++a)
      CHECK(std::abs(m(a) * 2.0 - std::round(m(a) * 2.0)) < 1e-12);
  }

  const auto two = mixture_grid(2, 1);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == Eigen::Vector2d(1.0, 0.0));
  CHECK(two[1] == Eigen::Vector2d(0.0, 1.0));

  const auto degenerate = mixture_grid(4, 0);
  REQUIRE(degenerate.size() == 1);
  CHECK((degenerate[0] - uniform_mixture(4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("find_equilibria returns exactly the dominant pure strategy") {
  const auto game = build(dominance_spec(4, 2), Variant::log_weighted);
  SolverConfig config;
  config.epsilon = 1e-6;
  config.dedup_dist = 1e-2;
  const auto candidates = find_equilibria(
      *game, {Method::replicator_dynamics, Method::gain_descent}, mixture_grid(2, 4), config);
  REQUIRE(candidates.size() == 1);
  CHECK(candidates[0].mixture(0) >= 1.0 - 1e-6);
  CHECK(candidates[0].regret <= 1e-6);
  CHECK(regret(*game, candidates[0].mixture) <= 1e-6);
}

TEST_CASE("find_equilibria locates the uniform RPS equilibrium") {
  const auto game = build(rps_spec(), Variant::log_weighted);
  SolverConfig config;
  config.iters = 3000;
  config.epsilon = 5.0;  // normalized scale
  config.dedup_dist = 0.05;
  const auto candidates =
      find_equilibria(*game, {Method::gain_descent, Method::fictitious_play}, mixture_grid(3, 3), config);
  REQUIRE(!candidates.empty());
  bool found_uniform = false;
  for (const auto& c : candidates)
    if ((c.mixture - uniform_mixture(3)).cwiseAbs().maxCoeff() <= config.dedup_dist)
      found_uniform = true;
  CHECK(found_uniform);
}

TEST_CASE("strict filter with positive-regret finals returns nothing") {
  const auto game = build(pennies_spec(), Variant::log_weighted);
  SolverConfig config;
  config.iters = 37;  // finals oscillate, none lands exactly on the equilibrium
  config.epsilon = 0.0;
  const auto candidates =
      find_equilibria(*game, {Method::fictitious_play}, mixture_grid(2, 3), config);
  CHECK(candidates.empty());
}

TEST_CASE("find_equilibria output is sorted, deduplicated and regret-sound") {
  GeneratorParams params;
  params.family = "additive-sine";
  params.seed = 9;
  params.players = 8;
  params.actions = 3;
  params.n_functions = 40;
  const auto game = build(make_game(params), Variant::log_weighted);
  SolverConfig config;
  config.epsilon = 10.0;
  config.dedup_dist = 0.01;
  const auto candidates = find_equilibria(
      *game, {Method::replicator_dynamics, Method::gain_descent}, mixture_grid(3, 4), config);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    CHECK(regret(*game, candidates[i].mixture) <= config.epsilon);
    if (i > 0) CHECK(candidates[i].regret >= candidates[i - 1].regret);
    for (std::size_t j = 0; j < i; ++j)
      CHECK((candidates[i].mixture - candidates[j].mixture).cwiseAbs().maxCoeff() > config.dedup_dist);
  }
}

TEST_CASE("parallel multi-start solving matches sequential") {
  const auto game = build(worked_example_game(), Variant::log_weighted);
  SolverConfig config;
  config.iters = 300;
  config.epsilon = 50.0;
  config.dedup_dist = 1e-3;
  const auto starts = mixture_grid(3, 4);
  const auto sequential =
      find_equilibria(*game, {Method::replicator_dynamics, Method::gain_descent}, starts, config);
  config.parallel = true;
  const auto parallel =
      find_equilibria(*game, {Method::replicator_dynamics, Method::gain_descent}, starts, config);
  REQUIRE(sequential.size() == parallel.size());
  for (std::size_t i = 0; i < sequential.size(); ++i) {
    CHECK((sequential[i].mixture - parallel[i].mixture).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sequential[i].regret == parallel[i].regret);
  }
}

TEST_CASE("solver iterates remain valid mixtures") {
  GeneratorParams params;
  params.family = "gmg";
  params.seed = 21;
  params.players = 6;
  params.actions = 3;
  const auto game = build(make_game(params), Variant::log_weighted);
  SolverConfig config;
  config.iters = 150;
  for (const auto& start : mixture_grid(3, 2)) {
    Trace traces[4];
    replicator_dynamics(*game, start, config, &traces[0]);
    gain_descent(*game, start, config, &traces[1]);
    fictitious_play(*game, start, config, &traces[2]);
    iterated_better_response(*game, start, config, &traces[3]);
    for (const auto& trace : traces) {
      REQUIRE(trace.size() == static_cast<std::size_t>(config.iters) + 1);
      for (const auto& point : trace) check_valid_mixture(point);
    }
  }
}

TEST_CASE("zero-iteration solvers return the start unchanged") {
  const auto game = build(worked_example_game(), Variant::log_weighted);
  SolverConfig config;
  config.iters = 0;
  const Eigen::Vector3d start(0.1, 0.5, 0.4);
  CHECK((replicator_dynamics(*game, start, config) - start).cwiseAbs().maxCoeff() == 0.0);
  CHECK((gain_descent(*game, start, config) - start).cwiseAbs().maxCoeff() == 0.0);
  CHECK((fictitious_play(*game, start, config) - start).cwiseAbs().maxCoeff() == 0.0);
  CHECK((iterated_better_response(*game, start, config) - start).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("candidate JSON round trip") {
  const auto game = build(dominance_spec(4, 2), Variant::log_weighted);
  SolverConfig config;
  config.epsilon = 1e-6;
  config.record_traces = true;
  const auto candidates =
      find_equilibria(*game, {Method::gain_descent}, mixture_grid(2, 2), config);
  REQUIRE(!candidates.empty());
  const nlohmann::json j = candidates_to_json(candidates);
  const auto loaded = candidates_from_json(j);
  REQUIRE(loaded.size() == candidates.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK((loaded[i].mixture - candidates[i].mixture).cwiseAbs().maxCoeff() == 0.0);
    CHECK(loaded[i].regret == candidates[i].regret);
    CHECK(loaded[i].solver == candidates[i].solver);
    CHECK(loaded[i].trace.size() == candidates[i].trace.size());
  }
}
