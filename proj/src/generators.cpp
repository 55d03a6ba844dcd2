#include "symgames/generators.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <memory>
#include <vector>

#include "rng.hpp"
#include "symgames/errors.hpp"

namespace symgames {

using combinatorics::CountVector;

namespace {

constexpr std::uint64_t kEdgeStream = 0;
constexpr std::uint64_t kPhiStream = 1;
constexpr std::uint64_t kWeightStream = 2;
constexpr std::uint64_t kCentroidStream = 3;
constexpr std::uint64_t kCovarianceStream = 4;
constexpr std::uint64_t kScaleStream = 5;

constexpr double kPi = 3.14159265358979323846;

struct SineFunction {
  double amplitude;
  double frequency;
  double phase;
  double poly[4];  // c0 + c1 x + c2 x^2 + c3 x^3

  double operator()(double x) const {
    return amplitude * std::sin(frequency * x + phase) +
           ((poly[3] * x + poly[2]) * x + poly[1]) * x + poly[0];
  }
};

struct SineState {
  std::int64_t actions = 0;
  std::int64_t n_functions = 0;
  std::vector<std::uint8_t> edge;  // f * actions + a
  std::vector<SineFunction> functions;
  std::vector<double> weights;  // a * n_functions + f

  bool adjacent(std::int64_t f, std::int64_t a) const {
    return edge[static_cast<std::size_t>(f * actions + a)] != 0;
  }
};

struct GaussianFunction {
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision;
  double scale;
};

struct GmgState {
  std::int64_t actions = 0;
  std::int64_t n_gaussians = 0;
  std::vector<GaussianFunction> functions;  // a * n_gaussians + g
};

// Onion-method sample from the LKJ distribution with shape 1 (uniform over
// correlation matrices).
Eigen::MatrixXd lkj_correlation(std::int64_t dim, rng::Xoshiro256& gen) {
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(dim, dim);
  if (dim < 2) return corr;
  double beta_par = 1.0 + (static_cast<double>(dim) - 2.0) / 2.0;
  const double r = 2.0 * gen.beta(beta_par, beta_par) - 1.0;
  corr(0, 1) = r;
  corr(1, 0) = r;
  for (std::int64_t k = 2; k < dim; ++k) {
    beta_par -= 0.5;
    const double y = gen.beta(static_cast<double>(k) / 2.0, beta_par);
    Eigen::VectorXd direction(k);
    for (std::int64_t i = 0; i < k; ++i) direction(i) = gen.normal();
    direction.normalize();
    const Eigen::MatrixXd head = corr.topLeftCorner(k, k) +
        1e-12 * Eigen::MatrixXd::Identity(k, k);
    const Eigen::VectorXd z = head.llt().matrixL() * (std::sqrt(y) * direction);
    corr.block(k, 0, 1, k) = z.transpose();
    corr.block(0, k, k, 1) = z;
  }
  return corr;
}

}  // namespace

nlohmann::json params_to_json(const GeneratorParams& p) {
  nlohmann::json j;
  j["family"] = p.family;
  j["seed"] = p.seed;
  j["players"] = p.players;
  j["actions"] = p.actions;
  if (p.family == "additive-sine") {
    j["n_functions"] = p.n_functions;
    j["edge_prob"] = p.edge_prob;
  } else if (p.family == "gmg") {
    j["n_gaussians"] = p.n_gaussians;
  }
  return j;
}

GeneratorParams params_from_json(const nlohmann::json& j) {
  GeneratorParams p;
  p.family = j.at("family").get<std::string>();
  p.seed = j.value("seed", std::uint64_t{0});
  p.players = j.value("players", std::int64_t{0});
  p.actions = j.value("actions", std::int64_t{0});
  p.n_functions = j.value("n_functions", std::int64_t{200});
  p.edge_prob = j.value("edge_prob", 0.5);
  p.n_gaussians = j.value("n_gaussians", std::int64_t{4});
  return p;
}

GameSpec worked_example_game() {
  GameSpec spec;
  spec.players = 3;
  spec.actions = 3;
  spec.payoffs = [](const CountVector& config) {
    Eigen::VectorXd v(3);
    for (std::int64_t a = 0; a < 3; ++a) {
      const std::int64_t copies = config[static_cast<std::size_t>(a)] + 1;  // deviator included
      const double value = static_cast<double>(a + 1);
      v(a) = copies == 1 ? value : copies == 2 ? -value : 0.0;
    }
    return v;
  };
  return spec;
}

GameSpec additive_sine_game(const GeneratorParams& params) {
  if (params.players < 2 || params.actions < 2)
    throw InvalidArgument("additive-sine game requires at least 2 players and 2 actions");
  if (params.n_functions < 1) throw InvalidArgument("additive-sine game requires n_functions >= 1");
  if (params.edge_prob < 0.0 || params.edge_prob > 1.0)
    throw InvalidArgument("edge_prob must lie in [0, 1]");

  auto state = std::make_shared<SineState>();
  state->actions = params.actions;
  state->n_functions = params.n_functions;

  rng::Xoshiro256 edges(params.seed, kEdgeStream);
  state->edge.resize(static_cast<std::size_t>(params.n_functions * params.actions));
  for (std::int64_t f = 0; f < params.n_functions; ++f)
    for (std::int64_t a = 0; a < params.actions; ++a)
      state->edge[static_cast<std::size_t>(f * params.actions + a)] =
          edges.bernoulli(params.edge_prob) ? 1 : 0;

  rng::Xoshiro256 phi(params.seed, kPhiStream);
  const double freq_a = std::min(0.1, 2.0 * kPi / static_cast<double>(params.players));
  const double freq_b = std::max(0.1, 2.0 * kPi / static_cast<double>(params.players));
  state->functions.resize(static_cast<std::size_t>(params.n_functions));
  for (auto& fn : state->functions) {
    fn.amplitude = phi.uniform();
    fn.frequency = phi.uniform(freq_a, freq_b);
    fn.phase = phi.uniform(0.0, 2.0 * kPi);
    for (double& c : fn.poly) c = phi.uniform(-1.0, 1.0);
  }

  rng::Xoshiro256 weight(params.seed, kWeightStream);
  state->weights.resize(static_cast<std::size_t>(params.actions * params.n_functions));
  for (std::int64_t a = 0; a < params.actions; ++a)
    for (std::int64_t f = 0; f < params.n_functions; ++f)
      state->weights[static_cast<std::size_t>(a * params.n_functions + f)] = weight.uniform(-1.0, 1.0);

  GameSpec spec;
  spec.players = params.players;
  spec.actions = params.actions;
  spec.payoffs = [state](const CountVector& config) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(state->actions);
    for (std::int64_t f = 0; f < state->n_functions; ++f) {
      std::int64_t in_neighborhood = 0;
      for (std::int64_t b = 0; b < state->actions; ++b)
        if (state->adjacent(f, b)) in_neighborhood += config[static_cast<std::size_t>(b)];
      const auto& fn = state->functions[static_cast<std::size_t>(f)];
      const double without = fn(static_cast<double>(in_neighborhood));
      const double with_self = fn(static_cast<double>(in_neighborhood + 1));
      for (std::int64_t a = 0; a < state->actions; ++a) {
        const double out = state->adjacent(f, a) ? with_self : without;
        v(a) += state->weights[static_cast<std::size_t>(a * state->n_functions + f)] * out;
      }
    }
    return v;
  };
  return spec;
}

GameSpec gaussian_mixture_game(const GeneratorParams& params) {
  if (params.players < 2 || params.actions < 2)
    throw InvalidArgument("gmg requires at least 2 players and 2 actions");
  if (params.n_gaussians < 1) throw InvalidArgument("gmg requires n_gaussians >= 1");

  auto state = std::make_shared<GmgState>();
  state->actions = params.actions;
  state->n_gaussians = params.n_gaussians;
  state->functions.resize(static_cast<std::size_t>(params.actions * params.n_gaussians));

  rng::Xoshiro256 centroids(params.seed, kCentroidStream);
  rng::Xoshiro256 covariance(params.seed, kCovarianceStream);
  rng::Xoshiro256 scales(params.seed, kScaleStream);
  const double p = static_cast<double>(params.players);

  for (std::int64_t a = 0; a < params.actions; ++a) {
    for (std::int64_t g = 0; g < params.n_gaussians; ++g) {
      auto& fn = state->functions[static_cast<std::size_t>(a * params.n_gaussians + g)];

      // Dirichlet(1) via normalized exponentials, scaled to the simplex.
      Eigen::VectorXd mean(params.actions);
      for (std::int64_t i = 0; i < params.actions; ++i)
        mean(i) = -std::log(1.0 - centroids.uniform());
      mean *= p / mean.sum();
      fn.mean = mean;

      Eigen::VectorXd widths(params.actions);
      for (std::int64_t i = 0; i < params.actions; ++i)
        widths(i) = covariance.uniform(0.1 * p, 0.5 * p);
      const Eigen::MatrixXd corr = lkj_correlation(params.actions, covariance);
      const Eigen::MatrixXd cov = widths.asDiagonal() * corr * widths.asDiagonal();
      fn.precision = cov.llt().solve(Eigen::MatrixXd::Identity(params.actions, params.actions));

      fn.scale = scales.uniform(-1.0, 1.0);
    }
  }

  GameSpec spec;
  spec.players = params.players;
  spec.actions = params.actions;
  spec.payoffs = [state](const CountVector& config) {
    Eigen::VectorXd x(state->actions);
    for (std::int64_t i = 0; i < state->actions; ++i)
      x(i) = static_cast<double>(config[static_cast<std::size_t>(i)]);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(state->actions);
    for (std::int64_t a = 0; a < state->actions; ++a) {
      double total = 0.0;
      for (std::int64_t g = 0; g < state->n_gaussians; ++g) {
        const auto& fn = state->functions[static_cast<std::size_t>(a * state->n_gaussians + g)];
        const Eigen::VectorXd d = x - fn.mean;
        total += fn.scale * std::exp(-0.5 * d.dot(fn.precision * d));
      }
      v(a) = total;
    }
    return v;
  };
  return spec;
}

GameSpec make_game(const GeneratorParams& params) {
  if (params.family == "worked-example") return worked_example_game();
  if (params.family == "additive-sine") return additive_sine_game(params);
  if (params.family == "gmg") return gaussian_mixture_game(params);
  throw InvalidArgument("unknown game family: " + params.family);
}

}  // namespace symgames
