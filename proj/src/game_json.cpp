#include "symgames/game_json.hpp"

#include <Eigen/Dense>
#include <fstream>
#include <memory>

#include "symgames/errors.hpp"

namespace symgames {

using combinatorics::CountVector;

nlohmann::json game_to_json(const GameSpec& spec, const std::vector<std::string>& names) {
  if (spec.players < 2 || spec.actions < 2 || !spec.payoffs)
    throw InvalidArgument("cannot serialize an incomplete game spec");
  const std::int64_t nc = combinatorics::num_configs(spec.players, spec.actions);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(spec.actions));
  for (auto& row : rows) row.reserve(static_cast<std::size_t>(nc));
  combinatorics::for_each_config(spec.players, spec.actions, [&](const CountVector& c) {
    const Eigen::VectorXd v = spec.payoffs(c);
    if (v.size() != spec.actions)
      throw DimensionMismatch("payoff generator returned a vector of the wrong length");
    for (std::int64_t a = 0; a < spec.actions; ++a) rows[static_cast<std::size_t>(a)].push_back(v(a));
  });

  nlohmann::json j;
  j["players"] = spec.players;
  j["actions"] = spec.actions;
  j["payoffs"] = rows;
  if (!names.empty()) {
    if (static_cast<std::int64_t>(names.size()) != spec.actions)
      throw DimensionMismatch("one name per action required");
    j["names"] = names;
  }
  return j;
}

GameFile game_from_json(const nlohmann::json& j) {
  GameFile out;
  if (!j.is_object() || !j.contains("players") || !j.contains("actions") || !j.contains("payoffs"))
    throw IoError("game file must contain players, actions and payoffs");
  out.spec.players = j.at("players").get<std::int64_t>();
  out.spec.actions = j.at("actions").get<std::int64_t>();
  if (out.spec.players < 2 || out.spec.actions < 2)
    throw IoError("game file requires at least 2 players and 2 actions");

  const std::int64_t nc = combinatorics::num_configs(out.spec.players, out.spec.actions);
  const auto& rows = j.at("payoffs");
  if (!rows.is_array() || static_cast<std::int64_t>(rows.size()) != out.spec.actions)
    throw IoError("payoffs must have one row per action");

  auto table = std::make_shared<Eigen::ArrayXXd>(out.spec.actions, nc);
  for (std::int64_t a = 0; a < out.spec.actions; ++a) {
    const auto& row = rows[static_cast<std::size_t>(a)];
    if (!row.is_array() || static_cast<std::int64_t>(row.size()) != nc)
      throw IoError("payoff row has the wrong number of configurations");
    for (std::int64_t c = 0; c < nc; ++c)
      (*table)(a, c) = row[static_cast<std::size_t>(c)].get<double>();
  }

  const std::int64_t actions = out.spec.actions;
  out.spec.payoffs = [table, actions](const CountVector& config) {
    Eigen::VectorXd v(actions);
    v = table->col(combinatorics::config_rank(config)).matrix();
    return v;
  };

  if (j.contains("names")) {
    out.names = j.at("names").get<std::vector<std::string>>();
    if (static_cast<std::int64_t>(out.names.size()) != out.spec.actions)
      throw IoError("one name per action required");
  }
  return out;
}

void save_game(const std::string& path, const GameSpec& spec, const std::vector<std::string>& names) {
  std::ofstream file(path);
  if (!file) throw IoError("cannot open for writing: " + path);
  file << game_to_json(spec, names).dump(2) << "\n";
  if (!file) throw IoError("failed while writing: " + path);
}

GameFile load_game(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    file >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("invalid JSON in " + path + ": " + e.what());
  }
  return game_from_json(j);
}

}  // namespace symgames
