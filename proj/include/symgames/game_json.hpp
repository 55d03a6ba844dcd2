#ifndef SYMGAMES_GAME_JSON_HPP
#define SYMGAMES_GAME_JSON_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "symgames/game_spec.hpp"

namespace symgames {

// On-disk game format:
//   {"players": P, "actions": A, "payoffs": [[...] x A], "names": [...]}
// where payoffs row a, column j is the raw payoff v_a(c_j) in canonical
// configuration order. "names" is optional. Payoff values round-trip
// exactly (shortest-round-trip float serialization).
struct GameFile {
  GameSpec spec;
  std::vector<std::string> names;
};

nlohmann::json game_to_json(const GameSpec& spec, const std::vector<std::string>& names = {});
GameFile game_from_json(const nlohmann::json& j);

void save_game(const std::string& path, const GameSpec& spec,
               const std::vector<std::string>& names = {});
GameFile load_game(const std::string& path);

}  // namespace symgames

#endif  // SYMGAMES_GAME_JSON_HPP
