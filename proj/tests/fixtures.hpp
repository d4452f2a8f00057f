#pragma once

#include <string>

#include "parfell/io.hpp"
#include "parfell/partial_action.hpp"

namespace fixtures {

inline parfell::FinitePartialAction action_from(const std::string& text) {
  return parfell::io::parse_action(parfell::io::Json::parse(text));
}

inline const char* const kZ2 = R"({"kind":"finite","order":2,"table":[[0,1],[1,0]],"labels":["e","g"]})";

// Z/2 swapping {0, 1}.
inline parfell::FinitePartialAction swap() {
  return action_from(std::string(R"({"group":)") + kZ2 +
                     R"(,"n":2,"elements":[{"t":"g","domain":[0,1],"map":{"0":1,"1":0}}]})");
}

// Z/2 on {0, 1} with V_g = {0} fixed.
inline parfell::FinitePartialAction fixed_point() {
  return action_from(std::string(R"({"group":)") + kZ2 +
                     R"(,"n":2,"elements":[{"t":"g","domain":[0],"map":{"0":0}}]})");
}

// Z on {0, 1, 2}: V_a = {1, 2}, V_{a^-1} = {0, 1}, i -> i + 1.
inline parfell::FinitePartialAction partial_shift() {
  return action_from(R"({"group":"free:1","n":3,"elements":[{"t":"a","domain":[1,2],"map":{"0":1,"1":2}}]})");
}

}  // namespace fixtures
