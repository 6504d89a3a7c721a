#pragma once

#include <random>
#include <string>

#include "zzvine/filtration.hpp"
#include "zzvine/planner.hpp"

namespace zzvine::testing {

// a, b, ab in and out again; vertices 0 and 1
inline ZigzagFiltration tri() {
  return parse_filtration_text("i 0\ni 1\ni 0 1\nd 0 1\nd 1\nd 0\n");
}

inline ZigzagFiltration from(const std::string& text) { return parse_filtration_text(text); }

inline ZigzagFiltration random_small(std::uint64_t seed, RandomOptions opt = {}) {
  std::mt19937_64 rng(seed);
  return random_filtration(rng, opt);
}

}  // namespace zzvine::testing
