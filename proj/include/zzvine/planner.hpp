#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "zzvine/filtration.hpp"

namespace zzvine {

struct RandomOptions {
  int vertices = 5;      // vertex pool 0..vertices-1
  int max_dim = 2;
  int max_complex = 12;  // simplices alive at once
  int max_length = 40;   // steps
};

ZigzagFiltration random_filtration(std::mt19937_64& rng, const RandomOptions& opt = {},
                                   RegistryPtr reg = nullptr);

// Script taking f to the empty filtration.
std::vector<Op> reduce_to_empty(const ZigzagFiltration& f);

// Given ops that act on f in order, the script undoing them, in order.
std::vector<Op> invert_script(const ZigzagFiltration& f, const std::vector<Op>& ops);

// Script taking f1 to f2: empty f1, then rebuild f2.
std::vector<Op> transform(const ZigzagFiltration& f1, const ZigzagFiltration& f2);

// Every legal op on f, expansions drawn from the vertex pool within the budget.
std::vector<Op> legal_ops(const ZigzagFiltration& f, const RandomOptions& opt = {});

// k ops, each legal on the filtration left by the previous ones.
std::vector<Op> random_script(const ZigzagFiltration& f, int k, std::uint64_t seed,
                              const RandomOptions& opt = {});

}  // namespace zzvine
