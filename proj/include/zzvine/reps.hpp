#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zzvine/chains.hpp"
#include "zzvine/filtration.hpp"

namespace zzvine {

// Shared immutable chain record. Null means Undefined (an end chain that the
// birth/death rule does not ask for), which is different from an empty chain.
using ChainPtr = std::shared_ptr<const Chain>;

ChainPtr empty_chain(int dim);
ChainPtr make_record(Chain c);
ChainPtr single_simplex(int dim, SimplexId s);

struct SumStats {
  std::size_t cycle_merges = 0;
  std::size_t chain_merges = 0;
};

// Z2 sum of two records. Undefined absorbs; summing with an empty record or
// with itself never allocates.
ChainPtr add(const ChainPtr& a, const ChainPtr& b, std::size_t* merges = nullptr);

// Representative sequence for [birth, death]: cycles z_birth..z_death and
// chains c_{birth-1}..c_death. Prefixes and suffixes use the same layout and
// leave the dropped end chain null with the matching open_* flag set.
struct RepSeq {
  int dim = 0;
  int birth = 0;
  int death = 0;
  std::vector<ChainPtr> cycles;
  std::vector<ChainPtr> chains;
  bool open_birth = false;
  bool open_death = false;

  int length() const { return death - birth + 1; }
  bool covers(int i) const { return birth <= i && i <= death; }
  const ChainPtr& z(int i) const { return cycles[static_cast<std::size_t>(i - birth)]; }
  ChainPtr& z(int i) { return cycles[static_cast<std::size_t>(i - birth)]; }
  const ChainPtr& c(int i) const { return chains[static_cast<std::size_t>(i - birth + 1)]; }
  ChainPtr& c(int i) { return chains[static_cast<std::size_t>(i - birth + 1)]; }
  const ChainPtr& birth_chain() const { return chains.front(); }
  const ChainPtr& death_chain() const { return chains.back(); }

  void shift(int delta) {
    birth += delta;
    death += delta;
  }
  // z_birth and c_{birth-1} removed; the old c_birth becomes the birth chain
  void drop_first();
  // z_death and c_death removed; the old c_{death-1} becomes the death chain
  void drop_last();
  // new z_{birth-1}; `between` connects it to the old z_birth
  void push_front(ChainPtr z, ChainPtr between, ChainPtr birth_chain);
  void push_back(ChainPtr z, ChainPtr between, ChainPtr death_chain);
  // number of distinct cycle records
  std::size_t cycle_records() const;
};

// Single-cycle representative for [i, i].
RepSeq point_rep(int dim, int i, ChainPtr z, ChainPtr birth_chain, ChainPtr death_chain);

struct RepViolation {
  int index;
  std::string rule;
};

std::optional<RepViolation> validate_rep(const ZigzagFiltration& f, const RepSeq& r,
                                         const Timeline* tl = nullptr);

RepSeq prefix(const RepSeq& r, int i);
RepSeq suffix(const RepSeq& r, int i);

RepSeq sum_post_birth(const ZigzagFiltration& f, const RepSeq& r1, const RepSeq& r2,
                      SumStats* stats = nullptr);
RepSeq sum_pre_death(const ZigzagFiltration& f, const RepSeq& r1, const RepSeq& r2,
                     SumStats* stats = nullptr);
// Junction chain becomes c_{i-1} + a where i = r2.birth; needs
// z_i + z'_i = boundary(a). A timeline, when given, also checks a is in K_i.
RepSeq concat(const SimplexRegistry& reg, const RepSeq& r1, const RepSeq& r2, const Chain& a,
              const Timeline* tl = nullptr);
// General sum through common index i; the result lives on
// [max birth, max death] under the birth and death orders.
RepSeq rep_sum(const ZigzagFiltration& f, const RepSeq& r1, const RepSeq& r2, int i,
               SumStats* stats = nullptr, bool* comparable = nullptr);

std::string dump_rep(const SimplexRegistry& reg, const RepSeq& r);

}  // namespace zzvine
