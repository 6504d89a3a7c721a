#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zzvine/filtration.hpp"
#include "zzvine/reps.hpp"

namespace zzvine {

using IntervalId = std::int64_t;
constexpr IntervalId kNoInterval = -1;

struct TrackedInterval {
  IntervalId id = kNoInterval;
  RepSeq rep;  // rep.dim is the homology dimension
};

// from == kNoInterval: created; to == kNoInterval: destroyed
struct VineLink {
  IntervalId from = kNoInterval;
  IntervalId to = kNoInterval;
  friend bool operator==(const VineLink&, const VineLink&) = default;
};

struct OpStats {
  std::size_t cycle_merges = 0;
  std::size_t chain_merges = 0;
  std::size_t rep_sums = 0;
};

struct OpResult {
  PositionRemap remap;
  // created and destroyed ids only; every other id carries over unchanged
  std::vector<VineLink> vines;
  OpStats stats;
};

// p-boundary of a complex together with a (p+1)-chain bounding it
struct BoundaryWithWitness {
  Chain boundary;
  Chain witness;
};

// Maximal independent set of p-boundaries of k in echelon form (distinct
// largest simplex ids), built from the (p+1)-simplices in id order.
std::vector<BoundaryWithWitness> boundary_basis(const SimplexRegistry& reg, const Complex& k, int p);

// Barcode of a zigzag filtration kept together with a representative
// sequence per interval, updated in place by the eight atomic edits.
class PersistenceState {
 public:
  explicit PersistenceState(RegistryPtr reg = nullptr);
  // replays the script that grows f from the empty filtration
  static PersistenceState build(const ZigzagFiltration& f);

  const ZigzagFiltration& filtration() const { return f_; }
  const std::vector<TrackedInterval>& intervals() const { return ints_; }
  Barcode barcode() const;
  // death position per birth position, -1 where no interval is born
  std::vector<int> pairing() const;
  // empty when every rep validates and births/deaths pair up bijectively
  std::optional<std::string> certify() const;

  OpResult forward_switch(int i);
  OpResult backward_switch(int i);
  OpResult outward_switch(int i);
  OpResult inward_switch(int i);
  OpResult outward_expansion(int pos, const Vertices& sigma);
  OpResult inward_expansion(int pos, const Vertices& sigma);
  OpResult outward_contraction(int i);
  OpResult inward_contraction(int i);
  // checks legality first; on an illegal op nothing changes
  OpResult apply(const Op& op);

 private:
  void do_fs(int P);
  void do_bs(int P);
  void do_os(int P);
  void do_is(int P);
  void do_oe(int P, SimplexId s);
  void do_ie(int P, SimplexId s);
  void do_oc(int P);
  void do_ic(int P);

  int find_birth(int b) const;
  int find_death(int d) const;
  RepSeq sum(const RepSeq& a, const RepSeq& b, int i);
  ChainPtr csum(const ChainPtr& a, const ChainPtr& b);
  IntervalId fresh_id() { return next_id_++; }

  ZigzagFiltration f_;
  std::vector<TrackedInterval> ints_;
  IntervalId next_id_ = 0;
  OpStats* stats_ = nullptr;
};

}  // namespace zzvine
