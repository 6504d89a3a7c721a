#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zzvine/chains.hpp"

namespace zzvine {

enum class Dir : std::uint8_t { Add, Delete };

using StepId = std::int64_t;

struct Step {
  StepId id = 0;
  Dir dir = Dir::Add;
  SimplexId simplex = 0;
};

// Simplex-wise zigzag filtration. Position i (0..m) names the complex K_i,
// step j (0..m-1) goes from K_j to K_{j+1}.
class ZigzagFiltration {
 public:
  ZigzagFiltration();
  explicit ZigzagFiltration(RegistryPtr reg);

  const RegistryPtr& registry_ptr() const { return reg_; }
  SimplexRegistry& registry() const { return *reg_; }
  const std::vector<Step>& steps() const { return steps_; }
  const Step& step(int j) const { return steps_[static_cast<std::size_t>(j)]; }
  int size() const { return static_cast<int>(steps_.size()); }
  bool empty() const { return steps_.empty(); }

  void push(Dir dir, SimplexId s);
  void push(Dir dir, const Vertices& v);

  // raw edits, no legality checks
  void swap_steps(int i);  // steps i-1 and i
  void insert_pair(int pos, Dir first, SimplexId s);  // new steps at pos, pos+1
  void erase_pair(int i);  // steps i-1 and i

  // (dir, vertex list) sequence, independent of step ids and registry
  std::vector<std::pair<Dir, Vertices>> signature() const;

 private:
  RegistryPtr reg_;
  std::vector<Step> steps_;
  StepId next_id_ = 0;
};

struct Violation {
  int position;
  std::string rule;
};

std::vector<Violation> validate(const ZigzagFiltration& f);
void require_valid(const ZigzagFiltration& f);

Complex complex_at(const ZigzagFiltration& f, int i);

// Membership of simplices in K_i without replaying, built once per filtration.
class Timeline {
 public:
  explicit Timeline(const ZigzagFiltration& f);
  bool contains(SimplexId s, int i) const;
  bool contains_chain(const Chain& c, int i) const;

 private:
  std::vector<std::vector<int>> toggles_;  // per simplex, step indices touching it
};

bool birth_order_less(const ZigzagFiltration& f, int b1, int b2);
bool death_order_less(const ZigzagFiltration& f, int d1, int d2);

struct Interval {
  int birth = 0;
  int death = 0;
};
bool interval_less(const ZigzagFiltration& f, Interval a, Interval b);

// Position remap after an edit: positions >= threshold move by delta.
struct PositionRemap {
  int threshold = 0;
  int delta = 0;
  int operator()(int pos) const { return pos >= threshold ? pos + delta : pos; }
};
PositionRemap renumber_after_edit(int edit_position, int delta);

struct Bar {
  int dim = 0;
  int birth = 0;
  int death = 0;
  auto operator<=>(const Bar&) const = default;
};
using Barcode = std::vector<Bar>;  // kept sorted
void sort_barcode(Barcode& b);
std::string format_barcode(const Barcode& b);

ZigzagFiltration parse_filtration(std::istream& in, RegistryPtr reg = nullptr);
ZigzagFiltration parse_filtration_text(const std::string& text, RegistryPtr reg = nullptr);
std::string format_filtration(const ZigzagFiltration& f);

// Atomic edits. Switch and contraction positions name the later of the two
// steps involved (steps P-1 and P); expansions insert at complex position P,
// so the new steps occupy P and P+1.
enum class OpKind {
  ForwardSwitch,
  BackwardSwitch,
  OutwardSwitch,
  InwardSwitch,
  OutwardExpansion,
  InwardExpansion,
  OutwardContraction,
  InwardContraction,
};
constexpr int kOpKinds = 8;

struct Op {
  OpKind kind = OpKind::ForwardSwitch;
  int pos = 0;
  Vertices simplex;  // expansions only
  friend bool operator==(const Op&, const Op&) = default;
};

const char* op_code(OpKind k);
Op parse_op(const std::string& line, int line_no = -1);
std::vector<Op> parse_script(std::istream& in);
std::string format_op(const Op& op);
std::string format_script(const std::vector<Op>& ops);

// Throws the matching Illegal* error when op cannot be applied to f.
void check_op(const ZigzagFiltration& f, const Op& op);
// check_op followed by the step-list edit
void apply_op(ZigzagFiltration& f, const Op& op);
// Inverse of op as it will act on the filtration obtained by applying op to f.
Op inverse_op(const ZigzagFiltration& f, const Op& op);

}  // namespace zzvine
