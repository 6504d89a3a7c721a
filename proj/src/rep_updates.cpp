#include "zzvine/rep_updates.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "zzvine/errors.hpp"
#include "zzvine/planner.hpp"

namespace zzvine {

namespace {

bool has(const ChainPtr& c, SimplexId s) { return c && c->contains(s); }

ChainPtr boundary_record(const SimplexRegistry& reg, SimplexId s) { return make_record(boundary(reg, s)); }

std::size_t zi(const RepSeq& r, int i) { return static_cast<std::size_t>(i - r.birth); }
std::size_t ci(const RepSeq& r, int i) { return static_cast<std::size_t>(i - r.birth + 1); }

// Two new indices after P carrying z_P with empty junctions.
void stretch(RepSeq& r, int P) {
  if (r.death < P) return;
  if (r.birth > P) {
    r.shift(2);
    return;
  }
  ChainPtr z = r.z(P);
  r.cycles.insert(r.cycles.begin() + static_cast<std::ptrdiff_t>(zi(r, P) + 1), 2, z);
  r.chains.insert(r.chains.begin() + static_cast<std::ptrdiff_t>(ci(r, P)), 2, empty_chain(r.dim + 1));
  r.death += 2;
}

// Steps P-1, P (delete then add of one simplex) removed; z_P survives at P-1.
void contract_outward(RepSeq& r, int P) {
  if (r.death < P) {
    require(r.death <= P - 2, "outward contraction: interval ends inside the removed pair");
    return;
  }
  if (r.birth > P) {
    require(r.birth >= P + 2, "outward contraction: interval starts inside the removed pair");
    r.shift(-2);
    return;
  }
  require(r.birth <= P - 1 && r.death >= P + 1, "outward contraction: interval touches the pair boundary");
  r.chains[ci(r, P - 2)] = add(r.c(P - 2), r.c(P - 1));
  r.chains[ci(r, P)] = add(r.c(P), r.c(P + 1));
  r.chains.erase(r.chains.begin() + static_cast<std::ptrdiff_t>(ci(r, P + 1)));
  r.chains.erase(r.chains.begin() + static_cast<std::ptrdiff_t>(ci(r, P - 1)));
  r.cycles.erase(r.cycles.begin() + static_cast<std::ptrdiff_t>(zi(r, P + 1)));
  r.cycles.erase(r.cycles.begin() + static_cast<std::ptrdiff_t>(zi(r, P - 1)));
  r.death -= 2;
}

// Steps P-1, P (add then delete of sigma) removed; z_{P-1} survives. A
// junction through sigma is repaired with the cycle `fix` (may be null).
void contract_inward(RepSeq& r, int P, SimplexId sigma, const ChainPtr& fix) {
  if (r.death < P) {
    require(r.death <= P - 2, "inward contraction: interval ends inside the removed pair");
    return;
  }
  if (r.birth > P) {
    require(r.birth >= P + 2, "inward contraction: interval starts inside the removed pair");
    r.shift(-2);
    return;
  }
  require(r.birth <= P - 1 && r.death >= P + 1, "inward contraction: interval touches the pair boundary");
  ChainPtr bar = add(r.c(P - 1), r.c(P));
  if (has(bar, sigma)) {
    require(fix != nullptr, "inward contraction: junction meets the removed simplex");
    bar = add(bar, fix);
  }
  r.chains[ci(r, P - 1)] = add(bar, r.c(P + 1));
  r.chains.erase(r.chains.begin() + static_cast<std::ptrdiff_t>(ci(r, P)),
                 r.chains.begin() + static_cast<std::ptrdiff_t>(ci(r, P + 1) + 1));
  r.cycles.erase(r.cycles.begin() + static_cast<std::ptrdiff_t>(zi(r, P)),
                 r.cycles.begin() + static_cast<std::ptrdiff_t>(zi(r, P + 1) + 1));
  r.death -= 2;
}

RepSeq shifted(RepSeq r, int delta) {
  r.shift(delta);
  return r;
}

void close_ends(RepSeq& r) {
  r.open_birth = false;
  r.open_death = false;
}

std::vector<SimplexId> xor_sorted(const std::vector<SimplexId>& a, const std::vector<SimplexId>& b) {
  std::vector<SimplexId> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Gaussian elimination over Z2 keyed by the largest simplex id. Each row
// remembers which tagged inputs and which witness chain it came from.
class Eliminator {
 public:
  explicit Eliminator(int dim) : dim_(dim) {}

  struct Row {
    std::vector<SimplexId> v;
    std::vector<SimplexId> tags;  // reused sorted-xor, tags are interval slots
    std::vector<SimplexId> w;
  };

  // returns false when v reduces to zero (dependent input)
  bool insert(Row row) {
    reduce(row);
    if (row.v.empty()) return false;
    SimplexId piv = row.v.back();
    rows_.emplace(piv, std::move(row));
    return true;
  }

  void reduce(Row& row) const {
    while (!row.v.empty()) {
      auto it = rows_.find(row.v.back());
      if (it == rows_.end()) return;
      row.v = xor_sorted(row.v, it->second.v);
      row.tags = xor_sorted(row.tags, it->second.tags);
      row.w = xor_sorted(row.w, it->second.w);
    }
  }

  int dim() const { return dim_; }

 private:
  int dim_;
  std::unordered_map<SimplexId, Row> rows_;
};

}  // namespace

std::vector<BoundaryWithWitness> boundary_basis(const SimplexRegistry& reg, const Complex& k, int p) {
  Eliminator e(p);
  std::vector<BoundaryWithWitness> out;
  for (SimplexId s : k.simplices) {
    if (reg.dim(s) != p + 1) continue;
    Eliminator::Row row{boundary(reg, s).cells, {}, {s}};
    e.reduce(row);
    if (row.v.empty()) continue;
    out.push_back({Chain{p, row.v}, Chain{p + 1, row.w}});
    e.insert(std::move(row));
  }
  return out;
}

PersistenceState::PersistenceState(RegistryPtr reg) : f_(reg ? std::move(reg) : std::make_shared<SimplexRegistry>()) {}

PersistenceState PersistenceState::build(const ZigzagFiltration& f) {
  require_valid(f);
  PersistenceState st(f.registry_ptr());
  for (const Op& op : invert_script(f, reduce_to_empty(f))) st.apply(op);
  return st;
}

Barcode PersistenceState::barcode() const {
  Barcode b;
  b.reserve(ints_.size());
  for (const auto& t : ints_) b.push_back({t.rep.dim, t.rep.birth, t.rep.death});
  sort_barcode(b);
  return b;
}

std::vector<int> PersistenceState::pairing() const {
  std::vector<int> out(static_cast<std::size_t>(f_.size() + 1), -1);
  for (const auto& t : ints_) out[static_cast<std::size_t>(t.rep.birth)] = t.rep.death;
  return out;
}

std::optional<std::string> PersistenceState::certify() const {
  const int m = f_.size();
  if (static_cast<int>(ints_.size()) * 2 != m)
    return "interval count " + std::to_string(ints_.size()) + " does not match length " + std::to_string(m);
  std::vector<char> born(static_cast<std::size_t>(m + 1), 0), died(static_cast<std::size_t>(m + 1), 0);
  Timeline tl(f_);
  for (const auto& t : ints_) {
    const RepSeq& r = t.rep;
    if (r.open_birth || r.open_death) return "open representative for interval " + std::to_string(t.id);
    if (auto v = validate_rep(f_, r, &tl))
      return "interval [" + std::to_string(r.birth) + "," + std::to_string(r.death) + "] dim " +
             std::to_string(r.dim) + ": " + v->rule + " at " + std::to_string(v->index);
    if (born[static_cast<std::size_t>(r.birth)]++) return "birth " + std::to_string(r.birth) + " used twice";
    if (died[static_cast<std::size_t>(r.death)]++) return "death " + std::to_string(r.death) + " used twice";
  }
  return std::nullopt;
}

int PersistenceState::find_birth(int b) const {
  for (std::size_t k = 0; k < ints_.size(); ++k)
    if (ints_[k].rep.birth == b) return static_cast<int>(k);
  return -1;
}

int PersistenceState::find_death(int d) const {
  for (std::size_t k = 0; k < ints_.size(); ++k)
    if (ints_[k].rep.death == d) return static_cast<int>(k);
  return -1;
}

RepSeq PersistenceState::sum(const RepSeq& a, const RepSeq& b, int i) {
  SumStats s;
  RepSeq out = rep_sum(f_, a, b, i, &s);
  if (stats_) {
    stats_->cycle_merges += s.cycle_merges;
    stats_->chain_merges += s.chain_merges;
    ++stats_->rep_sums;
  }
  return out;
}

ChainPtr PersistenceState::csum(const ChainPtr& a, const ChainPtr& b) {
  return add(a, b, stats_ ? &stats_->chain_merges : nullptr);
}

OpResult PersistenceState::forward_switch(int i) { return apply({OpKind::ForwardSwitch, i, {}}); }
OpResult PersistenceState::backward_switch(int i) { return apply({OpKind::BackwardSwitch, i, {}}); }
OpResult PersistenceState::outward_switch(int i) { return apply({OpKind::OutwardSwitch, i, {}}); }
OpResult PersistenceState::inward_switch(int i) { return apply({OpKind::InwardSwitch, i, {}}); }
OpResult PersistenceState::outward_expansion(int pos, const Vertices& s) {
  return apply({OpKind::OutwardExpansion, pos, s});
}
OpResult PersistenceState::inward_expansion(int pos, const Vertices& s) {
  return apply({OpKind::InwardExpansion, pos, s});
}
OpResult PersistenceState::outward_contraction(int i) { return apply({OpKind::OutwardContraction, i, {}}); }
OpResult PersistenceState::inward_contraction(int i) { return apply({OpKind::InwardContraction, i, {}}); }

OpResult PersistenceState::apply(const Op& op) {
  check_op(f_, op);
  OpResult res;
  std::vector<IntervalId> before;
  before.reserve(ints_.size());
  for (const auto& t : ints_) before.push_back(t.id);
  stats_ = &res.stats;
  const int P = op.pos;
  switch (op.kind) {
    case OpKind::ForwardSwitch: do_fs(P); break;
    case OpKind::BackwardSwitch: do_bs(P); break;
    case OpKind::OutwardSwitch: do_os(P); break;
    case OpKind::InwardSwitch: do_is(P); break;
    case OpKind::OutwardExpansion: do_oe(P, f_.registry().intern(op.simplex)); break;
    case OpKind::InwardExpansion: do_ie(P, f_.registry().intern(op.simplex)); break;
    case OpKind::OutwardContraction: do_oc(P); break;
    case OpKind::InwardContraction: do_ic(P); break;
  }
  stats_ = nullptr;
  apply_op(f_, op);
  switch (op.kind) {
    case OpKind::OutwardExpansion:
    case OpKind::InwardExpansion: res.remap = PositionRemap{P + 1, 2}; break;
    case OpKind::OutwardContraction:
    case OpKind::InwardContraction: res.remap = PositionRemap{P + 1, -2}; break;
    default: res.remap = PositionRemap{0, 0}; break;
  }
  bool same = before.size() == ints_.size();
  for (std::size_t k = 0; same && k < before.size(); ++k) same = before[k] == ints_[k].id;
  if (same) return res;
  std::sort(before.begin(), before.end());
  std::vector<IntervalId> after;
  after.reserve(ints_.size());
  for (const auto& t : ints_) {
    after.push_back(t.id);
    if (!std::binary_search(before.begin(), before.end(), t.id)) res.vines.push_back({kNoInterval, t.id});
  }
  std::sort(after.begin(), after.end());
  for (IntervalId id : before)
    if (!std::binary_search(after.begin(), after.end(), id)) res.vines.push_back({id, kNoInterval});
  return res;
}

// ---- switches -------------------------------------------------------------

void PersistenceState::do_fs(int P) {
  const SimplexId sg = f_.step(P - 1).simplex;
  for (auto& t : ints_) {
    RepSeq& r = t.rep;
    if (r.birth <= P - 1 && r.death >= P + 1 && (has(r.c(P - 1), sg) || has(r.z(P), sg))) {
      ChainPtr c = r.c(P - 1);
      r.z(P) = r.z(P - 1);
      r.c(P - 1) = empty_chain(r.dim + 1);
      r.c(P) = csum(c, r.c(P));
    }
  }
  const int bs = find_birth(P), bt = find_birth(P + 1), ds = find_death(P - 1), dt = find_death(P);
  require((bs >= 0) != (ds >= 0) && (bt >= 0) != (dt >= 0), "forward switch: inconsistent pairing");
  auto rep = [&](int k) -> RepSeq& { return ints_[static_cast<std::size_t>(k)].rep; };

  if (bs >= 0 && bt >= 0) {
    RepSeq& r1 = rep(bs);  // [P, d1]
    RepSeq& r2 = rep(bt);  // [P+1, d2]
    if (has(r2.z(P + 1), sg)) {
      if (death_order_less(f_, r1.death, r2.death)) {
        r2 = sum(r1, r2, P + 1);
      } else {
        RepSeq s = sum(r1, r2, P + 1);  // [P+1, d1]
        ChainPtr z = s.z(P + 1);
        s.push_front(z, empty_chain(s.dim + 1), nullptr);
        r1 = std::move(s);
        return;
      }
    }
    r1.drop_first();
    r1.chains.front() = nullptr;
    ChainPtr z = r2.z(P + 1);
    r2.push_front(z, empty_chain(r2.dim + 1), nullptr);
  } else if (ds >= 0 && dt >= 0) {
    RepSeq& r1 = rep(ds);  // [b1, P-1], killed by sigma
    RepSeq& r2 = rep(dt);  // [b2, P], killed by tau
    const ChainPtr x = csum(r2.c(P - 1), r2.c(P));
    const ChainPtr dc1 = r1.c(P - 1);
    if (!has(x, sg)) {
      ChainPtr z = r1.z(P - 1);
      r1.push_back(z, empty_chain(r1.dim + 1), dc1);
      r2.drop_last();
      r2.chains.back() = x;
    } else if (birth_order_less(f_, r1.birth, r2.birth)) {
      RepSeq pre = sum_post_birth(f_, prefix(r1, P - 1), prefix(r2, P - 1));  // [b2, P-1]
      pre.chains.back() = csum(dc1, x);
      close_ends(pre);
      ChainPtr z = r1.z(P - 1);
      r1.push_back(z, empty_chain(r1.dim + 1), dc1);
      r2 = std::move(pre);
    } else {
      RepSeq pre = sum_post_birth(f_, prefix(r2, P - 1), prefix(r1, P - 1));  // [b1, P-1]
      pre.chains.back() = csum(dc1, x);
      close_ends(pre);
      r2.z(P) = r2.z(P - 1);
      r2.c(P - 1) = empty_chain(r2.dim + 1);
      r2.c(P) = x;
      r1 = std::move(pre);
    }
  } else if (bs >= 0 && dt >= 0) {
    RepSeq& born = rep(bs);   // [P, d]
    RepSeq& dying = rep(dt);  // [b, P]
    require(bs != dt, "forward switch: sigma is a face of tau");
    ChainPtr y = csum(dying.c(P - 1), dying.c(P));
    if (has(y, sg)) y = csum(y, born.z(P));
    dying.drop_last();
    dying.chains.back() = y;
    born.drop_first();
    born.chains.front() = nullptr;
  } else {
    RepSeq& r1 = rep(ds);  // [b, P-1], killed by sigma
    RepSeq& r2 = rep(bt);  // [P+1, d]
    if (has(r2.z(P + 1), sg)) {
      r1.chains.back() = csum(r1.chains.back(), r2.z(P + 1));
    } else {
      ChainPtr dc = r1.c(P - 1), z1 = r1.z(P - 1), z2 = r2.z(P + 1);
      r1.push_back(z1, empty_chain(r1.dim + 1), dc);
      r2.push_front(z2, empty_chain(r2.dim + 1), nullptr);
    }
  }
}

// Mirror image of do_fs: births and deaths, prefixes and suffixes trade places.
void PersistenceState::do_bs(int P) {
  const SimplexId tu = f_.step(P).simplex;
  for (auto& t : ints_) {
    RepSeq& r = t.rep;
    if (r.birth <= P - 1 && r.death >= P + 1 && (has(r.c(P), tu) || has(r.z(P), tu))) {
      ChainPtr c = r.c(P);
      r.z(P) = r.z(P + 1);
      r.c(P) = empty_chain(r.dim + 1);
      r.c(P - 1) = csum(r.c(P - 1), c);
    }
  }
  const int bs = find_birth(P), bt = find_birth(P + 1), ds = find_death(P - 1), dt = find_death(P);
  require((bs >= 0) != (ds >= 0) && (bt >= 0) != (dt >= 0), "backward switch: inconsistent pairing");
  auto rep = [&](int k) -> RepSeq& { return ints_[static_cast<std::size_t>(k)].rep; };

  if (dt >= 0 && ds >= 0) {
    RepSeq& r1 = rep(dt);  // [b1, P], killed by tau
    RepSeq& r2 = rep(ds);  // [b2, P-1], killed by sigma
    if (has(r2.z(P - 1), tu)) {
      if (birth_order_less(f_, r1.birth, r2.birth)) {
        r2 = sum(r1, r2, P - 1);
      } else {
        RepSeq s = sum(r1, r2, P - 1);  // [b1, P-1]
        ChainPtr z = s.z(P - 1);
        s.push_back(z, empty_chain(s.dim + 1), nullptr);
        r1 = std::move(s);
        return;
      }
    }
    r1.drop_last();
    r1.chains.back() = nullptr;
    ChainPtr z = r2.z(P - 1);
    r2.push_back(z, empty_chain(r2.dim + 1), nullptr);
  } else if (bt >= 0 && bs >= 0) {
    RepSeq& r1 = rep(bt);  // [P+1, d1], born by tau
    RepSeq& r2 = rep(bs);  // [P, d2], born by sigma
    const ChainPtr x = csum(r2.c(P - 1), r2.c(P));
    const ChainPtr bc1 = r1.c(P);
    if (!has(x, tu)) {
      ChainPtr z = r1.z(P + 1);
      r1.push_front(z, empty_chain(r1.dim + 1), bc1);
      r2.drop_first();
      r2.chains.front() = x;
    } else if (death_order_less(f_, r1.death, r2.death)) {
      RepSeq suf = sum_pre_death(f_, suffix(r1, P + 1), suffix(r2, P + 1));  // [P+1, d2]
      suf.chains.front() = csum(bc1, x);
      close_ends(suf);
      ChainPtr z = r1.z(P + 1);
      r1.push_front(z, empty_chain(r1.dim + 1), bc1);
      r2 = std::move(suf);
    } else {
      RepSeq suf = sum_pre_death(f_, suffix(r2, P + 1), suffix(r1, P + 1));  // [P+1, d1]
      suf.chains.front() = csum(bc1, x);
      close_ends(suf);
      r2.z(P) = r2.z(P + 1);
      r2.c(P) = empty_chain(r2.dim + 1);
      r2.c(P - 1) = x;
      r1 = std::move(suf);
    }
  } else if (dt >= 0 && bs >= 0) {
    RepSeq& dying = rep(dt);  // [b, P]
    RepSeq& born = rep(bs);   // [P, d]
    require(bs != dt, "backward switch: tau is a face of sigma");
    ChainPtr y = csum(born.c(P - 1), born.c(P));
    if (has(y, tu)) y = csum(y, dying.z(P));
    born.drop_first();
    born.chains.front() = y;
    dying.drop_last();
    dying.chains.back() = nullptr;
  } else {
    RepSeq& r1 = rep(bt);  // [P+1, d], born by tau
    RepSeq& r2 = rep(ds);  // [b, P-1]
    if (has(r2.z(P - 1), tu)) {
      r1.chains.front() = csum(r1.chains.front(), r2.z(P - 1));
    } else {
      ChainPtr bc = r1.c(P), z1 = r1.z(P + 1), z2 = r2.z(P - 1);
      r1.push_front(z1, empty_chain(r1.dim + 1), bc);
      r2.push_back(z2, empty_chain(r2.dim + 1), nullptr);
    }
  }
}

void PersistenceState::do_os(int P) {
  const auto& reg = f_.registry();
  const SimplexId sg = f_.step(P - 1).simplex;
  const SimplexId tu = f_.step(P).simplex;
  for (auto& t : ints_) {
    RepSeq& r = t.rep;
    const int b = r.birth, d = r.death;
    if (b == P && d == P) {
      require(r.dim >= 1, "outward switch: point interval in dimension 0");
      ChainPtr tau = single_simplex(r.dim, tu);
      r = point_rep(r.dim - 1, P, boundary_record(reg, tu), tau, csum(r.z(P), tau));
    } else if (b < P && d == P) {
      r.drop_last();
      r.chains.back() = nullptr;
    } else if (b == P && d > P) {
      r.drop_first();
      r.chains.front() = nullptr;
    } else if (b < P && d > P) {
      const ChainPtr a = r.c(P - 1), c = r.c(P);
      if (!has(a, sg) && !has(c, tu)) continue;
      const ChainPtr s = csum(a, c);
      if (!has(s, sg)) {
        r.c(P - 1) = s;
        r.z(P) = r.z(P + 1);
        r.c(P) = empty_chain(r.dim + 1);
      } else if (!has(s, tu)) {
        r.z(P) = r.z(P - 1);
        r.c(P - 1) = empty_chain(r.dim + 1);
        r.c(P) = s;
      } else {
        ChainPtr sig = single_simplex(r.dim + 1, sg);
        r.c(P - 1) = csum(s, sig);
        r.z(P) = csum(r.z(P + 1), boundary_record(reg, sg));
        r.c(P) = sig;
      }
    } else if (b == P + 1) {
      const ChainPtr c = r.c(P);
      const ChainPtr z = r.z(P + 1);
      if (!has(c, sg)) {
        r.push_front(z, empty_chain(r.dim + 1), c);
      } else {
        ChainPtr sig = single_simplex(r.dim + 1, sg);
        r.push_front(csum(z, boundary_record(reg, sg)), sig, csum(c, sig));
      }
    } else if (d == P - 1) {
      const ChainPtr c = r.c(P - 1);
      const ChainPtr z = r.z(P - 1);
      if (!has(c, tu)) {
        r.push_back(z, empty_chain(r.dim + 1), c);
      } else {
        ChainPtr tau = single_simplex(r.dim + 1, tu);
        r.push_back(csum(z, boundary_record(reg, tu)), tau, csum(c, tau));
      }
    }
  }
}

void PersistenceState::do_is(int P) {
  for (auto& t : ints_) {
    RepSeq& r = t.rep;
    const int b = r.birth, d = r.death;
    if (b == P && d == P) {
      r = point_rep(r.dim + 1, P, csum(r.c(P - 1), r.c(P)), nullptr, nullptr);
    } else if (b < P && d == P) {
      ChainPtr s = csum(r.c(P - 1), r.c(P));
      r.drop_last();
      r.chains.back() = s;
    } else if (b == P && d > P) {
      ChainPtr s = csum(r.c(P - 1), r.c(P));
      r.drop_first();
      r.chains.front() = s;
    } else if (b == P + 1) {
      ChainPtr z = r.z(P + 1);
      r.push_front(z, empty_chain(r.dim + 1), nullptr);
    } else if (d == P - 1) {
      ChainPtr z = r.z(P - 1);
      r.push_back(z, empty_chain(r.dim + 1), nullptr);
    }
  }
}

// ---- expansions -----------------------------------------------------------

namespace {

// indices sorted by birth order, pairwise comparable ones folded: the
// earlier absorbs into the later, which then leaves the list
template <class SumFn>
std::vector<int> fold_comparable(const ZigzagFiltration& f, std::vector<TrackedInterval>& ints,
                                 std::vector<int> cand, int at, SumFn&& sum) {
  std::sort(cand.begin(), cand.end(), [&](int a, int b) {
    return birth_order_less(f, ints[static_cast<std::size_t>(a)].rep.birth, ints[static_cast<std::size_t>(b)].rep.birth);
  });
  std::vector<int> kept;
  for (int k : cand) {
    RepSeq& rk = ints[static_cast<std::size_t>(k)].rep;
    bool absorbed = false;
    for (int j : kept) {
      const RepSeq& rj = ints[static_cast<std::size_t>(j)].rep;
      if (death_order_less(f, rj.death, rk.death)) {
        rk = sum(rj, rk, at);
        absorbed = true;
        break;
      }
    }
    if (!absorbed) kept.push_back(k);
  }
  return kept;
}

RepSeq pre_death_sum(const ZigzagFiltration& f, const RepSeq& a, const RepSeq& b, SumStats* st) {
  if (death_order_less(f, a.death, b.death)) return sum_pre_death(f, a, b, st);
  return sum_pre_death(f, b, a, st);
}

}  // namespace

void PersistenceState::do_oe(int P, SimplexId s) {
  const auto& reg = f_.registry();
  const int p = reg.dim(s);
  std::vector<int> lam;
  for (std::size_t k = 0; k < ints_.size(); ++k) {
    const RepSeq& r = ints_[k].rep;
    if (r.dim == p && r.covers(P) && has(r.z(P), s)) lam.push_back(static_cast<int>(k));
  }
  if (lam.empty()) {
    require(p >= 1, "outward expansion: vertex in no cycle");
    for (auto& t : ints_) stretch(t.rep, P);
    ChainPtr sig = single_simplex(p, s);
    ints_.push_back({fresh_id(), point_rep(p - 1, P + 1, boundary_record(reg, s), sig, sig)});
    return;
  }
  auto sumfn = [this](const RepSeq& a, const RepSeq& b, int i) { return sum(a, b, i); };
  std::vector<int> kept = fold_comparable(f_, ints_, lam, P, sumfn);
  const std::size_t l = kept.size();
  auto rep = [&](std::size_t j) -> const RepSeq& { return ints_[static_cast<std::size_t>(kept[j])].rep; };

  RepSeq first = prefix(rep(0), P);
  first.chains.back() = nullptr;
  close_ends(first);
  RepSeq last = suffix(rep(l - 1), P);
  last.chains.front() = nullptr;
  close_ends(last);
  last.shift(2);
  std::vector<RepSeq> mids;
  for (std::size_t j = 0; j + 1 < l; ++j) {
    mids.push_back(sum(rep(j), rep(j + 1), P));
    stretch(mids.back(), P);
  }
  std::vector<char> in_kept(ints_.size(), 0);
  for (int k : kept) in_kept[static_cast<std::size_t>(k)] = 1;
  for (std::size_t k = 0; k < ints_.size(); ++k)
    if (!in_kept[k]) stretch(ints_[k].rep, P);
  ints_[static_cast<std::size_t>(kept[0])].rep = std::move(first);
  for (std::size_t j = 0; j + 1 < l; ++j) ints_[static_cast<std::size_t>(kept[j + 1])].rep = std::move(mids[j]);
  ints_.push_back({fresh_id(), std::move(last)});
}

void PersistenceState::do_ie(int P, SimplexId s) {
  const auto& reg = f_.registry();
  const int p = reg.dim(s);
  std::vector<SimplexId> tags;
  std::vector<SimplexId> wit;
  if (p >= 1) {
    const Complex k = complex_at(f_, P);
    Eliminator e(p - 1);
    for (auto& bw : boundary_basis(reg, k, p - 1))
      e.insert({std::move(bw.boundary.cells), {}, std::move(bw.witness.cells)});
    for (std::size_t j = 0; j < ints_.size(); ++j) {
      const RepSeq& r = ints_[j].rep;
      if (r.dim == p - 1 && r.covers(P))
        require(e.insert({r.z(P)->cells, {static_cast<SimplexId>(j)}, {}}), "inward expansion: dependent cycles");
    }
    Eliminator::Row row{boundary(reg, s).cells, {}, {}};
    e.reduce(row);
    require(row.v.empty(), "inward expansion: cycles at the site do not span homology");
    tags = std::move(row.tags);
    wit = std::move(row.w);
  }
  // w bounds the sum of the tagged cycles once sigma is present
  const ChainPtr w = make_record(Chain{p, xor_sorted(wit, {s})});
  if (tags.empty()) {
    for (auto& t : ints_) stretch(t.rep, P);
    ints_.push_back({fresh_id(), point_rep(p, P + 1, w, nullptr, nullptr)});
    return;
  }
  std::vector<int> lam(tags.begin(), tags.end());
  std::sort(lam.begin(), lam.end(), [&](int a, int b) {
    return birth_order_less(f_, ints_[static_cast<std::size_t>(a)].rep.birth, ints_[static_cast<std::size_t>(b)].rep.birth);
  });
  const std::size_t l = lam.size();
  auto rep = [&](std::size_t j) -> const RepSeq& { return ints_[static_cast<std::size_t>(lam[j])].rep; };
  SumStats st;
  // pre[r] sums prefixes of the first r+1; post[r] sums suffixes of r+1..l-1
  std::vector<RepSeq> pre(l), post(l);
  pre[0] = prefix(rep(0), P);
  for (std::size_t j = 1; j < l; ++j) pre[j] = sum_post_birth(f_, pre[j - 1], prefix(rep(j), P), &st);
  post[l - 1] = RepSeq{};
  if (l >= 2) {
    post[l - 2] = suffix(rep(l - 1), P);
    for (std::size_t j = l - 2; j-- > 0;) post[j] = pre_death_sum(f_, post[j + 1], suffix(rep(j + 1), P), &st);
  }
  RepSeq all_suf = l >= 2 ? pre_death_sum(f_, post[0], suffix(rep(0), P), &st) : suffix(rep(0), P);

  std::vector<std::pair<IntervalId, RepSeq>> out;
  RepSeq top = pre[l - 1];
  top.chains.back() = w;
  close_ends(top);
  out.push_back({ints_[static_cast<std::size_t>(lam[l - 1])].id, std::move(top)});
  RepSeq born = all_suf;
  born.chains.front() = w;
  close_ends(born);
  born.shift(2);
  std::set<int> paired{all_suf.death};
  out.push_back({fresh_id(), std::move(born)});
  for (std::size_t r = 0; r + 1 < l; ++r) {
    const RepSeq& zr = rep(r);
    const IntervalId id = ints_[static_cast<std::size_t>(lam[r])].id;
    if (!paired.count(zr.death)) {
      paired.insert(zr.death);
      RepSeq c = zr;
      stretch(c, P);
      out.push_back({id, std::move(c)});
      continue;
    }
    RepSeq left = pre[r];
    ChainPtr zl = left.z(P);
    left.push_back(zl, empty_chain(p), nullptr);
    RepSeq right = shifted(post[r], 2);
    ChainPtr zrr = right.z(P + 2);
    right.push_front(zrr, empty_chain(p), nullptr);
    paired.insert(post[r].death);
    RepSeq joined = concat(reg, left, right, *w);
    close_ends(joined);
    out.push_back({id, std::move(joined)});
  }
  stats_->cycle_merges += st.cycle_merges;
  stats_->chain_merges += st.chain_merges;
  std::vector<char> in_lam(ints_.size(), 0);
  for (int k : lam) in_lam[static_cast<std::size_t>(k)] = 1;
  std::vector<TrackedInterval> next;
  next.reserve(ints_.size() + 1);
  for (std::size_t k = 0; k < ints_.size(); ++k) {
    if (in_lam[k]) continue;
    stretch(ints_[k].rep, P);
    next.push_back(std::move(ints_[k]));
  }
  for (auto& [id, r] : out) next.push_back({id, std::move(r)});
  ints_ = std::move(next);
}

// ---- contractions ---------------------------------------------------------

void PersistenceState::do_oc(int P) {
  const auto& reg = f_.registry();
  const SimplexId s = f_.step(P - 1).simplex;
  const int p = reg.dim(s);
  const int k0 = find_birth(P);
  if (k0 >= 0) {
    require(ints_[static_cast<std::size_t>(k0)].rep.death == P, "outward contraction: interval born at the pair outlives it");
    ints_.erase(ints_.begin() + k0);
    for (auto& t : ints_) contract_outward(t.rep, P);
    return;
  }
  const int ks = find_death(P - 1), ko = find_birth(P + 1);
  require(ks >= 0 && ko >= 0, "outward contraction: pairing lacks the killed and born intervals");
  RepSeq rs = ints_[static_cast<std::size_t>(ks)].rep;  // [b*, P-1]
  RepSeq ro = ints_[static_cast<std::size_t>(ko)].rep;  // [P+1, d_o]

  Eliminator e(p);
  const Complex k = complex_at(f_, P + 1);
  for (auto& bw : boundary_basis(reg, k, p)) e.insert({std::move(bw.boundary.cells), {}, std::move(bw.witness.cells)});
  for (std::size_t j = 0; j < ints_.size(); ++j) {
    const RepSeq& r = ints_[j].rep;
    if (static_cast<int>(j) != ko && r.dim == p && r.covers(P + 1))
      require(e.insert({r.z(P + 1)->cells, {static_cast<SimplexId>(j)}, {}}), "outward contraction: dependent cycles");
  }
  Eliminator::Row row{xor_sorted(rs.z(P - 1)->cells, ro.z(P + 1)->cells), {}, {}};
  e.reduce(row);
  require(row.v.empty(), "outward contraction: dying cycle not expressible at the far side");
  ChainPtr wit = make_record(Chain{p + 1, row.w});

  // absorb members comparable to either end interval
  std::vector<int> lam(row.tags.begin(), row.tags.end());
  std::sort(lam.begin(), lam.end(), [&](int a, int b) {
    return birth_order_less(f_, ints_[static_cast<std::size_t>(a)].rep.birth, ints_[static_cast<std::size_t>(b)].rep.birth);
  });
  std::vector<int> rest;
  for (int j : lam) {
    const RepSeq& rj = ints_[static_cast<std::size_t>(j)].rep;
    if (birth_order_less(f_, rj.birth, rs.birth)) {
      rs = sum(rs, rj, P - 1);
      wit = csum(wit, csum(rj.c(P - 1), rj.c(P)));
    } else if (death_order_less(f_, rj.death, ro.death)) {
      ro = sum(ro, rj, P + 1);
    } else {
      rest.push_back(j);
    }
  }
  const std::size_t l = rest.size();
  auto rep = [&](std::size_t j) -> const RepSeq& { return ints_[static_cast<std::size_t>(rest[j])].rep; };
  const IntervalId id_s = ints_[static_cast<std::size_t>(ks)].id;

  std::vector<std::pair<IntervalId, RepSeq>> out;
  if (l == 0) {
    RepSeq joined = concat(reg, rs, shifted(ro, -2), *wit);
    out.push_back({id_s, std::move(joined)});
  } else {
    SumStats st;
    // pre[r]: rs plus prefixes of the first r members; post[r]: ro plus suffixes of members r..l-1
    std::vector<RepSeq> pre(l + 1), post(l + 1);
    std::vector<ChainPtr> w(l + 1);
    pre[0] = prefix(rs, P - 1);
    w[0] = wit;
    for (std::size_t j = 0; j < l; ++j) {
      pre[j + 1] = sum_post_birth(f_, pre[j], prefix(rep(j), P - 1), &st);
      w[j + 1] = csum(w[j], csum(rep(j).c(P - 1), rep(j).c(P)));
    }
    post[l] = suffix(ro, P + 1);
    for (std::size_t j = l; j-- > 0;) post[j] = pre_death_sum(f_, post[j + 1], suffix(rep(j), P + 1), &st);
    auto join = [&](std::size_t r) {
      RepSeq j = concat(reg, pre[r], shifted(post[r], -2), *w[r]);
      close_ends(j);
      return j;
    };
    std::set<int> paired{post[0].death, ro.death};
    out.push_back({id_s, join(0)});
    out.push_back({ints_[static_cast<std::size_t>(rest[l - 1])].id, join(l)});
    for (std::size_t r = 0; r + 1 < l; ++r) {
      const IntervalId id = ints_[static_cast<std::size_t>(rest[r])].id;
      if (!paired.count(rep(r).death)) {
        paired.insert(rep(r).death);
        RepSeq c = rep(r);
        contract_outward(c, P);
        out.push_back({id, std::move(c)});
      } else {
        paired.insert(post[r + 1].death);
        out.push_back({id, join(r + 1)});
      }
    }
    stats_->cycle_merges += st.cycle_merges;
    stats_->chain_merges += st.chain_merges;
  }
  std::vector<char> used(ints_.size(), 0);
  used[static_cast<std::size_t>(ks)] = used[static_cast<std::size_t>(ko)] = 1;
  for (int j : rest) used[static_cast<std::size_t>(j)] = 1;
  std::vector<TrackedInterval> next;
  next.reserve(ints_.size());
  for (std::size_t j = 0; j < ints_.size(); ++j) {
    if (used[j]) continue;
    contract_outward(ints_[j].rep, P);
    next.push_back(std::move(ints_[j]));
  }
  for (auto& [id, r] : out) next.push_back({id, std::move(r)});
  ints_ = std::move(next);
}

void PersistenceState::do_ic(int P) {
  const auto& reg = f_.registry();
  const SimplexId s = f_.step(P - 1).simplex;
  const int k0 = find_birth(P);
  if (k0 >= 0) {
    require(ints_[static_cast<std::size_t>(k0)].rep.death == P, "inward contraction: interval born at the pair outlives it");
    const ChainPtr fix = ints_[static_cast<std::size_t>(k0)].rep.z(P);
    ints_.erase(ints_.begin() + k0);
    for (auto& t : ints_) contract_inward(t.rep, P, s, fix);
    return;
  }
  const int ks = find_death(P - 1), ko = find_birth(P + 1);
  require(ks >= 0 && ko >= 0, "inward contraction: pairing lacks the killed and born intervals");
  const RepSeq& rs = ints_[static_cast<std::size_t>(ks)].rep;  // [b*, P-1]
  const RepSeq& ro = ints_[static_cast<std::size_t>(ko)].rep;  // [P+1, d_o]

  std::vector<int> cand;
  for (std::size_t j = 0; j < ints_.size(); ++j) {
    const RepSeq& r = ints_[j].rep;
    if (static_cast<int>(j) != ks && static_cast<int>(j) != ko && r.covers(P) && has(csum(r.c(P - 1), r.c(P)), s))
      cand.push_back(static_cast<int>(j));
  }
  auto sumfn = [this](const RepSeq& a, const RepSeq& b, int i) { return sum(a, b, i); };
  std::vector<int> kept = fold_comparable(f_, ints_, cand, P, sumfn);
  std::vector<int> lam;
  for (int j : kept) {
    RepSeq& rj = ints_[static_cast<std::size_t>(j)].rep;
    if (birth_order_less(f_, rs.birth, rj.birth))
      rj = sum(rs, rj, P - 1);
    else if (death_order_less(f_, ro.death, rj.death))
      rj = sum(ro, rj, P + 1);
    else
      lam.push_back(j);
  }
  const IntervalId id_s = ints_[static_cast<std::size_t>(ks)].id;
  std::vector<std::pair<IntervalId, RepSeq>> out;
  if (lam.empty()) {
    Chain a = chain_add(*rs.death_chain(), *ro.birth_chain());
    out.push_back({id_s, concat(reg, rs, shifted(ro, -2), a)});
  } else {
    const std::size_t l = lam.size();
    auto rep = [&](std::size_t j) -> const RepSeq& { return ints_[static_cast<std::size_t>(lam[j])].rep; };
    for (std::size_t j = 0; j + 1 < l; ++j) {
      RepSeq c = sum(rep(j), rep(j + 1), P);
      contract_inward(c, P, s, nullptr);
      out.push_back({ints_[static_cast<std::size_t>(lam[j + 1])].id, std::move(c)});
    }
    RepSeq a = sum(rs, rep(l - 1), P - 1);
    contract_inward(a, P, s, nullptr);
    out.push_back({id_s, std::move(a)});
    RepSeq b = sum(ro, rep(0), P + 1);
    contract_inward(b, P, s, nullptr);
    out.push_back({ints_[static_cast<std::size_t>(lam[0])].id, std::move(b)});
  }
  std::vector<char> used(ints_.size(), 0);
  used[static_cast<std::size_t>(ks)] = used[static_cast<std::size_t>(ko)] = 1;
  for (int j : lam) used[static_cast<std::size_t>(j)] = 1;
  std::vector<TrackedInterval> next;
  next.reserve(ints_.size());
  for (std::size_t j = 0; j < ints_.size(); ++j) {
    if (used[j]) continue;
    contract_inward(ints_[j].rep, P, s, nullptr);
    next.push_back(std::move(ints_[j]));
  }
  for (auto& [id, r] : out) next.push_back({id, std::move(r)});
  ints_ = std::move(next);
}

}  // namespace zzvine
