#include "zzvine/reps.hpp"

#include <array>
#include <sstream>

#include "zzvine/errors.hpp"

namespace zzvine {

namespace {
constexpr int kMaxCachedDim = 32;
}

ChainPtr empty_chain(int dim) {
  static const std::array<ChainPtr, kMaxCachedDim> cache = [] {
    std::array<ChainPtr, kMaxCachedDim> a;
    for (int d = 0; d < kMaxCachedDim; ++d) a[static_cast<std::size_t>(d)] = std::make_shared<const Chain>(Chain{d, {}});
    return a;
  }();
  if (dim >= 0 && dim < kMaxCachedDim) return cache[static_cast<std::size_t>(dim)];
  return std::make_shared<const Chain>(Chain{dim, {}});
}

ChainPtr make_record(Chain c) {
  if (c.empty()) return empty_chain(c.dim);
  return std::make_shared<const Chain>(std::move(c));
}

ChainPtr single_simplex(int dim, SimplexId s) { return make_record(Chain{dim, {s}}); }

ChainPtr add(const ChainPtr& a, const ChainPtr& b, std::size_t* merges) {
  if (!a || !b) return nullptr;
  if (a->empty() && a->dim == b->dim) return b;
  if (b->empty() && a->dim == b->dim) return a;
  if (a == b) return empty_chain(a->dim);
  if (merges) ++*merges;
  return make_record(chain_add(*a, *b));
}

void RepSeq::drop_first() {
  require(birth < death, "drop_first on a single-index representative");
  cycles.erase(cycles.begin());
  chains.erase(chains.begin());
  ++birth;
}

void RepSeq::drop_last() {
  require(birth < death, "drop_last on a single-index representative");
  cycles.pop_back();
  chains.pop_back();
  --death;
}

void RepSeq::push_front(ChainPtr zz, ChainPtr between, ChainPtr bc) {
  cycles.insert(cycles.begin(), std::move(zz));
  chains.front() = std::move(between);
  chains.insert(chains.begin(), std::move(bc));
  --birth;
}

void RepSeq::push_back(ChainPtr zz, ChainPtr between, ChainPtr dc) {
  cycles.push_back(std::move(zz));
  chains.back() = std::move(between);
  chains.push_back(std::move(dc));
  ++death;
}

std::size_t RepSeq::cycle_records() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < cycles.size(); ++k)
    if (k == 0 || cycles[k] != cycles[k - 1]) ++n;
  return n;
}

RepSeq point_rep(int dim, int i, ChainPtr z, ChainPtr bc, ChainPtr dc) {
  RepSeq r;
  r.dim = dim;
  r.birth = r.death = i;
  r.cycles = {std::move(z)};
  r.chains = {std::move(bc), std::move(dc)};
  return r;
}

std::optional<RepViolation> validate_rep(const ZigzagFiltration& f, const RepSeq& r,
                                         const Timeline* tl) {
  std::optional<Timeline> own;
  if (!tl) {
    own.emplace(f);
    tl = &*own;
  }
  const auto& reg = f.registry();
  const int m = f.size();
  const int p = r.dim;
  auto bad = [](int i, std::string rule) { return RepViolation{i, std::move(rule)}; };
  if (r.birth < 1 || r.death > m - 1 || r.birth > r.death) return bad(r.birth, "interval out of range");
  if (r.cycles.size() != static_cast<std::size_t>(r.length()) ||
      r.chains.size() != static_cast<std::size_t>(r.length() + 1))
    return bad(r.birth, "sequence length");
  for (int i = r.birth; i <= r.death; ++i) {
    const auto& z = r.z(i);
    if (!z) return bad(i, "missing cycle");
    if (z->dim != p) return bad(i, "cycle dimension");
    if (!tl->contains_chain(*z, i)) return bad(i, "cycle not contained in complex");
    if (!is_cycle(reg, *z)) return bad(i, "not a cycle");
  }
  for (int i = r.birth; i < r.death; ++i) {
    const auto& c = r.c(i);
    if (!c) return bad(i, "undefined junction chain");
    if (c->dim != p + 1) return bad(i, "chain dimension");
    int host = f.step(i).dir == Dir::Add ? i + 1 : i;
    if (!tl->contains_chain(*c, host)) return bad(i, "chain not contained in complex");
    Chain zz = chain_add(*r.z(i), *r.z(i + 1));
    if (!(chain_boundary(reg, *c) == zz)) return bad(i, "boundary relation");
  }
  if (!r.open_birth) {
    int j = r.birth - 1;
    const Step& st = f.step(j);
    const auto& c = r.birth_chain();
    if (st.dir == Dir::Add) {
      if (c) return bad(j, "birth chain should be undefined");
      if (!r.z(r.birth)->contains(st.simplex)) return bad(r.birth, "birth condition");
    } else {
      if (!c) return bad(j, "birth chain undefined");
      if (c->dim != p + 1 || !c->contains(st.simplex)) return bad(j, "birth condition");
      if (!tl->contains_chain(*c, j)) return bad(j, "birth chain not contained in complex");
      if (!(chain_boundary(reg, *c) == *r.z(r.birth))) return bad(j, "birth boundary");
    }
  }
  if (!r.open_death) {
    int j = r.death;
    const Step& st = f.step(j);
    const auto& c = r.death_chain();
    if (st.dir == Dir::Delete) {
      if (c) return bad(j, "death chain should be undefined");
      if (!r.z(r.death)->contains(st.simplex)) return bad(j, "death condition");
    } else {
      if (!c) return bad(j, "death chain undefined");
      if (c->dim != p + 1 || !c->contains(st.simplex)) return bad(j, "death condition");
      if (!tl->contains_chain(*c, j + 1)) return bad(j, "death chain not contained in complex");
      if (!(chain_boundary(reg, *c) == *r.z(r.death))) return bad(j, "death boundary");
    }
  }
  return std::nullopt;
}

RepSeq prefix(const RepSeq& r, int i) {
  require(r.covers(i), "prefix: index outside interval");
  RepSeq out;
  out.dim = r.dim;
  out.birth = r.birth;
  out.death = i;
  out.cycles.assign(r.cycles.begin(), r.cycles.begin() + (i - r.birth + 1));
  out.chains.assign(r.chains.begin(), r.chains.begin() + (i - r.birth + 1));
  out.chains.push_back(nullptr);
  out.open_birth = r.open_birth;
  out.open_death = true;
  return out;
}

RepSeq suffix(const RepSeq& r, int i) {
  require(r.covers(i), "suffix: index outside interval");
  RepSeq out;
  out.dim = r.dim;
  out.birth = i;
  out.death = r.death;
  out.cycles.assign(r.cycles.begin() + (i - r.birth), r.cycles.end());
  out.chains.push_back(nullptr);
  out.chains.insert(out.chains.end(), r.chains.begin() + (i - r.birth + 1), r.chains.end());
  out.open_birth = true;
  out.open_death = r.open_death;
  return out;
}

namespace {

// Pointwise sums over [lo, hi] of cycles, reusing the previous result when
// both inputs repeat a record.
void sum_cycles(const RepSeq& a, const RepSeq& b, int lo, int hi, std::vector<ChainPtr>& out,
                SumStats* st) {
  ChainPtr pa, pb, pr;
  for (int k = lo; k <= hi; ++k) {
    const ChainPtr& x = a.z(k);
    const ChainPtr& y = b.z(k);
    if (k > lo && x == pa && y == pb) {
      out.push_back(pr);
      continue;
    }
    pr = add(x, y, st ? &st->cycle_merges : nullptr);
    pa = x;
    pb = y;
    out.push_back(pr);
  }
}

ChainPtr sum_chain(const ChainPtr& x, const ChainPtr& y, SumStats* st) {
  return add(x, y, st ? &st->chain_merges : nullptr);
}

}  // namespace

RepSeq sum_post_birth(const ZigzagFiltration& f, const RepSeq& r1, const RepSeq& r2,
                      SumStats* st) {
  require(r1.dim == r2.dim, "sum_post_birth: dimension mismatch");
  require(r1.death == r2.death, "sum_post_birth: different end index");
  require(birth_order_less(f, r1.birth, r2.birth), "sum_post_birth: needs b1 before b2 in birth order");
  const int b1 = r1.birth, b2 = r2.birth, i = r1.death;
  RepSeq out;
  out.dim = r1.dim;
  out.birth = b2;
  out.death = i;
  out.open_birth = r2.open_birth;
  out.open_death = true;
  out.cycles.reserve(static_cast<std::size_t>(i - b2 + 1));
  out.chains.reserve(static_cast<std::size_t>(i - b2 + 2));
  if (b1 < b2) {
    out.chains.push_back(r2.birth_chain());
    sum_cycles(r1, r2, b2, i, out.cycles, st);
    for (int k = b2; k < i; ++k) out.chains.push_back(sum_chain(r1.c(k), r2.c(k), st));
  } else {
    for (int k = b2; k < b1; ++k) out.cycles.push_back(r2.z(k));
    for (int k = b2 - 1; k < b1 - 1; ++k) out.chains.push_back(r2.c(k));
    out.chains.push_back(sum_chain(r1.c(b1 - 1), r2.c(b1 - 1), st));
    sum_cycles(r1, r2, b1, i, out.cycles, st);
    for (int k = b1; k < i; ++k) out.chains.push_back(sum_chain(r1.c(k), r2.c(k), st));
  }
  out.chains.push_back(nullptr);
  return out;
}

RepSeq sum_pre_death(const ZigzagFiltration& f, const RepSeq& r1, const RepSeq& r2,
                     SumStats* st) {
  require(r1.dim == r2.dim, "sum_pre_death: dimension mismatch");
  require(r1.birth == r2.birth, "sum_pre_death: different start index");
  require(death_order_less(f, r1.death, r2.death), "sum_pre_death: needs d1 before d2 in death order");
  const int d1 = r1.death, d2 = r2.death, i = r1.birth;
  RepSeq out;
  out.dim = r1.dim;
  out.birth = i;
  out.death = d2;
  out.open_birth = true;
  out.open_death = r2.open_death;
  out.chains.push_back(nullptr);
  if (d1 > d2) {
    sum_cycles(r1, r2, i, d2, out.cycles, st);
    for (int k = i; k < d2; ++k) out.chains.push_back(sum_chain(r1.c(k), r2.c(k), st));
    out.chains.push_back(r2.death_chain());
  } else {
    sum_cycles(r1, r2, i, d1, out.cycles, st);
    for (int k = i; k < d1; ++k) out.chains.push_back(sum_chain(r1.c(k), r2.c(k), st));
    out.chains.push_back(sum_chain(r1.c(d1), r2.c(d1), st));
    for (int k = d1 + 1; k <= d2; ++k) out.cycles.push_back(r2.z(k));
    for (int k = d1 + 1; k <= d2; ++k) out.chains.push_back(r2.c(k));
  }
  return out;
}

RepSeq concat(const SimplexRegistry& reg, const RepSeq& r1, const RepSeq& r2, const Chain& a,
              const Timeline* tl) {
  require(r1.dim == r2.dim, "concat: dimension mismatch");
  require(r1.death == r2.birth, "concat: sequences do not meet");
  const int i = r2.birth;
  Chain zz = chain_add(*r1.z(i), *r2.z(i));
  if (a.empty()) {
    require(zz.empty(), "concat: cycles differ and witness is empty");
  } else {
    require(a.dim == r1.dim + 1, "concat: witness dimension");
    require(chain_boundary(reg, a) == zz, "concat: witness boundary mismatch");
  }
  if (tl) require(tl->contains_chain(a, i), "concat: witness not in complex");
  RepSeq out;
  out.dim = r1.dim;
  out.birth = r1.birth;
  out.death = r2.death;
  out.open_birth = r1.open_birth;
  out.open_death = r2.open_death;
  out.cycles.assign(r1.cycles.begin(), r1.cycles.end() - 1);
  out.cycles.insert(out.cycles.end(), r2.cycles.begin(), r2.cycles.end());
  out.chains.assign(r1.chains.begin(), r1.chains.end() - 2);
  ChainPtr j = r1.chains[r1.chains.size() - 2];
  out.chains.push_back(a.empty() ? j : add(j, make_record(a)));
  out.chains.insert(out.chains.end(), r2.chains.begin() + 1, r2.chains.end());
  return out;
}

RepSeq rep_sum(const ZigzagFiltration& f, const RepSeq& r1, const RepSeq& r2, int i, SumStats* st,
               bool* comparable) {
  require(r1.covers(i) && r2.covers(i), "rep_sum: index not common to both intervals");
  require(r1.dim == r2.dim, "rep_sum: dimension mismatch");
  bool b12 = birth_order_less(f, r1.birth, r2.birth);
  bool d12 = death_order_less(f, r1.death, r2.death);
  if (comparable) *comparable = b12 == d12;
  RepSeq pre = b12 ? sum_post_birth(f, prefix(r1, i), prefix(r2, i), st)
                   : sum_post_birth(f, prefix(r2, i), prefix(r1, i), st);
  RepSeq suf = d12 ? sum_pre_death(f, suffix(r1, i), suffix(r2, i), st)
                   : sum_pre_death(f, suffix(r2, i), suffix(r1, i), st);
  return concat(f.registry(), pre, suf, Chain{r1.dim + 1, {}});
}

std::string dump_rep(const SimplexRegistry& reg, const RepSeq& r) {
  std::ostringstream os;
  auto chain_text = [&](const ChainPtr& c) { return c ? format_chain(reg, *c) : std::string("UNDEF"); };
  os << "# dim " << r.dim << " [" << r.birth << ',' << r.death << "]\n";
  os << r.birth - 1 << " : z = - ; c = " << chain_text(r.birth_chain()) << '\n';
  for (int i = r.birth; i <= r.death; ++i)
    os << i << " : z = " << format_chain(reg, *r.z(i)) << " ; c = " << chain_text(r.c(i)) << '\n';
  return os.str();
}

}  // namespace zzvine
