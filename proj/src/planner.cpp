#include "zzvine/planner.hpp"

#include <algorithm>

#include "zzvine/errors.hpp"

namespace zzvine {

namespace {

bool in_complex(const SimplexRegistry& reg, const Complex& k, const Vertices& v) {
  auto id = reg.find(v);
  return id && k.contains(*id);
}

bool faces_present(const SimplexRegistry& reg, const Complex& k, const Vertices& v) {
  if (v.size() == 1) return true;
  for (std::size_t x = 0; x < v.size(); ++x) {
    Vertices fv;
    for (std::size_t y = 0; y < v.size(); ++y)
      if (y != x) fv.push_back(v[y]);
    if (!in_complex(reg, k, fv)) return false;
  }
  return true;
}

bool has_coface(const SimplexRegistry& reg, const Complex& k, SimplexId s) {
  for (SimplexId t : k.simplices)
    if (reg.dim(t) == reg.dim(s) + 1 && reg.is_face_of(s, t)) return true;
  return false;
}

// all vertex subsets of the pool up to max_dim, smallest first
std::vector<Vertices> pool_simplices(const RandomOptions& opt) {
  std::vector<Vertices> out;
  std::vector<Vertices> layer;
  for (int v = 0; v < opt.vertices; ++v) layer.push_back({v});
  for (int d = 0; d <= opt.max_dim && !layer.empty(); ++d) {
    out.insert(out.end(), layer.begin(), layer.end());
    std::vector<Vertices> next;
    for (const auto& s : layer)
      for (int v = s.back() + 1; v < opt.vertices; ++v) {
        Vertices t = s;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    layer = std::move(next);
  }
  return out;
}

void apply_and_record(ZigzagFiltration& g, std::vector<Op>& ops, Op op) {
  apply_op(g, op);
  ops.push_back(std::move(op));
}

std::vector<Op> legal_ops_at(const ZigzagFiltration& f, int P, const RandomOptions& opt,
                             const std::vector<Vertices>& pool) {
  std::vector<Op> out;
  const auto& reg = f.registry();
  const int m = f.size();
  if (P >= 1 && P <= m - 1) {
    const Step& a = f.step(P - 1);
    const Step& b = f.step(P);
    if (a.dir == Dir::Add && b.dir == Dir::Add && !reg.is_face_of(a.simplex, b.simplex))
      out.push_back({OpKind::ForwardSwitch, P, {}});
    if (a.dir == Dir::Delete && b.dir == Dir::Delete && !reg.is_face_of(b.simplex, a.simplex))
      out.push_back({OpKind::BackwardSwitch, P, {}});
    if (a.dir == Dir::Add && b.dir == Dir::Delete) {
      if (a.simplex != b.simplex)
        out.push_back({OpKind::OutwardSwitch, P, {}});
      else
        out.push_back({OpKind::InwardContraction, P, {}});
    }
    if (a.dir == Dir::Delete && b.dir == Dir::Add) {
      if (a.simplex != b.simplex)
        out.push_back({OpKind::InwardSwitch, P, {}});
      else
        out.push_back({OpKind::OutwardContraction, P, {}});
    }
  }
  if (m + 2 <= opt.max_length) {
    Complex k = complex_at(f, P);
    for (SimplexId s : k.simplices)
      if (!has_coface(reg, k, s)) out.push_back({OpKind::OutwardExpansion, P, reg.vertices(s)});
    if (static_cast<int>(k.simplices.size()) < opt.max_complex)
      for (const auto& v : pool)
        if (!in_complex(reg, k, v) && faces_present(reg, k, v))
          out.push_back({OpKind::InwardExpansion, P, v});
  }
  return out;
}

}  // namespace

ZigzagFiltration random_filtration(std::mt19937_64& rng, const RandomOptions& opt, RegistryPtr reg) {
  ZigzagFiltration f(std::move(reg));
  auto& r = f.registry();
  const auto pool = pool_simplices(opt);
  const int len = 2 * std::uniform_int_distribution<int>(0, opt.max_length / 2)(rng);
  std::vector<SimplexId> alive;
  auto alive_has = [&](const Vertices& v) {
    auto id = r.find(v);
    return id && std::find(alive.begin(), alive.end(), *id) != alive.end();
  };
  auto deletable = [&]() {
    std::vector<SimplexId> out;
    for (SimplexId s : alive) {
      bool free = true;
      for (SimplexId t : alive)
        if (t != s && r.dim(t) == r.dim(s) + 1 && r.is_face_of(s, t)) free = false;
      if (free) out.push_back(s);
    }
    return out;
  };
  for (int j = 0; j < len; ++j) {
    const int left = len - j;
    std::vector<Vertices> addable;
    // adding needs room to delete everything afterwards
    if (static_cast<int>(alive.size()) < opt.max_complex && static_cast<int>(alive.size()) + 2 <= left)
      for (const auto& v : pool) {
        if (alive_has(v)) continue;
        bool ok = true;
        if (v.size() > 1)
          for (std::size_t x = 0; x < v.size() && ok; ++x) {
            Vertices fv;
            for (std::size_t y = 0; y < v.size(); ++y)
              if (y != x) fv.push_back(v[y]);
            ok = alive_has(fv);
          }
        if (ok) addable.push_back(v);
      }
    auto dels = deletable();
    bool must_delete = static_cast<int>(alive.size()) >= left;
    bool do_add = !addable.empty() && (dels.empty() || (!must_delete && std::bernoulli_distribution(0.55)(rng)));
    if (!do_add && dels.empty()) break;  // nothing to delete and no room to add
    if (do_add) {
      const auto& v = addable[std::uniform_int_distribution<std::size_t>(0, addable.size() - 1)(rng)];
      SimplexId s = r.intern(v);
      f.push(Dir::Add, s);
      alive.push_back(s);
    } else {
      SimplexId s = dels[std::uniform_int_distribution<std::size_t>(0, dels.size() - 1)(rng)];
      f.push(Dir::Delete, s);
      alive.erase(std::find(alive.begin(), alive.end(), s));
    }
  }
  require(alive.empty(), "random filtration did not end empty");
  return f;
}

std::vector<Op> reduce_to_empty(const ZigzagFiltration& f) {
  require_valid(f);
  ZigzagFiltration g = f;
  std::vector<Op> ops;
  // phase 1: push additions before deletions until the filtration is up-down
  for (;;) {
    int j = 1;
    while (j < g.size() && !(g.step(j - 1).dir == Dir::Delete && g.step(j).dir == Dir::Add)) ++j;
    if (j >= g.size()) break;
    OpKind k = g.step(j - 1).simplex == g.step(j).simplex ? OpKind::OutwardContraction : OpKind::InwardSwitch;
    apply_and_record(g, ops, Op{k, j, {}});
  }
  // phase 2: take out the last addition with its deletion
  while (g.size() > 0) {
    const int n = g.size() / 2;
    const SimplexId s = g.step(n - 1).simplex;
    int e = n;
    while (g.step(e).simplex != s) ++e;
    for (; e > n; --e) apply_and_record(g, ops, Op{OpKind::BackwardSwitch, e, {}});
    apply_and_record(g, ops, Op{OpKind::InwardContraction, n, {}});
  }
  return ops;
}

std::vector<Op> invert_script(const ZigzagFiltration& f, const std::vector<Op>& ops) {
  ZigzagFiltration g = f;
  std::vector<Op> inv;
  inv.reserve(ops.size());
  for (const auto& op : ops) {
    inv.push_back(inverse_op(g, op));
    apply_op(g, op);
  }
  std::reverse(inv.begin(), inv.end());
  return inv;
}

std::vector<Op> transform(const ZigzagFiltration& f1, const ZigzagFiltration& f2) {
  std::vector<Op> out = reduce_to_empty(f1);
  std::vector<Op> back = invert_script(f2, reduce_to_empty(f2));
  out.insert(out.end(), back.begin(), back.end());
  return out;
}

std::vector<Op> legal_ops(const ZigzagFiltration& f, const RandomOptions& opt) {
  const auto pool = pool_simplices(opt);
  std::vector<Op> out;
  for (int P = 0; P <= f.size(); ++P) {
    auto at = legal_ops_at(f, P, opt, pool);
    out.insert(out.end(), at.begin(), at.end());
  }
  return out;
}

std::vector<Op> random_script(const ZigzagFiltration& f, int k, std::uint64_t seed, const RandomOptions& opt) {
  std::mt19937_64 rng(seed);
  const auto pool = pool_simplices(opt);
  ZigzagFiltration g = f;
  std::vector<Op> ops;
  for (int n = 0; n < k; ++n) {
    std::vector<Op> cands;
    for (int tries = 0; tries < 8 && cands.empty(); ++tries) {
      int P = std::uniform_int_distribution<int>(0, g.size())(rng);
      cands = legal_ops_at(g, P, opt, pool);
    }
    if (cands.empty()) cands = legal_ops(g, opt);
    if (cands.empty()) throw Error(ErrorKind::Exhausted, "no legal operation left", n);
    Op op = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
    apply_and_record(g, ops, std::move(op));
  }
  return ops;
}

}  // namespace zzvine
