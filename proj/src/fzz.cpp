#include "zzvine/fzz.hpp"

#include <algorithm>

#include "zzvine/errors.hpp"

namespace zzvine {

namespace {

void add_into(std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  a.swap(out);
}

bool has(const std::vector<int>& col, int x) { return std::binary_search(col.begin(), col.end(), x); }

// rows k and k+1 trade labels; sortedness survives since they are adjacent
void relabel(std::vector<int>& col, int k) {
  auto it = std::lower_bound(col.begin(), col.end(), k);
  if (it == col.end()) return;
  bool hk = *it == k;
  auto it2 = hk ? it + 1 : it;
  bool hk1 = it2 != col.end() && *it2 == k + 1;
  if (hk && !hk1) *it = k + 1;
  if (!hk && hk1) *it2 = k;
}

struct Phi {
  std::vector<int> phi, phi_inv;
};

Phi canonical_phi(const ZigzagFiltration& f) {
  const int m = f.size();
  int n_add = 0;
  for (const auto& st : f.steps()) n_add += st.dir == Dir::Add;
  const int n_del = m - n_add;
  Phi p;
  p.phi.assign(static_cast<std::size_t>(m), 0);
  p.phi_inv.assign(static_cast<std::size_t>(m), 0);
  int ra = 0, rd = 0;
  for (int j = 0; j < m; ++j) {
    int e = f.step(j).dir == Dir::Add ? ra++ : n_add + (n_del - 1 - rd++);
    p.phi[static_cast<std::size_t>(j)] = e;
    p.phi_inv[static_cast<std::size_t>(e)] = j;
  }
  return p;
}

}  // namespace

DeltaFiltration convert(const ZigzagFiltration& f) {
  require_valid(f);
  const auto& reg = f.registry();
  const int m = f.size();
  DeltaFiltration d;
  auto p = canonical_phi(f);
  d.phi = std::move(p.phi);
  d.phi_inv = std::move(p.phi_inv);

  // pair every addition with its deletion, remember the face occurrences
  std::vector<int> cur_add(reg.size(), -1);
  std::vector<int> del_of(static_cast<std::size_t>(m), -1), add_of(static_cast<std::size_t>(m), -1);
  std::vector<std::vector<int>> face_adds(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const Step& st = f.step(j);
    if (st.dir == Dir::Add) {
      for (SimplexId x : reg.faces(st.simplex)) face_adds[static_cast<std::size_t>(j)].push_back(cur_add[x]);
      cur_add[st.simplex] = j;
    } else {
      int a = cur_add[st.simplex];
      del_of[static_cast<std::size_t>(a)] = j;
      add_of[static_cast<std::size_t>(j)] = a;
    }
  }

  auto pos = [&](int step) { return 1 + d.phi[static_cast<std::size_t>(step)]; };
  d.cells.assign(static_cast<std::size_t>(m + 1), DeltaCell{});
  d.boundaries.assign(static_cast<std::size_t>(m + 1), {});
  for (int j = 0; j < m; ++j) {
    const Step& st = f.step(j);
    const int at = pos(j);
    auto& cell = d.cells[static_cast<std::size_t>(at)];
    auto& bd = d.boundaries[static_cast<std::size_t>(at)];
    cell.simplex = st.simplex;
    if (st.dir == Dir::Add) {
      cell.kind = DeltaCell::Kind::Copy;
      cell.dim = reg.dim(st.simplex);
      for (int fa : face_adds[static_cast<std::size_t>(j)]) bd.push_back(pos(fa));
    } else {
      int a = add_of[static_cast<std::size_t>(j)];
      cell.kind = DeltaCell::Kind::Cone;
      cell.dim = reg.dim(st.simplex) + 1;
      bd.push_back(pos(a));
      if (face_adds[static_cast<std::size_t>(a)].empty()) bd.push_back(0);
      for (int fa : face_adds[static_cast<std::size_t>(a)]) bd.push_back(pos(del_of[static_cast<std::size_t>(fa)]));
    }
    std::sort(bd.begin(), bd.end());
  }
  return d;
}

ReducedMatrix::ReducedMatrix(const std::vector<std::vector<int>>& boundary_columns) {
  for (const auto& col : boundary_columns) append_column(col);
}

void ReducedMatrix::append_column(std::vector<int> boundary) {
  const int j = size();
  std::sort(boundary.begin(), boundary.end());
  require(boundary.empty() || boundary.back() < j, "boundary entry after its column");
  d_.push_back(boundary);
  r_.push_back(std::move(boundary));
  v_.push_back({j});
  low_to_col_.push_back(-1);
  reduce_column(j);
}

void ReducedMatrix::reduce_column(int j) {
  auto& r = r_[static_cast<std::size_t>(j)];
  while (!r.empty()) {
    int owner = low_to_col_[static_cast<std::size_t>(r.back())];
    if (owner == -1) break;
    add_into(r, r_[static_cast<std::size_t>(owner)]);
    add_into(v_[static_cast<std::size_t>(j)], v_[static_cast<std::size_t>(owner)]);
  }
  if (!r.empty()) low_to_col_[static_cast<std::size_t>(r.back())] = j;
}

void ReducedMatrix::pop_back() {
  require(size() > 0, "pop on empty matrix");
  const int j = size() - 1;
  require(low_to_col_[static_cast<std::size_t>(j)] == -1, "popped cell still paired as creator");
  if (low(j) != -1) low_to_col_[static_cast<std::size_t>(low(j))] = -1;
  d_.pop_back();
  r_.pop_back();
  v_.pop_back();
  low_to_col_.pop_back();
}

void ReducedMatrix::swap_rows_everywhere(int k) {
  // D and R columns only hold rows below their index, V up to its index
  for (std::size_t j = static_cast<std::size_t>(k); j < d_.size(); ++j) {
    relabel(d_[j], k);
    relabel(r_[j], k);
    relabel(v_[j], k);
  }
}

void ReducedMatrix::transpose(int k) {
  require(k >= 0 && k + 1 < size(), "transposition out of range");
  const auto i = static_cast<std::size_t>(k);
  if (has(d_[i + 1], k))
    throw Error(ErrorKind::IllegalTransposition, "cell at " + std::to_string(k) + " is a face of the next", k);

  const bool neg_i = !r_[i].empty(), neg_j = !r_[i + 1].empty();
  const bool vij = has(v_[i + 1], k);
  const int kcol = low_to_col_[i], lcol = low_to_col_[i + 1];
  const int touched[4] = {k, k + 1, kcol, lcol};
  for (int c : touched)
    if (c != -1 && low(c) != -1) low_to_col_[static_cast<std::size_t>(low(c))] = -1;

  auto addcol = [&](int src, int dst) {
    add_into(r_[static_cast<std::size_t>(dst)], r_[static_cast<std::size_t>(src)]);
    add_into(v_[static_cast<std::size_t>(dst)], v_[static_cast<std::size_t>(src)]);
  };
  auto prp = [&] {
    swap_rows_everywhere(k);
    std::swap(d_[i], d_[i + 1]);
    std::swap(r_[i], r_[i + 1]);
    std::swap(v_[i], v_[i + 1]);
  };

  if (!neg_i && !neg_j) {
    if (vij) add_into(v_[i + 1], v_[i]);  // R_i is zero, so R is untouched
    if (kcol != -1 && lcol != -1 && has(r_[static_cast<std::size_t>(lcol)], k)) {
      prp();
      if (kcol < lcol)
        addcol(kcol, lcol);
      else
        addcol(lcol, kcol);
    } else {
      prp();
    }
  } else if (neg_i && neg_j) {
    if (vij) {
      bool lower_first = low(k) < low(k + 1);
      addcol(k, k + 1);
      prp();
      if (!lower_first) addcol(k, k + 1);
    } else {
      prp();
    }
  } else if (neg_i && !neg_j) {
    if (vij) {
      addcol(k, k + 1);
      prp();
      addcol(k, k + 1);
    } else {
      prp();
    }
  } else {
    if (vij) add_into(v_[i + 1], v_[i]);
    prp();
  }

  for (int c : touched)
    if (c != -1 && low(c) != -1) low_to_col_[static_cast<std::size_t>(low(c))] = c;
}

std::vector<std::pair<int, int>> ReducedMatrix::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < size(); ++j)
    if (low(j) != -1) out.emplace_back(low(j), j);
  return out;
}

bool ReducedMatrix::consistent() const {
  std::vector<int> seen(static_cast<std::size_t>(size()), -1);
  for (int j = 0; j < size(); ++j) {
    const auto& v = v_[static_cast<std::size_t>(j)];
    if (v.empty() || v.back() != j) return false;
    std::vector<int> dv;
    for (int x : v) add_into(dv, d_[static_cast<std::size_t>(x)]);
    if (dv != r_[static_cast<std::size_t>(j)]) return false;
    int l = low(j);
    if (l != -1) {
      if (seen[static_cast<std::size_t>(l)] != -1) return false;
      seen[static_cast<std::size_t>(l)] = j;
    }
  }
  return seen == low_to_col_;
}

std::vector<std::pair<int, int>> reduce(const DeltaFiltration& d, ReducedMatrix* out) {
  ReducedMatrix mat(d.boundaries);
  std::vector<std::pair<int, int>> pairs;
  for (auto [c, j] : mat.pairs()) pairs.emplace_back(c - 1, j - 1);
  if (out) *out = std::move(mat);
  return pairs;
}

Barcode map_intervals(const ZigzagFiltration& f, const DeltaFiltration& d,
                      const std::vector<std::pair<int, int>>& pairs) {
  const auto& reg = f.registry();
  Barcode out;
  out.reserve(pairs.size());
  for (auto [c, j] : pairs) {
    require(c >= 0, "apex cannot be a finite creator");
    int cf = d.phi_inv[static_cast<std::size_t>(c)];
    int df = d.phi_inv[static_cast<std::size_t>(j)];
    int b = std::min(cf, df) + 1, e = std::max(cf, df);
    // the step right before the birth decides the dimension
    const Step& st = f.step(b - 1);
    int dim = reg.dim(st.simplex) - (st.dir == Dir::Delete ? 1 : 0);
    out.push_back(Bar{dim, b, e});
  }
  sort_barcode(out);
  return out;
}

Barcode barcode_from_scratch(const ZigzagFiltration& f) {
  DeltaFiltration d = convert(f);
  return map_intervals(f, d, reduce(d));
}

FzzState::FzzState(const ZigzagFiltration& f) : f_(f), delta_(convert(f)), mat_(delta_.boundaries) {
  // boundaries live in the matrix from here on
  delta_.boundaries.clear();
}

Barcode FzzState::barcode() const {
  std::vector<std::pair<int, int>> pairs;
  for (auto [c, j] : mat_.pairs()) pairs.emplace_back(c - 1, j - 1);
  return map_intervals(f_, delta_, pairs);
}

void FzzState::transpose(int k) {
  mat_.transpose(k);
  std::swap(delta_.cells[static_cast<std::size_t>(k)], delta_.cells[static_cast<std::size_t>(k + 1)]);
  ++transpositions_;
}

void FzzState::rebuild_phi() {
  auto p = canonical_phi(f_);
  delta_.phi = std::move(p.phi);
  delta_.phi_inv = std::move(p.phi_inv);
}

void FzzState::forward_switch(int i) {
  check_op(f_, Op{OpKind::ForwardSwitch, i, {}});
  const int k = 1 + delta_.phi[static_cast<std::size_t>(i - 1)];
  transpose(k);
  f_.swap_steps(i);
}

void FzzState::backward_switch(int i) {
  check_op(f_, Op{OpKind::BackwardSwitch, i, {}});
  const int k = 1 + delta_.phi[static_cast<std::size_t>(i)];
  transpose(k);
  f_.swap_steps(i);
}

void FzzState::outward_switch(int i) {
  check_op(f_, Op{OpKind::OutwardSwitch, i, {}});
  f_.swap_steps(i);
  rebuild_phi();
}

void FzzState::inward_switch(int i) {
  check_op(f_, Op{OpKind::InwardSwitch, i, {}});
  f_.swap_steps(i);
  rebuild_phi();
}

void FzzState::inward_expansion(int pos, const Vertices& sigma) {
  check_op(f_, Op{OpKind::InwardExpansion, pos, sigma});
  auto& reg = f_.registry();
  const SimplexId s = reg.intern(sigma);
  const int m = f_.size();
  const int M = mat_.size();
  auto at = [&](int step) { return 1 + delta_.phi[static_cast<std::size_t>(step)]; };

  std::vector<int> copy_bd, cone_bd{M};
  for (SimplexId x : reg.faces(s)) {
    int a = pos - 1;
    while (!(f_.step(a).simplex == x && f_.step(a).dir == Dir::Add)) --a;
    int e = pos;
    while (!(f_.step(e).simplex == x && f_.step(e).dir == Dir::Delete)) ++e;
    copy_bd.push_back(at(a));
    cone_bd.push_back(at(e));
  }
  if (copy_bd.empty()) cone_bd.push_back(0);

  int adds_before = 0, dels_after = 0;
  for (int j = 0; j < m; ++j) {
    if (j < pos && f_.step(j).dir == Dir::Add) ++adds_before;
    if (j >= pos && f_.step(j).dir == Dir::Delete) ++dels_after;
  }
  const int n = m / 2;

  mat_.append_column(copy_bd);
  mat_.append_column(cone_bd);
  delta_.cells.push_back(DeltaCell{DeltaCell::Kind::Copy, reg.dim(s), s});
  delta_.cells.push_back(DeltaCell{DeltaCell::Kind::Cone, reg.dim(s) + 1, s});
  for (int k = M - 1; k >= 1 + adds_before; --k) transpose(k);
  for (int k = M; k >= 1 + (n + 1) + dels_after; --k) transpose(k);

  f_.insert_pair(pos, Dir::Add, s);
  rebuild_phi();
}

void FzzState::inward_contraction(int i) {
  check_op(f_, Op{OpKind::InwardContraction, i, {}});
  const int copy = 1 + delta_.phi[static_cast<std::size_t>(i - 1)];
  const int cone = 1 + delta_.phi[static_cast<std::size_t>(i)];
  const int M = mat_.size();
  for (int k = cone; k < M - 1; ++k) transpose(k);
  for (int k = copy; k < M - 2; ++k) transpose(k);
  mat_.pop_back();
  mat_.pop_back();
  delta_.cells.pop_back();
  delta_.cells.pop_back();
  f_.erase_pair(i);
  rebuild_phi();
}

void FzzState::outward_expansion(int pos, const Vertices&) {
  throw Error(ErrorKind::UnsupportedOnFzzPath,
              "outward expansion changes cell adjacency; use the representative engine", pos);
}

void FzzState::outward_contraction(int i) {
  throw Error(ErrorKind::UnsupportedOnFzzPath,
              "outward contraction changes cell adjacency; use the representative engine", i);
}

void FzzState::apply(const Op& op) {
  switch (op.kind) {
    case OpKind::ForwardSwitch: return forward_switch(op.pos);
    case OpKind::BackwardSwitch: return backward_switch(op.pos);
    case OpKind::OutwardSwitch: return outward_switch(op.pos);
    case OpKind::InwardSwitch: return inward_switch(op.pos);
    case OpKind::OutwardExpansion: outward_expansion(op.pos, op.simplex);
    case OpKind::InwardExpansion: return inward_expansion(op.pos, op.simplex);
    case OpKind::OutwardContraction: outward_contraction(op.pos);
    case OpKind::InwardContraction: return inward_contraction(op.pos);
  }
}

}  // namespace zzvine
