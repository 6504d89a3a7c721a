#include "zzvine/filtration.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "zzvine/errors.hpp"

namespace zzvine {

ZigzagFiltration::ZigzagFiltration() : reg_(std::make_shared<SimplexRegistry>()) {}

ZigzagFiltration::ZigzagFiltration(RegistryPtr reg)
    : reg_(reg ? std::move(reg) : std::make_shared<SimplexRegistry>()) {}

void ZigzagFiltration::push(Dir dir, SimplexId s) {
  steps_.push_back(Step{next_id_++, dir, s});
}

void ZigzagFiltration::push(Dir dir, const Vertices& v) { push(dir, reg_->intern(v)); }

void ZigzagFiltration::swap_steps(int i) {
  std::swap(steps_[static_cast<std::size_t>(i - 1)], steps_[static_cast<std::size_t>(i)]);
}

void ZigzagFiltration::insert_pair(int pos, Dir first, SimplexId s) {
  Dir second = first == Dir::Add ? Dir::Delete : Dir::Add;
  auto at = steps_.begin() + pos;
  at = steps_.insert(at, Step{next_id_++, first, s});
  steps_.insert(at + 1, Step{next_id_++, second, s});
}

void ZigzagFiltration::erase_pair(int i) {
  steps_.erase(steps_.begin() + (i - 1), steps_.begin() + (i + 1));
}

std::vector<std::pair<Dir, Vertices>> ZigzagFiltration::signature() const {
  std::vector<std::pair<Dir, Vertices>> out;
  out.reserve(steps_.size());
  for (const auto& s : steps_) out.emplace_back(s.dir, reg_->vertices(s.simplex));
  return out;
}

std::vector<Violation> validate(const ZigzagFiltration& f) {
  std::vector<Violation> out;
  const auto& reg = f.registry();
  std::vector<char> present(reg.size(), 0);
  std::vector<int> cofaces(reg.size(), 0);  // present cofaces one dimension up
  for (int j = 0; j < f.size(); ++j) {
    const Step& st = f.step(j);
    SimplexId s = st.simplex;
    if (st.dir == Dir::Add) {
      if (present[s]) {
        out.push_back({j, "added simplex already present"});
        continue;
      }
      bool ok = true;
      for (SimplexId fc : reg.faces(s))
        if (!present[fc]) ok = false;
      if (!ok) {
        out.push_back({j, "missing faces"});
        continue;
      }
      present[s] = 1;
      for (SimplexId fc : reg.faces(s)) ++cofaces[fc];
    } else {
      if (!present[s]) {
        out.push_back({j, "deleted simplex absent"});
        continue;
      }
      if (cofaces[s] > 0) {
        out.push_back({j, "coface present at delete"});
        continue;
      }
      present[s] = 0;
      for (SimplexId fc : reg.faces(s)) --cofaces[fc];
    }
  }
  if (std::find(present.begin(), present.end(), 1) != present.end())
    out.push_back({f.size(), "non-empty end"});
  if (f.size() % 2 != 0) out.push_back({f.size(), "odd length"});
  return out;
}

void require_valid(const ZigzagFiltration& f) {
  auto v = validate(f);
  if (!v.empty())
    throw Error(ErrorKind::Validation,
                "invalid filtration at " + std::to_string(v.front().position) + ": " +
                    v.front().rule,
                v.front().position);
}

Complex complex_at(const ZigzagFiltration& f, int i) {
  require(i >= 0 && i <= f.size(), "complex_at: position out of range");
  std::vector<char> present(f.registry().size(), 0);
  for (int j = 0; j < i; ++j) present[f.step(j).simplex] = f.step(j).dir == Dir::Add;
  Complex k;
  for (std::size_t s = 0; s < present.size(); ++s)
    if (present[s]) k.simplices.push_back(static_cast<SimplexId>(s));
  return k;
}

Timeline::Timeline(const ZigzagFiltration& f) : toggles_(f.registry().size()) {
  for (int j = 0; j < f.size(); ++j) toggles_[f.step(j).simplex].push_back(j);
}

bool Timeline::contains(SimplexId s, int i) const {
  if (static_cast<std::size_t>(s) >= toggles_.size()) return false;
  const auto& t = toggles_[s];
  // steps before position i touching s; parity says present
  auto n = std::lower_bound(t.begin(), t.end(), i) - t.begin();
  return n % 2 == 1;
}

bool Timeline::contains_chain(const Chain& c, int i) const {
  for (SimplexId s : c.cells)
    if (!contains(s, i)) return false;
  return true;
}

bool birth_order_less(const ZigzagFiltration& f, int b1, int b2) {
  require(b1 != b2, "birth_order_less: equal positions");
  require(b1 >= 1 && b1 < f.size() && b2 >= 1 && b2 < f.size(),
          "birth_order_less: position out of range");
  if (b1 < b2) return f.step(b2 - 1).dir == Dir::Add;
  return f.step(b1 - 1).dir == Dir::Delete;
}

bool death_order_less(const ZigzagFiltration& f, int d1, int d2) {
  require(d1 != d2, "death_order_less: equal positions");
  require(d1 >= 1 && d1 < f.size() && d2 >= 1 && d2 < f.size(),
          "death_order_less: position out of range");
  if (d1 > d2) return f.step(d2).dir == Dir::Delete;
  return f.step(d1).dir == Dir::Add;
}

bool interval_less(const ZigzagFiltration& f, Interval a, Interval b) {
  require(!(a.death < b.birth || b.death < a.birth), "interval_less: disjoint intervals");
  if (a.birth == b.birth && a.death == b.death) return false;
  if (a.birth == b.birth || a.death == b.death) return false;
  return birth_order_less(f, a.birth, b.birth) && death_order_less(f, a.death, b.death);
}

PositionRemap renumber_after_edit(int edit_position, int delta) {
  require(delta == 2 || delta == -2, "renumber_after_edit: delta must be +-2");
  return PositionRemap{edit_position, delta};
}

void sort_barcode(Barcode& b) { std::sort(b.begin(), b.end()); }

std::string format_barcode(const Barcode& b) {
  std::ostringstream os;
  for (const auto& x : b) os << x.dim << ' ' << x.birth << ' ' << x.death << '\n';
  return os.str();
}

ZigzagFiltration parse_filtration(std::istream& in, RegistryPtr reg) {
  ZigzagFiltration f(std::move(reg));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    Dir dir;
    if (tag == "i")
      dir = Dir::Add;
    else if (tag == "d")
      dir = Dir::Delete;
    else
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unknown tag '" + tag + "'",
                  line_no);
    Vertices v;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        int x = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        v.push_back(x);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad vertex '" + tok + "'",
                    line_no);
      }
    }
    if (v.empty())
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": no vertices", line_no);
    try {
      f.push(dir, v);
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  return f;
}

ZigzagFiltration parse_filtration_text(const std::string& text, RegistryPtr reg) {
  std::istringstream in(text);
  return parse_filtration(in, std::move(reg));
}

std::string format_filtration(const ZigzagFiltration& f) {
  std::ostringstream os;
  for (const auto& s : f.steps())
    os << (s.dir == Dir::Add ? 'i' : 'd') << ' ' << f.registry().to_string(s.simplex) << '\n';
  return os.str();
}

const char* op_code(OpKind k) {
  switch (k) {
    case OpKind::ForwardSwitch: return "fs";
    case OpKind::BackwardSwitch: return "bs";
    case OpKind::OutwardSwitch: return "os";
    case OpKind::InwardSwitch: return "is";
    case OpKind::OutwardExpansion: return "oe";
    case OpKind::InwardExpansion: return "ie";
    case OpKind::OutwardContraction: return "oc";
    case OpKind::InwardContraction: return "ic";
  }
  return "?";
}

Op parse_op(const std::string& line, int line_no) {
  auto fail = [&](const std::string& why) {
    std::string where = line_no >= 0 ? "line " + std::to_string(line_no) + ": " : "";
    throw Error(ErrorKind::Parse, where + why, line_no);
  };
  std::istringstream ls(line);
  std::string code;
  if (!(ls >> code)) fail("empty op");
  Op op;
  static const std::pair<const char*, OpKind> table[] = {
      {"fs", OpKind::ForwardSwitch},      {"bs", OpKind::BackwardSwitch},
      {"os", OpKind::OutwardSwitch},      {"is", OpKind::InwardSwitch},
      {"oe", OpKind::OutwardExpansion},   {"ie", OpKind::InwardExpansion},
      {"oc", OpKind::OutwardContraction}, {"ic", OpKind::InwardContraction}};
  bool found = false;
  for (const auto& [c, k] : table)
    if (code == c) {
      op.kind = k;
      found = true;
    }
  if (!found) fail("unknown op '" + code + "'");
  if (!(ls >> op.pos)) fail("missing position");
  int v;
  while (ls >> v) op.simplex.push_back(v);
  if (!ls.eof()) fail("bad vertex");
  bool expansion = op.kind == OpKind::OutwardExpansion || op.kind == OpKind::InwardExpansion;
  if (expansion && op.simplex.empty()) fail("expansion needs a simplex");
  if (!expansion && !op.simplex.empty()) fail("unexpected vertices");
  return op;
}

std::vector<Op> parse_script(std::istream& in) {
  std::vector<Op> ops;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ops.push_back(parse_op(line, line_no));
  }
  return ops;
}

std::string format_op(const Op& op) {
  std::string s = std::string(op_code(op.kind)) + " " + std::to_string(op.pos);
  if (op.kind == OpKind::OutwardExpansion || op.kind == OpKind::InwardExpansion)
    for (int v : op.simplex) s += " " + std::to_string(v);
  return s;
}

std::string format_script(const std::vector<Op>& ops) {
  std::string out;
  for (const auto& op : ops) out += format_op(op) + "\n";
  return out;
}

namespace {

void check_pair_pos(const ZigzagFiltration& f, int p, ErrorKind kind) {
  if (p < 1 || p > f.size() - 1)
    throw Error(kind, "position " + std::to_string(p) + " out of range", p);
}

}  // namespace

void check_op(const ZigzagFiltration& f, const Op& op) {
  const auto& reg = f.registry();
  const int P = op.pos;
  switch (op.kind) {
    case OpKind::ForwardSwitch:
    case OpKind::BackwardSwitch:
    case OpKind::OutwardSwitch:
    case OpKind::InwardSwitch: {
      check_pair_pos(f, P, ErrorKind::ContractViolation);
      const Step& a = f.step(P - 1);
      const Step& b = f.step(P);
      Dir da = Dir::Add, db = Dir::Add;
      if (op.kind == OpKind::BackwardSwitch) da = db = Dir::Delete;
      if (op.kind == OpKind::OutwardSwitch) db = Dir::Delete;
      if (op.kind == OpKind::InwardSwitch) da = Dir::Delete;
      if (a.dir != da || b.dir != db)
        throw Error(ErrorKind::ContractViolation,
                    std::string(op_code(op.kind)) + ": wrong step directions at " + std::to_string(P), P);
      bool bad = false;
      if (op.kind == OpKind::ForwardSwitch) bad = reg.is_face_of(a.simplex, b.simplex);
      if (op.kind == OpKind::BackwardSwitch) bad = reg.is_face_of(b.simplex, a.simplex);
      if (op.kind == OpKind::OutwardSwitch || op.kind == OpKind::InwardSwitch)
        bad = a.simplex == b.simplex;
      if (bad)
        throw Error(ErrorKind::IllegalSwitch,
                    std::string(op_code(op.kind)) + " at " + std::to_string(P) + " breaks the complexes", P);
      return;
    }
    case OpKind::OutwardExpansion:
    case OpKind::InwardExpansion: {
      if (P < 0 || P > f.size())
        throw Error(ErrorKind::IllegalExpansion, "position " + std::to_string(P) + " out of range", P);
      auto sid = reg.find(op.simplex);
      Complex k = complex_at(f, P);
      bool present = sid && k.contains(*sid);
      if (op.kind == OpKind::OutwardExpansion) {
        if (!present) throw Error(ErrorKind::IllegalExpansion, "simplex absent at " + std::to_string(P), P);
        for (SimplexId t : k.simplices)
          if (t != *sid && reg.dim(t) == reg.dim(*sid) + 1 && reg.is_face_of(*sid, t))
            throw Error(ErrorKind::IllegalExpansion, "simplex has a coface at " + std::to_string(P), P);
      } else {
        if (present) throw Error(ErrorKind::IllegalExpansion, "simplex present at " + std::to_string(P), P);
        // faces: check by vertex lists so a never-seen simplex is fine
        const auto& v = op.simplex;
        for (std::size_t x = 0; x < v.size(); ++x)
          require(v[x] >= 0 && (x == 0 || v[x - 1] < v[x]), "simplex vertices must be strictly increasing");
        if (v.size() > 1)
          for (std::size_t x = 0; x < v.size(); ++x) {
            Vertices fv;
            for (std::size_t y = 0; y < v.size(); ++y)
              if (y != x) fv.push_back(v[y]);
            auto fid = reg.find(fv);
            if (!fid || !k.contains(*fid))
              throw Error(ErrorKind::IllegalExpansion, "missing face at " + std::to_string(P), P);
          }
      }
      return;
    }
    case OpKind::OutwardContraction:
    case OpKind::InwardContraction: {
      check_pair_pos(f, P, ErrorKind::IllegalContraction);
      const Step& a = f.step(P - 1);
      const Step& b = f.step(P);
      Dir da = op.kind == OpKind::OutwardContraction ? Dir::Delete : Dir::Add;
      Dir db = da == Dir::Add ? Dir::Delete : Dir::Add;
      if (a.dir != da || b.dir != db || a.simplex != b.simplex)
        throw Error(ErrorKind::IllegalContraction,
                    std::string(op_code(op.kind)) + ": steps at " + std::to_string(P) +
                        " are not a matching pair",
                    P);
      return;
    }
  }
}

void apply_op(ZigzagFiltration& f, const Op& op) {
  check_op(f, op);
  switch (op.kind) {
    case OpKind::ForwardSwitch:
    case OpKind::BackwardSwitch:
    case OpKind::OutwardSwitch:
    case OpKind::InwardSwitch:
      f.swap_steps(op.pos);
      return;
    case OpKind::OutwardExpansion:
      f.insert_pair(op.pos, Dir::Delete, f.registry().intern(op.simplex));
      return;
    case OpKind::InwardExpansion:
      f.insert_pair(op.pos, Dir::Add, f.registry().intern(op.simplex));
      return;
    case OpKind::OutwardContraction:
    case OpKind::InwardContraction:
      f.erase_pair(op.pos);
      return;
  }
}

Op inverse_op(const ZigzagFiltration& f, const Op& op) {
  switch (op.kind) {
    case OpKind::ForwardSwitch:
    case OpKind::BackwardSwitch:
      return Op{op.kind, op.pos, {}};
    case OpKind::OutwardSwitch:
      return Op{OpKind::InwardSwitch, op.pos, {}};
    case OpKind::InwardSwitch:
      return Op{OpKind::OutwardSwitch, op.pos, {}};
    case OpKind::OutwardExpansion:
      return Op{OpKind::OutwardContraction, op.pos + 1, {}};
    case OpKind::InwardExpansion:
      return Op{OpKind::InwardContraction, op.pos + 1, {}};
    case OpKind::OutwardContraction:
      return Op{OpKind::OutwardExpansion, op.pos - 1,
                f.registry().vertices(f.step(op.pos).simplex)};
    case OpKind::InwardContraction:
      return Op{OpKind::InwardExpansion, op.pos - 1,
                f.registry().vertices(f.step(op.pos).simplex)};
  }
  return op;
}

}  // namespace zzvine
