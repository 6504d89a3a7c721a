#include "zzvine/chains.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "zzvine/errors.hpp"

namespace zzvine {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ContractViolation: return "ContractViolation";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::IllegalSwitch: return "IllegalSwitch";
    case ErrorKind::IllegalExpansion: return "IllegalExpansion";
    case ErrorKind::IllegalContraction: return "IllegalContraction";
    case ErrorKind::IllegalTransposition: return "IllegalTransposition";
    case ErrorKind::UnsupportedOnFzzPath: return "UnsupportedOnFzzPath";
    case ErrorKind::Exhausted: return "Exhausted";
  }
  return "Error";
}

std::size_t SimplexRegistry::Hash::operator()(const Vertices& v) const {
  std::size_t h = v.size();
  for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x);
  return h;
}

SimplexId SimplexRegistry::intern(const Vertices& v) {
  if (auto it = index_.find(v); it != index_.end()) return it->second;
  require(!v.empty(), "simplex needs at least one vertex");
  for (std::size_t k = 0; k < v.size(); ++k) {
    require(v[k] >= 0, "vertex ids must be non-negative");
    require(k == 0 || v[k - 1] < v[k], "simplex vertices must be strictly increasing");
  }
  std::vector<SimplexId> fs;
  if (v.size() > 1) {
    fs.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      Vertices f;
      f.reserve(v.size() - 1);
      for (std::size_t j = 0; j < v.size(); ++j)
        if (j != k) f.push_back(v[j]);
      fs.push_back(intern(f));
    }
    std::sort(fs.begin(), fs.end());
  }
  auto id = static_cast<SimplexId>(verts_.size());
  verts_.push_back(v);
  faces_.push_back(std::move(fs));
  index_.emplace(v, id);
  return id;
}

std::optional<SimplexId> SimplexRegistry::find(const Vertices& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool SimplexRegistry::is_face_of(SimplexId a, SimplexId b) const {
  const auto& va = verts_[a];
  const auto& vb = verts_[b];
  return std::includes(vb.begin(), vb.end(), va.begin(), va.end());
}

std::string SimplexRegistry::to_string(SimplexId s) const {
  std::string out;
  for (int x : verts_[s]) {
    if (!out.empty()) out += ' ';
    out += std::to_string(x);
  }
  return out;
}

bool Chain::contains(SimplexId s) const {
  return std::binary_search(cells.begin(), cells.end(), s);
}

Chain make_chain(int dim, std::vector<SimplexId> cells) {
  std::sort(cells.begin(), cells.end());
  // Z2: pairs cancel
  std::vector<SimplexId> out;
  for (std::size_t k = 0; k < cells.size();) {
    std::size_t j = k;
    while (j < cells.size() && cells[j] == cells[k]) ++j;
    if ((j - k) % 2 == 1) out.push_back(cells[k]);
    k = j;
  }
  return Chain{dim, std::move(out)};
}

Chain chain_add(const Chain& a, const Chain& b) {
  require(a.dim == b.dim, "chain_add: dimension mismatch " + std::to_string(a.dim) +
                              " vs " + std::to_string(b.dim));
  Chain out{a.dim, {}};
  out.cells.reserve(a.cells.size() + b.cells.size());
  std::set_symmetric_difference(a.cells.begin(), a.cells.end(), b.cells.begin(),
                                b.cells.end(), std::back_inserter(out.cells));
  return out;
}

Chain boundary(const SimplexRegistry& reg, SimplexId s) {
  int p = reg.dim(s);
  return Chain{std::max(p - 1, 0), reg.faces(s)};
}

Chain chain_boundary(const SimplexRegistry& reg, const Chain& c) {
  require(c.dim >= 1, "chain_boundary: needs dimension >= 1");
  std::vector<SimplexId> all;
  all.reserve(c.cells.size() * static_cast<std::size_t>(c.dim + 1));
  for (SimplexId s : c.cells) {
    const auto& f = reg.faces(s);
    all.insert(all.end(), f.begin(), f.end());
  }
  return make_chain(c.dim - 1, std::move(all));
}

bool is_cycle(const SimplexRegistry& reg, const Chain& c) {
  if (c.dim == 0 || c.empty()) return true;
  return chain_boundary(reg, c).empty();
}

std::string format_chain(const SimplexRegistry& reg, const Chain& c) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (SimplexId s : c.cells) {
    if (!first) os << ", ";
    first = false;
    os << '[' << reg.to_string(s) << ']';
  }
  os << '}';
  return os.str();
}

bool Complex::contains(SimplexId s) const {
  return std::binary_search(simplices.begin(), simplices.end(), s);
}

bool is_closed(const SimplexRegistry& reg, const Complex& k) {
  for (SimplexId s : k.simplices)
    for (SimplexId f : reg.faces(s))
      if (!k.contains(f)) return false;
  return true;
}

}  // namespace zzvine
