#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace zzvine {

using SimplexId = std::int32_t;
using Vertices = std::vector<int>;

// Interns vertex lists so that simplices compare by id. Append only; ids
// are dense and assigned in first-seen order, faces before cofaces.
class SimplexRegistry {
 public:
  SimplexId intern(const Vertices& v);
  std::optional<SimplexId> find(const Vertices& v) const;

  const Vertices& vertices(SimplexId s) const { return verts_[s]; }
  int dim(SimplexId s) const { return static_cast<int>(verts_[s].size()) - 1; }
  // codimension-1 faces, empty for a vertex
  const std::vector<SimplexId>& faces(SimplexId s) const { return faces_[s]; }
  // true when a is a (not necessarily proper) face of b
  bool is_face_of(SimplexId a, SimplexId b) const;
  std::size_t size() const { return verts_.size(); }
  std::string to_string(SimplexId s) const;

 private:
  struct Hash {
    std::size_t operator()(const Vertices& v) const;
  };
  std::vector<Vertices> verts_;
  std::vector<std::vector<SimplexId>> faces_;
  std::unordered_map<Vertices, SimplexId, Hash> index_;
};

using RegistryPtr = std::shared_ptr<SimplexRegistry>;

// Z2 chain: a set of simplices of one dimension, kept as sorted ids.
struct Chain {
  int dim = 0;
  std::vector<SimplexId> cells;

  bool empty() const { return cells.empty(); }
  std::size_t size() const { return cells.size(); }
  bool contains(SimplexId s) const;
  friend bool operator==(const Chain& a, const Chain& b) {
    return a.dim == b.dim && a.cells == b.cells;
  }
};

Chain make_chain(int dim, std::vector<SimplexId> cells);
Chain chain_add(const Chain& a, const Chain& b);
Chain boundary(const SimplexRegistry& reg, SimplexId s);
Chain chain_boundary(const SimplexRegistry& reg, const Chain& c);
bool is_cycle(const SimplexRegistry& reg, const Chain& c);
std::string format_chain(const SimplexRegistry& reg, const Chain& c);

// Closed set of simplices, sorted ids.
struct Complex {
  std::vector<SimplexId> simplices;
  bool contains(SimplexId s) const;
};

bool is_closed(const SimplexRegistry& reg, const Complex& k);

}  // namespace zzvine
