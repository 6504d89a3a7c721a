#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "zzvine/filtration.hpp"

namespace zzvine {

// Cell of the coned Delta-complex. Matrix position 0 is the cone apex.
struct DeltaCell {
  enum class Kind : std::uint8_t { Omega, Copy, Cone };
  Kind kind = Kind::Omega;
  int dim = 0;
  SimplexId simplex = -1;  // underlying simplex, -1 for the apex
};

// Non-zigzag filtration obtained from a zigzag one. Cells are listed in
// matrix order: apex, copies of additions, cones of deletions in reverse.
// phi maps a step of F to its index among the non-apex cells (matrix
// position minus one); phi_inv is its inverse.
struct DeltaFiltration {
  std::vector<DeltaCell> cells;
  std::vector<std::vector<int>> boundaries;  // sorted matrix positions
  std::vector<int> phi;
  std::vector<int> phi_inv;
};

DeltaFiltration convert(const ZigzagFiltration& f);

// Column reduction R = D V over Z2 with V kept for transposition repair.
class ReducedMatrix {
 public:
  ReducedMatrix() = default;
  explicit ReducedMatrix(const std::vector<std::vector<int>>& boundary_columns);

  int size() const { return static_cast<int>(d_.size()); }
  void append_column(std::vector<int> boundary);
  void pop_back();
  // swap positions k and k+1 and repair the reduction
  void transpose(int k);

  int low(int j) const { return r_[static_cast<std::size_t>(j)].empty() ? -1 : r_[static_cast<std::size_t>(j)].back(); }
  int pivot_column(int row) const { return low_to_col_[static_cast<std::size_t>(row)]; }
  const std::vector<int>& d_column(int j) const { return d_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& r_column(int j) const { return r_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& v_column(int j) const { return v_[static_cast<std::size_t>(j)]; }

  // (creator, destroyer) matrix positions, ordered by destroyer
  std::vector<std::pair<int, int>> pairs() const;
  // checks R = D V, V unit upper triangular, distinct lows
  bool consistent() const;

 private:
  void reduce_column(int j);
  void swap_rows_everywhere(int k);
  std::vector<std::vector<int>> d_, r_, v_;
  std::vector<int> low_to_col_;
};

// creator/destroyer pairing on non-apex cell indices
std::vector<std::pair<int, int>> reduce(const DeltaFiltration& d, ReducedMatrix* out = nullptr);

Barcode map_intervals(const ZigzagFiltration& f, const DeltaFiltration& d,
                      const std::vector<std::pair<int, int>>& pairs);

Barcode barcode_from_scratch(const ZigzagFiltration& f);

// Barcode maintained through transpositions of the converted filtration.
class FzzState {
 public:
  explicit FzzState(const ZigzagFiltration& f);

  const ZigzagFiltration& filtration() const { return f_; }
  const DeltaFiltration& delta() const { return delta_; }
  const ReducedMatrix& matrix() const { return mat_; }
  Barcode barcode() const;
  std::size_t transpositions() const { return transpositions_; }

  void forward_switch(int i);
  void backward_switch(int i);
  void outward_switch(int i);
  void inward_switch(int i);
  void inward_expansion(int pos, const Vertices& sigma);
  void inward_contraction(int i);
  [[noreturn]] void outward_expansion(int pos, const Vertices& sigma);
  [[noreturn]] void outward_contraction(int i);
  void apply(const Op& op);

 private:
  void transpose(int k);
  void rebuild_phi();
  ZigzagFiltration f_;
  DeltaFiltration delta_;
  ReducedMatrix mat_;
  std::size_t transpositions_ = 0;
};

}  // namespace zzvine
