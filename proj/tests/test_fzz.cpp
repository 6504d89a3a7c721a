#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "zzvine/errors.hpp"
#include "zzvine/fzz.hpp"

using namespace zzvine;
using zzvine::testing::from;
using zzvine::testing::random_small;
using zzvine::testing::tri;

namespace {

Barcode bars(std::initializer_list<Bar> l) {
  Barcode b(l);
  sort_barcode(b);
  return b;
}

}  // namespace

TEST_CASE("conversion of the triangle filtration") {
  auto f = tri();
  auto d = convert(f);
  REQUIRE(d.cells.size() == 7);
  using K = DeltaCell::Kind;
  CHECK(d.cells[0].kind == K::Omega);
  auto& reg = f.registry();
  SimplexId a = *reg.find({0}), b = *reg.find({1}), ab = *reg.find({0, 1});
  std::vector<std::pair<K, SimplexId>> want{{K::Copy, a}, {K::Copy, b}, {K::Copy, ab},
                                            {K::Cone, a}, {K::Cone, b}, {K::Cone, ab}};
  for (int k = 0; k < 6; ++k) {
    CHECK(d.cells[static_cast<std::size_t>(k + 1)].kind == want[static_cast<std::size_t>(k)].first);
    CHECK(d.cells[static_cast<std::size_t>(k + 1)].simplex == want[static_cast<std::size_t>(k)].second);
  }
  CHECK(d.boundaries[3] == std::vector<int>{1, 2});     // ab
  CHECK(d.boundaries[4] == std::vector<int>{0, 1});     // cone a
  CHECK(d.boundaries[6] == std::vector<int>{3, 4, 5});  // cone ab
  CHECK(d.phi == std::vector<int>{0, 1, 2, 5, 4, 3});
  for (int j = 0; j < 6; ++j) CHECK(d.phi_inv[static_cast<std::size_t>(d.phi[static_cast<std::size_t>(j)])] == j);
}

TEST_CASE("a re-added simplex gets its own copy") {
  auto f = from("i 0\nd 0\ni 0\nd 0\n");
  auto d = convert(f);
  int copies = 0;
  for (const auto& c : d.cells) copies += c.kind == DeltaCell::Kind::Copy;
  CHECK(copies == 2);
  auto single = convert(from("i 0\nd 0\n"));
  CHECK(single.cells.size() == 3);
  CHECK(reduce(single).size() == 1);
}

TEST_CASE("triangle barcode by hand") {
  CHECK(barcode_from_scratch(tri()) == bars({{0, 1, 5}, {0, 2, 2}, {0, 4, 4}}));
  CHECK(barcode_from_scratch(ZigzagFiltration()).empty());
  CHECK_THROWS_AS(barcode_from_scratch(from("i 0\n")), Error);
}

TEST_CASE("hollow triangle gives a 1-interval, filled triangle kills it") {
  auto f = from("i 0\ni 1\ni 2\ni 0 1\ni 1 2\ni 0 2\nd 0 2\nd 1 2\nd 0 1\nd 2\nd 1\nd 0\n");
  auto b = barcode_from_scratch(f);
  int ones = 0;
  for (auto& x : b) ones += x.dim == 1;
  CHECK(ones == 1);
  CHECK(std::find(b.begin(), b.end(), Bar{1, 6, 6}) != b.end());
  auto g = from("i 0\ni 1\ni 2\ni 0 1\ni 1 2\ni 0 2\ni 0 1 2\nd 0 1 2\nd 0 2\nd 1 2\nd 0 1\nd 2\nd 1\nd 0\n");
  auto bg = barcode_from_scratch(g);
  CHECK(std::find(bg.begin(), bg.end(), Bar{1, 6, 6}) != bg.end());
  CHECK(std::find(bg.begin(), bg.end(), Bar{1, 8, 8}) != bg.end());
}

TEST_CASE("only the apex is left unpaired") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto f = random_small(seed);
    auto d = convert(f);
    ReducedMatrix mat;
    auto pairs = reduce(d, &mat);
    CHECK(pairs.size() * 2 == static_cast<std::size_t>(f.size()));
    CHECK(mat.consistent());
    std::vector<int> used(d.cells.size(), 0);
    for (auto [c, j] : pairs) used[static_cast<std::size_t>(c + 1)] = used[static_cast<std::size_t>(j + 1)] = 1;
    CHECK(used[0] == 0);
    CHECK(std::count(used.begin(), used.end(), 0) == 1);
  }
}

TEST_CASE("transpositions match re-reduction") {
  // genuine boundary matrices: converted random filtrations
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    auto cols = convert(random_small(seed)).boundaries;
    const int n = static_cast<int>(cols.size());
    if (n < 3) continue;
    ReducedMatrix mat(cols);
    for (int step = 0; step < 40; ++step) {
      int k = std::uniform_int_distribution<int>(1, n - 2)(rng);
      const auto& next = cols[static_cast<std::size_t>(k + 1)];
      if (std::binary_search(next.begin(), next.end(), k)) {
        CHECK_THROWS_AS(mat.transpose(k), Error);
        continue;
      }
      mat.transpose(k);
      for (auto& c : cols) {
        for (auto& x : c)
          if (x == k)
            x = k + 1;
          else if (x == k + 1)
            x = k;
        std::sort(c.begin(), c.end());
      }
      std::swap(cols[static_cast<std::size_t>(k)], cols[static_cast<std::size_t>(k + 1)]);
      REQUIRE(mat.consistent());
      CHECK(mat.pairs() == ReducedMatrix(cols).pairs());
    }
  }
}

TEST_CASE("transposing a cell before its own face is rejected") {
  ReducedMatrix mat(std::vector<std::vector<int>>{{}, {}, {0, 1}});
  CHECK_THROWS_AS(mat.transpose(1), Error);
  CHECK_NOTHROW(mat.transpose(0));
}

TEST_CASE("maintained state matches fresh conversion after every supported op") {
  RandomOptions opt;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    auto f = random_small(seed, opt);
    FzzState st(f);
    auto ops = random_script(f, 30, seed * 31, opt);
    for (const auto& op : ops) {
      if (op.kind == OpKind::OutwardExpansion || op.kind == OpKind::OutwardContraction) {
        try {
          st.apply(op);
          FAIL("outward op accepted");
        } catch (const Error& e) {
          CHECK(e.kind() == ErrorKind::UnsupportedOnFzzPath);
          CHECK(e.position() == op.pos);
        }
        // continue from the edited filtration with a fresh state
        auto g = st.filtration();
        apply_op(g, op);
        st = FzzState(g);
        continue;
      }
      const std::size_t before = st.transpositions();
      st.apply(op);
      CHECK(st.transpositions() - before <= static_cast<std::size_t>(2 * st.filtration().size()));
      auto fresh = convert(st.filtration());
      CHECK(st.delta().phi == fresh.phi);
      for (int j = 0; j < st.matrix().size(); ++j)
        CHECK(st.matrix().d_column(j) == fresh.boundaries[static_cast<std::size_t>(j)]);
      CHECK(st.barcode() == barcode_from_scratch(st.filtration()));
    }
  }
}

TEST_CASE("illegal ops leave the state untouched") {
  FzzState st(tri());
  CHECK_THROWS_AS(st.forward_switch(2), Error);
  CHECK_THROWS_AS(st.inward_expansion(2, {0}), Error);
  CHECK_THROWS_AS(st.inward_contraction(2), Error);
  CHECK(st.barcode() == barcode_from_scratch(tri()));
  CHECK(st.filtration().signature() == tri().signature());
}
