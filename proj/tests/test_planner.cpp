#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "zzvine/errors.hpp"

using namespace zzvine;
using zzvine::testing::random_small;
using zzvine::testing::tri;

namespace {

ZigzagFiltration run(ZigzagFiltration f, const std::vector<Op>& ops) {
  for (const auto& op : ops) apply_op(f, op);
  return f;
}

}  // namespace

TEST_CASE("random filtrations are valid and end empty") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto f = random_small(seed);
    CHECK(validate(f).empty());
    CHECK(f.size() % 2 == 0);
    CHECK(f.size() <= 40);
    CHECK(complex_at(f, f.size()).simplices.empty());
  }
}

TEST_CASE("same seed, same filtration") {
  CHECK(random_small(42).signature() == random_small(42).signature());
}

TEST_CASE("reduce_to_empty empties the filtration") {
  CHECK(run(tri(), reduce_to_empty(tri())).empty());
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = random_small(seed);
    CHECK(run(f, reduce_to_empty(f)).empty());
  }
}

TEST_CASE("inverted script rebuilds from empty") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = random_small(seed);
    ZigzagFiltration e(f.registry_ptr());
    CHECK(run(e, invert_script(f, reduce_to_empty(f))).signature() == f.signature());
  }
}

TEST_CASE("transform reproduces the target") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto reg = std::make_shared<SimplexRegistry>();
    std::mt19937_64 r1(seed), r2(seed + 10000);
    auto f1 = random_filtration(r1, {}, reg);
    auto f2 = random_filtration(r2, {}, reg);
    CHECK(run(f1, transform(f1, f2)).signature() == f2.signature());
  }
}

TEST_CASE("legal ops are legal and random scripts apply") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto f = random_small(seed);
    for (const auto& op : legal_ops(f)) CHECK_NOTHROW(check_op(f, op));
    auto ops = random_script(f, 60, seed);
    CHECK(ops.size() == 60);
    auto g = run(f, ops);
    CHECK(validate(g).empty());
    CHECK(g.size() <= 40);
  }
}

TEST_CASE("empty filtration only offers inward expansions") {
  ZigzagFiltration e;
  auto ops = legal_ops(e);
  REQUIRE(!ops.empty());
  for (const auto& op : ops) {
    CHECK(op.kind == OpKind::InwardExpansion);
    CHECK(op.simplex.size() == 1);
  }
}
