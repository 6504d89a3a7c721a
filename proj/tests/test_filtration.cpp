#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "zzvine/errors.hpp"

using namespace zzvine;
using zzvine::testing::from;
using zzvine::testing::tri;

TEST_CASE("parse and format round trip") {
  auto f = tri();
  CHECK(f.size() == 6);
  CHECK(validate(f).empty());
  CHECK(format_filtration(f) == "i 0\ni 1\ni 0 1\nd 0 1\nd 1\nd 0\n");
  CHECK(from("# only comments\n\n").empty());
}

TEST_CASE("parse errors carry the line number") {
  try {
    from("i 0\nx 1\n");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(e.position() == 2);
  }
  CHECK_THROWS_AS(from("i 0 q\n"), Error);
  CHECK_THROWS_AS(from("d\n"), Error);
}

TEST_CASE("validation rules") {
  auto first_rule = [](const std::string& t) {
    auto v = validate(from(t));
    return v.empty() ? std::string() : v.front().rule;
  };
  CHECK(first_rule("i 0\ni 0\nd 0\nd 0\n") == "added simplex already present");
  CHECK(first_rule("i 0 1\nd 0 1\n") == "missing faces");
  CHECK(first_rule("d 0\n") == "deleted simplex absent");
  CHECK(first_rule("i 0\ni 1\ni 0 1\nd 0\nd 0 1\nd 1\n") == "coface present at delete");
  CHECK_FALSE(validate(from("i 0\n")).empty());
  CHECK_THROWS_AS(require_valid(from("i 0\n")), Error);
}

TEST_CASE("complexes and timeline agree") {
  auto f = tri();
  auto& reg = f.registry();
  Timeline tl(f);
  for (int i = 0; i <= f.size(); ++i) {
    Complex k = complex_at(f, i);
    CHECK(is_closed(reg, k));
    for (SimplexId s = 0; s < static_cast<SimplexId>(reg.size()); ++s) CHECK(tl.contains(s, i) == k.contains(s));
  }
  CHECK(complex_at(f, 3).simplices.size() == 3);
  CHECK(complex_at(f, 6).simplices.empty());
}

TEST_CASE("birth and death orders") {
  auto f = tri();  // steps: + + + - - -
  // b1 < b2 with step b2-1 an addition
  CHECK(birth_order_less(f, 1, 2));
  CHECK_FALSE(birth_order_less(f, 2, 1));
  // b1 > b2 with step b1-1 a deletion
  CHECK(birth_order_less(f, 5, 2));
  CHECK(death_order_less(f, 5, 4));   // step 4 deletes
  CHECK(death_order_less(f, 2, 4));   // step 2 adds
  CHECK(interval_less(f, {1, 5}, {2, 4}) == (birth_order_less(f, 1, 2) && death_order_less(f, 5, 4)));
  CHECK_THROWS_AS(interval_less(f, {1, 1}, {3, 3}), Error);
}

TEST_CASE("script text round trip") {
  std::istringstream in("fs 1\nbs 4\nos 3\nis 2\noe 2 0\nie 2 0 1\noc 3\nic 3\n");
  auto ops = parse_script(in);
  REQUIRE(ops.size() == 8);
  CHECK(ops[5].simplex == Vertices{0, 1});
  CHECK(format_script(ops) == "fs 1\nbs 4\nos 3\nis 2\noe 2 0\nie 2 0 1\noc 3\nic 3\n");
  CHECK_THROWS_AS(parse_op("zz 1"), Error);
  CHECK_THROWS_AS(parse_op("fs"), Error);
}

TEST_CASE("op legality checks") {
  auto f = tri();
  CHECK_NOTHROW(check_op(f, {OpKind::ForwardSwitch, 1, {}}));
  auto kind_of = [&](Op op) {
    try {
      check_op(f, op);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Exhausted;  // stands for "no error"
  };
  CHECK(kind_of({OpKind::ForwardSwitch, 2, {}}) == ErrorKind::IllegalSwitch);
  CHECK(kind_of({OpKind::ForwardSwitch, 4, {}}) == ErrorKind::ContractViolation);
  CHECK(kind_of({OpKind::BackwardSwitch, 4, {}}) == ErrorKind::IllegalSwitch);
  CHECK(kind_of({OpKind::BackwardSwitch, 5, {}}) == ErrorKind::Exhausted);
  CHECK(kind_of({OpKind::InwardContraction, 3, {}}) == ErrorKind::Exhausted);
  CHECK(kind_of({OpKind::OutwardContraction, 3, {}}) == ErrorKind::IllegalContraction);
  CHECK(kind_of({OpKind::OutwardExpansion, 2, {0}}) == ErrorKind::Exhausted);
  CHECK(kind_of({OpKind::OutwardExpansion, 3, {0}}) == ErrorKind::IllegalExpansion);
  CHECK(kind_of({OpKind::InwardExpansion, 2, {0, 1}}) == ErrorKind::Exhausted);
  CHECK(kind_of({OpKind::InwardExpansion, 1, {0, 1}}) == ErrorKind::IllegalExpansion);
  CHECK(kind_of({OpKind::InwardExpansion, 2, {0}}) == ErrorKind::IllegalExpansion);
}

TEST_CASE("inverse ops undo every op kind") {
  auto f = tri();
  std::vector<Op> ops{{OpKind::ForwardSwitch, 1, {}},      {OpKind::BackwardSwitch, 5, {}},
                      {OpKind::InwardContraction, 3, {}},  {OpKind::OutwardExpansion, 2, {1}},
                      {OpKind::InwardExpansion, 0, {7}},   {OpKind::OutwardSwitch, 2, {}}};
  for (const auto& op : ops) {
    auto g = f;
    if (op.kind == OpKind::OutwardSwitch) {
      g = from("i 0\ni 1\nd 0\nd 1\n");
    }
    auto before = g.signature();
    Op inv = inverse_op(g, op);
    apply_op(g, op);
    CHECK(validate(g).empty());
    apply_op(g, inv);
    CHECK(g.signature() == before);
  }
}

TEST_CASE("position remap") {
  auto r = renumber_after_edit(3, 2);
  CHECK(r(2) == 2);
  CHECK(r(3) == 5);
  CHECK_THROWS_AS(renumber_after_edit(3, 1), Error);
}
