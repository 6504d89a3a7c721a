#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "zzvine/errors.hpp"
#include "zzvine/reps.hpp"

using namespace zzvine;

namespace {

struct Tri {
  ZigzagFiltration f = zzvine::testing::tri();
  SimplexId a, b, ab;
  Tri() {
    auto& reg = f.registry();
    a = *reg.find({0});
    b = *reg.find({1});
    ab = *reg.find({0, 1});
  }
  ChainPtr pts(std::vector<SimplexId> s) const { return make_record(make_chain(0, std::move(s))); }
  ChainPtr edge() const { return single_simplex(1, ab); }
  // [1,5]: the vertex a all along
  RepSeq long_bar() const {
    RepSeq r;
    r.dim = 0;
    r.birth = 1;
    r.death = 5;
    r.cycles.assign(5, pts({a}));
    r.chains = {nullptr, empty_chain(1), empty_chain(1), empty_chain(1), empty_chain(1), nullptr};
    return r;
  }
  // [2,2]: a+b, killed by ab
  RepSeq early_bar() const { return point_rep(0, 2, pts({a, b}), nullptr, edge()); }
  // [4,4]: a+b, born when ab leaves
  RepSeq late_bar() const { return point_rep(0, 4, pts({a, b}), edge(), nullptr); }
};

}  // namespace

TEST_CASE("hand representatives of the triangle filtration validate") {
  Tri t;
  CHECK_FALSE(validate_rep(t.f, t.long_bar()));
  CHECK_FALSE(validate_rep(t.f, t.early_bar()));
  CHECK_FALSE(validate_rep(t.f, t.late_bar()));
}

TEST_CASE("broken representatives are rejected with the matching rule") {
  Tri t;
  auto rule = [&](const RepSeq& r) {
    auto v = validate_rep(t.f, r);
    return v ? v->rule : std::string();
  };
  RepSeq r = t.early_bar();
  r.z(2) = t.pts({t.b});
  CHECK(rule(r) == "death boundary");
  r = t.early_bar();
  r.chains.front() = empty_chain(1);
  CHECK(rule(r) == "birth chain should be undefined");
  r = t.early_bar();
  r.z(2) = t.pts({t.a});
  CHECK(rule(r) == "birth condition");
  r = t.late_bar();
  r.z(4) = t.pts({t.a});
  CHECK(rule(r) == "birth boundary");
  r = t.long_bar();
  r.c(2) = t.edge();
  CHECK(rule(r) == "boundary relation");
  r = t.long_bar();
  r.death = 6;
  CHECK(rule(r) == "interval out of range");
  r = t.long_bar();
  r.z(5) = t.pts({t.b});
  CHECK(rule(r) == "cycle not contained in complex");
}

TEST_CASE("sum of incomparable representatives lives on the max interval") {
  Tri t;
  bool comparable = true;
  SumStats st;
  RepSeq s = rep_sum(t.f, t.long_bar(), t.early_bar(), 2, &st, &comparable);
  CHECK_FALSE(comparable);
  CHECK(s.birth == 2);
  CHECK(s.death == 5);
  CHECK_FALSE(validate_rep(t.f, s));
  CHECK(*s.z(2) == Chain{0, {t.b}});
  CHECK(st.cycle_merges >= 1);
}

TEST_CASE("prefix, suffix, concat") {
  Tri t;
  RepSeq r = t.long_bar();
  RepSeq pre = prefix(r, 3), suf = suffix(r, 3);
  CHECK(pre.open_death);
  CHECK(suf.open_birth);
  RepSeq back = concat(t.f.registry(), pre, suf, Chain{1, {}});
  CHECK_FALSE(validate_rep(t.f, back));
  CHECK(back.cycles.size() == r.cycles.size());
  // z = a versus a+b at 2 are not homologous there
  CHECK_THROWS_AS(concat(t.f.registry(), prefix(r, 2), suffix(t.early_bar(), 2), Chain{1, {}}), Error);
}

TEST_CASE("record sharing: sums with empty or equal records do not allocate") {
  Tri t;
  ChainPtr x = t.pts({t.a});
  std::size_t merges = 0;
  CHECK(add(x, empty_chain(0), &merges) == x);
  CHECK(add(x, x, &merges)->empty());
  CHECK(merges == 0);
  CHECK(add(x, nullptr) == nullptr);
  CHECK(t.long_bar().cycle_records() == 1);
}

TEST_CASE("editing ends") {
  Tri t;
  RepSeq r = t.long_bar();
  r.drop_first();
  CHECK(r.birth == 2);
  CHECK(r.chains.size() == 5);
  r.drop_last();
  CHECK(r.death == 4);
  r.push_back(t.pts({t.a}), empty_chain(1), nullptr);
  CHECK(r.death == 5);
  r.push_front(t.pts({t.a}), empty_chain(1), nullptr);
  CHECK(r.birth == 1);
  CHECK_FALSE(validate_rep(t.f, r));
  CHECK(dump_rep(t.f.registry(), t.early_bar()) ==
        "# dim 0 [2,2]\n1 : z = - ; c = UNDEF\n2 : z = {[0], [1]} ; c = {[0 1]}\n");
}
