#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dpc_scan.hpp"
#include "zzvine/dpc.hpp"
#include "zzvine/errors.hpp"
#include "zzvine/fzz.hpp"

using namespace zzvine;

namespace {

Trajectories random_tr(std::uint64_t seed, int n, int s, int dim = 2) {
  std::mt19937_64 rng(seed);
  return random_trajectories(rng, n, s, dim);
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_trajectories_text(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ContractViolation;
}

int line_of(const std::string& text) {
  try {
    parse_trajectories_text(text);
  } catch (const Error& e) {
    return e.position();
  }
  return -1;
}

std::set<VertexPair> edges_at(const EdgeTimeline& et, double t) {
  std::set<VertexPair> in(et.initial.begin(), et.initial.end());
  for (const auto& e : et.events) {
    if (e.time > t) break;
    if (e.dir == Dir::Add) in.insert(e.edge);
    else in.erase(e.edge);
  }
  return in;
}

}  // namespace

TEST_CASE("csv round trip and errors") {
  for (int dim : {2, 3}) {
    auto tr = random_tr(3, 4, 5, dim);
    auto back = parse_trajectories_text(format_trajectories(tr));
    CHECK(back.ids == tr.ids);
    CHECK(back.space_dim == dim);
    CHECK(back.pos == tr.pos);
  }
  auto odd = parse_trajectories_text("t,id,x,y\n0,17,0,0\n0,5,1,0\n1,5,1,1\n1,17,0,1\n");
  CHECK(odd.ids == std::vector<std::int64_t>{5, 17});
  CHECK(odd.vertex_of(17) == 1);
  CHECK(odd.pos[1][0][1] == 1.0);
  CHECK_THROWS_AS(odd.vertex_of(6), Error);

  CHECK(parse_trajectories_text("").points() == 0);
  CHECK(parse_trajectories_text("t,id,x,y\n").samples() == 0);
  CHECK(kind_of("time,id,x,y\n") == ErrorKind::Parse);
  CHECK(line_of("time,id,x,y\n") == 1);
  CHECK(kind_of("t,id,x,y\n0,1,2\n") == ErrorKind::Parse);
  CHECK(line_of("t,id,x,y\n0,1,0,0\n0,2,x,0\n") == 3);
  CHECK(line_of("t,id,x,y\n0,1,0,0\n0,1,1,1\n") == 3);
  CHECK(kind_of("t,id,x,y\n0,1,0,0\n1,2,0,0\n") == ErrorKind::Validation);
}

TEST_CASE("stationary points give a constant curve") {
  auto tr = parse_trajectories_text("t,id,x,y\n0,0,0,0\n0,1,3,4\n1,0,0,0\n1,1,3,4\n2,0,0,0\n2,1,3,4\n");
  auto c = pair_distance_curve(tr, 0, 1);
  REQUIRE(c.pieces.size() == 2);
  for (const auto& q : c.pieces) {
    CHECK(q.a == 0);
    CHECK(q.b == 0);
    CHECK(q.c == 25);
  }
  CHECK(c(1.3) == 25);
  CHECK_THROWS_AS(pair_distance_curve(tr, 0, 0), Error);
  CHECK_THROWS_AS(pair_distance_curve(tr, 0, 9), Error);
}

TEST_CASE("points passing through each other have an interior minimum") {
  auto tr = parse_trajectories_text("t,id,x,y\n0,0,0,0\n0,1,2,0\n1,0,2,0\n1,1,0,0\n");
  auto c = pair_distance_curve(tr, 0, 1);
  CHECK(c(0.5) == doctest::Approx(0.0));
  auto tl = detect_events(tr);
  bool found = false;
  for (const auto& e : tl.events)
    if (e.kind == EventKind::LocalMin && !e.boundary) {
      found = true;
      CHECK(e.time == doctest::Approx(0.5));
      CHECK(e.value == doctest::Approx(0.0));
    }
  CHECK(found);
}

TEST_CASE("curve matches interpolated positions") {
  for (int dim : {2, 3})
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto tr = random_tr(seed, 4, 6, dim);
      for (const auto& c : all_distance_curves(tr))
        for (int k = 0; k <= 500; ++k) {
          double t = 5.0 * k / 500;
          int i = std::min(4, static_cast<int>(std::floor(t)));
          double u = t - i, d2 = 0;
          for (int d = 0; d < 3; ++d) {
            auto at = [&](int v) {
              return (1 - u) * tr.pos[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)][static_cast<std::size_t>(d)] +
                     u * tr.pos[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(v)][static_cast<std::size_t>(d)];
            };
            double x = at(c.p) - at(c.q);
            d2 += x * x;
          }
          CHECK(c(t) == doctest::Approx(d2).epsilon(1e-9));
        }
    }
}

TEST_CASE("monotone separation has no interior events") {
  auto tr = parse_trajectories_text("t,id,x,y\n0,0,0,0\n0,1,1,0\n1,0,0,0\n1,1,2,0\n2,0,0,0\n2,1,4,0\n");
  auto tl = detect_events(tr);
  for (const auto& e : tl.events) CHECK(e.boundary);
  REQUIRE(tl.events.size() == 2);
  CHECK(tl.events[0].kind == EventKind::LocalMax);
  CHECK(tl.events[0].time == 2.0);
  CHECK(tl.events[1].kind == EventKind::LocalMin);
  CHECK(tl.events[1].time == 0.0);
}

TEST_CASE("coincident constant curves are not crossings") {
  const double h = std::sqrt(3.0) / 2;
  std::string text = "t,id,x,y\n";
  for (int t = 0; t < 3; ++t)
    text += std::to_string(t) + ",0,0,0\n" + std::to_string(t) + ",1,1,0\n" + std::to_string(t) + ",2,0.5," +
            std::to_string(h) + "\n";
  auto tr = parse_trajectories_text(text);
  auto tl = detect_events(tr);
  for (const auto& e : tl.events) CHECK(e.kind == EventKind::LocalMin);
  CHECK(tl.tangencies > 0);
  auto v = vineyard(tr, {2, 1});
  CHECK(v.stats.fallbacks == 0);
}

TEST_CASE("events are ordered and levels are distinct") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto tl = detect_events(random_tr(seed, 5, 6));
    for (std::size_t i = 1; i < tl.events.size(); ++i) CHECK(tl.events[i - 1].value >= tl.events[i].value);
    for (std::size_t i = 1; i < tl.levels.size(); ++i) CHECK(tl.levels[i - 1] > tl.levels[i]);
    for (const auto& e : tl.events)
      if (e.second.first >= 0) CHECK(e.first < e.second);
  }
  CHECK(detect_events(random_tr(1, 5, 6), 0).events.empty());
}

TEST_CASE("threshold grid finds no change missed by the detector") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto tr = random_tr(seed + 100, 4, 5);
    auto rep = testing::grid_scan(tr, detect_events(tr), 4000);
    CHECK(rep.changes > 0);
    CHECK(rep.unexplained == 0);
  }
}

TEST_CASE("band filtrations") {
  auto tr = random_tr(7, 5, 6);
  auto tl = detect_events(tr);
  // uncapped, the top band is a full simplex at every time: only the
  // component survives the middle, and it spans the whole filtration
  auto top = build_filtration(tr, 2 * tl.levels.front() + 1, 4);
  CHECK(validate(top).empty());
  REQUIRE(top.size() == 2 * 31);
  const int mid = top.size() / 2;
  auto alive_at = [](const Barcode& b, int i) {
    Barcode out;
    for (const auto& x : b)
      if (x.birth <= i && i <= x.death) out.push_back(x);
    return out;
  };
  CHECK(alive_at(barcode_from_scratch(top), mid) == Barcode{{0, 1, top.size() - 1}});
  // capped at triangles: the 2-skeleton of a 4-simplex has four 2-cycles
  auto capped = barcode_from_scratch(build_filtration(tr, 2 * tl.levels.front() + 1, 2));
  auto mid_bars = alive_at(capped, 25);
  CHECK(mid_bars.size() == 5);
  CHECK(std::count_if(mid_bars.begin(), mid_bars.end(), [](const Bar& b) { return b.dim == 2; }) == 4);

  auto bottom = build_filtration(tr, 0.5 * tl.levels.back(), 2);
  CHECK(bottom.size() == 10);
  CHECK(barcode_from_scratch(bottom).size() == 5);

  for (double v : tl.levels) {
    auto f = build_filtration(tr, v * 0.999, 1);
    CHECK(validate(f).empty());
    for (const auto& st : f.steps()) CHECK(f.registry().dim(st.simplex) <= 1);
  }
}

TEST_CASE("single static point") {
  auto tr = parse_trajectories_text("t,id,x,y\n0,4,1,1\n1,4,1,1\n2,4,1,1\n");
  auto v = vineyard(tr);
  REQUIRE(v.bands.size() == 1);
  REQUIRE(v.bands[0].bars.size() == 1);
  CHECK(v.bands[0].bars[0].dim == 0);
  CHECK(v.bands[0].bars[0].birth == 1);
  CHECK(v.bands[0].bars[0].death == v.bands[0].length - 1);
  CHECK(format_vineyard(v).rfind("band 0 delta_hi inf delta_lo 0\n", 0) == 0);
}

TEST_CASE("compiled transitions reach the next band with legal steps") {
  int opposite_with_ic = 0;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto tr = random_tr(seed, 5, 6);
    auto tl = detect_events(tr);
    auto reg = std::make_shared<SimplexRegistry>();
    auto cur = build_filtration(tr, 2 * tl.levels.front() + 1, 2, reg);
    for (std::size_t k = 0; k < tl.levels.size(); ++k) {
      double lo = k + 1 < tl.levels.size() ? tl.levels[k + 1] : 0.0;
      double below = 0.5 * (tl.levels[k] + lo);
      const Event* ev = nullptr;
      for (const auto& e : tl.events)
        if (e.value == tl.levels[k]) ev = &e;
      REQUIRE(ev != nullptr);
      auto ops = compile_event(tr, *ev, cur, below, 2);
      auto g = cur;
      for (const auto& op : ops) REQUIRE_NOTHROW(apply_op(g, op));
      auto target = build_filtration(tr, below, 2, reg);
      CHECK(g.signature() == target.signature());
      if (ev->kind == EventKind::OppositeCrossing)
        for (const auto& op : ops) opposite_with_ic += op.kind == OpKind::InwardContraction;
      cur = std::move(target);
    }
  }
  CHECK(opposite_with_ic > 0);
}

TEST_CASE("vineyard bands match the oracle and nest") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto tr = random_tr(seed + 40, 5, 8);
    VineyardOptions opt;
    opt.check_every = 1;
    Vineyard v;
    REQUIRE_NOTHROW(v = vineyard(tr, opt));
    CHECK(v.stats.fallbacks == 0);
    CHECK(v.stats.checked == static_cast<int>(v.bands.size()));
    for (std::size_t b = 1; b < v.bands.size(); ++b) {
      CHECK(v.bands[b].delta_hi == v.bands[b - 1].delta_lo);
      auto hi = edge_timeline(tr, v.bands[b - 1].value);
      auto lo = edge_timeline(tr, v.bands[b].value);
      for (int k = 0; k <= 70; ++k) {
        auto a = edges_at(lo, 0.1 * k), c = edges_at(hi, 0.1 * k);
        CHECK(std::includes(c.begin(), c.end(), a.begin(), a.end()));
      }
    }
    for (const auto& band : v.bands) {
      std::set<IntervalId> ids;
      for (const auto& x : band.bars) ids.insert(x.vine);
      CHECK(ids.size() == band.bars.size());
    }
  }
}

TEST_CASE("three point toy") {
  auto tr = parse_trajectories_text(
      "t,id,x,y\n"
      "0,0,0,0\n0,1,1,0\n0,2,3,0\n"
      "1,0,0,0\n1,1,2,0.5\n1,2,1.5,1\n"
      "2,0,0,0\n2,1,3,0\n2,2,0.5,0.5\n");
  VineyardOptions opt;
  opt.check_every = 1;
  auto v = vineyard(tr, opt);
  CHECK(v.bands.size() > 3);
  CHECK(v.stats.fallbacks == 0);
  CHECK(v.bands.back().bars.size() == 3);
}

TEST_CASE("dim cap 1 keeps scripts on vertices and edges") {
  auto tr = random_tr(5, 5, 6);
  VineyardOptions opt;
  opt.dim_cap = 1;
  opt.check_every = 1;
  auto v = vineyard(tr, opt);
  for (const auto& b : v.bands)
    for (const auto& op : b.script) CHECK(op.simplex.size() <= 2);
}
