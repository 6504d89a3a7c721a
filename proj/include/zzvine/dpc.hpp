#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "zzvine/filtration.hpp"
#include "zzvine/rep_updates.hpp"

namespace zzvine {

// Point positions at integer times 0..s, linearly interpolated in between.
// Vertex k of every complex is the point ids[k].
struct Trajectories {
  std::vector<std::int64_t> ids;  // sorted
  int space_dim = 2;              // 2 or 3
  std::vector<std::vector<std::array<double, 3>>> pos;  // pos[t][k]

  int points() const { return static_cast<int>(ids.size()); }
  int samples() const { return static_cast<int>(pos.size()); }
  int vertex_of(std::int64_t id) const;  // throws Validation if unknown
};

Trajectories parse_trajectories(std::istream& in);
Trajectories parse_trajectories_text(const std::string& text);
std::string format_trajectories(const Trajectories& tr);

// Uniform start in the unit square (cube), then a bounded random walk.
Trajectories random_trajectories(std::mt19937_64& rng, int points, int samples, int space_dim = 2,
                                 double step = 0.25);

// Squared distance on [t0, t0+1] as a*u^2 + b*u + c with u = t - t0.
struct Quadratic {
  double a = 0, b = 0, c = 0;
  double operator()(double u) const { return (a * u + b) * u + c; }
  double slope(double u) const { return 2 * a * u + b; }
};

// Squared distance between two points as a function of time.
struct DistanceCurve {
  int p = 0, q = 0;  // vertices, p < q
  double initial = 0;  // value at t = 0, also the whole curve when s = 0
  std::vector<Quadratic> pieces;  // one per unit time segment
  double operator()(double t) const;
  double end_time() const { return static_cast<double>(pieces.size()); }
};

DistanceCurve pair_distance_curve(const Trajectories& tr, std::int64_t id_p, std::int64_t id_q);
// by vertex index; all pairs p < q in lexicographic order
std::vector<DistanceCurve> all_distance_curves(const Trajectories& tr);

enum class EventKind { IncreasingCrossing, DecreasingCrossing, OppositeCrossing, LocalMin, LocalMax };
const char* event_kind_name(EventKind k);

using VertexPair = std::pair<int, int>;

struct Event {
  double value = 0;  // squared distance
  double delta = 0;  // distance
  double time = 0;
  EventKind kind = EventKind::LocalMin;
  VertexPair first{-1, -1};
  VertexPair second{-1, -1};  // crossings only
  bool boundary = false;      // extremum at t = 0 or t = s
};

struct EventTimeline {
  std::vector<Event> events;   // decreasing value, then pairs, then kind
  std::vector<double> levels;  // distinct squared values, decreasing, clustered
  int tangencies = 0;          // double roots merged into no-ops
};

// Critical points of the distance-time curves. With dim_cap < 1 no edge ever
// enters a complex, so nothing is critical.
EventTimeline detect_events(const Trajectories& tr, int dim_cap = 2, double cluster_eps = 1e-9);

// Edge appearance/disappearance at a fixed squared threshold.
struct EdgeEvent {
  double time = 0;
  VertexPair edge;
  Dir dir = Dir::Add;
};
struct EdgeTimeline {
  std::vector<VertexPair> initial;  // edges present at t = 0, sorted
  std::vector<EdgeEvent> events;    // by time, then edge
};
EdgeTimeline edge_timeline(const Trajectories& tr, double value);

// Zigzag filtration of Rips complexes (clique complexes capped at dim_cap)
// for a fixed squared threshold. Blocks: everything alive at t = 0 in
// increasing dimension, then one block per edge event (additions by
// increasing dimension, deletions by decreasing dimension, lexicographic
// within a dimension), then everything torn down at t = s.
ZigzagFiltration build_filtration(const Trajectories& tr, double value, int dim_cap,
                                  RegistryPtr reg = nullptr);

// Script of atomic ops taking `from` to `to` (same registry). Steps that
// only one side has are paired up and removed by inward contractions or
// inserted by outward expansions; the rest is sorted with switches.
// Throws ContractViolation or an Illegal* error if the difference is not of
// that shape.
std::vector<Op> compile_transition(const ZigzagFiltration& from, const ZigzagFiltration& to);

// Script across one critical level: `above` is the band's filtration just
// above e.value and the target is built at value_below.
std::vector<Op> compile_event(const Trajectories& tr, const Event& e, const ZigzagFiltration& above,
                              double value_below, int dim_cap);

struct VineBar {
  int dim = 0;
  int birth = 0;
  int death = 0;
  IntervalId vine = kNoInterval;
  auto operator<=>(const VineBar&) const = default;
};

struct Band {
  int index = 0;
  double delta_hi = 0;  // distances; the top band has delta_hi = inf
  double delta_lo = 0;
  double value = 0;     // squared threshold the band was built at
  int length = 0;
  std::vector<VineBar> bars;  // sorted
  std::vector<Op> script;     // ops from the previous band
  bool fallback = false;      // script came from the generic transform
};

struct VineyardOptions {
  int dim_cap = 2;
  int check_every = 0;     // > 0: compare every k-th band with the oracle
  bool time_scratch = false;  // also time barcode_from_scratch per band
  double cluster_eps = 1e-9;
};

struct VineyardStats {
  std::array<std::size_t, kOpKinds> op_counts{};
  int max_length = 0;
  double t_update = 0;   // seconds, compile + apply, all bands after the first
  double t_scratch = 0;  // seconds, from-scratch barcodes of the same bands
  int fallbacks = 0;
  int tangencies = 0;
  int checked = 0;
};

struct Vineyard {
  std::vector<Band> bands;  // decreasing delta
  VineyardStats stats;
};

Vineyard vineyard(const Trajectories& tr, const VineyardOptions& opt = {});
std::string format_vineyard(const Vineyard& v);

}  // namespace zzvine
