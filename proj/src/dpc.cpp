#include "zzvine/dpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "zzvine/errors.hpp"
#include "zzvine/fzz.hpp"
#include "zzvine/planner.hpp"

namespace zzvine {

// ---------------------------------------------------------------- input

int Trajectories::vertex_of(std::int64_t id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) throw Error(ErrorKind::Validation, "unknown point id " + std::to_string(id));
  return static_cast<int>(it - ids.begin());
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + what, line_no);
}

}  // namespace

Trajectories parse_trajectories(std::istream& in) {
  std::string line;
  int line_no = 0;
  int cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto h = split_csv(line);
    if (h == std::vector<std::string>{"t", "id", "x", "y"}) cols = 4;
    else if (h == std::vector<std::string>{"t", "id", "x", "y", "z"}) cols = 5;
    else parse_fail(line_no, "expected header t,id,x,y[,z]");
    break;
  }
  Trajectories tr;
  if (cols == 0) return tr;
  tr.space_dim = cols - 2;

  std::map<std::pair<long long, std::int64_t>, std::array<double, 3>> rows;
  std::map<std::pair<long long, std::int64_t>, int> where;
  long long max_t = -1;
  std::set<std::int64_t> ids;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto f = split_csv(line);
    if (static_cast<int>(f.size()) != cols)
      parse_fail(line_no, "expected " + std::to_string(cols) + " fields, got " + std::to_string(f.size()));
    long long t = 0;
    std::int64_t id = 0;
    std::array<double, 3> x{0, 0, 0};
    try {
      std::size_t used = 0;
      t = std::stoll(f[0], &used);
      if (used != f[0].size()) throw std::invalid_argument("t");
      id = std::stoll(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument("id");
      for (int k = 0; k < cols - 2; ++k) {
        x[static_cast<std::size_t>(k)] = std::stod(f[static_cast<std::size_t>(k + 2)], &used);
        if (used != f[static_cast<std::size_t>(k + 2)].size()) throw std::invalid_argument("coord");
        if (!std::isfinite(x[static_cast<std::size_t>(k)])) throw std::invalid_argument("coord");
      }
    } catch (const std::exception&) {
      parse_fail(line_no, "bad number in '" + line + "'");
    }
    if (t < 0) parse_fail(line_no, "negative time");
    auto key = std::make_pair(t, id);
    if (rows.count(key)) parse_fail(line_no, "duplicate row for time " + std::to_string(t) + " id " + std::to_string(id));
    rows[key] = x;
    where[key] = line_no;
    max_t = std::max(max_t, t);
    ids.insert(id);
  }
  tr.ids.assign(ids.begin(), ids.end());
  if (max_t < 0) return tr;
  const std::size_t n = tr.ids.size();
  if (rows.size() != n * static_cast<std::size_t>(max_t + 1)) {
    for (long long t = 0; t <= max_t; ++t)
      for (auto id : tr.ids)
        if (!rows.count({t, id}))
          throw Error(ErrorKind::Validation,
                      "missing sample for time " + std::to_string(t) + " id " + std::to_string(id));
  }
  tr.pos.assign(static_cast<std::size_t>(max_t + 1), std::vector<std::array<double, 3>>(n));
  for (const auto& [key, x] : rows)
    tr.pos[static_cast<std::size_t>(key.first)][static_cast<std::size_t>(tr.vertex_of(key.second))] = x;
  return tr;
}

Trajectories parse_trajectories_text(const std::string& text) {
  std::istringstream in(text);
  return parse_trajectories(in);
}

std::string format_trajectories(const Trajectories& tr) {
  std::string out = tr.space_dim == 3 ? "t,id,x,y,z\n" : "t,id,x,y\n";
  char buf[256];
  for (int t = 0; t < tr.samples(); ++t)
    for (int k = 0; k < tr.points(); ++k) {
      const auto& x = tr.pos[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
      if (tr.space_dim == 3)
        std::snprintf(buf, sizeof buf, "%d,%lld,%.17g,%.17g,%.17g\n", t,
                      static_cast<long long>(tr.ids[static_cast<std::size_t>(k)]), x[0], x[1], x[2]);
      else
        std::snprintf(buf, sizeof buf, "%d,%lld,%.17g,%.17g\n", t,
                      static_cast<long long>(tr.ids[static_cast<std::size_t>(k)]), x[0], x[1]);
      out += buf;
    }
  return out;
}

Trajectories random_trajectories(std::mt19937_64& rng, int points, int samples, int space_dim, double step) {
  require(space_dim == 2 || space_dim == 3, "space dimension must be 2 or 3");
  require(points >= 0 && samples >= 0, "counts must be non-negative");
  std::uniform_real_distribution<double> unit(0.0, 1.0), walk(-step, step);
  Trajectories tr;
  tr.space_dim = space_dim;
  for (int k = 0; k < points; ++k) tr.ids.push_back(k);
  tr.pos.assign(static_cast<std::size_t>(samples), std::vector<std::array<double, 3>>(static_cast<std::size_t>(points)));
  for (int t = 0; t < samples; ++t)
    for (int k = 0; k < points; ++k)
      for (int d = 0; d < space_dim; ++d) {
        auto& x = tr.pos[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)][static_cast<std::size_t>(d)];
        x = t == 0 ? unit(rng) : tr.pos[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(k)][static_cast<std::size_t>(d)] + walk(rng);
      }
  return tr;
}

// ---------------------------------------------------------------- curves

double DistanceCurve::operator()(double t) const {
  if (pieces.empty()) return initial;
  double k = std::floor(t);
  k = std::clamp(k, 0.0, static_cast<double>(pieces.size() - 1));
  return pieces[static_cast<std::size_t>(k)](t - k);
}

namespace {

DistanceCurve curve_of(const Trajectories& tr, int p, int q) {
  DistanceCurve c;
  c.p = std::min(p, q);
  c.q = std::max(p, q);
  auto rel = [&](int t) {
    const auto& a = tr.pos[static_cast<std::size_t>(t)][static_cast<std::size_t>(c.p)];
    const auto& b = tr.pos[static_cast<std::size_t>(t)][static_cast<std::size_t>(c.q)];
    return std::array<double, 3>{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  };
  auto dot = [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  };
  if (tr.samples() == 0) return c;
  c.initial = dot(rel(0), rel(0));
  for (int t = 0; t + 1 < tr.samples(); ++t) {
    auto r0 = rel(t), r1 = rel(t + 1);
    std::array<double, 3> d{r1[0] - r0[0], r1[1] - r0[1], r1[2] - r0[2]};
    c.pieces.push_back({dot(d, d), 2 * dot(r0, d), dot(r0, r0)});
  }
  return c;
}

// real roots of a*u^2 + b*u + c in [lo, hi]; *tangent set when a double root
// is hit
std::vector<double> roots_in(double a, double b, double c, double lo, double hi, bool* tangent = nullptr) {
  std::vector<double> r;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(b) <= 1e-14 * scale) return r;  // constant
    r.push_back(-c / b);
  } else {
    double disc = b * b - 4 * a * c;
    double mag = b * b + std::abs(4 * a * c);
    if (std::abs(disc) <= 1e-12 * mag) {
      double u = -b / (2 * a);
      if (u < lo || u > hi) return r;
      if (tangent) {
        *tangent = true;  // touching without crossing: no-op
        return r;
      }
      r.push_back(u);
      return r;
    }
    if (disc < 0) return r;
    double sq = std::sqrt(disc);
    double qv = -0.5 * (b + (b >= 0 ? sq : -sq));
    r.push_back(qv / a);
    if (qv != 0) r.push_back(c / qv);
  }
  std::vector<double> in;
  for (double u : r)
    if (u >= lo && u <= hi) in.push_back(u);
  std::sort(in.begin(), in.end());
  return in;
}

}  // namespace

DistanceCurve pair_distance_curve(const Trajectories& tr, std::int64_t id_p, std::int64_t id_q) {
  int p = tr.vertex_of(id_p), q = tr.vertex_of(id_q);
  require(p != q, "distance curve needs two distinct points");
  return curve_of(tr, p, q);
}

std::vector<DistanceCurve> all_distance_curves(const Trajectories& tr) {
  std::vector<DistanceCurve> out;
  for (int p = 0; p < tr.points(); ++p)
    for (int q = p + 1; q < tr.points(); ++q) out.push_back(curve_of(tr, p, q));
  return out;
}

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::IncreasingCrossing: return "increasing_crossing";
    case EventKind::DecreasingCrossing: return "decreasing_crossing";
    case EventKind::OppositeCrossing: return "opposite_crossing";
    case EventKind::LocalMin: return "local_min";
    case EventKind::LocalMax: return "local_max";
  }
  return "?";
}

// ---------------------------------------------------------------- events

namespace {

bool nearly(double x, double y) {
  return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

// Extrema of one curve, ends included. Between candidate times (ends, sample
// times, stationary points) the curve is monotone, so extrema of the value
// sequence are extrema of the curve; flat runs collapse to one point.
void curve_extrema(const DistanceCurve& c, std::vector<Event>& out) {
  std::vector<std::pair<double, double>> pts;  // (time, value)
  pts.emplace_back(0.0, c.initial);
  for (std::size_t k = 0; k < c.pieces.size(); ++k) {
    const auto& q = c.pieces[k];
    if (q.a > 0) {
      double u = -q.b / (2 * q.a);
      if (u > 0 && u < 1) pts.emplace_back(static_cast<double>(k) + u, q(u));
    }
    pts.emplace_back(static_cast<double>(k + 1), q(1.0));
  }
  std::vector<std::pair<double, double>> run;
  for (const auto& pt : pts)
    if (run.empty() || !nearly(run.back().second, pt.second)) run.push_back(pt);
  const double s = c.end_time();
  auto emit = [&](std::size_t i, EventKind kind) {
    Event e;
    e.value = run[i].second;
    e.delta = std::sqrt(std::max(0.0, e.value));
    e.time = run[i].first;
    e.kind = kind;
    e.first = {c.p, c.q};
    e.boundary = e.time == 0.0 || e.time == s;
    out.push_back(e);
  };
  if (run.size() == 1) {
    // constant curve: the edge is there above the value and gone below
    emit(0, EventKind::LocalMin);
    return;
  }
  for (std::size_t i = 0; i < run.size(); ++i) {
    bool lower_left = i > 0 && run[i - 1].second < run[i].second;
    bool higher_left = i > 0 && run[i - 1].second > run[i].second;
    bool lower_right = i + 1 < run.size() && run[i + 1].second < run[i].second;
    bool higher_right = i + 1 < run.size() && run[i + 1].second > run[i].second;
    bool is_min = (i == 0 || higher_left) && (i + 1 == run.size() || higher_right);
    bool is_max = (i == 0 || lower_left) && (i + 1 == run.size() || lower_right);
    if (is_min) emit(i, EventKind::LocalMin);
    else if (is_max) emit(i, EventKind::LocalMax);
  }
}

void curve_crossings(const DistanceCurve& c1, const DistanceCurve& c2, std::vector<Event>& out, int& tangencies) {
  const std::size_t n = c1.pieces.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& f = c1.pieces[k];
    const auto& g = c2.pieces[k];
    double a = f.a - g.a, b = f.b - g.b, c = f.c - g.c;
    const double scale = std::max({std::abs(f.a), std::abs(f.b), std::abs(f.c), std::abs(g.a), std::abs(g.b),
                                   std::abs(g.c), 1e-300});
    if (std::abs(a) <= 1e-14 * scale && std::abs(b) <= 1e-14 * scale && std::abs(c) <= 1e-14 * scale) {
      ++tangencies;  // overlapping pieces, no order to swap
      continue;
    }
    bool tangent = false;
    // crossings at t = 0 or t = s coincide with curve ends, already critical
    double lo = k == 0 ? std::numeric_limits<double>::min() : 0.0;
    auto us = roots_in(a, b, c, lo, 1.0, &tangent);
    if (tangent) ++tangencies;
    for (double u : us) {
      if (u >= 1.0) continue;  // next piece's u = 0, or the curve end
      Event e;
      e.time = static_cast<double>(k) + u;
      e.value = f(u);
      e.delta = std::sqrt(std::max(0.0, e.value));
      double s1 = f.slope(u), s2 = g.slope(u);
      if (s1 > 0 && s2 > 0) e.kind = EventKind::IncreasingCrossing;
      else if (s1 < 0 && s2 < 0) e.kind = EventKind::DecreasingCrossing;
      else e.kind = EventKind::OppositeCrossing;
      e.first = {c1.p, c1.q};
      e.second = {c2.p, c2.q};
      out.push_back(e);
    }
  }
}

}  // namespace

EventTimeline detect_events(const Trajectories& tr, int dim_cap, double cluster_eps) {
  EventTimeline tl;
  if (dim_cap < 1 || tr.points() < 2 || tr.samples() == 0) return tl;
  auto curves = all_distance_curves(tr);
  for (const auto& c : curves) curve_extrema(c, tl.events);
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = i + 1; j < curves.size(); ++j) curve_crossings(curves[i], curves[j], tl.events, tl.tangencies);
  std::sort(tl.events.begin(), tl.events.end(), [](const Event& x, const Event& y) {
    if (x.value != y.value) return x.value > y.value;
    return std::tie(x.first, x.second, x.kind) < std::tie(y.first, y.second, y.kind);
  });
  for (const auto& e : tl.events) {
    if (!tl.levels.empty() && tl.levels.back() - e.value <= cluster_eps * std::max(1.0, std::abs(tl.levels.back())))
      continue;
    tl.levels.push_back(e.value);
  }
  return tl;
}

// ---------------------------------------------------------------- filtrations

EdgeTimeline edge_timeline(const Trajectories& tr, double value) {
  EdgeTimeline out;
  if (tr.samples() == 0) return out;
  for (const auto& c : all_distance_curves(tr)) {
    bool in = c.initial < value;
    if (in) out.initial.push_back({c.p, c.q});
    for (std::size_t k = 0; k < c.pieces.size(); ++k) {
      const auto& q = c.pieces[k];
      auto us = roots_in(q.a, q.b, q.c - value, 0.0, 1.0);
      std::vector<double> cuts{0.0};
      for (double u : us)
        if (u > 0 && u < 1) cuts.push_back(u);
      cuts.push_back(1.0);
      for (std::size_t x = 0; x + 1 < cuts.size(); ++x) {
        double g = q(0.5 * (cuts[x] + cuts[x + 1])) - value;
        if (g == 0) continue;
        bool now = g < 0;
        if (now != in) {
          out.events.push_back({static_cast<double>(k) + cuts[x], {c.p, c.q}, now ? Dir::Add : Dir::Delete});
          in = now;
        }
      }
    }
  }
  std::stable_sort(out.events.begin(), out.events.end(), [](const EdgeEvent& a, const EdgeEvent& b) {
    return std::tie(a.time, a.edge) < std::tie(b.time, b.edge);
  });
  return out;
}

namespace {

bool by_dim_then_lex(const Vertices& a, const Vertices& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}
bool by_dim_desc_then_lex(const Vertices& a, const Vertices& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

using Adjacency = std::vector<std::vector<char>>;

// cliques extending `base` by vertices of `cand` (each > the previous pick)
void grow(const Adjacency& adj, Vertices& cur, const std::vector<int>& cand, std::size_t from, int max_size,
          std::vector<Vertices>& out) {
  if (static_cast<int>(cur.size()) >= max_size) return;
  for (std::size_t i = from; i < cand.size(); ++i) {
    int w = cand[i];
    bool ok = true;
    for (int v : cur)
      if (!adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)]) {
        ok = false;
        break;
      }
    if (!ok) continue;
    cur.push_back(w);
    Vertices s = cur;
    std::sort(s.begin(), s.end());
    out.push_back(s);
    grow(adj, cur, cand, i + 1, max_size, out);
    cur.pop_back();
  }
}

std::vector<Vertices> cofaces_of_edge(const Adjacency& adj, int p, int q, int dim_cap) {
  std::vector<Vertices> out{{p, q}};
  std::vector<int> common;
  for (std::size_t w = 0; w < adj.size(); ++w)
    if (adj[static_cast<std::size_t>(p)][w] && adj[static_cast<std::size_t>(q)][w]) common.push_back(static_cast<int>(w));
  Vertices cur{p, q};
  grow(adj, cur, common, 0, dim_cap + 1, out);
  return out;
}

}  // namespace

ZigzagFiltration build_filtration(const Trajectories& tr, double value, int dim_cap, RegistryPtr reg) {
  ZigzagFiltration f(reg ? reg : std::make_shared<SimplexRegistry>());
  const int n = tr.points();
  if (n == 0 || tr.samples() == 0) return f;
  Adjacency adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  std::set<Vertices> alive;

  std::vector<Vertices> start;
  for (int v = 0; v < n; ++v) start.push_back({v});
  EdgeTimeline et = edge_timeline(tr, value);
  if (dim_cap >= 1) {
    for (auto [p, q] : et.initial) adj[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] =
        adj[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] = 1;
    for (int v = 0; v < n; ++v) {
      std::vector<int> up;
      for (int w = v + 1; w < n; ++w)
        if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)]) up.push_back(w);
      Vertices cur{v};
      grow(adj, cur, up, 0, dim_cap + 1, start);
    }
  }
  std::sort(start.begin(), start.end(), by_dim_then_lex);
  for (const auto& s : start) {
    f.push(Dir::Add, s);
    alive.insert(s);
  }

  if (dim_cap >= 1) {
    for (const auto& ev : et.events) {
      auto [p, q] = ev.edge;
      auto& apq = adj[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
      auto& aqp = adj[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)];
      if (ev.dir == Dir::Add) {
        apq = aqp = 1;
        auto block = cofaces_of_edge(adj, p, q, dim_cap);
        std::sort(block.begin(), block.end(), by_dim_then_lex);
        for (const auto& s : block) {
          f.push(Dir::Add, s);
          alive.insert(s);
        }
      } else {
        auto block = cofaces_of_edge(adj, p, q, dim_cap);
        std::sort(block.begin(), block.end(), by_dim_desc_then_lex);
        for (const auto& s : block) {
          f.push(Dir::Delete, s);
          alive.erase(s);
        }
        apq = aqp = 0;
      }
    }
  }

  std::vector<Vertices> end(alive.begin(), alive.end());
  std::sort(end.begin(), end.end(), by_dim_desc_then_lex);
  for (const auto& s : end) f.push(Dir::Delete, s);
  return f;
}

// ---------------------------------------------------------------- compiling

namespace {

using Key = std::pair<Dir, SimplexId>;

Key key_of(const Step& s) { return {s.dir, s.simplex}; }

struct Window {
  int a = 0;       // first differing position
  int from_end = 0;  // exclusive end in the current filtration
  int to_end = 0;
};

Window window_of(const ZigzagFiltration& x, const ZigzagFiltration& y) {
  Window w;
  const int nx = x.size(), ny = y.size();
  while (w.a < nx && w.a < ny && key_of(x.step(w.a)) == key_of(y.step(w.a))) ++w.a;
  int s = 0;
  while (w.a + s < nx && w.a + s < ny && key_of(x.step(nx - 1 - s)) == key_of(y.step(ny - 1 - s))) ++s;
  w.from_end = nx - s;
  w.to_end = ny - s;
  return w;
}

Op swap_op(const ZigzagFiltration& f, int k) {
  Dir a = f.step(k - 1).dir, b = f.step(k).dir;
  OpKind kind = a == Dir::Add ? (b == Dir::Add ? OpKind::ForwardSwitch : OpKind::OutwardSwitch)
                              : (b == Dir::Add ? OpKind::InwardSwitch : OpKind::BackwardSwitch);
  return Op{kind, k, {}};
}

struct Counts {
  int add = 0, del = 0;
};

std::map<SimplexId, Counts> count_window(const ZigzagFiltration& f, int lo, int hi) {
  std::map<SimplexId, Counts> c;
  for (int i = lo; i < hi; ++i) {
    auto& x = c[f.step(i).simplex];
    (f.step(i).dir == Dir::Add ? x.add : x.del)++;
  }
  return c;
}

// Simplices with more occurrences in window [lo,hi) of `f` than in `g`'s;
// throws when the surplus is not made of add/delete pairs.
std::map<SimplexId, int> surplus(const std::map<SimplexId, Counts>& f, const std::map<SimplexId, Counts>& g) {
  std::map<SimplexId, int> out;
  for (const auto& [s, c] : f) {
    Counts o;
    if (auto it = g.find(s); it != g.end()) o = it->second;
    int da = c.add - o.add, dd = c.del - o.del;
    if (da != dd) throw Error(ErrorKind::ContractViolation, "filtrations differ by an unpaired step");
    if (da > 0) out[s] = da;
  }
  return out;
}

// consecutive occurrences (i, j) of a surplus simplex, smallest span first
std::pair<int, int> tightest_pair(const ZigzagFiltration& f, int lo, int hi, const std::map<SimplexId, int>& extra) {
  std::map<SimplexId, int> last;
  std::pair<int, int> best{-1, -1};
  for (int j = lo; j < hi; ++j) {
    SimplexId s = f.step(j).simplex;
    if (!extra.count(s)) continue;
    if (auto it = last.find(s); it != last.end()) {
      int i = it->second;
      if (best.first < 0 || j - i < best.second - best.first) best = {i, j};
    }
    last[s] = j;
  }
  return best;
}

}  // namespace

std::vector<Op> compile_transition(const ZigzagFiltration& from, const ZigzagFiltration& to) {
  require(from.registry_ptr() == to.registry_ptr(), "filtrations must share a registry");
  ZigzagFiltration cur = from;
  std::vector<Op> ops;
  auto emit = [&](const Op& op) {
    apply_op(cur, op);
    ops.push_back(op);
  };

  // pairs only `from` has: bring together, contract
  for (;;) {
    Window w = window_of(cur, to);
    auto extra = surplus(count_window(cur, w.a, w.from_end), count_window(to, w.a, w.to_end));
    if (extra.empty()) break;
    auto [i, j] = tightest_pair(cur, w.a, w.from_end, extra);
    require(i >= 0, "surplus simplex without a pair in the window");
    for (int k = j; k > i + 1; --k) emit(swap_op(cur, k));
    emit(Op{cur.step(i).dir == Dir::Add ? OpKind::InwardContraction : OpKind::OutwardContraction, i + 1, {}});
  }

  // pairs only `to` has: find them in the target window
  Window w = window_of(cur, to);
  auto missing = surplus(count_window(to, w.a, w.to_end), count_window(cur, w.a, w.from_end));
  std::vector<std::pair<int, int>> pairs;
  {
    std::map<SimplexId, int> last;
    for (int j = w.a; j < w.to_end; ++j) {
      SimplexId s = to.step(j).simplex;
      auto m = missing.find(s);
      if (m == missing.end() || m->second == 0) continue;
      if (auto it = last.find(s); it != last.end() && to.step(it->second).dir != to.step(j).dir) {
        pairs.emplace_back(it->second, j);
        --m->second;
        last.erase(it);
      } else {
        last[s] = j;
      }
    }
    for (const auto& [s, left] : missing)
      require(left == 0, "could not pair the steps only the target has");
    std::sort(pairs.begin(), pairs.end());
  }
  const int tw = w.to_end - w.a;
  std::vector<char> kept(static_cast<std::size_t>(tw), 1);
  for (auto [i, j] : pairs) kept[static_cast<std::size_t>(i - w.a)] = kept[static_cast<std::size_t>(j - w.a)] = 0;

  // common steps: insertion sort by switches into the target order
  using Label = std::tuple<Dir, SimplexId, int>;
  std::vector<Label> lc, lt;
  {
    std::map<Key, int> seen;
    for (int i = w.a; i < w.from_end; ++i) {
      Key k = key_of(cur.step(i));
      lc.emplace_back(k.first, k.second, seen[k]++);
    }
    seen.clear();
    for (int i = w.a; i < w.to_end; ++i) {
      if (!kept[static_cast<std::size_t>(i - w.a)]) continue;
      Key k = key_of(to.step(i));
      lt.emplace_back(k.first, k.second, seen[k]++);
    }
  }
  require(lc.size() == lt.size(), "window sizes differ after pairing");
  for (std::size_t k = 0; k < lt.size(); ++k) {
    std::size_t j = k;
    while (j < lc.size() && lc[j] != lt[k]) ++j;
    require(j < lc.size(), "target step missing from the window");
    for (std::size_t x = j; x > k; --x) {
      emit(swap_op(cur, w.a + static_cast<int>(x)));
      std::swap(lc[x], lc[x - 1]);
    }
  }

  // then each missing pair, outermost first: insert adjacent where its first
  // step goes and walk the second one out to its place
  for (auto [i, j] : pairs) {
    int before = 0, between = 0;
    for (int x = w.a; x < i; ++x) before += kept[static_cast<std::size_t>(x - w.a)];
    for (int x = i + 1; x < j; ++x) between += kept[static_cast<std::size_t>(x - w.a)];
    const Step& st = to.step(i);
    OpKind kind = st.dir == Dir::Delete ? OpKind::OutwardExpansion : OpKind::InwardExpansion;
    int p = w.a + before;
    emit(Op{kind, p, to.registry().vertices(st.simplex)});
    for (int x = 0; x < between; ++x) emit(swap_op(cur, p + 2 + x));
    kept[static_cast<std::size_t>(i - w.a)] = kept[static_cast<std::size_t>(j - w.a)] = 1;
  }
  require(cur.signature() == to.signature(), "compiled script does not reach the target");
  return ops;
}

std::vector<Op> compile_event(const Trajectories& tr, const Event& e, const ZigzagFiltration& above,
                              double value_below, int dim_cap) {
  require(value_below < e.value, "target threshold must lie below the event");
  auto below = build_filtration(tr, value_below, dim_cap, above.registry_ptr());
  return compile_transition(above, below);
}

// ---------------------------------------------------------------- vineyard

namespace {

std::vector<VineBar> bars_of(const PersistenceState& st) {
  std::vector<VineBar> out;
  for (const auto& t : st.intervals()) out.push_back({t.rep.dim, t.rep.birth, t.rep.death, t.id});
  std::sort(out.begin(), out.end());
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Vineyard vineyard(const Trajectories& tr, const VineyardOptions& opt) {
  using clock = std::chrono::steady_clock;
  Vineyard out;
  EventTimeline tl = detect_events(tr, opt.dim_cap, opt.cluster_eps);
  out.stats.tangencies = tl.tangencies;
  const auto& lv = tl.levels;
  auto reg = std::make_shared<SimplexRegistry>();

  auto check = [&](const Band& b, const PersistenceState& st, const Barcode* scratch) {
    if (opt.check_every <= 0 || b.index % opt.check_every != 0) return;
    Barcode oracle = scratch ? *scratch : barcode_from_scratch(st.filtration());
    if (st.barcode() != oracle)
      throw Error(ErrorKind::Validation, "band " + std::to_string(b.index) + " differs from the from-scratch barcode");
    ++out.stats.checked;
  };

  // top band: every pair within reach for the whole time span
  double top = lv.empty() ? 1.0 : 2 * lv.front() + 1;
  PersistenceState st = PersistenceState::build(build_filtration(tr, top, opt.dim_cap, reg));
  {
    Band b;
    b.index = 0;
    b.delta_hi = std::numeric_limits<double>::infinity();
    b.delta_lo = lv.empty() ? 0.0 : std::sqrt(std::max(0.0, lv.front()));
    b.value = top;
    b.length = st.filtration().size();
    b.bars = bars_of(st);
    out.stats.max_length = b.length;
    check(b, st, nullptr);
    out.bands.push_back(std::move(b));
  }

  for (std::size_t k = 0; k < lv.size(); ++k) {
    double hi = lv[k];
    double lo = k + 1 < lv.size() ? lv[k + 1] : 0.0;
    if (hi <= 0) break;  // nothing below a zero distance
    Band b;
    b.index = static_cast<int>(k + 1);
    b.delta_hi = std::sqrt(hi);
    b.delta_lo = std::sqrt(std::max(0.0, lo));
    b.value = 0.5 * (hi + lo);
    auto target = build_filtration(tr, b.value, opt.dim_cap, reg);

    auto t0 = clock::now();
    try {
      b.script = compile_transition(st.filtration(), target);
    } catch (const Error&) {
      b.script = transform(st.filtration(), target);
      b.fallback = true;
      ++out.stats.fallbacks;
    }
    for (const auto& op : b.script) {
      st.apply(op);
      ++out.stats.op_counts[static_cast<std::size_t>(op.kind)];
    }
    out.stats.t_update += seconds_since(t0);
    require(st.filtration().signature() == target.signature(), "band script missed the target filtration");

    Barcode scratch;
    bool have_scratch = false;
    if (opt.time_scratch) {
      auto t1 = clock::now();
      scratch = barcode_from_scratch(target);
      out.stats.t_scratch += seconds_since(t1);
      have_scratch = true;
    }
    b.length = st.filtration().size();
    out.stats.max_length = std::max(out.stats.max_length, b.length);
    b.bars = bars_of(st);
    check(b, st, have_scratch ? &scratch : nullptr);
    out.bands.push_back(std::move(b));
  }
  return out;
}

std::string format_vineyard(const Vineyard& v) {
  std::string out;
  char buf[160];
  auto num = [](double x) {
    if (std::isinf(x)) return std::string("inf");
    char b[64];
    std::snprintf(b, sizeof b, "%.12g", x);
    return std::string(b);
  };
  for (const auto& b : v.bands) {
    out += "band " + std::to_string(b.index) + " delta_hi " + num(b.delta_hi) + " delta_lo " + num(b.delta_lo) + "\n";
    for (const auto& x : b.bars) {
      std::snprintf(buf, sizeof buf, "%d %d %d %lld\n", x.dim, x.birth, x.death, static_cast<long long>(x.vine));
      out += buf;
    }
  }
  return out;
}

}  // namespace zzvine
