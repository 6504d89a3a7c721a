#pragma once

// Brute-force check that every change of the edge-event sequence over a
// fine threshold grid is explained by some detected critical level.

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "zzvine/dpc.hpp"

namespace zzvine::testing {

// (initial edges, ordered (edge, deleted?) crossings) from positions directly
inline std::pair<std::vector<std::pair<int, int>>, std::vector<std::tuple<int, int, bool>>> edge_sequence(
    const Trajectories& tr, double v) {
  std::vector<std::pair<int, int>> init;
  std::vector<std::tuple<double, int, int, bool>> ev;
  const int n = tr.points(), s = tr.samples();
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      auto rel = [&](int t, int d) {
        return tr.pos[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)][static_cast<std::size_t>(d)] -
               tr.pos[static_cast<std::size_t>(t)][static_cast<std::size_t>(q)][static_cast<std::size_t>(d)];
      };
      double d0 = 0;
      for (int d = 0; d < 3; ++d) d0 += rel(0, d) * rel(0, d);
      if (d0 < v) init.emplace_back(p, q);
      for (int t = 0; t + 1 < s; ++t) {
        double A = 0, B = 0, C = -v;
        for (int d = 0; d < 3; ++d) {
          double r0 = rel(t, d), dr = rel(t + 1, d) - r0;
          A += dr * dr;
          B += 2 * r0 * dr;
          C += r0 * r0;
        }
        std::vector<double> us;
        if (A == 0) {
          if (B != 0) us.push_back(-C / B);
        } else {
          double disc = B * B - 4 * A * C;
          if (disc > 0) {
            us.push_back((-B - std::sqrt(disc)) / (2 * A));
            us.push_back((-B + std::sqrt(disc)) / (2 * A));
          }
        }
        for (double u : us)
          if (u > 0 && u < 1) ev.emplace_back(t + u, p, q, 2 * A * u + B > 0);
      }
    }
  std::sort(ev.begin(), ev.end());
  std::vector<std::tuple<int, int, bool>> seq;
  for (auto& [t, p, q, del] : ev) seq.emplace_back(p, q, del);
  return {init, seq};
}

struct ScanReport {
  int changes = 0;
  int unexplained = 0;
};

inline ScanReport grid_scan(const Trajectories& tr, const EventTimeline& tl, int steps = 10000) {
  ScanReport rep;
  double top = tl.levels.empty() ? 1.0 : 1.1 * tl.levels.front() + 1e-9;
  auto prev = edge_sequence(tr, top);
  double prev_v = top;
  for (int g = 1; g <= steps; ++g) {
    double v = top * (1.0 - static_cast<double>(g) / steps);
    auto cur = edge_sequence(tr, v);
    if (cur != prev) {
      ++rep.changes;
      bool ok = std::any_of(tl.levels.begin(), tl.levels.end(), [&](double l) { return l >= v && l <= prev_v; });
      if (!ok) ++rep.unexplained;
    }
    prev = std::move(cur);
    prev_v = v;
  }
  return rep;
}

}  // namespace zzvine::testing
