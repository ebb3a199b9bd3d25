// SPDX-License-Identifier: Apache-2.0
// Scene generators and brute-force oracles shared by the test suites and the
// acceptance binary. Nothing here calls into the sweep or the divergence code.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "trackdiv/trackdiv.hpp"

namespace trackdiv::testing {

inline TrackSet make_set(const std::vector<std::vector<Box>>& tracks, char prefix = 't') {
  std::vector<Track> out;
  for (std::size_t i = 0; i < tracks.size(); ++i) out.emplace_back(std::string(1, prefix) + std::to_string(i), tracks[i]);
  return TrackSet(std::move(out));
}

/// Random integer boxes on a small canvas. Tracks may overlap each other
/// and may hold several boxes on one frame.
inline TrackSet random_integer_set(std::mt19937_64& rng, std::size_t max_tracks, int frames, int canvas,
                                   char prefix, bool allow_multi_box = true) {
  std::uniform_int_distribution<std::size_t> n_dist(0, max_tracks);
  std::uniform_int_distribution<int> coord(0, canvas - 1);
  std::uniform_int_distribution<int> frame_dist(1, frames);
  std::uniform_int_distribution<int> count_dist(1, frames + 1);
  std::bernoulli_distribution extra(0.2);
  const std::size_t n = n_dist(rng);
  std::vector<std::vector<Box>> tracks;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Box> boxes;
    std::set<int> used;
    const int k = count_dist(rng);
    for (int b = 0; b < k; ++b) {
      const int f = frame_dist(rng);
      if (!allow_multi_box && !used.insert(f).second) continue;
      int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
      if (x0 > x1) std::swap(x0, x1);
      if (y0 > y1) std::swap(y0, y1);
      boxes.emplace_back(f, x0, y0, x1 + 1, y1 + 1);
      if (allow_multi_box && extra(rng)) {
        const int ex = coord(rng), ey = coord(rng);
        boxes.emplace_back(f, ex, ey, ex + 2, ey + 1);
      }
    }
    if (!boxes.empty()) tracks.push_back(std::move(boxes));
  }
  return make_set(tracks, prefix);
}

/// Random set whose tracks never share area: on every frame each track owns a
/// distinct 4x4 cell of a grid and draws its box inside it.
inline TrackSet random_disjoint_set(std::mt19937_64& rng, std::size_t max_tracks, int frames, char prefix) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_tracks);
  const std::size_t n = n_dist(rng);
  const int grid = 4;
  std::uniform_int_distribution<int> inner(0, 3);
  std::bernoulli_distribution present(0.7);
  std::vector<std::vector<Box>> tracks(n);
  for (int f = 1; f <= frames; ++f) {
    std::vector<int> cells(grid * grid);
    std::iota(cells.begin(), cells.end(), 0);
    std::shuffle(cells.begin(), cells.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (!present(rng) && !(f == frames && tracks[i].empty())) continue;
      const int cx = 4 * (cells[i] % grid), cy = 4 * (cells[i] / grid);
      int x0 = inner(rng), x1 = inner(rng), y0 = inner(rng), y1 = inner(rng);
      if (x0 > x1) std::swap(x0, x1);
      if (y0 > y1) std::swap(y0, y1);
      tracks[i].emplace_back(f, cx + x0, cy + y0, cx + x1 + 1, cy + y1 + 1);
    }
  }
  return make_set(tracks, prefix);
}

/// Component values computed pixel by pixel straight from the definitions.
/// Valid for integer-coordinate scenes only.
inline DivergenceReport brute_force_report(const TrackSet& T, const TrackSet& S) {
  const std::size_t n = T.size(), m = S.size();
  std::vector<double> vT(n, 0), vS(m, 0), covT(n, 0), covS(m, 0);
  std::vector<double> massT(n, 0), massS(m, 0), excT(n, 0), excS(m, 0);
  std::vector<std::vector<double>> I(n, std::vector<double>(m, 0));
  std::vector<std::vector<double>> selfT(n, std::vector<double>(n, 0)), selfS(m, std::vector<double>(m, 0));
  double uT = 0, uS = 0, uJ = 0;

  std::set<FrameIndex> frames;
  for (const auto& t : T) for (const auto& [f, r] : t.frames()) frames.insert(f);
  for (const auto& s : S) for (const auto& [f, r] : s.frames()) frames.insert(f);

  auto covers = [](const Track& t, FrameIndex f, double px, double py) {
    const auto* region = t.region_at(f);
    if (region == nullptr) return false;
    for (const auto& b : region->boxes()) {
      if (b.x_min() < px && px < b.x_max() && b.y_min() < py && py < b.y_max()) return true;
    }
    return false;
  };

  for (const FrameIndex f : frames) {
    double x_lo = std::numeric_limits<double>::max(), y_lo = x_lo, x_hi = -x_lo, y_hi = -x_lo;
    for (const auto* set : {&T, &S}) {
      for (const auto& t : *set) {
        if (const auto* r = t.region_at(f)) {
          for (const auto& b : r->boxes()) {
            x_lo = std::min(x_lo, b.x_min()); y_lo = std::min(y_lo, b.y_min());
            x_hi = std::max(x_hi, b.x_max()); y_hi = std::max(y_hi, b.y_max());
          }
        }
      }
    }
    for (double x = x_lo; x < x_hi; x += 1.0) {
      for (double y = y_lo; y < y_hi; y += 1.0) {
        std::vector<std::size_t> tc, sc;
        for (std::size_t i = 0; i < n; ++i) if (covers(T[i], f, x + 0.5, y + 0.5)) tc.push_back(i);
        for (std::size_t j = 0; j < m; ++j) if (covers(S[j], f, x + 0.5, y + 0.5)) sc.push_back(j);
        const double kt = static_cast<double>(tc.size()), ks = static_cast<double>(sc.size());
        if (!tc.empty()) uT += 1;
        if (!sc.empty()) uS += 1;
        if (!tc.empty() && !sc.empty()) uJ += 1;
        for (auto i : tc) {
          vT[i] += 1;
          if (!sc.empty()) covT[i] += 1;
          massT[i] += ks;
          if (ks > kt) excT[i] += ks * std::log2(ks / kt);
          for (auto j : sc) I[i][j] += 1;
          for (auto i2 : tc) selfT[i][i2] += 1;
        }
        for (auto j : sc) {
          vS[j] += 1;
          if (!tc.empty()) covS[j] += 1;
          massS[j] += kt;
          if (kt > ks) excS[j] += kt * std::log2(kt / ks);
          for (auto j2 : sc) selfS[j][j2] += 1;
        }
      }
    }
  }

  auto h = [](double r) { return (r <= 0 || r >= 1) ? 0.0 : -r * std::log2(r); };
  auto mean = [](double sum, std::size_t k) { return k == 0 ? 0.0 : sum / static_cast<double>(k); };
  double id_s_t = 0, id_t_s = 0, id_s_s = 0, id_t_t = 0;
  for (std::size_t i = 0; i < n; ++i) for (std::size_t j = 0; j < m; ++j) id_s_t += h(I[i][j] / vT[i]);
  for (std::size_t j = 0; j < m; ++j) for (std::size_t i = 0; i < n; ++i) id_t_s += h(I[i][j] / vS[j]);
  for (std::size_t a = 0; a < m; ++a) for (std::size_t b = 0; b < m; ++b) id_s_s += h(selfS[a][b] / vS[b]);
  for (std::size_t a = 0; a < n; ++a) for (std::size_t b = 0; b < n; ++b) id_t_t += h(selfT[a][b] / vT[b]);

  DivergenceReport r;
  r.n_truth = n;
  r.n_system = m;
  r.pid_ref = std::max(0.0, mean(id_s_t, n) - mean(id_s_s, m));
  r.pid_sys = std::max(0.0, mean(id_t_s, m) - mean(id_t_t, n));
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  for (std::size_t i = 0; i < n; ++i) r.od_missed += std::log2((2 + dm) / (1 + covT[i] / vT[i] * (1 + dm)));
  for (std::size_t j = 0; j < m; ++j) r.od_false_alarm += std::log2((2 + dn) / (1 + covS[j] / vS[j] * (1 + dn)));
  r.od_missed /= 1 + dm;
  r.od_false_alarm /= 1 + dn;
  for (std::size_t i = 0; i < n; ++i) r.td_ref += massT[i] > 0 ? excT[i] / massT[i] : 0.0;
  for (std::size_t j = 0; j < m; ++j) r.td_sys += massS[j] > 0 ? excS[j] / massS[j] : 0.0;
  r.td_ref = mean(r.td_ref, n);
  r.td_sys = mean(r.td_sys, m);
  r.missed_proportion = uT > 0 ? 1 - uJ / uT : 0.0;
  r.false_alarm_proportion = uS > 0 ? 1 - uJ / uS : 0.0;
  r.total = r.pid_ref + r.pid_sys + r.od_missed + r.od_false_alarm + r.td_ref + r.td_sys;
  return r;
}

/// Minimum assignment cost over every injection of the smaller side.
inline double brute_force_assignment_cost(const CostMatrix& c) {
  const bool flip = c.rows() > c.cols();
  const std::size_t small = flip ? c.cols() : c.rows();
  const std::size_t large = flip ? c.rows() : c.cols();
  if (small == 0) return 0.0;
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0;
    for (std::size_t k = 0; k < small; ++k) cost += flip ? c(perm[k], k) : c(k, perm[k]);
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  std::function<double(double, double, double, double, double, double, double, int)> step =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int depth) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        const double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
        return step(lo, mid, flo, flm, fmid, left, eps / 2, depth - 1) +
               step(mid, hi, fmid, frm, fhi, right, eps / 2, depth - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return step(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, 60);
}

/// Relative-or-absolute closeness used for closed-form comparisons.
inline bool close_rel(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace trackdiv::testing
