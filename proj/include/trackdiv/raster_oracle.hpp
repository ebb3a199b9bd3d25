// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "trackdiv/compensated_sum.hpp"
#include "trackdiv/decomposition.hpp"
#include "trackdiv/geometry.hpp"

namespace trackdiv {

/// Brute-force rasterization of a truth/system arrangement on a regular grid.
///
/// Every grid pixel of side `grid_step` is tested against every box of the
/// frame by its center point. Only valid when all coordinates are integer
/// multiples of `grid_step`; anything else is rejected. Intended as a test
/// oracle for build_decomposition, so it deliberately shares no code with the
/// sweep.
inline DecompositionSummary rasterized_decomposition_oracle(const TrackSet& truth, const TrackSet& system,
                                                            double grid_step) {
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
    throw InvalidArgument("grid_step must be positive");
  }
  auto to_grid = [&](double v) -> std::int64_t {
    const double q = v / grid_step;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q))) {
      throw InvalidArgument("coordinate " + std::to_string(v) + " is not aligned to grid step " +
                            std::to_string(grid_step));
    }
    return static_cast<std::int64_t>(r);
  };

  struct GridBox {
    std::int64_t x0, y0, x1, y1;
    bool is_truth;
    std::uint32_t track;
  };
  std::map<FrameIndex, std::vector<GridBox>> frames;
  auto collect = [&](const TrackSet& set, bool is_truth) {
    for (std::uint32_t i = 0; i < set.size(); ++i) {
      for (const auto& box : set[i].boxes()) {
        frames[box.frame()].push_back(
            {to_grid(box.x_min()), to_grid(box.y_min()), to_grid(box.x_max()), to_grid(box.y_max()), is_truth, i});
      }
    }
  };
  collect(truth, true);
  collect(system, false);

  const double pixel = grid_step * grid_step;
  std::vector<CompensatedSum> tv(truth.size()), sv(system.size());
  std::map<std::pair<std::uint32_t, std::uint32_t>, CompensatedSum> inter, mult;
  std::set<std::uint32_t> tcover, scover;
  for (const auto& [frame, boxes] : frames) {
    std::int64_t x_lo = std::numeric_limits<std::int64_t>::max(), y_lo = x_lo;
    std::int64_t x_hi = std::numeric_limits<std::int64_t>::min(), y_hi = x_hi;
    for (const auto& b : boxes) {
      x_lo = std::min(x_lo, b.x0);
      y_lo = std::min(y_lo, b.y0);
      x_hi = std::max(x_hi, b.x1);
      y_hi = std::max(y_hi, b.y1);
    }
    for (std::int64_t px = x_lo; px < x_hi; ++px) {
      for (std::int64_t py = y_lo; py < y_hi; ++py) {
        tcover.clear();
        scover.clear();
        for (const auto& b : boxes) {
          if (px >= b.x0 && px < b.x1 && py >= b.y0 && py < b.y1) {
            (b.is_truth ? tcover : scover).insert(b.track);
          }
        }
        if (tcover.empty() && scover.empty()) continue;
        for (auto i : tcover) tv[i] += pixel;
        for (auto j : scover) sv[j] += pixel;
        for (auto i : tcover)
          for (auto j : scover) inter[{i, j}] += pixel;
        mult[{static_cast<std::uint32_t>(tcover.size()), static_cast<std::uint32_t>(scover.size())}] += pixel;
      }
    }
  }

  DecompositionSummary s;
  for (const auto& v : tv) s.truth_volumes.push_back(v.value());
  for (const auto& v : sv) s.system_volumes.push_back(v.value());
  for (const auto& [k, v] : inter) s.intersections[k] = v.value();
  for (const auto& [k, v] : mult) s.multiplicity_mass[k] = v.value();
  return s;
}

}  // namespace trackdiv
