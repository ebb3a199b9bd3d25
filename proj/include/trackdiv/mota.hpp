// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "trackdiv/errors.hpp"
#include "trackdiv/geometry.hpp"
#include "trackdiv/hungarian.hpp"

namespace trackdiv {

/// Intersection over union of two boxes on the same frame.
inline double iou(const Box& a, const Box& b) {
  if (a.frame() != b.frame()) {
    throw InvalidArgument("iou of boxes on different frames");
  }
  const double inter = overlap_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

struct MotaOptions {
  double iou_threshold = 0.5;
};

struct MotaFrame {
  FrameIndex frame = 0;
  std::size_t ground_truth = 0;
  std::size_t matches = 0;
  std::size_t misses = 0;
  std::size_t false_positives = 0;
  std::size_t id_switches = 0;
};

struct MotaReport {
  std::vector<MotaFrame> frames;
  std::size_t ground_truth = 0;
  std::size_t matches = 0;
  std::size_t misses = 0;
  std::size_t false_positives = 0;
  std::size_t id_switches = 0;
  double mota = 0.0;
};

namespace detail {

struct FrameBox {
  std::uint32_t track;
  const Box* box;
};

inline std::map<FrameIndex, std::vector<FrameBox>> single_boxes_by_frame(const TrackSet& set, const char* role) {
  std::map<FrameIndex, std::vector<FrameBox>> out;
  for (std::uint32_t i = 0; i < set.size(); ++i) {
    for (const auto& [frame, region] : set[i].frames()) {
      if (region.boxes().size() != 1) {
        throw ValidationError(std::string(role) + " track '" + set[i].id() + "' has " +
                              std::to_string(region.boxes().size()) + " boxes on frame " + std::to_string(frame) +
                              "; MOTA needs one box per (track, frame)");
      }
      out[frame].push_back({i, &region.boxes().front()});
    }
  }
  return out;
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

/// Maximum-cardinality, then minimum Σ(1−IoU), matching of the candidate
/// pairs with IoU ≥ threshold. Solved per connected component of the
/// candidate graph; indices refer to positions in `gt` and `hyp`.
inline std::vector<std::pair<std::size_t, std::size_t>> match_frame(const std::vector<FrameBox>& gt,
                                                                     const std::vector<FrameBox>& hyp,
                                                                     double threshold) {
  struct Candidate {
    std::size_t g, h;
    double iou;
  };
  std::vector<Candidate> candidates;
  for (std::size_t g = 0; g < gt.size(); ++g) {
    for (std::size_t h = 0; h < hyp.size(); ++h) {
      const double o = iou(*gt[g].box, *hyp[h].box);
      if (o >= threshold) candidates.push_back({g, h, o});
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> matched;
  if (candidates.empty()) return matched;

  // Nodes: ground truth 0..G-1, hypotheses G..G+H-1.
  DisjointSets sets(gt.size() + hyp.size());
  for (const auto& c : candidates) sets.unite(c.g, gt.size() + c.h);

  std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> components;
  for (const auto& c : candidates) {
    auto& [rows, cols] = components[sets.find(c.g)];
    rows.push_back(c.g);
    cols.push_back(c.h);
  }
  for (auto& [root, rc] : components) {
    auto& [rows, cols] = rc;
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

    // Any forbidden pair costs more than every allowed assignment can save.
    const double forbidden = static_cast<double>(std::min(rows.size(), cols.size())) + 1.0;
    CostMatrix cost(rows.size(), cols.size(), forbidden);
    std::vector<std::vector<bool>> allowed(rows.size(), std::vector<bool>(cols.size(), false));
    for (const auto& c : candidates) {
      if (sets.find(c.g) != root) continue;
      const auto r = static_cast<std::size_t>(std::lower_bound(rows.begin(), rows.end(), c.g) - rows.begin());
      const auto k = static_cast<std::size_t>(std::lower_bound(cols.begin(), cols.end(), c.h) - cols.begin());
      cost(r, k) = 1.0 - c.iou;
      allowed[r][k] = true;
    }
    for (const auto& [r, k] : hungarian_assign(cost).pairs) {
      if (allowed[r][k]) matched.emplace_back(rows[r], cols[k]);
    }
  }
  return matched;
}

}  // namespace detail

/// CLEAR-MOT accuracy with frame-wise Hungarian matching.
///
/// A truth/system pair that was the latest match on both sides is kept while
/// its IoU stays at or above the threshold; the remaining boxes are matched
/// by Hungarian assignment on 1−IoU over pairs meeting the threshold. An ID
/// switch is charged whenever a truth track is matched to a system track other
/// than the one it was last matched to, including after a gap.
inline MotaReport mota(const TrackSet& truth, const TrackSet& system, const MotaOptions& options = {}) {
  if (!(options.iou_threshold > 0.0 && options.iou_threshold <= 1.0)) {
    throw InvalidArgument("IoU threshold must lie in (0, 1]");
  }
  const auto gt_frames = detail::single_boxes_by_frame(truth, "truth");
  const auto hyp_frames = detail::single_boxes_by_frame(system, "system");

  std::set<FrameIndex> frames;
  for (const auto& [f, _] : gt_frames) frames.insert(f);
  for (const auto& [f, _] : hyp_frames) frames.insert(f);

  constexpr auto none = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> last_system(truth.size(), none);
  std::vector<std::uint32_t> last_truth(system.size(), none);
  const std::vector<detail::FrameBox> empty;

  MotaReport report;
  for (const FrameIndex frame : frames) {
    const auto git = gt_frames.find(frame);
    const auto hit = hyp_frames.find(frame);
    const auto& gt = git == gt_frames.end() ? empty : git->second;
    const auto& hyp = hit == hyp_frames.end() ? empty : hit->second;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<bool> gt_used(gt.size(), false), hyp_used(hyp.size(), false);
    for (std::size_t g = 0; g < gt.size(); ++g) {
      const auto j = last_system[gt[g].track];
      if (j == none || last_truth[j] != gt[g].track) continue;
      for (std::size_t h = 0; h < hyp.size(); ++h) {
        if (hyp[h].track != j || hyp_used[h]) continue;
        if (iou(*gt[g].box, *hyp[h].box) >= options.iou_threshold) {
          gt_used[g] = hyp_used[h] = true;
          pairs.emplace_back(gt[g].track, j);
        }
        break;
      }
    }

    std::vector<detail::FrameBox> gt_rest, hyp_rest;
    for (std::size_t g = 0; g < gt.size(); ++g)
      if (!gt_used[g]) gt_rest.push_back(gt[g]);
    for (std::size_t h = 0; h < hyp.size(); ++h)
      if (!hyp_used[h]) hyp_rest.push_back(hyp[h]);
    for (const auto& [g, h] : detail::match_frame(gt_rest, hyp_rest, options.iou_threshold)) {
      pairs.emplace_back(gt_rest[g].track, hyp_rest[h].track);
    }

    MotaFrame row;
    row.frame = frame;
    row.ground_truth = gt.size();
    row.matches = pairs.size();
    row.misses = gt.size() - pairs.size();
    row.false_positives = hyp.size() - pairs.size();
    for (const auto& [i, j] : pairs) {
      if (last_system[i] != none && last_system[i] != j) ++row.id_switches;
      last_system[i] = j;
      last_truth[j] = i;
    }
    report.ground_truth += row.ground_truth;
    report.matches += row.matches;
    report.misses += row.misses;
    report.false_positives += row.false_positives;
    report.id_switches += row.id_switches;
    report.frames.push_back(row);
  }

  if (report.ground_truth == 0) {
    throw InvalidArgument("MOTA is undefined without ground-truth boxes");
  }
  const double errors = static_cast<double>(report.misses + report.false_positives + report.id_switches);
  report.mota = 1.0 - errors / static_cast<double>(report.ground_truth);
  return report;
}

}  // namespace trackdiv
