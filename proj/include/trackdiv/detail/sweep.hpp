// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace trackdiv::detail {

/// A rectangle tagged with the owner it belongs to. Several rectangles may
/// share a tag; a cell covered by more than one of them reports the tag once.
struct TaggedRect {
  double x_min;
  double y_min;
  double x_max;
  double y_max;
  std::uint32_t tag;
};

/// Splits the union of `rects` into interior-disjoint cells and calls
/// `emit(area, covering_tags)` once per covered cell.
///
/// The plane is cut into vertical slabs at every distinct x edge; inside a slab
/// the active rectangles are cut at their y edges. Cells are emitted in
/// ascending (slab, y) order and `covering_tags` is sorted ascending with no
/// duplicates. The emission order depends only on the coordinates, never on the
/// order of `rects`, so two calls over the same rectangles with permuted tags
/// visit the same cells in the same order.
class SlabSweep {
 public:
  template <class Emit>
  void run(std::span<const TaggedRect> rects, Emit&& emit) {
    xs_.clear();
    for (const auto& r : rects) {
      xs_.push_back(r.x_min);
      xs_.push_back(r.x_max);
    }
    std::sort(xs_.begin(), xs_.end());
    xs_.erase(std::unique(xs_.begin(), xs_.end()), xs_.end());

    by_x_min_.resize(rects.size());
    std::iota(by_x_min_.begin(), by_x_min_.end(), std::uint32_t{0});
    std::stable_sort(by_x_min_.begin(), by_x_min_.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return rects[a].x_min < rects[b].x_min; });

    active_.clear();
    std::size_t next = 0;
    for (std::size_t k = 0; k + 1 < xs_.size(); ++k) {
      const double x_lo = xs_[k];
      const double x_hi = xs_[k + 1];
      std::erase_if(active_, [&](std::uint32_t i) { return rects[i].x_max <= x_lo; });
      while (next < by_x_min_.size() && rects[by_x_min_[next]].x_min <= x_lo) {
        active_.push_back(by_x_min_[next++]);
      }
      if (active_.empty()) {
        continue;
      }
      sweep_slab(rects, x_hi - x_lo, emit);
    }
  }

 private:
  struct YEvent {
    double y;
    std::uint32_t tag;
    int delta;
  };

  template <class Emit>
  void sweep_slab(std::span<const TaggedRect> rects, double width, Emit& emit) {
    events_.clear();
    for (std::uint32_t i : active_) {
      events_.push_back({rects[i].y_min, rects[i].tag, +1});
      events_.push_back({rects[i].y_max, rects[i].tag, -1});
    }
    std::sort(events_.begin(), events_.end(), [](const YEvent& a, const YEvent& b) {
      if (a.y != b.y) return a.y < b.y;
      return a.tag < b.tag;
    });

    counts_.clear();
    std::size_t e = 0;
    while (e < events_.size()) {
      const double y = events_[e].y;
      for (; e < events_.size() && events_[e].y == y; ++e) {
        apply(events_[e]);
      }
      if (e == events_.size() || counts_.empty()) {
        continue;
      }
      tags_.clear();
      for (const auto& [tag, count] : counts_) {
        tags_.push_back(tag);
      }
      emit(width * (events_[e].y - y), std::span<const std::uint32_t>(tags_));
    }
  }

  void apply(const YEvent& ev) {
    auto it = std::lower_bound(counts_.begin(), counts_.end(), ev.tag,
                               [](const auto& entry, std::uint32_t tag) { return entry.first < tag; });
    if (it != counts_.end() && it->first == ev.tag) {
      it->second += ev.delta;
      if (it->second == 0) {
        counts_.erase(it);
      }
    } else {
      counts_.insert(it, {ev.tag, ev.delta});
    }
  }

  std::vector<double> xs_;
  std::vector<std::uint32_t> by_x_min_;
  std::vector<std::uint32_t> active_;
  std::vector<YEvent> events_;
  std::vector<std::pair<std::uint32_t, int>> counts_;
  std::vector<std::uint32_t> tags_;
};

}  // namespace trackdiv::detail
