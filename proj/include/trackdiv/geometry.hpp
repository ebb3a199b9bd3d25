// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "trackdiv/compensated_sum.hpp"
#include "trackdiv/detail/sweep.hpp"
#include "trackdiv/errors.hpp"

namespace trackdiv {

using FrameIndex = std::int64_t;

/// Axis-aligned rectangle on one frame, in continuous pixel coordinates.
/// Construction rejects empty, inverted and non-finite rectangles.
class Box {
 public:
  Box(FrameIndex frame, double x_min, double y_min, double x_max, double y_max)
      : frame_(frame), x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
    if (!std::isfinite(x_min) || !std::isfinite(y_min) || !std::isfinite(x_max) || !std::isfinite(y_max)) {
      throw ValidationError("box on frame " + std::to_string(frame) + " has non-finite coordinates");
    }
    if (!(x_min < x_max) || !(y_min < y_max)) {
      throw ValidationError("box on frame " + std::to_string(frame) + " has zero or negative extent");
    }
  }

  /// Builds a box from MOT-style (left, top, width, height).
  static Box from_ltwh(FrameIndex frame, double left, double top, double width, double height) {
    return Box(frame, left, top, left + width, top + height);
  }

  FrameIndex frame() const noexcept { return frame_; }
  double x_min() const noexcept { return x_min_; }
  double y_min() const noexcept { return y_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_max() const noexcept { return y_max_; }
  double width() const noexcept { return x_max_ - x_min_; }
  double height() const noexcept { return y_max_ - y_min_; }
  double area() const noexcept { return width() * height(); }

  bool operator==(const Box&) const = default;

 private:
  FrameIndex frame_;
  double x_min_;
  double y_min_;
  double x_max_;
  double y_max_;
};

/// Area of the intersection of two boxes, ignoring their frame indices.
inline double overlap_area(const Box& a, const Box& b) noexcept {
  const double w = std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
  const double h = std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

namespace detail {

inline TaggedRect tagged(const Box& b, std::uint32_t tag) {
  return {b.x_min(), b.y_min(), b.x_max(), b.y_max(), tag};
}

}  // namespace detail

/// Area of the union of `boxes` (overlap counted once).
inline double union_area(std::span<const Box> boxes) {
  if (boxes.size() == 1) {
    return boxes.front().area();
  }
  std::vector<detail::TaggedRect> rects;
  rects.reserve(boxes.size());
  for (const auto& b : boxes) {
    rects.push_back(detail::tagged(b, 0));
  }
  CompensatedSum sum;
  detail::SlabSweep().run(rects, [&](double area, std::span<const std::uint32_t>) { sum += area; });
  return sum.value();
}

/// The region a track occupies on one frame: the union of one or more boxes.
class FrameRegion {
 public:
  explicit FrameRegion(std::vector<Box> boxes) : boxes_(std::move(boxes)) {
    if (boxes_.empty()) {
      throw ValidationError("frame region needs at least one box");
    }
    const FrameIndex frame = boxes_.front().frame();
    for (const auto& b : boxes_) {
      if (b.frame() != frame) {
        throw ValidationError("frame region mixes frames " + std::to_string(frame) + " and " +
                              std::to_string(b.frame()));
      }
    }
    measure_ = union_area(boxes_);
  }

  FrameIndex frame() const noexcept { return boxes_.front().frame(); }
  std::span<const Box> boxes() const noexcept { return boxes_; }
  double measure() const noexcept { return measure_; }

  bool operator==(const FrameRegion& other) const { return boxes_ == other.boxes_; }

 private:
  std::vector<Box> boxes_;
  double measure_ = 0.0;
};

/// A spatio-temporal track: an identifier plus at most one region per frame.
class Track {
 public:
  /// Groups `boxes` by frame; boxes on the same frame form one region.
  Track(std::string id, std::vector<Box> boxes) : id_(std::move(id)) {
    if (boxes.empty()) {
      throw ValidationError("track '" + id_ + "' has no boxes");
    }
    std::map<FrameIndex, std::vector<Box>> grouped;
    for (auto& b : boxes) {
      grouped[b.frame()].push_back(std::move(b));
    }
    CompensatedSum volume;
    for (auto& [frame, list] : grouped) {
      auto [it, inserted] = frames_.emplace(frame, FrameRegion(std::move(list)));
      volume += it->second.measure();
    }
    volume_ = volume.value();
  }

  const std::string& id() const noexcept { return id_; }
  const std::map<FrameIndex, FrameRegion>& frames() const noexcept { return frames_; }
  double volume() const noexcept { return volume_; }

  const FrameRegion* region_at(FrameIndex frame) const {
    auto it = frames_.find(frame);
    return it == frames_.end() ? nullptr : &it->second;
  }

  FrameIndex first_frame() const { return frames_.begin()->first; }
  FrameIndex last_frame() const { return frames_.rbegin()->first; }

  /// All boxes of the track in ascending frame order.
  std::vector<Box> boxes() const {
    std::vector<Box> out;
    for (const auto& [frame, region] : frames_) {
      out.insert(out.end(), region.boxes().begin(), region.boxes().end());
    }
    return out;
  }

  bool operator==(const Track& other) const { return id_ == other.id_ && frames_ == other.frames_; }

 private:
  std::string id_;
  std::map<FrameIndex, FrameRegion> frames_;
  double volume_ = 0.0;
};

/// Ordered collection of tracks with unique ids. May be empty.
class TrackSet {
 public:
  TrackSet() = default;

  explicit TrackSet(std::vector<Track> tracks) : tracks_(std::move(tracks)) {
    std::unordered_set<std::string> seen;
    for (const auto& t : tracks_) {
      if (!seen.insert(t.id()).second) {
        throw ValidationError("duplicate track id '" + t.id() + "'");
      }
    }
  }

  std::size_t size() const noexcept { return tracks_.size(); }
  bool empty() const noexcept { return tracks_.empty(); }
  const Track& operator[](std::size_t i) const { return tracks_[i]; }
  auto begin() const noexcept { return tracks_.begin(); }
  auto end() const noexcept { return tracks_.end(); }
  std::span<const Track> tracks() const noexcept { return tracks_; }

  bool operator==(const TrackSet& other) const { return tracks_ == other.tracks_; }

 private:
  std::vector<Track> tracks_;
};

/// v(t): sum over frames of the union area of the track's region.
inline double volume(const Track& t) noexcept { return t.volume(); }

/// v(a ∩ b), summed over the frames both tracks occupy, in ascending frame order.
inline double intersection_volume(const Track& a, const Track& b) {
  const auto& fa = a.frames();
  const auto& fb = b.frames();
  CompensatedSum total;
  detail::SlabSweep sweep;
  std::vector<detail::TaggedRect> rects;
  auto ia = fa.begin();
  auto ib = fb.begin();
  while (ia != fa.end() && ib != fb.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      rects.clear();
      for (const auto& box : ia->second.boxes()) rects.push_back(detail::tagged(box, 0));
      for (const auto& box : ib->second.boxes()) rects.push_back(detail::tagged(box, 1));
      sweep.run(rects, [&](double area, std::span<const std::uint32_t> tags) {
        if (tags.size() == 2) total += area;
      });
      ++ia;
      ++ib;
    }
  }
  return total.value();
}

/// Fraction of `t`'s volume covered by the union of `others`; 0 when `others` is empty.
inline double coverage_fraction(const Track& t, const TrackSet& others) {
  if (others.empty()) {
    return 0.0;
  }
  CompensatedSum covered;
  detail::SlabSweep sweep;
  std::vector<detail::TaggedRect> rects;
  for (const auto& [frame, region] : t.frames()) {
    rects.clear();
    for (const auto& box : region.boxes()) rects.push_back(detail::tagged(box, 0));
    for (const auto& other : others) {
      if (const auto* r = other.region_at(frame)) {
        for (const auto& box : r->boxes()) rects.push_back(detail::tagged(box, 1));
      }
    }
    sweep.run(rects, [&](double area, std::span<const std::uint32_t> tags) {
      if (tags.size() == 2) covered += area;
    });
  }
  return std::clamp(covered.value() / t.volume(), 0.0, 1.0);
}

}  // namespace trackdiv
