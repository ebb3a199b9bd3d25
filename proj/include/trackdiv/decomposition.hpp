// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "trackdiv/compensated_sum.hpp"
#include "trackdiv/detail/sweep.hpp"
#include "trackdiv/geometry.hpp"

namespace trackdiv {

/// One covered cell as seen by a cell visitor. Spans are only valid during the call.
struct CellView {
  FrameIndex frame;
  double area;
  std::span<const std::uint32_t> truth;   ///< covering truth track indices, ascending
  std::span<const std::uint32_t> system;  ///< covering system track indices, ascending
};

namespace detail {

inline constexpr std::uint32_t kSystemTagBase = 0x8000'0000u;

}  // namespace detail

/// Visits every covered cell of the joint arrangement of `truth` and `system`,
/// frame by frame in ascending order, cells in sweep order within a frame.
///
/// Swapping the two sets visits the same cells in the same order with the
/// cover lists exchanged.
template <class Visitor>
void for_each_cell(const TrackSet& truth, const TrackSet& system, Visitor&& visit) {
  if (truth.size() >= detail::kSystemTagBase || system.size() >= detail::kSystemTagBase) {
    throw InvalidArgument("track set too large");
  }
  std::map<FrameIndex, std::vector<detail::TaggedRect>> frames;
  auto collect = [&](const TrackSet& set, std::uint32_t base) {
    for (std::uint32_t i = 0; i < set.size(); ++i) {
      for (const auto& [frame, region] : set[i].frames()) {
        auto& rects = frames[frame];
        for (const auto& box : region.boxes()) rects.push_back(detail::tagged(box, base + i));
      }
    }
  };
  collect(truth, 0);
  collect(system, detail::kSystemTagBase);

  detail::SlabSweep sweep;
  std::vector<std::uint32_t> sys;
  for (const auto& [frame, rects] : frames) {
    sweep.run(rects, [&](double area, std::span<const std::uint32_t> tags) {
      // Tags are ascending, so truth tags precede system tags.
      auto split = std::lower_bound(tags.begin(), tags.end(), detail::kSystemTagBase);
      const auto n_truth = static_cast<std::size_t>(split - tags.begin());
      sys.clear();
      for (auto it = split; it != tags.end(); ++it) sys.push_back(*it - detail::kSystemTagBase);
      visit(CellView{frame, area, tags.first(n_truth), std::span<const std::uint32_t>(sys)});
    });
  }
}

/// A materialized cell of the arrangement.
struct Cell {
  double area = 0.0;
  std::vector<std::uint32_t> truth_cover;
  std::vector<std::uint32_t> system_cover;

  std::size_t truth_count() const noexcept { return truth_cover.size(); }
  std::size_t system_count() const noexcept { return system_cover.size(); }
};

/// Per-frame interior-disjoint cells, each with constant truth cover and
/// system multiplicity. Cells covered by nothing are not stored.
struct CellDecomposition {
  std::size_t n_truth = 0;
  std::size_t n_system = 0;
  std::map<FrameIndex, std::vector<Cell>> frames;

  std::size_t cell_count() const {
    std::size_t n = 0;
    for (const auto& [frame, cells] : frames) n += cells.size();
    return n;
  }
};

inline CellDecomposition build_decomposition(const TrackSet& truth, const TrackSet& system) {
  CellDecomposition out;
  out.n_truth = truth.size();
  out.n_system = system.size();
  for_each_cell(truth, system, [&](const CellView& c) {
    out.frames[c.frame].push_back(
        Cell{c.area, {c.truth.begin(), c.truth.end()}, {c.system.begin(), c.system.end()}});
  });
  return out;
}

/// Aggregate quantities of an arrangement, comparable between the exact
/// decomposition and the rasterization oracle.
struct DecompositionSummary {
  std::vector<double> truth_volumes;
  std::vector<double> system_volumes;
  /// (truth index, system index) -> v(τ_i ∩ σ_j); only nonzero pairs.
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> intersections;
  /// (|truth cover|, |system cover|) -> covered area·frames with that multiplicity.
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> multiplicity_mass;
};

inline DecompositionSummary summarize(const CellDecomposition& d) {
  std::vector<CompensatedSum> tv(d.n_truth), sv(d.n_system);
  std::map<std::pair<std::uint32_t, std::uint32_t>, CompensatedSum> inter, mult;
  for (const auto& [frame, cells] : d.frames) {
    for (const auto& c : cells) {
      for (auto i : c.truth_cover) tv[i] += c.area;
      for (auto j : c.system_cover) sv[j] += c.area;
      for (auto i : c.truth_cover)
        for (auto j : c.system_cover) inter[{i, j}] += c.area;
      mult[{static_cast<std::uint32_t>(c.truth_count()), static_cast<std::uint32_t>(c.system_count())}] += c.area;
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
