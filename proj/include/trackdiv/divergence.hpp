// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trackdiv/compensated_sum.hpp"
#include "trackdiv/decomposition.hpp"
#include "trackdiv/errors.hpp"
#include "trackdiv/geometry.hpp"

/// Track divergence: an entropy-based distance between two sets of
/// spatio-temporal box tracks, split into six directional components.
///
/// Naming used below, for a truth set T (n tracks) and system set S (m tracks):
///  - D_id(X||Y): inner divergence of X conditioned on each track of Y, averaged over Y.
///  - D_od(X||Y): outer divergence, one term per track of Y measuring how much of
///    it the union of X leaves uncovered.
///  - D_td(X||Y): track density divergence, multiplicity excess of X over each track of Y.
/// All logarithms are base 2, so every component is in bits.
namespace trackdiv {

/// Divisor used to average the outer-divergence terms.
///
/// The terms of one direction are summed over a "summand" set and measure
/// coverage by the opposite "covering" set. `one_plus_m` divides by 1 + |covering|
/// (in the missed-detection direction that is 1 + number of system tracks);
/// `one_plus_n` divides by 1 + |summand|. The symmetric means fall back to
/// `one_plus_m` when either count is zero.
enum class OuterMeanMode { one_plus_m, one_plus_n, arithmetic, harmonic, geometric };

/// What inner divergence is purified against.
enum class PurificationBaseline {
  own_set,          ///< D_pid(X||Y) = D_id(X||Y) − D_id(X||X)
  conditioning_set  ///< D_pid(X||Y) = D_id(X||Y) − D_id(Y||Y)
};

/// Normalizer N of the per-track density divergence.
enum class DensityNormalizer {
  multiplicity_mass,  ///< N(τ) = Σ_{x∈τ} multiplicity of the other set at x
  track_volume        ///< N(τ) = v(τ)
};

struct DivergenceOptions {
  OuterMeanMode outer_mean = OuterMeanMode::one_plus_m;
  PurificationBaseline purification = PurificationBaseline::own_set;
  DensityNormalizer density = DensityNormalizer::multiplicity_mass;
};

inline double outer_mean(OuterMeanMode mode, std::size_t summands, std::size_t covering) {
  const auto k = static_cast<double>(summands);
  const auto c = static_cast<double>(covering);
  const bool degenerate = summands == 0 || covering == 0;
  switch (mode) {
    case OuterMeanMode::one_plus_m:
      return 1.0 + c;
    case OuterMeanMode::one_plus_n:
      return 1.0 + k;
    case OuterMeanMode::arithmetic:
      return degenerate ? 1.0 + c : 0.5 * (k + c);
    case OuterMeanMode::harmonic:
      return degenerate ? 1.0 + c : 2.0 * k * c / (k + c);
    case OuterMeanMode::geometric:
      return degenerate ? 1.0 + c : std::sqrt(k * c);
  }
  return 1.0 + c;
}

inline std::string_view to_string(OuterMeanMode mode) {
  switch (mode) {
    case OuterMeanMode::one_plus_m: return "1+m";
    case OuterMeanMode::one_plus_n: return "1+n";
    case OuterMeanMode::arithmetic: return "arith";
    case OuterMeanMode::harmonic: return "harm";
    case OuterMeanMode::geometric: return "geom";
  }
  return "1+m";
}

inline OuterMeanMode parse_outer_mean(std::string_view s) {
  if (s == "1+m") return OuterMeanMode::one_plus_m;
  if (s == "1+n") return OuterMeanMode::one_plus_n;
  if (s == "arith") return OuterMeanMode::arithmetic;
  if (s == "harm") return OuterMeanMode::harmonic;
  if (s == "geom") return OuterMeanMode::geometric;
  throw InvalidArgument("unknown outer mean '" + std::string(s) + "'");
}

/// The six components of D_TD plus report-only context.
struct DivergenceReport {
  std::size_t n_truth = 0;
  std::size_t n_system = 0;
  double pid_ref = 0.0;         ///< D_pid(S||T), inner divergence relative to reference
  double pid_sys = 0.0;         ///< D_pid(T||S), inner divergence relative to system
  double od_missed = 0.0;       ///< D_od(S||T)
  double od_false_alarm = 0.0;  ///< D_od(T||S)
  double td_ref = 0.0;          ///< D_td(S||T)
  double td_sys = 0.0;          ///< D_td(T||S)
  double missed_proportion = 0.0;
  double false_alarm_proportion = 0.0;
  double total = 0.0;

  double inner_total() const noexcept { return pid_ref + pid_sys; }

  bool operator==(const DivergenceReport&) const = default;
};

/// Component sum in the order that makes D_TD(T,S) and D_TD(S,T) bit-identical:
/// each swapped pair is added first, and IEEE addition is commutative.
inline double component_total(const DivergenceReport& r) noexcept {
  return ((r.pid_ref + r.pid_sys) + (r.od_missed + r.od_false_alarm)) + (r.td_ref + r.td_sys);
}

/// −r·log2(r), with both endpoints mapped to 0.
inline double inner_div_term(double overlap_ratio) {
  if (!(overlap_ratio >= 0.0 && overlap_ratio <= 1.0)) {
    throw InvalidArgument("overlap ratio " + std::to_string(overlap_ratio) + " outside [0,1]");
  }
  if (overlap_ratio == 0.0 || overlap_ratio == 1.0) {
    return 0.0;
  }
  return -overlap_ratio * std::log2(overlap_ratio);
}

/// log2((2+c)/(1+α(1+c))) for a track with coverage fraction α by a set of c tracks.
inline double outer_div_term(double coverage, std::size_t covering_count) {
  const double c = static_cast<double>(covering_count);
  const double a = std::clamp(coverage, 0.0, 1.0);
  return std::log2((2.0 + c) / (1.0 + a * (1.0 + c)));
}

/// Per-track quantities of one role (truth or system) of an arrangement.
struct RoleStatistics {
  std::vector<double> volume;
  /// Volume covered by the union of the opposite role.
  std::vector<double> covered;
  /// Σ area·(opposite multiplicity) over the track.
  std::vector<double> density_mass;
  /// Σ area·k·log2(k/own) over cells of the track where the opposite
  /// multiplicity k exceeds this role's multiplicity `own`.
  std::vector<double> density_excess;
  /// Per track: (opposite-role index, intersection volume), ascending index.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> cross;
  /// Per track: (same-role index, intersection volume), ascending index, self included.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> self;

  std::size_t size() const noexcept { return volume.size(); }
};

/// Everything the six components need, accumulated in one pass over the
/// joint arrangement.
struct OverlapStatistics {
  RoleStatistics truth;
  RoleStatistics system;
  double truth_union = 0.0;
  double system_union = 0.0;
  double joint_union = 0.0;
};

namespace detail {

using PairSums = std::map<std::pair<std::uint32_t, std::uint32_t>, CompensatedSum>;

struct RoleAccumulator {
  explicit RoleAccumulator(std::size_t n) : volume(n), covered(n), density_mass(n), density_excess(n) {}

  void add_cell(double area, std::span<const std::uint32_t> own, std::size_t opposite_count) {
    const auto own_count = own.size();
    const auto k = static_cast<double>(opposite_count);
    double excess = 0.0;
    if (opposite_count > own_count) {
      excess = area * k * std::log2(k / static_cast<double>(own_count));
    }
    for (auto i : own) {
      volume[i] += area;
      if (opposite_count > 0) covered[i] += area;
      density_mass[i] += area * k;
      if (excess > 0.0) density_excess[i] += excess;
    }
    for (std::size_t a = 0; a < own.size(); ++a) {
      for (std::size_t b = a; b < own.size(); ++b) self[{own[a], own[b]}] += area;
    }
  }

  RoleStatistics finish() const {
    RoleStatistics s;
    const auto n = volume.size();
    for (std::size_t i = 0; i < n; ++i) {
      s.volume.push_back(volume[i].value());
      s.covered.push_back(covered[i].value());
      s.density_mass.push_back(density_mass[i].value());
      s.density_excess.push_back(density_excess[i].value());
    }
    s.self.resize(n);
    s.cross.resize(n);
    for (const auto& [key, sum] : self) {
      const auto [a, b] = key;
      s.self[a].emplace_back(b, sum.value());
      if (a != b) s.self[b].emplace_back(a, sum.value());
    }
    return s;
  }

  std::vector<CompensatedSum> volume, covered, density_mass, density_excess;
  PairSums self;
};

}  // namespace detail

inline OverlapStatistics overlap_statistics(const TrackSet& truth, const TrackSet& system) {
  detail::RoleAccumulator t(truth.size()), s(system.size());
  detail::PairSums cross;
  CompensatedSum truth_union, system_union, joint_union;
  for_each_cell(truth, system, [&](const CellView& c) {
    t.add_cell(c.area, c.truth, c.system.size());
    s.add_cell(c.area, c.system, c.truth.size());
    for (auto i : c.truth)
      for (auto j : c.system) cross[{i, j}] += c.area;
    if (!c.truth.empty()) truth_union += c.area;
    if (!c.system.empty()) system_union += c.area;
    if (!c.truth.empty() && !c.system.empty()) joint_union += c.area;
  });
  OverlapStatistics out{t.finish(), s.finish(), truth_union.value(), system_union.value(), joint_union.value()};
  for (const auto& [key, sum] : cross) {
    const auto [i, j] = key;
    out.truth.cross[i].emplace_back(j, sum.value());
    out.system.cross[j].emplace_back(i, sum.value());
  }
  return out;
}

namespace detail {

using OverlapLists = std::vector<std::vector<std::pair<std::uint32_t, double>>>;

/// (1/|Y|) Σ_y Σ_x −r log2 r with r = v(x ∩ y)/v(y), for conditioning role Y.
inline double mean_inner_divergence(const RoleStatistics& conditioning, const OverlapLists& overlaps) {
  const auto count = conditioning.size();
  if (count == 0) {
    return 0.0;
  }
  CompensatedSum total;
  for (std::size_t y = 0; y < count; ++y) {
    const double v = conditioning.volume[y];
    if (!(v > 0.0)) continue;
    CompensatedSum given;
    for (const auto& [x, inter] : overlaps[y]) {
      given += inner_div_term(std::clamp(inter / v, 0.0, 1.0));
    }
    total += given.value();
  }
  return total.value() / static_cast<double>(count);
}

/// Σ over the summand role of outer terms, divided by the mean μ.
inline double outer_divergence(const RoleStatistics& summands, std::size_t covering_count, OuterMeanMode mode) {
  const auto count = summands.size();
  if (count == 0) {
    return 0.0;
  }
  CompensatedSum total;
  for (std::size_t k = 0; k < count; ++k) {
    total += outer_div_term(summands.covered[k] / summands.volume[k], covering_count);
  }
  return total.value() / outer_mean(mode, count, covering_count);
}

inline double density_term(double excess, double mass, double volume, DensityNormalizer normalizer) {
  const double n = normalizer == DensityNormalizer::multiplicity_mass ? mass : volume;
  return (n > 0.0 && excess > 0.0) ? excess / n : 0.0;
}

/// Uniform mean over `role` tracks of the opposite role's density divergence.
inline double mean_density_divergence(const RoleStatistics& role, DensityNormalizer normalizer) {
  const auto count = role.size();
  if (count == 0) {
    return 0.0;
  }
  CompensatedSum total;
  for (std::size_t i = 0; i < count; ++i) {
    total += density_term(role.density_excess[i], role.density_mass[i], role.volume[i], normalizer);
  }
  return total.value() / static_cast<double>(count);
}

inline double uncovered_fraction(double covered, double whole) {
  return whole > 0.0 ? std::clamp(1.0 - covered / whole, 0.0, 1.0) : 0.0;
}

}  // namespace detail

/// D_id(T|s) = Σ_i −r_i log2 r_i with r_i = v(τ_i ∩ s)/v(s).
inline double inner_div_set_given_track(const TrackSet& truth, const Track& s) {
  const auto stats = overlap_statistics(truth, TrackSet({s}));
  CompensatedSum sum;
  for (const auto& [i, inter] : stats.system.cross[0]) {
    sum += inner_div_term(std::clamp(inter / stats.system.volume[0], 0.0, 1.0));
  }
  return sum.value();
}

/// D_id(T||S): inner divergence of T conditioned on each system track, averaged over S.
inline double inner_div(const TrackSet& truth, const TrackSet& system) {
  const auto stats = overlap_statistics(truth, system);
  return detail::mean_inner_divergence(stats.system, stats.system.cross);
}

/// D_pid(T||S) = max(0, D_id(T||S) − baseline).
inline double purified_inner_div(const TrackSet& truth, const TrackSet& system,
                                 PurificationBaseline baseline = PurificationBaseline::own_set) {
  const auto stats = overlap_statistics(truth, system);
  const double raw = detail::mean_inner_divergence(stats.system, stats.system.cross);
  const double base = baseline == PurificationBaseline::own_set
                          ? detail::mean_inner_divergence(stats.truth, stats.truth.self)
                          : detail::mean_inner_divergence(stats.system, stats.system.self);
  return std::max(0.0, raw - base);
}

/// D_od(T|s) = log2((2+n)/(1+α(1+n))), α the fraction of s covered by ∪T.
inline double outer_div_given_track(const TrackSet& truth, const Track& s) {
  return outer_div_term(coverage_fraction(s, truth), truth.size());
}

/// D_od(T||S): outer terms of every system track against ∪T, divided by μ.
inline double outer_div(const TrackSet& truth, const TrackSet& system,
                        OuterMeanMode mode = OuterMeanMode::one_plus_m) {
  const auto stats = overlap_statistics(truth, system);
  return detail::outer_divergence(stats.system, truth.size(), mode);
}

/// D_td(S|τ_i) evaluated on a materialized decomposition.
inline double track_density_given_truth(const CellDecomposition& decomp, std::size_t truth_index,
                                        DensityNormalizer normalizer = DensityNormalizer::multiplicity_mass) {
  if (truth_index >= decomp.n_truth) {
    throw InvalidArgument("truth index " + std::to_string(truth_index) + " out of range");
  }
  const auto i = static_cast<std::uint32_t>(truth_index);
  CompensatedSum mass, excess, volume;
  for (const auto& [frame, cells] : decomp.frames) {
    for (const auto& c : cells) {
      if (!std::binary_search(c.truth_cover.begin(), c.truth_cover.end(), i)) continue;
      const auto k = static_cast<double>(c.system_count());
      volume += c.area;
      mass += c.area * k;
      if (c.system_count() > c.truth_count()) {
        excess += c.area * k * std::log2(k / static_cast<double>(c.truth_count()));
      }
    }
  }
  return detail::density_term(excess.value(), mass.value(), volume.value(), normalizer);
}

/// D_td(S||T): mean over truth tracks of D_td(S|τ_i). Swap the arguments for D_td(T||S).
inline double track_density(const TrackSet& truth, const TrackSet& system,
                            DensityNormalizer normalizer = DensityNormalizer::multiplicity_mass) {
  const auto stats = overlap_statistics(truth, system);
  return detail::mean_density_divergence(stats.truth, normalizer);
}

/// All six components from precomputed statistics.
inline DivergenceReport divergence_report(const OverlapStatistics& stats, const DivergenceOptions& options = {}) {
  const auto& T = stats.truth;
  const auto& S = stats.system;
  DivergenceReport r;
  r.n_truth = T.size();
  r.n_system = S.size();

  const double id_s_given_t = detail::mean_inner_divergence(T, T.cross);
  const double id_t_given_s = detail::mean_inner_divergence(S, S.cross);
  const double self_t = detail::mean_inner_divergence(T, T.self);
  const double self_s = detail::mean_inner_divergence(S, S.self);
  if (options.purification == PurificationBaseline::own_set) {
    r.pid_ref = std::max(0.0, id_s_given_t - self_s);
    r.pid_sys = std::max(0.0, id_t_given_s - self_t);
  } else {
    r.pid_ref = std::max(0.0, id_s_given_t - self_t);
    r.pid_sys = std::max(0.0, id_t_given_s - self_s);
  }

  r.od_missed = detail::outer_divergence(T, S.size(), options.outer_mean);
  r.od_false_alarm = detail::outer_divergence(S, T.size(), options.outer_mean);
  r.td_ref = detail::mean_density_divergence(T, options.density);
  r.td_sys = detail::mean_density_divergence(S, options.density);

  r.missed_proportion = detail::uncovered_fraction(stats.joint_union, stats.truth_union);
  r.false_alarm_proportion = detail::uncovered_fraction(stats.joint_union, stats.system_union);
  r.total = component_total(r);
  return r;
}

/// D_TD(T,S) with all components.
inline DivergenceReport total_track_divergence(const TrackSet& truth, const TrackSet& system,
                                               const DivergenceOptions& options = {}) {
  return divergence_report(overlap_statistics(truth, system), options);
}

inline DivergenceReport total_track_divergence(const TrackSet& truth, const TrackSet& system, OuterMeanMode mode) {
  DivergenceOptions options;
  options.outer_mean = mode;
  return total_track_divergence(truth, system, options);
}

}  // namespace trackdiv
