// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trackdiv/compensated_sum.hpp"
#include "trackdiv/divergence.hpp"
#include "trackdiv/errors.hpp"
#include "trackdiv/geometry.hpp"
#include "trackdiv/random.hpp"

/// Synthetic truth/system pairs: the named T/S scenarios and a few
/// parametric failure families with closed-form expected scores.
///
/// All geometry uses axis-aligned squares of side `box_size` (1 by default)
/// on an integer grid. Disjoint tracks are at least one box apart.
namespace trackdiv {

enum class TruthFamily { T1, T2, T3 };

enum class SystemFamily { S1, S2, S3, S4, S5, S6, S7, S8, S9, S10, S11, S12, S13 };

inline std::string to_string(TruthFamily t) { return "T" + std::to_string(static_cast<int>(t) + 1); }
inline std::string to_string(SystemFamily s) { return "S" + std::to_string(static_cast<int>(s) + 1); }

inline TruthFamily parse_truth_family(std::string_view s) {
  for (int i = 0; i < 3; ++i) {
    if (s == to_string(static_cast<TruthFamily>(i))) return static_cast<TruthFamily>(i);
  }
  throw InvalidArgument("unknown truth family '" + std::string(s) + "' (expected T1, T2 or T3)");
}

inline SystemFamily parse_system_family(std::string_view s) {
  for (int i = 0; i < 13; ++i) {
    if (s == to_string(static_cast<SystemFamily>(i))) return static_cast<SystemFamily>(i);
  }
  throw InvalidArgument("unknown system family '" + std::string(s) + "' (expected S1 to S13)");
}

/// T1: two tracks crossing paths, identical boxes on the middle frame.
/// T2: two disjoint parallel tracks. T3: `track_count` disjoint parallel tracks.
struct ScenarioSpec {
  TruthFamily truth = TruthFamily::T1;
  SystemFamily system = SystemFamily::S1;
  double box_size = 1.0;
  std::size_t frame_count = 0;  ///< 0 selects 5 for T1/T2 and 10 for T3
  std::size_t track_count = 0;  ///< T3 only; 0 selects 10
  FrameIndex first_frame = 1;
};

struct Scenario {
  std::string name;
  TrackSet truth;
  TrackSet system;
};

/// Whether the system family's description fits the truth family. Families
/// that talk about "the other track" need exactly two truths, S3 needs
/// tracks that meet, S11 needs disjoint truths and S12 needs ten.
inline bool is_valid_combination(TruthFamily t, SystemFamily s) {
  using S = SystemFamily;
  switch (s) {
    case S::S3:
      return t == TruthFamily::T1;
    case S::S2:
    case S::S4:
    case S::S5:
    case S::S6:
    case S::S7:
      return t != TruthFamily::T3;
    case S::S11:
      return t != TruthFamily::T1;
    case S::S12:
      return t == TruthFamily::T3;
    default:
      return true;
  }
}

namespace detail {

using Path = std::vector<Box>;  // one box per frame, ascending frames

inline Path slice(const Path& p, std::size_t from, std::size_t to) {
  return Path(p.begin() + static_cast<std::ptrdiff_t>(from), p.begin() + static_cast<std::ptrdiff_t>(to));
}

inline Path concat(Path a, const Path& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline Path left_half(const Path& p) {
  Path out;
  out.reserve(p.size());
  for (const auto& b : p) {
    out.emplace_back(b.frame(), b.x_min(), b.y_min(), b.x_min() + 0.5 * b.width(), b.y_max());
  }
  return out;
}

inline TrackSet to_track_set(std::vector<Path> paths, char prefix) {
  std::vector<Track> tracks;
  tracks.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    tracks.emplace_back(std::string(1, prefix) + std::to_string(i + 1), std::move(paths[i]));
  }
  return TrackSet(std::move(tracks));
}

inline std::size_t rounded(double x) { return static_cast<std::size_t>(std::lround(x)); }

}  // namespace detail

/// Builds the (truth, system) pair named by `spec`.
inline Scenario generate(const ScenarioSpec& spec) {
  using detail::Path;
  if (!is_valid_combination(spec.truth, spec.system)) {
    throw InvalidArgument(to_string(spec.system) + " is not defined for truth set " + to_string(spec.truth));
  }
  if (!(spec.box_size > 0.0) || !std::isfinite(spec.box_size)) {
    throw InvalidArgument("box size must be positive");
  }
  const bool t3 = spec.truth == TruthFamily::T3;
  if (!t3 && spec.track_count != 0 && spec.track_count != 2) {
    throw InvalidArgument(to_string(spec.truth) + " always has two tracks");
  }
  const std::size_t k = spec.frame_count != 0 ? spec.frame_count : (t3 ? 10 : 5);
  const std::size_t n = t3 ? (spec.track_count != 0 ? spec.track_count : 10) : 2;
  if (spec.truth == TruthFamily::T1 && (k < 3 || k % 2 == 0)) {
    throw InvalidArgument("T1 needs an odd frame count of at least 3 so the tracks meet on the middle frame");
  }
  if (k < 2) throw InvalidArgument("scenarios need at least 2 frames");
  if (spec.system == SystemFamily::S12 && n < 2) throw InvalidArgument("S12 needs at least 2 tracks");

  const double s = spec.box_size;
  auto square = [&](std::size_t f, double gx, double gy) {
    const auto frame = spec.first_frame + static_cast<FrameIndex>(f);
    return Box(frame, gx * s, gy * s, (gx + 1.0) * s, (gy + 1.0) * s);
  };

  std::vector<Path> truth(n);
  for (std::size_t f = 0; f < k; ++f) {
    const double step = 2.0 * static_cast<double>(f + 1);
    if (spec.truth == TruthFamily::T1) {
      truth[0].push_back(square(f, step, 0.0));
      truth[1].push_back(square(f, 2.0 * static_cast<double>(k - f), 0.0));
    } else {
      for (std::size_t i = 0; i < n; ++i) truth[i].push_back(square(f, step, 3.0 * static_cast<double>(i)));
    }
  }

  // Index of the middle frame; in T1 this is where the tracks coincide.
  const std::size_t mid = (k - 1) / 2;
  const auto& A = truth[0];
  std::vector<Path> system;
  switch (spec.system) {
    case SystemFamily::S1:
      system = truth;
      break;
    case SystemFamily::S2:  // one track right, the other takes over the first track's path half way
      system = {A, detail::concat(detail::slice(truth[1], 0, mid), detail::slice(A, mid, k))};
      break;
    case SystemFamily::S3:  // identities swap after the meeting frame
      system = {detail::concat(detail::slice(A, 0, mid + 1), detail::slice(truth[1], mid + 1, k)),
                detail::concat(detail::slice(truth[1], 0, mid + 1), detail::slice(A, mid + 1, k))};
      break;
    case SystemFamily::S4:
      for (const auto& p : truth) {
        system.push_back(detail::slice(p, 0, mid));
        system.push_back(detail::slice(p, mid, k));
      }
      break;
    case SystemFamily::S5:
      system = {detail::slice(A, 0, std::max<std::size_t>(1, detail::rounded(0.4 * static_cast<double>(k)))),
                detail::slice(truth[1], 0, std::max<std::size_t>(1, detail::rounded(0.6 * static_cast<double>(k))))};
      break;
    case SystemFamily::S6:
      system = {A, detail::slice(truth[1], 0, std::max<std::size_t>(1, detail::rounded(0.6 * static_cast<double>(k))))};
      break;
    case SystemFamily::S7:
      system = {A};
      break;
    case SystemFamily::S8:
      system = truth;
      system.push_back(A);
      break;
    case SystemFamily::S9:
      for (const auto& p : truth) system.push_back(detail::left_half(p));
      break;
    case SystemFamily::S10:
      for (const auto& p : truth) system.push_back(detail::slice(p, 0, k / 2));
      break;
    case SystemFamily::S11:
      system.assign(truth.begin(), truth.begin() + static_cast<std::ptrdiff_t>(n / 2));
      break;
    case SystemFamily::S12:
      system.assign(truth.begin(),
                    truth.begin() + static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(detail::rounded(0.7 * static_cast<double>(n)), 1, n)));
      break;
    case SystemFamily::S13:
      for (const auto& p : truth) {
        system.push_back(detail::slice(p, 0, std::clamp<std::size_t>(detail::rounded(0.9 * static_cast<double>(k)), 1, k)));
      }
      break;
  }
  return {to_string(spec.truth) + "/" + to_string(spec.system), detail::to_track_set(std::move(truth), 't'),
          detail::to_track_set(std::move(system), 's')};
}

/// A parametric failure family. Build instances with the named factories.
struct ParametricFamily {
  enum class Kind { split, merge, half_overlap, duplicate, random_overlap };

  Kind kind = Kind::split;
  std::size_t n_tracks = 2;
  std::size_t n_frames = 10;
  double split_fraction = 0.5;
  std::size_t split_count = 2;
  double gap = 0.0;
  double system_height = 1.0;
  std::size_t copies = 2;
  std::uint64_t seed = 0;

  /// `n_tracks` disjoint truths of `n_frames`; the first `split_count` are
  /// reported as two system tracks, breaking at `split_fraction` of the track.
  static ParametricFamily split(std::size_t n_tracks, std::size_t n_frames, double split_fraction,
                                std::optional<std::size_t> split_count = std::nullopt) {
    ParametricFamily f;
    f.kind = Kind::split;
    f.n_tracks = n_tracks;
    f.n_frames = n_frames;
    f.split_fraction = split_fraction;
    f.split_count = split_count.value_or(n_tracks);
    return f;
  }

  /// Two unit-height truths stacked vertically `gap` apart, one system box
  /// anchored at the bottom whose height is `system_height` times the stack.
  static ParametricFamily merge(double gap, double system_height, std::size_t n_frames = 10) {
    ParametricFamily f;
    f.kind = Kind::merge;
    f.n_tracks = 2;
    f.gap = gap;
    f.system_height = system_height;
    f.n_frames = n_frames;
    return f;
  }

  /// `n` disjoint truths; each system track is the left half of one truth.
  static ParametricFamily half_overlap(std::size_t n, std::size_t frames_per_track = 1) {
    ParametricFamily f;
    f.kind = Kind::half_overlap;
    f.n_tracks = n;
    f.n_frames = frames_per_track;
    return f;
  }

  /// Every truth is reported `copies` times.
  static ParametricFamily duplicate(std::size_t copies, std::size_t n_tracks = 1, std::size_t n_frames = 10) {
    ParametricFamily f;
    f.kind = Kind::duplicate;
    f.copies = copies;
    f.n_tracks = n_tracks;
    f.n_frames = n_frames;
    return f;
  }

  /// `n` disjoint single-frame truths, each covered by one system box over a
  /// uniform random fraction of its width.
  static ParametricFamily random_overlap(std::size_t n, std::uint64_t seed) {
    ParametricFamily f;
    f.kind = Kind::random_overlap;
    f.n_tracks = n;
    f.n_frames = 1;
    f.seed = seed;
    return f;
  }
};

inline std::string to_string(ParametricFamily::Kind k) {
  switch (k) {
    case ParametricFamily::Kind::split: return "split";
    case ParametricFamily::Kind::merge: return "merge";
    case ParametricFamily::Kind::half_overlap: return "half_overlap";
    case ParametricFamily::Kind::duplicate: return "duplicate";
    case ParametricFamily::Kind::random_overlap: return "random_overlap";
  }
  return "split";
}

inline ParametricFamily::Kind parse_family_kind(std::string_view s) {
  for (auto k : {ParametricFamily::Kind::split, ParametricFamily::Kind::merge, ParametricFamily::Kind::half_overlap,
                 ParametricFamily::Kind::duplicate, ParametricFamily::Kind::random_overlap}) {
    if (s == to_string(k)) return k;
  }
  throw InvalidArgument("unknown family '" + std::string(s) + "'");
}

/// Analytic expectations for a parametric instance, valid under default
/// DivergenceOptions and a 0.5 IoU threshold.
struct ClosedForm {
  std::optional<DivergenceReport> report;
  std::optional<double> mota;
  /// Mean of od_missed over the random draws (random_overlap only).
  std::optional<double> od_missed_mean;
};

struct ParametricScenario {
  std::string name;
  TrackSet truth;
  TrackSet system;
  ClosedForm expected;
};

/// Mean missed-detection divergence when each of n truths is covered by one
/// system track over a Uniform(0,1) fraction:
/// (n/(1+n)) (1/ln 2) (1 − ln(2+n)/(1+n)).
inline double bounded_error_expected_mean(std::size_t n) {
  if (n == 0) throw InvalidArgument("bounded error needs n >= 1");
  const double nn = static_cast<double>(n);
  return nn / (1.0 + nn) / std::log(2.0) * (1.0 - std::log(2.0 + nn) / (1.0 + nn));
}

namespace detail {

inline double binary_entropy(double p) { return inner_div_term(p) + inner_div_term(1.0 - p); }

inline DivergenceReport finish(DivergenceReport r) {
  r.total = component_total(r);
  return r;
}

inline ParametricScenario split_family(const ParametricFamily& f) {
  if (f.n_tracks == 0 || f.n_frames < 2) throw InvalidArgument("split needs >= 1 track and >= 2 frames");
  if (f.split_count > f.n_tracks) throw InvalidArgument("split count exceeds track count");
  if (!(f.split_fraction > 0.0 && f.split_fraction < 1.0)) throw InvalidArgument("split fraction must lie in (0,1)");
  const std::size_t F = f.n_frames;
  const auto cut = std::clamp<std::size_t>(static_cast<std::size_t>(std::floor(f.split_fraction * static_cast<double>(F))), 1, F - 1);

  std::vector<Path> truth(f.n_tracks), system;
  for (std::size_t i = 0; i < f.n_tracks; ++i) {
    const double x = 2.0 * static_cast<double>(i);
    for (std::size_t t = 0; t < F; ++t) truth[i].emplace_back(static_cast<FrameIndex>(t + 1), x, 0.0, x + 1.0, 1.0);
    if (i < f.split_count) {
      system.push_back(slice(truth[i], 0, cut));
      system.push_back(slice(truth[i], cut, F));
    } else {
      system.push_back(truth[i]);
    }
  }

  const double n = static_cast<double>(f.n_tracks);
  const double p = static_cast<double>(cut) / static_cast<double>(F);
  DivergenceReport r;
  r.n_truth = f.n_tracks;
  r.n_system = system.size();
  r.pid_ref = static_cast<double>(f.split_count) * binary_entropy(p) / n;
  ClosedForm cf{finish(r), 1.0 - static_cast<double>(f.split_count) / (n * static_cast<double>(F)), std::nullopt};
  return {"split", to_track_set(std::move(truth), 't'), to_track_set(std::move(system), 's'), cf};
}

inline ParametricScenario merge_family(const ParametricFamily& f) {
  if (!(f.gap >= 0.0) || !std::isfinite(f.gap)) throw InvalidArgument("merge gap must be >= 0");
  if (!(f.system_height > 0.0) || !std::isfinite(f.system_height)) throw InvalidArgument("system height must be > 0");
  if (f.n_frames == 0) throw InvalidArgument("merge needs >= 1 frame");
  const double g = f.gap;
  const double h = f.system_height * (2.0 + g);

  std::vector<Path> truth(2), system(1);
  for (std::size_t t = 0; t < f.n_frames; ++t) {
    const auto frame = static_cast<FrameIndex>(t + 1);
    truth[0].emplace_back(frame, 0.0, 0.0, 1.0, 1.0);
    truth[1].emplace_back(frame, 0.0, 1.0 + g, 1.0, 2.0 + g);
    system[0].emplace_back(frame, 0.0, 0.0, 1.0, h);
  }

  // Per-frame covered height of each truth; all volumes scale with the frame count.
  const double ca = std::min(h, 1.0);
  const double cb = std::clamp(h - (1.0 + g), 0.0, 1.0);
  const double alpha_sys = (ca + cb) / h;
  DivergenceReport r;
  r.n_truth = 2;
  r.n_system = 1;
  r.pid_ref = (inner_div_term(ca) + inner_div_term(cb)) / 2.0;
  r.pid_sys = inner_div_term(ca / h) + inner_div_term(cb / h);
  r.od_missed = (outer_div_term(ca, 1) + outer_div_term(cb, 1)) / 2.0;
  r.od_false_alarm = outer_div_term(alpha_sys, 2) / 3.0;
  r.missed_proportion = 1.0 - (ca + cb) / 2.0;
  r.false_alarm_proportion = 1.0 - alpha_sys;

  const double iou_a = ca / (1.0 + h - ca);
  const double iou_b = cb / (1.0 + h - cb);
  const double mota = std::max(iou_a, iou_b) >= 0.5 ? 0.5 : -0.5;
  return {"merge", to_track_set(std::move(truth), 't'), to_track_set(std::move(system), 's'),
          ClosedForm{finish(r), mota, std::nullopt}};
}

inline ParametricScenario half_overlap_family(const ParametricFamily& f) {
  if (f.n_tracks == 0 || f.n_frames == 0) throw InvalidArgument("half_overlap needs n >= 1 and >= 1 frame");
  // Tracks are tiled in time rather than space so every frame holds two boxes.
  std::vector<Path> truth(f.n_tracks), system(f.n_tracks);
  for (std::size_t i = 0; i < f.n_tracks; ++i) {
    for (std::size_t t = 0; t < f.n_frames; ++t) {
      const auto frame = static_cast<FrameIndex>(i * f.n_frames + t + 1);
      truth[i].emplace_back(frame, 0.0, 0.0, 1.0, 1.0);
      system[i].emplace_back(frame, 0.0, 0.0, 0.5, 1.0);
    }
  }
  const double n = static_cast<double>(f.n_tracks);
  DivergenceReport r;
  r.n_truth = r.n_system = f.n_tracks;
  r.pid_ref = 0.5;
  r.od_missed = n / (1.0 + n) * std::log2(2.0 * (2.0 + n) / (3.0 + n));
  r.missed_proportion = 0.5;
  return {"half_overlap", to_track_set(std::move(truth), 't'), to_track_set(std::move(system), 's'),
          ClosedForm{finish(r), 1.0, std::nullopt}};
}

inline ParametricScenario duplicate_family(const ParametricFamily& f) {
  if (f.copies == 0 || f.n_tracks == 0 || f.n_frames == 0) {
    throw InvalidArgument("duplicate needs copies, tracks and frames >= 1");
  }
  std::vector<Path> truth(f.n_tracks), system;
  for (std::size_t i = 0; i < f.n_tracks; ++i) {
    const double x = 2.0 * static_cast<double>(i);
    for (std::size_t t = 0; t < f.n_frames; ++t) truth[i].emplace_back(static_cast<FrameIndex>(t + 1), x, 0.0, x + 1.0, 1.0);
    for (std::size_t c = 0; c < f.copies; ++c) system.push_back(truth[i]);
  }
  DivergenceReport r;
  r.n_truth = f.n_tracks;
  r.n_system = system.size();
  r.td_ref = std::log2(static_cast<double>(f.copies));
  return {"duplicate", to_track_set(std::move(truth), 't'), to_track_set(std::move(system), 's'),
          ClosedForm{finish(r), 2.0 - static_cast<double>(f.copies), std::nullopt}};
}

inline ParametricScenario random_overlap_from(std::span<const double> proportions) {
  if (proportions.empty()) throw InvalidArgument("random_overlap needs n >= 1");
  const std::size_t n = proportions.size();
  std::vector<Path> truth(n), system(n);
  CompensatedSum entropy, missed, covered;
  std::size_t unmatched = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = proportions[i];
    if (!(x > 0.0 && x <= 1.0)) throw InvalidArgument("coverage proportions must lie in (0,1]");
    const auto frame = static_cast<FrameIndex>(i + 1);
    truth[i].emplace_back(frame, 0.0, 0.0, 1.0, 1.0);
    system[i].emplace_back(frame, 0.0, 0.0, x, 1.0);
    entropy += inner_div_term(x);
    missed += outer_div_term(x, n);
    covered += x;
    if (x < 0.5) ++unmatched;
  }
  const double nn = static_cast<double>(n);
  DivergenceReport r;
  r.n_truth = r.n_system = n;
  r.pid_ref = entropy.value() / nn;
  r.od_missed = missed.value() / (1.0 + nn);
  r.missed_proportion = 1.0 - covered.value() / nn;
  return {"random_overlap", to_track_set(std::move(truth), 't'), to_track_set(std::move(system), 's'),
          ClosedForm{finish(r), 1.0 - 2.0 * static_cast<double>(unmatched) / nn, bounded_error_expected_mean(n)}};
}

inline std::vector<double> uniform_proportions(std::size_t n, std::uint64_t seed) {
  const SplitMix64 rng(seed);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform_open(i);
  return x;
}

}  // namespace detail

/// Builds a parametric instance together with its analytic expectations.
inline ParametricScenario generate_parametric(const ParametricFamily& f) {
  switch (f.kind) {
    case ParametricFamily::Kind::split: return detail::split_family(f);
    case ParametricFamily::Kind::merge: return detail::merge_family(f);
    case ParametricFamily::Kind::half_overlap: return detail::half_overlap_family(f);
    case ParametricFamily::Kind::duplicate: return detail::duplicate_family(f);
    case ParametricFamily::Kind::random_overlap:
      return detail::random_overlap_from(detail::uniform_proportions(f.n_tracks, f.seed));
  }
  throw InvalidArgument("unknown parametric family");
}

/// Missed-detection divergence for truths covered at the given fractions.
inline double bounded_error_from_proportions(std::span<const double> proportions) {
  const auto sc = detail::random_overlap_from(proportions);
  return total_track_divergence(sc.truth, sc.system).od_missed;
}

/// One Monte Carlo trial: n truths with Uniform(0,1) coverage drawn from `seed`.
inline double bounded_error_trial(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("bounded error needs n >= 1");
  const auto x = detail::uniform_proportions(n, seed);
  return bounded_error_from_proportions(x);
}

}  // namespace trackdiv
