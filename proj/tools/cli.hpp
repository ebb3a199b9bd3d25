// SPDX-License-Identifier: Apache-2.0
// Command-line driver: score, mota, simulate and sweep.
#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "trackdiv/trackdiv.hpp"

namespace trackdiv::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kValidationError = 3 };

struct InputSpec {
  std::string path;
  std::string format = "mot-csv";
};

/// Flags shared by the commands that read a truth/system pair.
struct PairFlags {
  InputSpec truth;
  InputSpec system;
  std::string columns;
  bool top_head = false;
  std::string report = "text";
  std::string out;
};

struct ScoreFlags : PairFlags {
  std::string outer_mean = "1+m";
  std::string purification = "own-set";
  std::string density = "multiplicity";
};

struct MotaFlags : PairFlags {
  double iou_threshold = 0.5;
};

/// Family parameters accepted by simulate and sweep.
struct FamilyFlags {
  std::string family;
  std::size_t n = 0;
  std::size_t frames = 0;
  double split_fraction = 0.5;
  std::size_t split_count = 0;
  double gap = 0.0;
  double system_height = 1.0;
  std::size_t copies = 2;
  std::uint64_t seed = 0;
};

struct SimulateFlags : FamilyFlags {
  std::string truth;
  std::string system;
  double box_size = 1.0;
  std::string out;
};

struct SweepFlags : FamilyFlags {
  std::string parameter = "n";
  double from = 1.0;
  double to = 1.0;
  double step = 1.0;
  std::string out;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << text;
}

inline TrackSet load_tracks(const InputSpec& in, const PairFlags& flags) {
  const auto text = read_file(in.path);
  try {
    if (in.format == "mot-csv") return io::parse_mot_csv(text, io::ColumnMap::parse(flags.columns));
    if (in.format == "top") return io::parse_top(text, !flags.top_head);
    if (in.format == "scenario") return io::parse_scenario(text).tracks;
  } catch (const ParseError& e) {
    throw ParseError(e.line(), in.path + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
  throw InvalidArgument("unknown format '" + in.format + "'");
}

inline io::ReportStyle parse_style(const std::string& s) {
  if (s == "text") return io::ReportStyle::text;
  if (s == "json-lines") return io::ReportStyle::structured;
  throw InvalidArgument("unknown report style '" + s + "'");
}

inline DivergenceOptions divergence_options(const ScoreFlags& f) {
  DivergenceOptions o;
  o.outer_mean = parse_outer_mean(f.outer_mean);
  if (f.purification == "own-set") o.purification = PurificationBaseline::own_set;
  else if (f.purification == "conditioning-set") o.purification = PurificationBaseline::conditioning_set;
  else throw InvalidArgument("unknown purification baseline '" + f.purification + "'");
  if (f.density == "multiplicity") o.density = DensityNormalizer::multiplicity_mass;
  else if (f.density == "volume") o.density = DensityNormalizer::track_volume;
  else throw InvalidArgument("unknown density normalizer '" + f.density + "'");
  return o;
}

inline int cmd_score(const ScoreFlags& f, std::ostream& out) {
  const auto options = divergence_options(f);
  const auto style = parse_style(f.report);
  const auto truth = load_tracks(f.truth, f);
  const auto system = load_tracks(f.system, f);
  const auto report = total_track_divergence(truth, system, options);
  out << io::serialize_report(report, style);
  if (!f.out.empty()) write_file(f.out, io::serialize_report(report, io::ReportStyle::structured));
  return kOk;
}

inline int cmd_mota(const MotaFlags& f, std::ostream& out) {
  const auto style = parse_style(f.report);
  const auto truth = load_tracks(f.truth, f);
  const auto system = load_tracks(f.system, f);
  const auto report = mota(truth, system, MotaOptions{f.iou_threshold});
  out << io::serialize_mota(report, style);
  if (!f.out.empty()) write_file(f.out, io::serialize_mota(report, io::ReportStyle::structured));
  return kOk;
}

inline ParametricFamily family_from(const FamilyFlags& f) {
  using Kind = ParametricFamily::Kind;
  switch (parse_family_kind(f.family)) {
    case Kind::split: {
      const std::size_t n = f.n != 0 ? f.n : 2;
      return ParametricFamily::split(n, f.frames != 0 ? f.frames : 10, f.split_fraction,
                                     f.split_count != 0 ? std::optional<std::size_t>(f.split_count) : std::nullopt);
    }
    case Kind::merge:
      return ParametricFamily::merge(f.gap, f.system_height, f.frames != 0 ? f.frames : 10);
    case Kind::half_overlap:
      return ParametricFamily::half_overlap(f.n != 0 ? f.n : 10, f.frames != 0 ? f.frames : 1);
    case Kind::duplicate:
      return ParametricFamily::duplicate(f.copies, f.n != 0 ? f.n : 1, f.frames != 0 ? f.frames : 10);
    case Kind::random_overlap:
      return ParametricFamily::random_overlap(f.n != 0 ? f.n : 100, f.seed);
  }
  throw InvalidArgument("unknown family");
}

inline void append_record(std::string& out, const std::string& key, double value) {
  out += nlohmann::json{{"key", key}, {"value", value}}.dump();
  out += '\n';
}

inline io::ScenarioFile scenario_file(const std::string& name, const TrackSet& tracks, const TrackSet& other) {
  io::ScenarioFile s;
  s.name = name;
  s.first_frame = std::numeric_limits<FrameIndex>::max();
  s.last_frame = std::numeric_limits<FrameIndex>::min();
  for (const auto* set : {&tracks, &other}) {
    for (const auto& t : *set) {
      s.first_frame = std::min(s.first_frame, t.first_frame());
      s.last_frame = std::max(s.last_frame, t.last_frame());
      for (const auto& b : t.boxes()) {
        s.canvas_width = std::max(s.canvas_width, b.x_max());
        s.canvas_height = std::max(s.canvas_height, b.y_max());
      }
    }
  }
  if (s.first_frame > s.last_frame) s.first_frame = s.last_frame = 0;
  s.tracks = tracks;
  return s;
}

inline int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  const bool named = !f.truth.empty() || !f.system.empty();
  if (named == !f.family.empty()) {
    throw InvalidArgument("simulate needs either --truth and --system or --family");
  }
  std::string name;
  TrackSet truth, system;
  std::string expected;
  if (named) {
    if (f.truth.empty() || f.system.empty()) throw InvalidArgument("simulate needs both --truth and --system");
    ScenarioSpec spec;
    spec.truth = parse_truth_family(f.truth);
    spec.system = parse_system_family(f.system);
    spec.box_size = f.box_size;
    spec.frame_count = f.frames;
    spec.track_count = f.n;
    auto sc = generate(spec);
    name = sc.name;
    truth = std::move(sc.truth);
    system = std::move(sc.system);
  } else {
    auto sc = generate_parametric(family_from(f));
    name = sc.name;
    truth = std::move(sc.truth);
    system = std::move(sc.system);
    const auto& cf = sc.expected;
    if (cf.report) {
      const auto& r = *cf.report;
      append_record(expected, "closed_form_pid_ref", r.pid_ref);
      append_record(expected, "closed_form_pid_sys", r.pid_sys);
      append_record(expected, "closed_form_od_missed", r.od_missed);
      append_record(expected, "closed_form_od_false_alarm", r.od_false_alarm);
      append_record(expected, "closed_form_td_ref", r.td_ref);
      append_record(expected, "closed_form_td_sys", r.td_sys);
      append_record(expected, "closed_form_total", r.total);
    }
    if (cf.mota) append_record(expected, "closed_form_mota", *cf.mota);
    if (cf.od_missed_mean) append_record(expected, "closed_form_od_missed_mean", *cf.od_missed_mean);
  }

  const auto report = total_track_divergence(truth, system);
  std::string record = io::serialize_report(report, io::ReportStyle::structured);
  append_record(record, "mota", mota(truth, system).mota);
  record += expected;

  const std::filesystem::path dir = std::filesystem::path(f.out) / name;
  write_file(dir / "truth.scenario", io::serialize_scenario(scenario_file(name + " truth", truth, system)));
  write_file(dir / "system.scenario", io::serialize_scenario(scenario_file(name + " system", system, truth)));
  write_file(dir / "expected.jsonl", record);
  out << "wrote " << dir.string() << "\n" << io::serialize_report(report);
  return kOk;
}

inline void set_parameter(FamilyFlags& f, const std::string& name, double v) {
  auto count = [&](double x) {
    if (!(x >= 0.0) || x != std::floor(x)) throw InvalidArgument(name + " must be a non-negative integer");
    return static_cast<std::size_t>(x);
  };
  if (name == "n") f.n = count(v);
  else if (name == "frames") f.frames = count(v);
  else if (name == "split_fraction") f.split_fraction = v;
  else if (name == "split_count") f.split_count = count(v);
  else if (name == "gap") f.gap = v;
  else if (name == "system_height") f.system_height = v;
  else if (name == "copies") f.copies = count(v);
  else if (name == "seed") f.seed = count(v);
  else throw InvalidArgument("unknown sweep parameter '" + name + "'");
}

/// One CSV row per parameter value, in ascending order. The grid is built as
/// from + i*step so long sweeps do not drift.
inline int cmd_sweep(const SweepFlags& f, std::ostream& out) {
  if (f.family.empty()) throw InvalidArgument("sweep needs --family");
  if (!(f.step > 0.0) || !(f.to >= f.from)) throw InvalidArgument("sweep needs step > 0 and to >= from");
  const auto points = static_cast<std::size_t>(std::floor((f.to - f.from) / f.step + 1e-9)) + 1;

  std::string csv = "parameter,pid_ref,pid_sys,od_missed,od_false_alarm,td_ref,td_sys,total,mota\n";
  for (std::size_t i = 0; i < points; ++i) {
    const double v = f.from + static_cast<double>(i) * f.step;
    FamilyFlags point = f;
    set_parameter(point, f.parameter, v);
    const auto sc = generate_parametric(family_from(point));
    const auto r = total_track_divergence(sc.truth, sc.system);
    const auto m = mota(sc.truth, sc.system).mota;
    for (double x : {v, r.pid_ref, r.pid_sys, r.od_missed, r.od_false_alarm, r.td_ref, r.td_sys, r.total}) {
      csv += io::format_exact(x);
      csv += ',';
    }
    csv += io::format_exact(m);
    csv += '\n';
  }
  if (f.out.empty()) out << csv;
  else write_file(f.out, csv);
  return kOk;
}

namespace detail {

inline void add_pair_options(CLI::App* cmd, PairFlags& f) {
  cmd->add_option("truth", f.truth.path, "Ground-truth track file")->required();
  cmd->add_option("system", f.system.path, "System output track file")->required();
  const std::vector<std::string> formats{"mot-csv", "top", "scenario"};
  cmd->add_option("--truth-format", f.truth.format, "mot-csv | top | scenario")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  cmd->add_option("--system-format", f.system.format, "mot-csv | top | scenario")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  cmd->add_option("--columns", f.columns, "MOT column map, e.g. frame=0,id=1,left=2,top=3,width=4,height=5");
  cmd->add_flag("--top-head", f.top_head, "Score TOP head boxes instead of body boxes");
  cmd->add_option("--report", f.report, "text | json-lines")
      ->check(CLI::IsMember({"text", "json-lines"}))
      ->capture_default_str();
  cmd->add_option("--out", f.out, "Also write a json-lines copy of the report here");
}

inline void add_family_options(CLI::App* cmd, FamilyFlags& f) {
  cmd->add_option("--family", f.family, "split | merge | half_overlap | duplicate | random_overlap");
  cmd->add_option("--n", f.n, "Number of truth tracks");
  cmd->add_option("--frames", f.frames, "Frames per track");
  cmd->add_option("--split-fraction", f.split_fraction, "split: where each track breaks")->capture_default_str();
  cmd->add_option("--split-count", f.split_count, "split: how many tracks break (default all)");
  cmd->add_option("--gap", f.gap, "merge: vertical gap between the truths")->capture_default_str();
  cmd->add_option("--system-height", f.system_height, "merge: system height / truth stack height")
      ->capture_default_str();
  cmd->add_option("--copies", f.copies, "duplicate: copies of each truth")->capture_default_str();
  cmd->add_option("--seed", f.seed, "random_overlap: generator seed")->capture_default_str();
}

}  // namespace detail

/// Runs the driver on `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Track divergence scoring for multi-object tracking output"};
  app.require_subcommand(1);

  ScoreFlags score;
  auto* score_cmd = app.add_subcommand("score", "Total track divergence report");
  detail::add_pair_options(score_cmd, score);
  score_cmd->add_option("--outer-mean", score.outer_mean, "1+m | 1+n | arith | harm | geom")
      ->check(CLI::IsMember({"1+m", "1+n", "arith", "harm", "geom"}))
      ->capture_default_str();
  score_cmd->add_option("--purification", score.purification, "own-set | conditioning-set")
      ->check(CLI::IsMember({"own-set", "conditioning-set"}))
      ->capture_default_str();
  score_cmd->add_option("--density-normalizer", score.density, "multiplicity | volume")
      ->check(CLI::IsMember({"multiplicity", "volume"}))
      ->capture_default_str();

  MotaFlags motaf;
  auto* mota_cmd = app.add_subcommand("mota", "CLEAR-MOT accuracy baseline");
  detail::add_pair_options(mota_cmd, motaf);
  mota_cmd->add_option("--iou-threshold", motaf.iou_threshold, "Match gate")->capture_default_str();

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Write a synthetic scenario and its expected scores");
  sim_cmd->add_option("--truth", sim.truth, "T1 | T2 | T3");
  sim_cmd->add_option("--system", sim.system, "S1 .. S13");
  sim_cmd->add_option("--box-size", sim.box_size, "Side of the square boxes")->capture_default_str();
  detail::add_family_options(sim_cmd, sim);
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();

  SweepFlags sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Score a parametric family over a parameter range, as CSV");
  detail::add_family_options(sweep_cmd, sweep);
  sweep_cmd->add_option("--param", sweep.parameter,
                        "n | frames | split_fraction | split_count | gap | system_height | copies | seed")
      ->capture_default_str();
  sweep_cmd->add_option("--from", sweep.from, "First value")->capture_default_str();
  sweep_cmd->add_option("--to", sweep.to, "Last value")->capture_default_str();
  sweep_cmd->add_option("--step", sweep.step, "Increment")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "CSV path (default standard output)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (score_cmd->parsed()) return cmd_score(score, out);
    if (mota_cmd->parsed()) return cmd_mota(motaf, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidationError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace trackdiv::cli
