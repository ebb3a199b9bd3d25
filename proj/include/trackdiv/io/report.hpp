// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "trackdiv/divergence.hpp"
#include "trackdiv/errors.hpp"
#include "trackdiv/io/text.hpp"
#include "trackdiv/mota.hpp"

namespace trackdiv::io {

enum class ReportStyle { text, structured };

inline constexpr std::string_view kReportHeader = "trackdiv-report v1";

namespace detail {

inline std::string fixed6(double v, const char* prefix = "") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%.6f", prefix, v);
  return buf;
}

inline void json_line(std::string& out, std::string_view key, const nlohmann::json& value) {
  out += nlohmann::json{{"key", key}, {"value", value}}.dump();
  out += '\n';
}

}  // namespace detail

/// Text style follows the familiar summary table, one labelled row per
/// component with six decimals. Structured style is a header line followed by
/// one JSON object per field; doubles keep full precision.
inline std::string serialize_report(const DivergenceReport& r, ReportStyle style = ReportStyle::text) {
  std::string out;
  if (style == ReportStyle::text) {
    auto row = [&](std::string_view label, const std::string& value) {
      out += label;
      out += ' ';
      out += value;
      out += '\n';
    };
    row("Reference # of Tracks", std::to_string(r.n_truth));
    row("System # of Tracks", std::to_string(r.n_system));
    row("Inner div relative to reference", detail::fixed6(r.pid_ref));
    row("Inner div relative to system", detail::fixed6(r.pid_sys));
    row("Total inner div error", detail::fixed6(r.inner_total(), "+"));
    row("Missed detection error", detail::fixed6(r.od_missed, "+"));
    row("Missed detection proportion", detail::fixed6(r.missed_proportion));
    row("Density error rel to reference", detail::fixed6(r.td_ref, "+"));
    row("False alarm error", detail::fixed6(r.od_false_alarm, "+"));
    row("False alarm proportion", detail::fixed6(r.false_alarm_proportion));
    row("Density error rel to system", detail::fixed6(r.td_sys, "+"));
    out += "-----------\n";
    row("Total KL-track error", detail::fixed6(r.total, "="));
    return out;
  }
  out += kReportHeader;
  out += '\n';
  detail::json_line(out, "n_truth", r.n_truth);
  detail::json_line(out, "n_system", r.n_system);
  detail::json_line(out, "pid_ref", r.pid_ref);
  detail::json_line(out, "pid_sys", r.pid_sys);
  detail::json_line(out, "od_missed", r.od_missed);
  detail::json_line(out, "od_false_alarm", r.od_false_alarm);
  detail::json_line(out, "td_ref", r.td_ref);
  detail::json_line(out, "td_sys", r.td_sys);
  detail::json_line(out, "missed_proportion", r.missed_proportion);
  detail::json_line(out, "false_alarm_proportion", r.false_alarm_proportion);
  detail::json_line(out, "total", r.total);
  return out;
}

/// Reads the structured style back. Unknown keys are errors unless
/// `allow_extra_keys` is set, so a renamed field cannot silently drop out of a
/// comparison.
inline DivergenceReport parse_structured_report(std::string_view text, bool allow_extra_keys = false) {
  DivergenceReport r;
  bool header = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const auto line = trim(raw);
    if (!header) {
      if (line != kReportHeader) throw ParseError(line_no, "expected header '" + std::string(kReportHeader) + "'");
      header = true;
      return;
    }
    if (line.empty()) return;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!j.is_object() || !j.contains("key") || !j.contains("value") || !j["key"].is_string() ||
        !j["value"].is_number()) {
      throw ParseError(line_no, "record needs a string key and a numeric value");
    }
    const auto key = j["key"].get<std::string>();
    const auto& v = j["value"];
    if (key == "n_truth") r.n_truth = v.get<std::size_t>();
    else if (key == "n_system") r.n_system = v.get<std::size_t>();
    else if (key == "pid_ref") r.pid_ref = v.get<double>();
    else if (key == "pid_sys") r.pid_sys = v.get<double>();
    else if (key == "od_missed") r.od_missed = v.get<double>();
    else if (key == "od_false_alarm") r.od_false_alarm = v.get<double>();
    else if (key == "td_ref") r.td_ref = v.get<double>();
    else if (key == "td_sys") r.td_sys = v.get<double>();
    else if (key == "missed_proportion") r.missed_proportion = v.get<double>();
    else if (key == "false_alarm_proportion") r.false_alarm_proportion = v.get<double>();
    else if (key == "total") r.total = v.get<double>();
    else if (!allow_extra_keys) throw ParseError(line_no, "unknown key '" + key + "'");
  });
  if (!header) throw ParseError(1, "empty report");
  return r;
}

inline std::string serialize_mota(const MotaReport& r, ReportStyle style = ReportStyle::text) {
  std::string out;
  if (style == ReportStyle::text) {
    out += "Ground truth boxes " + std::to_string(r.ground_truth) + "\n";
    out += "Matches " + std::to_string(r.matches) + "\n";
    out += "Misses " + std::to_string(r.misses) + "\n";
    out += "False positives " + std::to_string(r.false_positives) + "\n";
    out += "ID switches " + std::to_string(r.id_switches) + "\n";
    out += "-----------\n";
    out += "MOTA " + detail::fixed6(r.mota, "=") + "\n";
    return out;
  }
  out += kReportHeader;
  out += '\n';
  detail::json_line(out, "ground_truth", r.ground_truth);
  detail::json_line(out, "matches", r.matches);
  detail::json_line(out, "misses", r.misses);
  detail::json_line(out, "false_positives", r.false_positives);
  detail::json_line(out, "id_switches", r.id_switches);
  detail::json_line(out, "mota", r.mota);
  return out;
}

}  // namespace trackdiv::io
