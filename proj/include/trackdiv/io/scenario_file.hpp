// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "trackdiv/errors.hpp"
#include "trackdiv/geometry.hpp"
#include "trackdiv/io/text.hpp"

namespace trackdiv::io {

/// Native fixture format:
///
///     trackdiv-scenario v1
///     name T3/S13
///     frames 1 10
///     canvas 22 30
///     track a
///     1 2 0 3 1
///     end
///
/// Box lines are `frame x_min y_min x_max y_max`. Doubles are written in
/// shortest round-trip form so parse(serialize(x)) == x bit for bit.
struct ScenarioFile {
  std::string name;
  FrameIndex first_frame = 0;
  FrameIndex last_frame = 0;
  double canvas_width = 0.0;
  double canvas_height = 0.0;
  TrackSet tracks;

  bool operator==(const ScenarioFile&) const = default;
};

inline constexpr std::string_view kScenarioHeader = "trackdiv-scenario v1";

inline std::string serialize_scenario(const ScenarioFile& s) {
  std::string out;
  out += kScenarioHeader;
  out += "\nname " + s.name + "\n";
  out += "frames " + std::to_string(s.first_frame) + " " + std::to_string(s.last_frame) + "\n";
  out += "canvas " + format_exact(s.canvas_width) + " " + format_exact(s.canvas_height) + "\n";
  for (const auto& t : s.tracks) {
    out += "track " + t.id() + "\n";
    for (const auto& b : t.boxes()) {
      out += std::to_string(b.frame()) + " " + format_exact(b.x_min()) + " " + format_exact(b.y_min()) + " " +
             format_exact(b.x_max()) + " " + format_exact(b.y_max()) + "\n";
    }
    out += "end\n";
  }
  return out;
}

inline ScenarioFile parse_scenario(std::string_view text) {
  ScenarioFile s;
  std::vector<Track> tracks;
  std::string current_id;
  std::vector<Box> current;
  bool in_track = false;
  bool seen_header = false, seen_name = false, seen_frames = false, seen_canvas = false;
  std::size_t last_line = 0;

  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    last_line = line_no;
    const auto line = trim(raw);
    if (!seen_header) {
      if (line != kScenarioHeader) throw ParseError(line_no, "expected header '" + std::string(kScenarioHeader) + "'");
      seen_header = true;
      return;
    }
    if (line.empty() || line.front() == '#') return;
    const auto tok = split_whitespace(line);
    const auto keyword = tok.front();

    if (in_track) {
      if (keyword == "end") {
        if (tok.size() != 1) throw ParseError(line_no, "'end' takes no arguments");
        try {
          tracks.emplace_back(std::move(current_id), std::move(current));
        } catch (const ValidationError& e) {
          throw ParseError(line_no, e.what());
        }
        current = {};
        in_track = false;
        return;
      }
      if (tok.size() != 5) throw ParseError(line_no, "box line needs frame x_min y_min x_max y_max");
      const auto frame = to_integer(tok[0]);
      if (!frame) throw ParseError(line_no, "bad frame '" + std::string(tok[0]) + "'");
      double c[4];
      for (std::size_t k = 0; k < 4; ++k) {
        const auto v = to_double(tok[k + 1]);
        if (!v) throw ParseError(line_no, "bad coordinate '" + std::string(tok[k + 1]) + "'");
        c[k] = *v;
      }
      try {
        current.emplace_back(*frame, c[0], c[1], c[2], c[3]);
      } catch (const ValidationError& e) {
        throw ParseError(line_no, e.what());
      }
      return;
    }

    if (keyword == "name") {
      const auto rest = trim(line.substr(4));
      s.name = std::string(rest);
      seen_name = true;
    } else if (keyword == "frames") {
      const auto a = tok.size() == 3 ? to_integer(tok[1]) : std::nullopt;
      const auto b = tok.size() == 3 ? to_integer(tok[2]) : std::nullopt;
      if (!a || !b || *a > *b) throw ParseError(line_no, "'frames' needs first <= last");
      s.first_frame = *a;
      s.last_frame = *b;
      seen_frames = true;
    } else if (keyword == "canvas") {
      const auto w = tok.size() == 3 ? to_double(tok[1]) : std::nullopt;
      const auto h = tok.size() == 3 ? to_double(tok[2]) : std::nullopt;
      if (!w || !h || *w < 0.0 || *h < 0.0) throw ParseError(line_no, "'canvas' needs two non-negative numbers");
      s.canvas_width = *w;
      s.canvas_height = *h;
      seen_canvas = true;
    } else if (keyword == "track") {
      if (tok.size() != 2) throw ParseError(line_no, "'track' needs exactly one id");
      current_id = std::string(tok[1]);
      in_track = true;
    } else {
      throw ParseError(line_no, "unknown keyword '" + std::string(keyword) + "'");
    }
  });

  if (!seen_header) throw ParseError(1, "empty scenario file");
  if (in_track) throw ParseError(last_line, "track '" + current_id + "' is missing 'end'");
  if (!seen_name || !seen_frames || !seen_canvas) {
    throw ParseError(last_line, "scenario needs name, frames and canvas lines");
  }
  try {
    s.tracks = TrackSet(std::move(tracks));
  } catch (const ValidationError& e) {
    throw ParseError(last_line, e.what());
  }
  return s;
}

}  // namespace trackdiv::io
