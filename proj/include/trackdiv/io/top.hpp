// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "trackdiv/errors.hpp"
#include "trackdiv/geometry.hpp"
#include "trackdiv/io/mot_csv.hpp"
#include "trackdiv/io/text.hpp"

namespace trackdiv::io {

/// Parses 12-field TOP annotation rows:
/// person, frame, head_valid, body_valid, head L,T,R,B, body L,T,R,B.
///
/// `use_body` selects the body box (default) or the head box; rows whose
/// flag for the selected box is 0 are skipped. Tracks keep file order.
inline TrackSet parse_top(std::string_view text, bool use_body = true) {
  detail::TrackBuilder builder;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') return;
    const auto fields = split(body, ',');
    if (fields.size() != 12) {
      throw ParseError(line_no, "expected 12 fields, got " + std::to_string(fields.size()));
    }
    const auto person = to_integer(fields[0]);
    const auto frame = to_integer(fields[1]);
    const auto head_valid = to_integer(fields[2]);
    const auto body_valid = to_integer(fields[3]);
    if (!person || !frame || !head_valid || !body_valid) {
      throw ParseError(line_no, "bad integer field");
    }
    if ((use_body ? *body_valid : *head_valid) == 0) return;

    const std::size_t first = use_body ? 8 : 4;
    double c[4];
    for (std::size_t k = 0; k < 4; ++k) {
      const auto v = to_double(fields[first + k]);
      if (!v) throw ParseError(line_no, "bad coordinate '" + std::string(fields[first + k]) + "'");
      c[k] = *v;
    }
    if (!(c[0] < c[2]) || !(c[1] < c[3])) {
      throw ParseError(line_no, "box needs left < right and top < bottom");
    }
    const auto key = std::to_string(*person);
    if (!builder.add(key, Box(*frame, c[0], c[1], c[2], c[3]))) {
      throw ParseError(line_no, "duplicate row for person " + key + " on frame " + std::to_string(*frame));
    }
  });
  return std::move(builder).build();
}

}  // namespace trackdiv::io
