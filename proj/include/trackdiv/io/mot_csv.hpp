// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trackdiv/errors.hpp"
#include "trackdiv/geometry.hpp"
#include "trackdiv/io/text.hpp"

namespace trackdiv::io {

/// Zero-based source column of each field a MOT-style row must provide.
/// Defaults to MOT Challenge order: frame,id,left,top,width,height[,conf,x,y,z].
struct ColumnMap {
  std::size_t frame = 0;
  std::size_t id = 1;
  std::size_t left = 2;
  std::size_t top = 3;
  std::size_t width = 4;
  std::size_t height = 5;

  std::size_t min_columns() const { return 1 + std::max({frame, id, left, top, width, height}); }

  /// Parses a descriptor such as "frame=0,id=1,left=2,top=3,width=4,height=5".
  /// Fields that are not mentioned keep their default column.
  static ColumnMap parse(std::string_view descriptor) {
    ColumnMap map;
    for (auto item : split(descriptor, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw InvalidArgument("column map entry '" + std::string(item) + "' is not name=index");
      }
      const auto name = trim(item.substr(0, eq));
      const auto index = to_integer(trim(item.substr(eq + 1)));
      if (!index || *index < 0) {
        throw InvalidArgument("column map entry '" + std::string(item) + "' has a bad index");
      }
      const auto col = static_cast<std::size_t>(*index);
      if (name == "frame") map.frame = col;
      else if (name == "id") map.id = col;
      else if (name == "left") map.left = col;
      else if (name == "top") map.top = col;
      else if (name == "width") map.width = col;
      else if (name == "height") map.height = col;
      else throw InvalidArgument("unknown column name '" + std::string(name) + "'");
    }
    return map;
  }
};

namespace detail {

/// Groups boxes by track id, keeping tracks in order of first appearance.
class TrackBuilder {
 public:
  /// Returns false when (id, frame) was already seen.
  bool add(const std::string& id, Box box) {
    auto [it, inserted] = index_.try_emplace(id, entries_.size());
    if (inserted) entries_.emplace_back(id, std::vector<Box>{});
    auto& boxes = entries_[it->second].second;
    const auto frame = box.frame();
    if (!seen_.emplace(id, frame).second) return false;
    boxes.push_back(std::move(box));
    return true;
  }

  TrackSet build() && {
    std::vector<Track> tracks;
    tracks.reserve(entries_.size());
    for (auto& [id, boxes] : entries_) tracks.emplace_back(id, std::move(boxes));
    return TrackSet(std::move(tracks));
  }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, std::vector<Box>>> entries_;
  std::set<std::pair<std::string, FrameIndex>> seen_;
};

}  // namespace detail

/// Parses comma-separated MOT rows into tracks grouped by id.
///
/// Blank lines and lines starting with '#' are ignored. Rows with too few
/// fields, unparsable numbers, non-positive width/height, or a repeated
/// (id, frame) pair raise ParseError with the line number.
inline TrackSet parse_mot_csv(std::string_view text, const ColumnMap& columns = {}) {
  detail::TrackBuilder builder;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') return;
    const auto fields = split(body, ',');
    if (fields.size() < columns.min_columns()) {
      throw ParseError(line_no, "expected at least " + std::to_string(columns.min_columns()) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    const auto frame = to_integer(fields[columns.frame]);
    const auto id = to_integer(fields[columns.id]);
    if (!frame) throw ParseError(line_no, "bad frame '" + std::string(fields[columns.frame]) + "'");
    if (!id) throw ParseError(line_no, "bad id '" + std::string(fields[columns.id]) + "'");
    const auto left = to_double(fields[columns.left]);
    const auto top = to_double(fields[columns.top]);
    const auto width = to_double(fields[columns.width]);
    const auto height = to_double(fields[columns.height]);
    if (!left || !top || !width || !height) throw ParseError(line_no, "bad box coordinates");
    if (!(*width > 0.0) || !(*height > 0.0)) {
      throw ParseError(line_no, "non-positive box extent " + std::string(fields[columns.width]) + "x" +
                                    std::string(fields[columns.height]));
    }
    const auto key = std::to_string(*id);
    if (!builder.add(key, Box::from_ltwh(*frame, *left, *top, *width, *height))) {
      throw ParseError(line_no, "duplicate row for id " + key + " on frame " + std::to_string(*frame));
    }
  });
  return std::move(builder).build();
}

/// Inverse of parse_mot_csv for the default column order (confidence and
/// world coordinates written as -1). Requires integer ids.
inline std::string write_mot_csv(const TrackSet& tracks) {
  std::vector<std::tuple<FrameIndex, std::size_t, const Box*>> rows;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (const auto& [frame, region] : tracks[i].frames()) {
      if (region.boxes().size() != 1) {
        throw ValidationError("MOT CSV holds one box per (track, frame); track '" + tracks[i].id() + "' has more");
      }
      rows.emplace_back(frame, i, &region.boxes().front());
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
  std::string out;
  for (const auto& [frame, i, box] : rows) {
    out += std::to_string(frame) + "," + tracks[i].id() + "," + format_exact(box->x_min()) + "," +
           format_exact(box->y_min()) + "," + format_exact(box->width()) + "," + format_exact(box->height()) +
           ",-1,-1,-1,-1\n";
  }
  return out;
}

}  // namespace trackdiv::io
