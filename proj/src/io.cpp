// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "fgmots/errors.hpp"
#include "fgmots/rle.hpp"

namespace fgmots {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t next = line.find(' ', pos);
    if (next == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return fields;
}

long parse_integer(const std::string& field, const char* what, long line_no) {
  long value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError(std::string(what) + " field is not an integer: '" +
                         field + "'",
                     line_no);
  }
  return value;
}

}  // namespace

std::vector<FrameAnnotations> parse_annotations(std::istream& in) {
  std::map<long, FrameAnnotations> by_frame;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw ParseError("expected 6 space-separated fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    AnnotationLine al;
    al.frame = parse_integer(fields[0], "frame", line_no);
    al.id = parse_integer(fields[1], "id", line_no);
    al.class_id =
        static_cast<int>(parse_integer(fields[2], "class", line_no));
    al.height = static_cast<int>(parse_integer(fields[3], "height", line_no));
    al.width = static_cast<int>(parse_integer(fields[4], "width", line_no));
    al.rle = fields[5];
    try {
      BinaryMask mask = rle_decode(al.height, al.width, al.rle);
      auto& fa = by_frame[al.frame];
      fa.frame = al.frame;
      fa.objects.push_back(
          {static_cast<int>(al.id), al.class_id, std::move(mask)});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    } catch (const Error& e) {
      throw ParseError(std::string("mask does not decode: ") + e.what(),
                       line_no);
    }
  }
  std::vector<FrameAnnotations> frames;
  frames.reserve(by_frame.size());
  for (auto& [frame, fa] : by_frame) frames.push_back(std::move(fa));
  return frames;
}

std::vector<FrameAnnotations> parse_annotation_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  return parse_annotations(in);
}

void write_annotations(std::ostream& out,
                       const std::vector<FrameAnnotations>& frames) {
  std::vector<const FrameAnnotations*> ordered;
  ordered.reserve(frames.size());
  for (const auto& fa : frames) ordered.push_back(&fa);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const FrameAnnotations* a, const FrameAnnotations* b) {
                     return a->frame < b->frame;
                   });
  for (const auto* fa : ordered) {
    std::vector<const MaskInstance*> objs;
    objs.reserve(fa->objects.size());
    for (const auto& obj : fa->objects) objs.push_back(&obj);
    std::stable_sort(objs.begin(), objs.end(),
                     [](const MaskInstance* a, const MaskInstance* b) {
                       return a->id < b->id;
                     });
    for (const auto* obj : objs) {
      out << fa->frame << ' ' << obj->id << ' ' << obj->class_id << ' '
          << obj->mask.height() << ' ' << obj->mask.width() << ' '
          << rle_encode(obj->mask) << '\n';
    }
  }
}

void write_annotation_file(const std::string& path,
                           const std::vector<FrameAnnotations>& frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  write_annotations(out, frames);
}

}  // namespace fgmots
