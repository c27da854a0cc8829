// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0
//
// Line-oriented annotation text format:
//
//   frame id class_id img_height img_width rle
//
// One object per line, space-separated, ids conventionally encoded as
// class_id * 1000 + instance. Writing is byte-stable: lines sorted by
// (frame, id), minimal integer formatting, '\n' terminators, so
// write(parse(write(x))) == write(x).

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fgmots/metrics.hpp"

namespace fgmots {

struct AnnotationLine {
  long frame = 0;
  long id = 0;
  int class_id = 0;
  int height = 0;
  int width = 0;
  std::string rle;

  long instance() const { return id % 1000; }
};

/// Parses annotation text. Lines are validated strictly: exactly six
/// space-separated fields, the first five integers, and an RLE string whose
/// decoded run counts cover height*width pixels. Violations raise
/// ParseError carrying the 1-based line number. Returns frames grouped and
/// sorted ascending; an empty input yields no frames.
std::vector<FrameAnnotations> parse_annotations(std::istream& in);
std::vector<FrameAnnotations> parse_annotation_file(const std::string& path);

/// Serializes frames to the text format (see above for the byte-stability
/// guarantees). Frames with no objects produce no lines.
void write_annotations(std::ostream& out,
                       const std::vector<FrameAnnotations>& frames);
void write_annotation_file(const std::string& path,
                           const std::vector<FrameAnnotations>& frames);

}  // namespace fgmots
