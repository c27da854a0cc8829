// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#include "fgmots/rle.hpp"

#include <cstdint>
#include <vector>

#include "fgmots/errors.hpp"

namespace fgmots {

std::string rle_encode(const BinaryMask& mask) {
  const auto& runs = mask.runs();
  std::string out;
  out.reserve(runs.size() * 2);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::int64_t x = static_cast<std::int64_t>(runs[i]);
    if (i > 2) x -= static_cast<std::int64_t>(runs[i - 2]);
    bool more = true;
    while (more) {
      char c = static_cast<char>(x & 0x1f);
      x >>= 5;
      more = (c & 0x10) ? x != -1 : x != 0;
      if (more) c |= 0x20;
      c += 48;
      out.push_back(c);
    }
  }
  return out;
}

BinaryMask rle_decode(int height, int width, const std::string& encoded) {
  std::vector<std::uint32_t> runs;
  std::size_t pos = 0;
  while (pos < encoded.size()) {
    std::int64_t x = 0;
    int shift = 0;
    bool more = true;
    while (more) {
      if (pos >= encoded.size()) {
        throw ParseError("truncated run-length string");
      }
      const int raw = static_cast<unsigned char>(encoded[pos]) - 48;
      if (raw < 0 || raw > 0x3f) {
        throw ParseError("run-length string has a character out of range");
      }
      x |= static_cast<std::int64_t>(raw & 0x1f) << shift;
      more = (raw & 0x20) != 0;
      ++pos;
      if (!more && (raw & 0x10)) {
        x |= -1LL << (shift + 5);
      }
      shift += 5;
    }
    if (runs.size() > 2) {
      x += static_cast<std::int64_t>(runs[runs.size() - 2]);
    }
    if (x < 0 || x > 0xffffffffLL) {
      throw ParseError("run-length count out of range after delta");
    }
    runs.push_back(static_cast<std::uint32_t>(x));
  }
  if (runs.empty()) {
    throw ParseError("empty run-length string");
  }
  try {
    return BinaryMask(height, width, std::move(runs));
  } catch (const ShapeError&) {
    throw ShapeError("run-length counts do not cover height*width pixels");
  }
}

}  // namespace fgmots
