// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0
//
// Compressed run-length string codec for binary masks. Runs are column-major
// pixel counts, first run counting zeros. Counts from index 2 onward are
// delta-encoded against the count two positions back, then written as a
// variable-length sequence of 5-bit chunks, LSB first. Each output char
// carries one chunk plus a continuation bit (0x20) and is offset by 48 into
// printable ASCII.

#pragma once

#include <string>

#include "fgmots/geometry.hpp"

namespace fgmots {

// Encodes the mask's runs to the compressed string form.
std::string rle_encode(const BinaryMask& mask);

// Decodes a compressed string to a mask of the given shape. Throws
// ParseError when the string is malformed (bad char, dangling continuation)
// and ShapeError when the decoded counts do not cover height*width pixels.
BinaryMask rle_decode(int height, int width, const std::string& encoded);

}  // namespace fgmots
