#pragma once

#include <string>

#include "spcam/core.hpp"

namespace spcam {

/// Load a PGM image (binary P5 or ASCII P2, 8- or 16-bit) with pixel values
/// normalized to [0,1] by the file's maxval.
SceneImage read_pgm(const std::string& path);

/// Write a binary P5 graymap. bits is 8 or 16; 16-bit samples are stored
/// most significant byte first per the format. Values are clamped to [0,1].
void write_pgm(const std::string& path, const SceneImage& image, int bits = 16);

/// Center-crop to the largest power-of-two sides.
SceneImage center_crop_pow2(const SceneImage& image);

}  // namespace spcam
