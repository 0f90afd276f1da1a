#pragma once

#include <filesystem>

#include "sarkit/raster.hpp"

namespace sarkit {

/// Load an 8-bit grayscale image. Format chosen by extension
/// (.png or .pgm); anything else is an IoError. Color or deep inputs
/// are rejected rather than converted.
GrayRaster load_image(const std::filesystem::path& path);

/// Save as 8-bit grayscale PNG or binary PGM (P5, maxval 255), by extension.
void save_image(const GrayRaster& img, const std::filesystem::path& path);

/// Masks travel as {0,255} rasters. Loading treats any nonzero as foreground.
BinaryMask load_mask(const std::filesystem::path& path);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

}  // namespace sarkit
