#pragma once

#include <cstdint>

#include "sarkit/raster.hpp"

namespace sarkit {

enum class MorphOp {
    Erode,
    Dilate,
    Open,   // erode then dilate
    Close,  // dilate then erode
};

/// Default smoothing kernel side for an image: nearest odd integer to
/// min(width, height) / 25, clamped to [3, 9].
int default_blur_side(const GrayRaster& img);

/// Default sigma for a kernel side: 0.3 * ((side - 1) * 0.5 - 1) + 0.8.
double default_blur_sigma(int kernel_side);

/// Gaussian smoothing with edge-replicated borders. Kernel weights are
/// normalized to sum 1; results round to the nearest intensity.
GrayRaster gaussian_blur(const GrayRaster& img, int kernel_side, double sigma);

/// Smallest intensity p such that at least floor(fraction * pixel_count)
/// pixels (never fewer than one) have intensity <= p. Binarizing at p keeps
/// the strictly brighter remainder.
std::uint8_t percentile_threshold(const GrayRaster& img, double fraction);

/// Foreground where intensity > p, background otherwise.
BinaryMask binarize(const GrayRaster& img, std::uint8_t p);

/// Threshold maximizing between-class intensity variance; ties broken by the
/// smallest threshold. Throws DegenerateImage when all pixels are equal.
std::uint8_t otsu_threshold(const GrayRaster& img);

/// Set morphology with out-of-bounds neighborhoods treated as background.
BinaryMask morph(const BinaryMask& mask, MorphOp op, const StructuringElement& se);

/// Per-pixel selection: chip where the mask is foreground, scene cut elsewhere.
GrayRaster compose(const GrayRaster& chip, const GrayRaster& scene_cut, const BinaryMask& mask);

/// Intensity inversion, v -> 255 - v.
GrayRaster invert(const GrayRaster& img);

/// Copy of the rectangle at (x, y) with the given size. Must be inside img.
GrayRaster crop(const GrayRaster& img, int x, int y, int w, int h);

/// Write a rectangle back at (x, y). Must fit inside img.
void blit(GrayRaster& img, const GrayRaster& patch, int x, int y);

}  // namespace sarkit
