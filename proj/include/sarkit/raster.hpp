#pragma once

#include <cstdint>
#include <vector>

#include "sarkit/errors.hpp"

namespace sarkit {

/// 8-bit single-channel image, row-major. The universal pixel container.
struct GrayRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // size == width * height

    GrayRaster() = default;
    GrayRaster(int w, int h, std::uint8_t fill = 0);

    std::size_t size() const { return data.size(); }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

    bool same_shape(const GrayRaster& other) const {
        return width == other.width && height == other.height;
    }
    bool operator==(const GrayRaster& other) const = default;
};

/// Boolean raster of the same shape as the raster it was derived from.
/// Stored as 0/1 bytes; serializes to a GrayRaster with values {0, 255}.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 0 = background, 1 = foreground

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false);

    std::size_t size() const { return data.size(); }
    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    std::size_t foreground_count() const;

    bool same_shape(const BinaryMask& other) const {
        return width == other.width && height == other.height;
    }
    bool operator==(const BinaryMask& other) const = default;
};

/// Square structuring element of odd side length, anchored at its center.
struct StructuringElement {
    int side = 3;

    explicit StructuringElement(int k = 3);
    int radius() const { return side / 2; }
};

/// Mask -> {0,255} raster.
GrayRaster mask_to_raster(const BinaryMask& mask);

/// Raster -> mask: every nonzero pixel becomes foreground.
BinaryMask mask_from_raster(const GrayRaster& img);

}  // namespace sarkit
