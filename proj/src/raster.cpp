#include "sarkit/raster.hpp"

#include <algorithm>
#include <string>

namespace sarkit {

GrayRaster::GrayRaster(int w, int h, std::uint8_t fill) : width(w), height(h) {
    if (w <= 0 || h <= 0) {
        throw InvalidSize("raster dimensions must be positive, got " + std::to_string(w) + "x" +
                          std::to_string(h));
    }
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

BinaryMask::BinaryMask(int w, int h, bool fill) : width(w), height(h) {
    if (w <= 0 || h <= 0) {
        throw InvalidSize("mask dimensions must be positive, got " + std::to_string(w) + "x" +
                          std::to_string(h));
    }
    data.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
}

std::size_t BinaryMask::foreground_count() const {
    return static_cast<std::size_t>(std::count_if(data.begin(), data.end(),
                                                  [](std::uint8_t v) { return v != 0; }));
}

StructuringElement::StructuringElement(int k) : side(k) {
    if (k < 1 || k % 2 == 0) {
        throw InvalidKernel("structuring element side must be odd and >= 1, got " +
                            std::to_string(k));
    }
}

GrayRaster mask_to_raster(const BinaryMask& mask) {
    GrayRaster out(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        out.data[i] = mask.data[i] ? 255 : 0;
    }
    return out;
}

BinaryMask mask_from_raster(const GrayRaster& img) {
    BinaryMask out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = img.data[i] ? 1 : 0;
    }
    return out;
}

}  // namespace sarkit
