#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sarkit/raster.hpp"
#include "sarkit/raster_ops.hpp"

namespace sarkit {

/// Knobs for the two-stage chip segmentation.
struct SegmentationParams {
    double fraction = 0.90;         // percentile threshold fraction, in (0,1)
    std::uint8_t shadow_value = 5;  // intensity the object is darkened to; < 64
    int blur_side = 0;              // 0 -> adaptive default for the chip
    double blur_sigma = 0.0;        // <= 0 -> derived from the kernel side
    int se_side = 3;                // structuring element side, odd

    void validate() const;
};

/// Per-class percentile fractions tuned for the ten MSTAR vehicle classes.
const std::map<std::string, double>& default_class_fractions();

/// Object-only segmentation: blur, percentile threshold, binarize,
/// close, open. Throws EmptySegmentation when nothing survives.
BinaryMask segment_object(const GrayRaster& chip, const SegmentationParams& params);

/// Object-plus-shadow segmentation. The object found by segment_object is
/// darkened to shadow_value so it merges with its shadow, the image is
/// inverted and blurred, OTSU separates the now-bright region, and
/// close/open/dilate clean it up. The returned mask always contains a
/// one-erosion of object_mask: the object body is never lost.
BinaryMask segment_object_shadow(const GrayRaster& chip, const BinaryMask& object_mask,
                                 const SegmentationParams& params);

struct ChipEntry {
    std::filesystem::path image;
    std::string class_name;
};

struct SegmentOutcome {
    ChipEntry entry;
    std::optional<BinaryMask> object_mask;
    std::optional<BinaryMask> object_shadow_mask;
    std::string error;  // empty on success
    bool centered = false;  // object bounding box overlaps the central half window
};

struct ClassSegmentSummary {
    std::string class_name;
    int total = 0;
    int success = 0;
    double fraction = 0.0;
    double success_percent() const { return total ? 100.0 * success / total : 0.0; }
};

struct BatchSegmentResult {
    std::vector<SegmentOutcome> items;
    std::vector<ClassSegmentSummary> classes;  // sorted by class name
    double average_success_percent = 0.0;      // pooled over all chips
};

/// Segments every chip in the manifest; per-item failures are collected, not
/// fatal. A chip counts as a success when its object mask is non-empty and
/// its bounding box overlaps the central 50% window of the image.
BatchSegmentResult batch_segment(const std::vector<ChipEntry>& manifest,
                                 const SegmentationParams& base,
                                 const std::map<std::string, double>& class_fractions,
                                 int jobs = 1);

}  // namespace sarkit
