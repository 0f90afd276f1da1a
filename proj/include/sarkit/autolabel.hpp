#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sarkit/boxes.hpp"
#include "sarkit/raster.hpp"
#include "sarkit/segmentation.hpp"

namespace sarkit {

struct AutoLabelParams {
    int white_pixel_threshold = 10;  // per-line foreground count; useful range [8,12]
    double expand_fraction = 0.5;    // concentric growth applied to the raw rectangle
    SegmentationParams binarize;     // blur + percentile threshold stage

    void validate() const;
};

/// Labels the single target in a chip: binarize, scan rows and columns from
/// all four directions until a line carries at least white_pixel_threshold
/// foreground pixels, expand the resulting rectangle concentrically, clamp
/// to the image. Throws NoTarget when some direction never reaches the
/// threshold.
LabeledBox auto_label(const GrayRaster& chip, int class_id, const AutoLabelParams& params);

/// The traversal rectangle before expansion and clamping (exposed for
/// diagnostics; auto_label with expand_fraction 0 returns the same box).
LabeledBox auto_label_raw(const BinaryMask& binarized, int class_id, int white_pixel_threshold);

struct AutoLabelItem {
    ChipEntry entry;
    std::optional<LabeledBox> box;
    std::string error;     // NoTarget or I/O failure
    bool matches_ref = true;  // false when a reference box exists and IoU < iou_min
};

struct ClassLabelSummary {
    std::string class_name;
    int total = 0;
    int failed = 0;  // NoTarget, unreadable, or below the reference IoU
    double error_rate_percent() const { return total ? 100.0 * failed / total : 0.0; }
};

struct BatchAutoLabelResult {
    std::vector<AutoLabelItem> items;
    std::vector<ClassLabelSummary> classes;   // sorted by class name
    double average_error_rate_percent = 0.0;  // unweighted mean over classes
};

/// Labels every chip in the manifest. When reference boxes are supplied
/// (keyed by image path), a label also fails if its IoU against the
/// reference is below iou_min.
BatchAutoLabelResult batch_autolabel(const std::vector<ChipEntry>& manifest,
                                     const AutoLabelParams& params,
                                     const std::map<std::string, int>& class_ids,
                                     const std::map<std::string, LabeledBox>& references = {},
                                     double iou_min = 0.5, int jobs = 1);

}  // namespace sarkit
