#pragma once

#include <optional>
#include <string>

#include "sarkit/errors.hpp"

namespace sarkit {

/// Axis-aligned pixel box with a class id. Ground truth and detections share
/// this type; confidence is absent for ground truth.
struct LabeledBox {
    int class_id = 0;
    int x = 0;  // left
    int y = 0;  // top
    int w = 0;
    int h = 0;
    std::optional<double> confidence;

    int x_max() const { return x + w; }
    int y_max() const { return y + h; }
    bool operator==(const LabeledBox& other) const = default;
};

/// Intersection over union of two boxes; 0 when disjoint.
/// Throws DegenerateBox unless both boxes have positive extent.
double iou(const LabeledBox& a, const LabeledBox& b);

/// Window a detection came from, for mapping back into the scene frame.
struct SliceRef {
    std::string scene_id;
    int i = 0;  // column index of the window grid
    int j = 0;  // row index
    int stride = 0;
};

/// A detector output: box with mandatory confidence, plus the source window
/// when the detection is still in slice coordinates.
struct Detection {
    LabeledBox box;
    std::optional<SliceRef> source;

    double confidence() const;
};

/// Orders boxes by (x, y, class_id), then (w, h); the deterministic tie-break
/// shared by suppression and matching.
bool box_before(const LabeledBox& a, const LabeledBox& b);

}  // namespace sarkit
