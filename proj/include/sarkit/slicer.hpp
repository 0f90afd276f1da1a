#pragma once

#include <string>
#include <vector>

#include "sarkit/boxes.hpp"
#include "sarkit/raster.hpp"

namespace sarkit {

/// One sliding window cut from a scene, together with the labels it fully
/// contains (remapped into window coordinates). Windows with no contained
/// label are never emitted.
struct SliceRecord {
    std::string scene_id;
    int i = 0;  // window column index
    int j = 0;  // window row index
    int x = 0;  // scene offset of the window (i * stride)
    int y = 0;
    int w = 0;  // actual window extent; trailing windows shrink to fit
    int h = 0;
    std::vector<LabeledBox> labels;
};

/// Strict containment: the box must lie fully inside the window without
/// touching any window edge.
bool window_contains(int win_x, int win_y, int win_w, int win_h, const LabeledBox& box);

/// Slides a size x size window with the given stride over a scene of the
/// given extent and returns, row-major, every window that strictly contains
/// at least one label. Full windows start at multiples of the stride while
/// they fit; when they do not cover the scene, one trailing window at the
/// next stride position absorbs the remainder (shrunk to the boundary).
/// Throws InvalidStride unless 0 < stride <= size.
std::vector<SliceRecord> slide(int scene_w, int scene_h, const std::string& scene_id,
                               const std::vector<LabeledBox>& labels, int size, int stride);

std::vector<SliceRecord> slide(const GrayRaster& scene, const std::string& scene_id,
                               const std::vector<LabeledBox>& labels, int size, int stride);

/// Extracts the pixels of one slice record from its source scene.
GrayRaster cut_slice(const GrayRaster& scene, const SliceRecord& rec);

/// Window sizes the pipeline sweeps when building multi-scale slice sets.
std::vector<int> slice_sizes_default();

}  // namespace sarkit
