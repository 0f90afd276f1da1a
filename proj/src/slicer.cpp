#include "sarkit/slicer.hpp"

#include <utility>

#include "sarkit/errors.hpp"
#include "sarkit/raster_ops.hpp"

namespace sarkit {

namespace {

struct AxisWindow {
    int pos;
    int extent;
};

// Full windows at k*stride while k*stride + size <= dim; if they leave part
// of the axis uncovered, one trailing window at the next stride position
// runs to the boundary.
std::vector<AxisWindow> axis_windows(int dim, int size, int stride) {
    std::vector<AxisWindow> out;
    int pos = 0;
    while (pos + size <= dim) {
        out.push_back({pos, size});
        pos += stride;
    }
    const bool covered = !out.empty() && out.back().pos + size >= dim;
    if (!covered)
        out.push_back({pos, dim - pos});
    return out;
}

}  // namespace

bool window_contains(int win_x, int win_y, int win_w, int win_h, const LabeledBox& box) {
    return box.x > win_x && box.x_max() < win_x + win_w && box.y > win_y &&
           box.y_max() < win_y + win_h;
}

std::vector<SliceRecord> slide(int scene_w, int scene_h, const std::string& scene_id,
                               const std::vector<LabeledBox>& labels, int size, int stride) {
    if (scene_w <= 0 || scene_h <= 0)
        throw InvalidSize("scene dimensions must be positive");
    if (size <= 0)
        throw InvalidStride("window size must be positive");
    if (stride <= 0 || stride > size)
        throw InvalidStride("stride must satisfy 0 < stride <= size");

    const std::vector<AxisWindow> cols = axis_windows(scene_w, size, stride);
    const std::vector<AxisWindow> rows = axis_windows(scene_h, size, stride);

    std::vector<SliceRecord> records;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            SliceRecord rec;
            rec.scene_id = scene_id;
            rec.i = static_cast<int>(i);
            rec.j = static_cast<int>(j);
            rec.x = cols[i].pos;
            rec.y = rows[j].pos;
            rec.w = cols[i].extent;
            rec.h = rows[j].extent;
            for (const LabeledBox& box : labels) {
                if (!window_contains(rec.x, rec.y, rec.w, rec.h, box))
                    continue;
                LabeledBox local = box;
                local.x -= rec.x;
                local.y -= rec.y;
                rec.labels.push_back(local);
            }
            if (!rec.labels.empty())
                records.push_back(std::move(rec));
        }
    }
    return records;
}

std::vector<SliceRecord> slide(const GrayRaster& scene, const std::string& scene_id,
                               const std::vector<LabeledBox>& labels, int size, int stride) {
    return slide(scene.width, scene.height, scene_id, labels, size, stride);
}

GrayRaster cut_slice(const GrayRaster& scene, const SliceRecord& rec) {
    return crop(scene, rec.x, rec.y, rec.w, rec.h);
}

std::vector<int> slice_sizes_default() { return {128, 256, 512, 1024}; }

}  // namespace sarkit
