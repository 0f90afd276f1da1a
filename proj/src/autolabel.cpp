#include "sarkit/autolabel.hpp"

#include <algorithm>
#include <cmath>

#include "sarkit/image_io.hpp"
#include "sarkit/parallel.hpp"
#include "sarkit/raster_ops.hpp"

namespace sarkit {

namespace {

std::vector<int> row_counts(const BinaryMask& m) {
    std::vector<int> counts(m.height, 0);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (m.at(x, y)) ++counts[y];
        }
    }
    return counts;
}

std::vector<int> col_counts(const BinaryMask& m) {
    std::vector<int> counts(m.width, 0);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (m.at(x, y)) ++counts[x];
        }
    }
    return counts;
}

int first_reaching(const std::vector<int>& counts, int threshold, bool reversed) {
    const int n = static_cast<int>(counts.size());
    for (int k = 0; k < n; ++k) {
        const int idx = reversed ? n - 1 - k : k;
        if (counts[idx] >= threshold) return idx;
    }
    return -1;
}

}  // namespace

void AutoLabelParams::validate() const {
    if (white_pixel_threshold < 1) {
        throw InvalidSize("white_pixel_threshold must be >= 1");
    }
    if (expand_fraction < 0.0) {
        throw InvalidSize("expand_fraction must be >= 0");
    }
    binarize.validate();
}

LabeledBox auto_label_raw(const BinaryMask& binarized, int class_id, int white_pixel_threshold) {
    const auto rows = row_counts(binarized);
    const auto cols = col_counts(binarized);

    const int top = first_reaching(rows, white_pixel_threshold, false);
    if (top < 0) throw NoTarget("no row reaches the white-pixel threshold (top scan)");
    const int bottom = first_reaching(rows, white_pixel_threshold, true);
    const int left = first_reaching(cols, white_pixel_threshold, false);
    if (left < 0) throw NoTarget("no column reaches the white-pixel threshold (left scan)");
    const int right = first_reaching(cols, white_pixel_threshold, true);

    return LabeledBox{class_id, left, top, right - left + 1, bottom - top + 1, std::nullopt};
}

LabeledBox auto_label(const GrayRaster& chip, int class_id, const AutoLabelParams& params) {
    params.validate();

    const int side = params.binarize.blur_side > 0 ? params.binarize.blur_side
                                                   : default_blur_side(chip);
    const double sigma =
        params.binarize.blur_sigma > 0.0 ? params.binarize.blur_sigma : default_blur_sigma(side);
    const GrayRaster smoothed = gaussian_blur(chip, side, sigma);
    const BinaryMask mask = binarize(smoothed, percentile_threshold(smoothed, params.binarize.fraction));

    LabeledBox box = auto_label_raw(mask, class_id, params.white_pixel_threshold);

    // Concentric growth: the added margin splits evenly, the odd pixel goes
    // to the right/bottom.
    const int new_w = static_cast<int>(std::lround(box.w * (1.0 + params.expand_fraction)));
    const int new_h = static_cast<int>(std::lround(box.h * (1.0 + params.expand_fraction)));
    box.x -= (new_w - box.w) / 2;
    box.y -= (new_h - box.h) / 2;
    box.w = new_w;
    box.h = new_h;

    // Clamp to the image.
    const int x1 = std::min(box.x + box.w, chip.width);
    const int y1 = std::min(box.y + box.h, chip.height);
    box.x = std::max(box.x, 0);
    box.y = std::max(box.y, 0);
    box.w = x1 - box.x;
    box.h = y1 - box.y;
    return box;
}

BatchAutoLabelResult batch_autolabel(const std::vector<ChipEntry>& manifest,
                                     const AutoLabelParams& params,
                                     const std::map<std::string, int>& class_ids,
                                     const std::map<std::string, LabeledBox>& references,
                                     double iou_min, int jobs) {
    BatchAutoLabelResult result;
    result.items.resize(manifest.size());

    const auto work = [&](std::size_t idx) {
        const ChipEntry& entry = manifest[idx];
        AutoLabelItem item;
        item.entry = entry;
        int class_id = 0;
        if (auto it = class_ids.find(entry.class_name); it != class_ids.end())
            class_id = it->second;
        try {
            const GrayRaster chip = load_image(entry.image);
            LabeledBox box = auto_label(chip, class_id, params);
            if (auto ref = references.find(entry.image.string()); ref != references.end())
                item.matches_ref = iou(box, ref->second) >= iou_min;
            item.box = box;
        } catch (const Error& e) {
            item.error = e.what();
        }
        result.items[idx] = std::move(item);
    };
    parallel_indices(manifest.size(), jobs, work);

    std::map<std::string, ClassLabelSummary> by_class;
    for (const AutoLabelItem& item : result.items) {
        auto& cls = by_class[item.entry.class_name];
        cls.class_name = item.entry.class_name;
        ++cls.total;
        if (!item.error.empty() || !item.matches_ref)
            ++cls.failed;
    }
    double rate_sum = 0.0;
    for (auto& [name, cls] : by_class) {
        rate_sum += cls.error_rate_percent();
        result.classes.push_back(cls);
    }
    result.average_error_rate_percent =
        by_class.empty() ? 0.0 : rate_sum / static_cast<double>(by_class.size());
    return result;
}

}  // namespace sarkit
