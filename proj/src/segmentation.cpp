#include "sarkit/segmentation.hpp"

#include <algorithm>
#include <string>

#include "sarkit/image_io.hpp"
#include "sarkit/parallel.hpp"

namespace sarkit {

namespace {

struct BlurSpec {
    int side;
    double sigma;
};

BlurSpec resolve_blur(const GrayRaster& chip, const SegmentationParams& p) {
    const int side = p.blur_side > 0 ? p.blur_side : default_blur_side(chip);
    const double sigma = p.blur_sigma > 0.0 ? p.blur_sigma : default_blur_sigma(side);
    return {side, sigma};
}

// Bounding box of the foreground, as inclusive pixel ranges.
struct MaskBounds {
    int x0, y0, x1, y1;
    bool empty;
};

MaskBounds mask_bounds(const BinaryMask& m) {
    MaskBounds b{m.width, m.height, -1, -1, true};
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y)) continue;
            b.empty = false;
            b.x0 = std::min(b.x0, x);
            b.y0 = std::min(b.y0, y);
            b.x1 = std::max(b.x1, x);
            b.y1 = std::max(b.y1, y);
        }
    }
    return b;
}

}  // namespace

void SegmentationParams::validate() const {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw InvalidSize("segmentation fraction must be in (0,1)");
    }
    if (shadow_value >= 64) {
        throw InvalidSize("shadow_value must be below 64");
    }
    if (se_side < 1 || se_side % 2 == 0) {
        throw InvalidKernel("structuring element side must be odd");
    }
    if (blur_side != 0 && (blur_side < 1 || blur_side % 2 == 0)) {
        throw InvalidKernel("blur side must be odd (or 0 for adaptive)");
    }
}

const std::map<std::string, double>& default_class_fractions() {
    static const std::map<std::string, double> fractions = {
        {"2S1", 0.92},  {"BRDM2", 0.88}, {"BTR60", 0.90}, {"D7", 0.92},   {"T62", 0.90},
        {"ZIL131", 0.90}, {"ZSU234", 0.95}, {"BMP2", 0.95}, {"BTR70", 0.95}, {"T72", 0.95},
    };
    return fractions;
}

BinaryMask segment_object(const GrayRaster& chip, const SegmentationParams& params) {
    params.validate();
    const auto blur = resolve_blur(chip, params);
    const GrayRaster smoothed = gaussian_blur(chip, blur.side, blur.sigma);
    const std::uint8_t p = percentile_threshold(smoothed, params.fraction);
    BinaryMask mask = binarize(smoothed, p);

    const StructuringElement se(params.se_side);
    mask = morph(mask, MorphOp::Close, se);
    mask = morph(mask, MorphOp::Open, se);

    if (mask.foreground_count() == 0) {
        throw EmptySegmentation("object segmentation produced an empty mask (threshold " +
                                std::to_string(p) + " too high?)");
    }
    return mask;
}

BinaryMask segment_object_shadow(const GrayRaster& chip, const BinaryMask& object_mask,
                                 const SegmentationParams& params) {
    params.validate();
    if (chip.width != object_mask.width || chip.height != object_mask.height) {
        throw ShapeMismatch("object mask does not match chip dimensions");
    }
    if (object_mask.foreground_count() == 0) {
        throw EmptySegmentation("object mask is empty");
    }

    // Darken the object so it joins its shadow as one dark region.
    GrayRaster shadowed = chip;
    for (std::size_t i = 0; i < shadowed.data.size(); ++i) {
        if (object_mask.data[i]) shadowed.data[i] = params.shadow_value;
    }

    const auto blur = resolve_blur(chip, params);
    const GrayRaster lightened = gaussian_blur(invert(shadowed), blur.side, blur.sigma);

    const std::uint8_t p = otsu_threshold(lightened);
    BinaryMask mask = binarize(lightened, p);

    const StructuringElement se(params.se_side);
    mask = morph(mask, MorphOp::Close, se);
    mask = morph(mask, MorphOp::Open, se);
    mask = morph(mask, MorphOp::Dilate, se);

    // The composited object must survive whatever OTSU decided.
    const BinaryMask core = morph(object_mask, MorphOp::Erode, se);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        if (core.data[i]) mask.data[i] = 1;
    }

    if (mask.foreground_count() == 0) {
        throw EmptySegmentation("object+shadow segmentation produced an empty mask");
    }
    return mask;
}

BatchSegmentResult batch_segment(const std::vector<ChipEntry>& manifest,
                                 const SegmentationParams& base,
                                 const std::map<std::string, double>& class_fractions,
                                 int jobs) {
    BatchSegmentResult result;
    result.items.resize(manifest.size());

    const auto work = [&](std::size_t idx) {
        const ChipEntry& entry = manifest[idx];
        SegmentationParams params = base;
        if (auto it = class_fractions.find(entry.class_name); it != class_fractions.end())
            params.fraction = it->second;

        SegmentOutcome outcome;
        outcome.entry = entry;
        try {
            const GrayRaster chip = load_image(entry.image);
            BinaryMask object = segment_object(chip, params);
            BinaryMask full = segment_object_shadow(chip, object, params);

            const auto b = mask_bounds(object);
            // success: the object bounding box reaches into the central half window
            const int cx0 = chip.width / 4, cx1 = chip.width - chip.width / 4;
            const int cy0 = chip.height / 4, cy1 = chip.height - chip.height / 4;
            outcome.centered = !b.empty && b.x1 >= cx0 && b.x0 < cx1 && b.y1 >= cy0 && b.y0 < cy1;

            outcome.object_mask = std::move(object);
            outcome.object_shadow_mask = std::move(full);
        } catch (const Error& e) {
            outcome.error = e.what();
        }
        result.items[idx] = std::move(outcome);
    };
    parallel_indices(manifest.size(), jobs, work);

    std::map<std::string, ClassSegmentSummary> by_class;
    std::size_t total = 0, success = 0;
    for (const SegmentOutcome& outcome : result.items) {
        auto& cls = by_class[outcome.entry.class_name];
        cls.class_name = outcome.entry.class_name;
        cls.fraction = base.fraction;
        if (auto it = class_fractions.find(cls.class_name); it != class_fractions.end())
            cls.fraction = it->second;
        ++cls.total;
        ++total;
        if (outcome.centered) {
            ++cls.success;
            ++success;
        }
    }
    for (auto& [name, cls] : by_class)
        result.classes.push_back(cls);
    result.average_success_percent = total ? 100.0 * static_cast<double>(success) / total : 0.0;
    return result;
}

}  // namespace sarkit
