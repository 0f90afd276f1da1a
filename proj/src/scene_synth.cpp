#include "sarkit/scene_synth.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include "sarkit/errors.hpp"
#include "sarkit/raster_ops.hpp"
#include "sarkit/rng.hpp"

namespace sarkit {

namespace {

// Summed-area table over the exclusion mask so each candidate rectangle is an
// O(1) overlap test instead of a pixel scan.
class ForegroundSums {
public:
    explicit ForegroundSums(const BinaryMask& mask)
        : w_(mask.width), h_(mask.height), sums_((w_ + 1) * (h_ + 1), 0) {
        for (int y = 0; y < h_; ++y) {
            std::uint64_t row = 0;
            for (int x = 0; x < w_; ++x) {
                row += mask.at(x, y);
                sums_[(y + 1) * (w_ + 1) + (x + 1)] = sums_[y * (w_ + 1) + (x + 1)] + row;
            }
        }
    }

    std::uint64_t rect(int x, int y, int w, int h) const {
        return sums_[(y + h) * (w_ + 1) + (x + w)] - sums_[y * (w_ + 1) + (x + w)] -
               sums_[(y + h) * (w_ + 1) + x] + sums_[y * (w_ + 1) + x];
    }

private:
    int w_;
    int h_;
    std::vector<std::uint64_t> sums_;
};

bool rects_overlap(int ax, int ay, int aw, int ah, int bx, int by, int bw, int bh) {
    return ax < bx + bw && bx < ax + aw && ay < by + bh && by < ay + ah;
}

}  // namespace

PlacementPlan plan_placements(int scene_w, int scene_h, const BinaryMask& exclusion,
                              const std::vector<PlacementRequest>& requests, int chip_w,
                              int chip_h, std::uint64_t seed, int max_attempts,
                              const std::string& scene_id) {
    if (scene_w <= 0 || scene_h <= 0)
        throw InvalidSize("scene dimensions must be positive");
    if (chip_w <= 0 || chip_h <= 0)
        throw InvalidSize("chip dimensions must be positive");
    if (exclusion.width != scene_w || exclusion.height != scene_h)
        throw ShapeMismatch("exclusion mask does not match scene dimensions");
    if (chip_w > scene_w || chip_h > scene_h)
        throw PlacementExhausted("chip larger than scene");
    if (max_attempts <= 0)
        throw InvalidSize("max_attempts must be positive");

    ForegroundSums sums(exclusion);
    Rng rng(seed);
    PlacementPlan plan;
    plan.scene_id = scene_id;
    plan.rng_seed = seed;

    const std::uint64_t x_range = static_cast<std::uint64_t>(scene_w - chip_w) + 1;
    const std::uint64_t y_range = static_cast<std::uint64_t>(scene_h - chip_h) + 1;

    for (const PlacementRequest& req : requests) {
        if (req.count < 0)
            throw InvalidSize("placement count must be non-negative");
        for (int k = 0; k < req.count; ++k) {
            bool placed = false;
            for (int attempt = 0; attempt < max_attempts; ++attempt) {
                const int x = static_cast<int>(rng.below(x_range));
                const int y = static_cast<int>(rng.below(y_range));
                if (sums.rect(x, y, chip_w, chip_h) != 0)
                    continue;
                bool clash = false;
                for (const PlacementEntry& prev : plan.entries) {
                    if (rects_overlap(x, y, chip_w, chip_h, prev.x, prev.y, prev.chip_w,
                                      prev.chip_h)) {
                        clash = true;
                        break;
                    }
                }
                if (clash)
                    continue;
                PlacementEntry entry;
                entry.chip_id = req.chip_ids.empty()
                                    ? "class" + std::to_string(req.class_id) + "_" +
                                          std::to_string(k)
                                    : req.chip_ids[k % req.chip_ids.size()];
                entry.class_id = req.class_id;
                entry.x = x;
                entry.y = y;
                entry.chip_w = chip_w;
                entry.chip_h = chip_h;
                plan.entries.push_back(std::move(entry));
                placed = true;
                break;
            }
            if (!placed)
                throw PlacementExhausted("no free position for class " +
                                         std::to_string(req.class_id) + " chip " +
                                         std::to_string(k) + " after " +
                                         std::to_string(max_attempts) + " attempts");
        }
    }
    return plan;
}

SynthesizedScene synthesize_scene(const GrayRaster& scene, const PlacementPlan& plan,
                                  const std::map<std::string, ChipAsset>& assets) {
    SynthesizedScene out;
    out.scene = scene;
    out.labels.reserve(plan.entries.size());

    for (const PlacementEntry& entry : plan.entries) {
        const auto it = assets.find(entry.chip_id);
        if (it == assets.end())
            throw PlanSceneMismatch("plan references unknown chip '" + entry.chip_id + "'");
        const ChipAsset& asset = it->second;
        if (asset.image.width != entry.chip_w || asset.image.height != entry.chip_h)
            throw PlanSceneMismatch("chip '" + entry.chip_id + "' does not match planned size");
        if (asset.mask.width != asset.image.width || asset.mask.height != asset.image.height)
            throw ShapeMismatch("chip mask does not match chip image");
        if (entry.x < 0 || entry.y < 0 || entry.x + entry.chip_w > scene.width ||
            entry.y + entry.chip_h > scene.height)
            throw PlanSceneMismatch("plan entry falls outside the scene");

        GrayRaster cut = crop(out.scene, entry.x, entry.y, entry.chip_w, entry.chip_h);
        GrayRaster composed = compose(asset.image, cut, asset.mask);
        blit(out.scene, composed, entry.x, entry.y);

        LabeledBox label = asset.label;
        label.class_id = entry.class_id;
        label.x += entry.x;
        label.y += entry.y;
        label.confidence.reset();
        out.labels.push_back(label);
    }
    return out;
}

}  // namespace sarkit
