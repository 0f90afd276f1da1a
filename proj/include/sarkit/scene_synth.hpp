#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sarkit/boxes.hpp"
#include "sarkit/raster.hpp"

namespace sarkit {

struct PlacementEntry {
    std::string chip_id;
    int class_id = 0;
    int x = 0;  // top-left in the scene
    int y = 0;
    int chip_w = 0;
    int chip_h = 0;
};

/// Where each chip goes in a scene. Entries never overlap each other, the
/// exclusion mask, or the scene border.
struct PlacementPlan {
    std::string scene_id;
    std::uint64_t rng_seed = 0;
    std::vector<PlacementEntry> entries;
};

struct PlacementRequest {
    int class_id = 0;
    int count = 0;
    std::vector<std::string> chip_ids;  // cycled; synthesized ids when empty
};

/// Rejection-samples non-overlapping chip positions from a seeded generator,
/// avoiding exclusion-mask foreground. Deterministic for a given seed.
/// Throws PlacementExhausted when an entry cannot be placed within
/// max_attempts draws.
PlacementPlan plan_placements(int scene_w, int scene_h, const BinaryMask& exclusion,
                              const std::vector<PlacementRequest>& requests, int chip_w,
                              int chip_h, std::uint64_t seed, int max_attempts = 1000,
                              const std::string& scene_id = "scene");

/// A segmented chip ready for compositing: pixels, object+shadow mask, and
/// its label box in chip coordinates (typically from auto_label).
struct ChipAsset {
    GrayRaster image;
    BinaryMask mask;
    LabeledBox label;
};

struct SynthesizedScene {
    GrayRaster scene;
    std::vector<LabeledBox> labels;  // one per plan entry, in scene coordinates
};

/// Composites each planned chip into the scene through its mask and emits the
/// translated label boxes. Pixels outside every mask footprint are copied
/// bit-identically from the input scene.
SynthesizedScene synthesize_scene(const GrayRaster& scene, const PlacementPlan& plan,
                                  const std::map<std::string, ChipAsset>& assets);

}  // namespace sarkit
