#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sarkit/boxes.hpp"
#include "sarkit/gen_metrics.hpp"
#include "sarkit/scene_synth.hpp"
#include "sarkit/slicer.hpp"

namespace sarkit {

/// One ground-truth label row: the image (or slice) it belongs to plus the box.
struct LabelRecord {
    std::string image;
    LabeledBox box;
};

// --- JSONL label/detection rows ------------------------------------------
// Labels:      {"image": "...", "class": 3, "x": 10, "y": 20, "w": 30, "h": 40}
// Detections:  {"class": ..., "x": ..., ..., "conf": 0.9} plus either
//              "scene": "<id>" for scene-global boxes or
//              "slice": {"scene": "...", "i": 0, "j": 1, "stride": 512}.

void write_labels_jsonl(const std::string& path, const std::vector<LabelRecord>& rows);
std::vector<LabelRecord> read_labels_jsonl(const std::string& path);

void write_detections_jsonl(const std::string& path, const std::vector<Detection>& dets,
                            const std::string& scene_id = "");
std::vector<Detection> read_detections_jsonl(const std::string& path);

/// A detection row plus the scene it refers to (from "scene", or from the
/// slice reference; empty when the row carries neither).
struct DetectionRecord {
    std::string scene;
    Detection det;
};

void write_detection_records(const std::string& path, const std::vector<DetectionRecord>& rows);
std::vector<DetectionRecord> read_detection_records(const std::string& path);

// --- normalized text labels ("class cx cy w h", fractions of the image) ---

std::string to_normalized_line(const LabeledBox& box, int image_w, int image_h);
void write_normalized_labels(const std::string& path, const std::vector<LabeledBox>& boxes,
                             int image_w, int image_h);
std::vector<LabeledBox> read_normalized_labels(const std::string& path, int image_w,
                                               int image_h);

// --- placement plans and slice indexes ------------------------------------

nlohmann::json plan_to_json(const PlacementPlan& plan);
PlacementPlan plan_from_json(const nlohmann::json& j);

nlohmann::json slice_index_to_json(const std::vector<SliceRecord>& records, int size,
                                   int stride);
std::vector<SliceRecord> slice_index_from_json(const nlohmann::json& j);

// --- feature sets ----------------------------------------------------------

void write_features_csv(const std::string& path, const FeatureSet& fs);
FeatureSet read_features_csv(const std::string& path);

/// Raw little-endian float64 rows next to a "<path>.json" sidecar {"n", "d"}.
void write_features_raw(const std::string& path, const FeatureSet& fs);
FeatureSet read_features_raw(const std::string& path);

// --- run metadata ----------------------------------------------------------

std::uint64_t fnv1a64(const std::string& bytes);

/// Reproducibility stamp for generated artifacts: tool name and version, the
/// seeds used, and a hash of the effective configuration. Deliberately free
/// of timestamps so reruns are byte-identical.
nlohmann::json run_metadata(const std::string& tool, const nlohmann::json& config,
                            const std::vector<std::uint64_t>& seeds);

// --- small file helpers ----------------------------------------------------

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace sarkit
