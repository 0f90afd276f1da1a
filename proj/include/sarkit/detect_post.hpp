#pragma once

#include <vector>

#include "sarkit/boxes.hpp"

namespace sarkit {

/// Translates a slice-local detection back into scene coordinates using the
/// window origin recorded in its source reference. Throws UnknownSlice when
/// the detection carries no source.
Detection map_to_scene(const Detection& det);

std::vector<Detection> map_to_scene(const std::vector<Detection>& dets);

/// Greedy non-maximum suppression. Detections are ranked by descending
/// confidence (ties broken by box order); each kept detection suppresses
/// later ones whose IoU with it strictly exceeds the threshold. Suppression
/// is class-agnostic unless per_class is set, in which case only detections
/// of the same class suppress each other. Returns survivors sorted by
/// descending confidence.
std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold = 0.7,
                           bool per_class = false);

}  // namespace sarkit
