#include "sarkit/detect_post.hpp"

#include <algorithm>

#include "sarkit/errors.hpp"

namespace sarkit {

Detection map_to_scene(const Detection& det) {
    if (!det.source)
        throw UnknownSlice("detection has no slice reference");
    Detection out = det;
    out.box.x += det.source->i * det.source->stride;
    out.box.y += det.source->j * det.source->stride;
    out.source.reset();
    return out;
}

std::vector<Detection> map_to_scene(const std::vector<Detection>& dets) {
    std::vector<Detection> out;
    out.reserve(dets.size());
    for (const Detection& d : dets)
        out.push_back(map_to_scene(d));
    return out;
}

std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold, bool per_class) {
    for (const Detection& d : dets)
        d.confidence();  // validates presence up front

    std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
        if (a.confidence() != b.confidence())
            return a.confidence() > b.confidence();
        return box_before(a.box, b.box);
    });

    std::vector<Detection> kept;
    std::vector<bool> suppressed(dets.size(), false);
    for (std::size_t i = 0; i < dets.size(); ++i) {
        if (suppressed[i])
            continue;
        kept.push_back(dets[i]);
        for (std::size_t j = i + 1; j < dets.size(); ++j) {
            if (suppressed[j])
                continue;
            if (per_class && dets[j].box.class_id != dets[i].box.class_id)
                continue;
            if (iou(dets[i].box, dets[j].box) > iou_threshold)
                suppressed[j] = true;
        }
    }
    return kept;
}

}  // namespace sarkit
