#include "sarkit/boxes.hpp"

#include <algorithm>
#include <tuple>

namespace sarkit {

double iou(const LabeledBox& a, const LabeledBox& b) {
    if (a.w <= 0 || a.h <= 0 || b.w <= 0 || b.h <= 0) {
        throw DegenerateBox("iou requires positive box extents");
    }
    const long long ix = std::max(0, std::min(a.x_max(), b.x_max()) - std::max(a.x, b.x));
    const long long iy = std::max(0, std::min(a.y_max(), b.y_max()) - std::max(a.y, b.y));
    const long long inter = ix * iy;
    const long long uni =
        static_cast<long long>(a.w) * a.h + static_cast<long long>(b.w) * b.h - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double Detection::confidence() const {
    if (!box.confidence) throw Error("detection without confidence");
    return *box.confidence;
}

bool box_before(const LabeledBox& a, const LabeledBox& b) {
    return std::tie(a.x, a.y, a.class_id, a.w, a.h) < std::tie(b.x, b.y, b.class_id, b.w, b.h);
}

}  // namespace sarkit
