#include "sarkit/yolo_ref.hpp"

#include <algorithm>
#include <cmath>

#include "sarkit/errors.hpp"

namespace sarkit {

namespace {

void check_grid(int S, int B, int C) {
    if (S <= 0 || B <= 0 || C <= 0)
        throw InvalidSize("grid needs positive S, B and C");
}

GridTruth make_truth(const std::vector<LabeledBox>& boxes, int S, int image_w, int image_h,
                     int num_classes, int num_predictors,
                     const GridPrediction* pred) {
    check_grid(S, num_predictors, num_classes);
    if (image_w <= 0 || image_h <= 0)
        throw InvalidSize("image dimensions must be positive");
    if (pred && (pred->S != S || pred->B != num_predictors || pred->C != num_classes))
        throw ShapeMismatch("prediction grid does not match requested truth grid");

    GridTruth truth;
    truth.S = S;
    truth.B = num_predictors;
    truth.C = num_classes;
    truth.cells.assign(static_cast<std::size_t>(S) * S, GridTruth::Cell{});
    for (auto& cell : truth.cells)
        cell.class_probs.assign(num_classes, 0.0);

    const double cell_w = static_cast<double>(image_w) / S;
    const double cell_h = static_cast<double>(image_h) / S;

    for (const LabeledBox& box : boxes) {
        if (box.w <= 0 || box.h <= 0)
            throw DegenerateBox("box extents must be positive");
        if (box.class_id < 0 || box.class_id >= num_classes)
            throw InvalidSize("class id outside grid class range");

        const double cx = box.x + box.w / 2.0;
        const double cy = box.y + box.h / 2.0;
        // floor sends a center sitting exactly on a boundary to the higher
        // cell; clamping only matters for cx == image_w.
        const int col = std::min(S - 1, static_cast<int>(std::floor(cx / cell_w)));
        const int row = std::min(S - 1, static_cast<int>(std::floor(cy / cell_h)));

        GridTruth::Cell& cell = truth.cell(col, row);
        if (cell.has_object) {
            truth.warnings.push_back("cell (" + std::to_string(col) + ", " +
                                     std::to_string(row) + ") already holds an object; " +
                                     "dropping class " + std::to_string(box.class_id) +
                                     " box at (" + std::to_string(box.x) + ", " +
                                     std::to_string(box.y) + ")");
            continue;
        }
        cell.has_object = true;
        cell.x = cx / cell_w - col;
        cell.y = cy / cell_h - row;
        cell.w = static_cast<double>(box.w) / image_w;
        cell.h = static_cast<double>(box.h) / image_h;
        cell.confidence = 1.0;
        cell.class_probs[box.class_id] = 1.0;

        if (pred) {
            // decoded predictor box vs. the normalized target, plain overlap
            // over union in image-relative units
            double best = -1.0;
            int best_b = 0;
            const int idx = row * S + col;
            for (int b = 0; b < num_predictors; ++b) {
                const GridPrediction::Box& p = pred->box(idx, b);
                const double px = (col + p.x) / S;
                const double py = (row + p.y) / S;
                const double pw = std::max(0.0, p.w);
                const double ph = std::max(0.0, p.h);
                const double tx = cx / image_w;
                const double ty = cy / image_h;
                const double ox = std::max(0.0, std::min(px + pw / 2, tx + cell.w / 2) -
                                                    std::max(px - pw / 2, tx - cell.w / 2));
                const double oy = std::max(0.0, std::min(py + ph / 2, ty + cell.h / 2) -
                                                    std::max(py - ph / 2, ty - cell.h / 2));
                const double inter = ox * oy;
                const double uni = pw * ph + cell.w * cell.h - inter;
                const double v = uni > 0.0 ? inter / uni : 0.0;
                if (v > best) {
                    best = v;
                    best_b = b;
                }
            }
            cell.responsible = best_b;
        }
    }
    return truth;
}

}  // namespace

GridPrediction GridPrediction::zeros(int S, int B, int C) {
    check_grid(S, B, C);
    GridPrediction p;
    p.S = S;
    p.B = B;
    p.C = C;
    p.boxes.assign(static_cast<std::size_t>(S) * S * B, Box{});
    p.class_probs.assign(static_cast<std::size_t>(S) * S * C, 0.0);
    return p;
}

GridTruth assign_cells(const std::vector<LabeledBox>& boxes, int S, int image_w, int image_h,
                       int num_classes, int num_predictors) {
    return make_truth(boxes, S, image_w, image_h, num_classes, num_predictors, nullptr);
}

GridTruth assign_cells(const std::vector<LabeledBox>& boxes, int S, int image_w, int image_h,
                       int num_classes, const GridPrediction& pred) {
    return make_truth(boxes, S, image_w, image_h, num_classes, pred.B, &pred);
}

double class_confidence(double p_class, double box_confidence) {
    return p_class * box_confidence;
}

namespace {

void check_pair(const GridPrediction& pred, const GridTruth& truth) {
    check_grid(pred.S, pred.B, pred.C);
    if (pred.S != truth.S || pred.B != truth.B || pred.C != truth.C)
        throw ShapeMismatch("prediction and truth grids differ");
    if (pred.boxes.size() != static_cast<std::size_t>(pred.S) * pred.S * pred.B ||
        pred.class_probs.size() != static_cast<std::size_t>(pred.S) * pred.S * pred.C ||
        truth.cells.size() != static_cast<std::size_t>(pred.S) * pred.S)
        throw ShapeMismatch("grid buffers do not match declared shape");
}

}  // namespace

LossResult yolo_loss(const GridPrediction& pred, const GridTruth& truth, double lambda_coord,
                     double lambda_noobj) {
    check_pair(pred, truth);
    LossResult res;
    const int cells = pred.S * pred.S;
    for (int i = 0; i < cells; ++i) {
        const GridTruth::Cell& t = truth.cells[i];
        for (int b = 0; b < pred.B; ++b) {
            const GridPrediction::Box& p = pred.box(i, b);
            if (t.has_object && b == t.responsible) {
                const double dx = t.x - p.x;
                const double dy = t.y - p.y;
                res.total += lambda_coord * (dx * dx + dy * dy);

                double pw = p.w;
                double ph = p.h;
                if (pw < 0.0 || ph < 0.0) {
                    res.negative_wh_clamped = true;
                    pw = std::max(pw, 0.0);
                    ph = std::max(ph, 0.0);
                }
                const double dw = std::sqrt(t.w) - std::sqrt(pw);
                const double dh = std::sqrt(t.h) - std::sqrt(ph);
                res.total += lambda_coord * (dw * dw + dh * dh);

                const double dc = t.confidence - p.confidence;
                res.total += dc * dc;
            } else {
                res.total += lambda_noobj * p.confidence * p.confidence;
            }
        }
        if (t.has_object) {
            for (int c = 0; c < pred.C; ++c) {
                const double dp = t.class_probs[c] - pred.prob(i, c);
                res.total += dp * dp;
            }
        }
    }
    return res;
}

GridPrediction yolo_loss_grad(const GridPrediction& pred, const GridTruth& truth,
                              double lambda_coord, double lambda_noobj) {
    check_pair(pred, truth);
    GridPrediction grad = GridPrediction::zeros(pred.S, pred.B, pred.C);
    const int cells = pred.S * pred.S;
    for (int i = 0; i < cells; ++i) {
        const GridTruth::Cell& t = truth.cells[i];
        for (int b = 0; b < pred.B; ++b) {
            const GridPrediction::Box& p = pred.box(i, b);
            GridPrediction::Box& g = grad.box(i, b);
            if (t.has_object && b == t.responsible) {
                g.x = -2.0 * lambda_coord * (t.x - p.x);
                g.y = -2.0 * lambda_coord * (t.y - p.y);
                // d/dw (sqrt(tw) - sqrt(w))^2 = -(sqrt(tw) - sqrt(w)) / sqrt(w);
                // the clamped branch (w < 0) is flat, and so is w == 0 by
                // convention (one-sided limit of the clamp).
                if (p.w > 0.0)
                    g.w = -lambda_coord * (std::sqrt(t.w) - std::sqrt(p.w)) / std::sqrt(p.w);
                if (p.h > 0.0)
                    g.h = -lambda_coord * (std::sqrt(t.h) - std::sqrt(p.h)) / std::sqrt(p.h);
                g.confidence = -2.0 * (t.confidence - p.confidence);
            } else {
                g.confidence = 2.0 * lambda_noobj * p.confidence;
            }
        }
        if (t.has_object)
            for (int c = 0; c < pred.C; ++c)
                grad.prob(i, c) = -2.0 * (t.class_probs[c] - pred.prob(i, c));
    }
    return grad;
}

}  // namespace sarkit
