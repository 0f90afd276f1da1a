#pragma once

#include <string>
#include <vector>

#include "sarkit/boxes.hpp"

namespace sarkit {

/// Per-cell regression targets on an S x S grid. Cell (col, row) lives at
/// index row * S + col. At most one object per cell; extra objects are
/// dropped with a warning.
struct GridTruth {
    int S = 0;
    int B = 1;
    int C = 0;

    struct Cell {
        bool has_object = false;
        int responsible = 0;              // predictor slot that owns the object
        double x = 0.0;                   // center, relative to the cell
        double y = 0.0;
        double w = 0.0;                   // extent, relative to the image
        double h = 0.0;
        double confidence = 1.0;          // target confidence for the owner
        std::vector<double> class_probs;  // size C, one-hot
    };

    std::vector<Cell> cells;              // S * S, row-major
    std::vector<std::string> warnings;    // cell-collision reports

    Cell& cell(int col, int row) { return cells[static_cast<std::size_t>(row) * S + col]; }
    const Cell& cell(int col, int row) const {
        return cells[static_cast<std::size_t>(row) * S + col];
    }
};

/// Raw network outputs on the same grid: B boxes and C class scores per cell.
struct GridPrediction {
    int S = 0;
    int B = 0;
    int C = 0;

    struct Box {
        double x = 0.0;  // center, relative to the cell
        double y = 0.0;
        double w = 0.0;  // extent, relative to the image
        double h = 0.0;
        double confidence = 0.0;
    };

    std::vector<Box> boxes;           // S * S * B
    std::vector<double> class_probs;  // S * S * C

    Box& box(int cell, int b) { return boxes[static_cast<std::size_t>(cell) * B + b]; }
    const Box& box(int cell, int b) const {
        return boxes[static_cast<std::size_t>(cell) * B + b];
    }
    double& prob(int cell, int c) { return class_probs[static_cast<std::size_t>(cell) * C + c]; }
    double prob(int cell, int c) const {
        return class_probs[static_cast<std::size_t>(cell) * C + c];
    }

    static GridPrediction zeros(int S, int B, int C);
};

/// Buckets pixel-space boxes into grid cells. Centers landing exactly on a
/// cell boundary go to the higher-index cell; a second object in an occupied
/// cell is dropped and recorded in warnings. Targets are normalized: centers
/// relative to their cell, extents relative to the image.
GridTruth assign_cells(const std::vector<LabeledBox>& boxes, int S, int image_w, int image_h,
                       int num_classes, int num_predictors = 1);

/// As above, but picks each cell's responsible predictor as the one whose
/// decoded box overlaps the object most (ties to the lower slot).
GridTruth assign_cells(const std::vector<LabeledBox>& boxes, int S, int image_w, int image_h,
                       int num_classes, const GridPrediction& pred);

/// Test-time class score: conditional class probability times box confidence.
double class_confidence(double p_class, double box_confidence);

struct LossResult {
    double total = 0.0;
    bool negative_wh_clamped = false;  // a predicted extent was < 0 before sqrt
};

/// Sum-squared detection loss: coordinate and sqrt-extent terms weighted by
/// lambda_coord on responsible boxes, confidence terms (no-object ones scaled
/// by lambda_noobj), and class terms on object cells.
LossResult yolo_loss(const GridPrediction& pred, const GridTruth& truth,
                     double lambda_coord = 5.0, double lambda_noobj = 0.5);

/// Analytic partial derivatives of yolo_loss with respect to every predicted
/// value, in a prediction-shaped container.
GridPrediction yolo_loss_grad(const GridPrediction& pred, const GridTruth& truth,
                              double lambda_coord = 5.0, double lambda_noobj = 0.5);

}  // namespace sarkit
