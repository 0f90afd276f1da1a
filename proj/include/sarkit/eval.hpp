#pragma once

#include <string>
#include <vector>

#include "sarkit/boxes.hpp"

namespace sarkit {

/// Raw confusion counts from matching detections against ground truth.
/// matrix[g][p] counts ground-truth boxes of class g matched by a detection
/// of class p; missed[g] counts ground-truth boxes no detection matched
/// (the "None" column). false_positives counts detections left unmatched.
struct MatchCounts {
    int num_classes = 0;
    std::vector<std::vector<long long>> matrix;
    std::vector<long long> missed;
    long long false_positives = 0;
};

/// Greedy one-to-one matching: detections are visited in descending
/// confidence order (ties by box order) and claim the unmatched ground-truth
/// box of highest IoU, requiring IoU >= iou_min. Class labels do not gate the
/// match; disagreements land in off-diagonal confusion cells.
MatchCounts match_detections(const std::vector<LabeledBox>& ground_truth,
                             const std::vector<Detection>& detections, int num_classes,
                             double iou_min = 0.5);

struct EvalReport {
    std::vector<std::string> class_names;
    std::vector<std::vector<long long>> matrix;
    std::vector<long long> missed;
    std::vector<long long> gt_total;       // row sums including the None column
    std::vector<double> acc_percent;       // NaN for classes with no ground truth
    std::vector<double> fnr_percent;       // 100 - acc for defined classes
    double average_acc = 0.0;              // unweighted over classes with ground truth
    double average_fnr = 0.0;
    double overall_acc = 0.0;              // pooled: total TP / total ground truth
    double overall_fnr = 0.0;
    long long true_positives = 0;
    long long false_negatives = 0;
    long long false_positives = 0;
    long long true_negatives = 0;          // background_units - false positives
    long long background_units = 0;
    double fpr_percent = 0.0;              // 0 whenever there are no false positives
};

/// Derives per-class detection accuracy / miss rates and the pooled false
/// positive rate from raw counts. background_unit_count is the number of
/// target-free evaluation units (e.g. empty slices) and must be at least the
/// false-positive count when any false positives exist.
EvalReport metrics(const MatchCounts& counts, long long background_unit_count,
                   std::vector<std::string> class_names = {});

/// Renders the confusion matrix (with None column and per-class rates) as an
/// aligned text table, ending with the unweighted average row.
std::string confusion_to_table(const EvalReport& report);

}  // namespace sarkit
