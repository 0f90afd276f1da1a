#include "sarkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "sarkit/errors.hpp"

namespace sarkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_class(int class_id, int num_classes) {
    if (class_id < 0 || class_id >= num_classes)
        throw InvalidSize("class id " + std::to_string(class_id) + " outside [0, " +
                          std::to_string(num_classes) + ")");
}

std::string fmt2(double v) {
    if (std::isnan(v))
        return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

MatchCounts match_detections(const std::vector<LabeledBox>& ground_truth,
                             const std::vector<Detection>& detections, int num_classes,
                             double iou_min) {
    if (num_classes <= 0)
        throw InvalidSize("num_classes must be positive");
    for (const LabeledBox& g : ground_truth)
        check_class(g.class_id, num_classes);
    for (const Detection& d : detections) {
        check_class(d.box.class_id, num_classes);
        d.confidence();
    }

    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (detections[a].confidence() != detections[b].confidence())
            return detections[a].confidence() > detections[b].confidence();
        return box_before(detections[a].box, detections[b].box);
    });

    MatchCounts counts;
    counts.num_classes = num_classes;
    counts.matrix.assign(num_classes, std::vector<long long>(num_classes, 0));
    counts.missed.assign(num_classes, 0);

    std::vector<bool> claimed(ground_truth.size(), false);
    for (std::size_t idx : order) {
        const Detection& det = detections[idx];
        double best_iou = 0.0;
        std::size_t best = ground_truth.size();
        for (std::size_t g = 0; g < ground_truth.size(); ++g) {
            if (claimed[g])
                continue;
            const double v = iou(det.box, ground_truth[g]);
            if (v < iou_min)
                continue;
            if (best == ground_truth.size() || v > best_iou ||
                (v == best_iou && box_before(ground_truth[g], ground_truth[best]))) {
                best_iou = v;
                best = g;
            }
        }
        if (best == ground_truth.size()) {
            ++counts.false_positives;
        } else {
            claimed[best] = true;
            ++counts.matrix[ground_truth[best].class_id][det.box.class_id];
        }
    }
    for (std::size_t g = 0; g < ground_truth.size(); ++g)
        if (!claimed[g])
            ++counts.missed[ground_truth[g].class_id];
    return counts;
}

EvalReport metrics(const MatchCounts& counts, long long background_unit_count,
                   std::vector<std::string> class_names) {
    const int n = counts.num_classes;
    if (n <= 0 || static_cast<int>(counts.matrix.size()) != n ||
        static_cast<int>(counts.missed.size()) != n)
        throw ShapeMismatch("inconsistent confusion counts");
    if (!class_names.empty() && static_cast<int>(class_names.size()) != n)
        throw ShapeMismatch("class name count does not match confusion size");
    if (background_unit_count < 0)
        throw InvalidSize("background unit count must be non-negative");

    EvalReport rep;
    if (class_names.empty())
        for (int c = 0; c < n; ++c)
            class_names.push_back("class" + std::to_string(c));
    rep.class_names = std::move(class_names);
    rep.matrix = counts.matrix;
    rep.missed = counts.missed;
    rep.gt_total.assign(n, 0);
    rep.acc_percent.assign(n, kNaN);
    rep.fnr_percent.assign(n, kNaN);

    long long total_gt = 0;
    double acc_sum = 0.0;
    double fnr_sum = 0.0;
    int defined = 0;
    for (int c = 0; c < n; ++c) {
        long long row = counts.missed[c];
        for (int p = 0; p < n; ++p)
            row += counts.matrix[c][p];
        rep.gt_total[c] = row;
        total_gt += row;
        const long long tp_c = counts.matrix[c][c];
        rep.true_positives += tp_c;
        rep.false_negatives += row - tp_c;
        if (row > 0) {
            rep.acc_percent[c] = 100.0 * static_cast<double>(tp_c) / static_cast<double>(row);
            rep.fnr_percent[c] = 100.0 - rep.acc_percent[c];
            acc_sum += rep.acc_percent[c];
            fnr_sum += rep.fnr_percent[c];
            ++defined;
        }
    }
    rep.average_acc = defined ? acc_sum / defined : kNaN;
    rep.average_fnr = defined ? fnr_sum / defined : kNaN;
    rep.overall_acc = total_gt ? 100.0 * static_cast<double>(rep.true_positives) /
                                     static_cast<double>(total_gt)
                               : kNaN;
    rep.overall_fnr = total_gt ? 100.0 - rep.overall_acc : kNaN;

    rep.false_positives = counts.false_positives;
    rep.background_units = background_unit_count;
    if (rep.false_positives > 0 && background_unit_count < rep.false_positives)
        throw InvalidSize("background unit count smaller than false-positive count");
    rep.true_negatives = background_unit_count - rep.false_positives;
    rep.fpr_percent = rep.false_positives == 0
                          ? 0.0
                          : 100.0 * static_cast<double>(rep.false_positives) /
                                static_cast<double>(background_unit_count);
    return rep;
}

std::string confusion_to_table(const EvalReport& report) {
    const int n = static_cast<int>(report.class_names.size());
    std::vector<std::vector<std::string>> cells;

    std::vector<std::string> head{"class"};
    for (const std::string& name : report.class_names)
        head.push_back(name);
    head.insert(head.end(), {"None", "ACC(%)", "FNR(%)"});
    cells.push_back(std::move(head));

    for (int c = 0; c < n; ++c) {
        std::vector<std::string> row{report.class_names[c]};
        for (int p = 0; p < n; ++p)
            row.push_back(std::to_string(report.matrix[c][p]));
        row.push_back(std::to_string(report.missed[c]));
        row.push_back(fmt2(report.acc_percent[c]));
        row.push_back(fmt2(report.fnr_percent[c]));
        cells.push_back(std::move(row));
    }
    if (n > 0) {
        std::vector<std::string> avg{"Average"};
        avg.insert(avg.end(), static_cast<std::size_t>(n) + 1, "");
        avg.push_back(fmt2(report.average_acc));
        avg.push_back(fmt2(report.average_fnr));
        cells.push_back(std::move(avg));
    }

    std::vector<std::size_t> widths(cells[0].size(), 0);
    for (const auto& row : cells)
        for (std::size_t k = 0; k < row.size(); ++k)
            widths[k] = std::max(widths[k], row[k].size());

    std::string out;
    for (const auto& row : cells) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k)
                out += "  ";
            // left-align the row label, right-align numeric columns
            if (k == 0) {
                out += row[k];
                out.append(widths[k] - row[k].size(), ' ');
            } else {
                out.append(widths[k] - row[k].size(), ' ');
                out += row[k];
            }
        }
        while (!out.empty() && out.back() == ' ')
            out.pop_back();
        out += '\n';
    }
    if (n > 0)
        out += "false positives: " + std::to_string(report.false_positives) +
               "  background units: " + std::to_string(report.background_units) +
               "  FPR(%): " + fmt2(report.fpr_percent) + "\n";
    return out;
}

}  // namespace sarkit
