#ifndef PLASMO_EVALKIT_HPP
#define PLASMO_EVALKIT_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "plasmo/roi.hpp"

namespace plasmo {

struct UndefinedMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroundTruthBox {
    std::string image_id;
    Box box;
};

struct Detection {
    Box box;
    double confidence = 0;
};

/// TP/FP/FN bookkeeping. True negatives are undefined in the detection
/// setting and deliberately not represented.
struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

struct MatchResult {
    ConfusionCounts counts;
    std::vector<bool> detection_is_tp;  // per detection, original order
    std::vector<int> gt_matched_by;     // detection index or -1, per GT box
};

/// Greedy one-to-one matching, detections in confidence-descending order.
/// A detection matches an unmatched GT box iff its center lies inside it.
inline MatchResult match_boxes(const std::vector<Detection>& detections,
                               const std::vector<Box>& ground_truth) {
    MatchResult res;
    res.detection_is_tp.assign(detections.size(), false);
    res.gt_matched_by.assign(ground_truth.size(), -1);
    std::vector<std::size_t> order(detections.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detections[a].confidence > detections[b].confidence;
    });
    for (std::size_t oi : order) {
        const Box& d = detections[oi].box;
        const double cx = d.x + d.w / 2.0, cy = d.y + d.h / 2.0;
        for (std::size_t g = 0; g < ground_truth.size(); ++g) {
            if (res.gt_matched_by[g] >= 0) continue;
            const Box& gt = ground_truth[g];
            if (cx >= gt.x && cx < gt.x + gt.w && cy >= gt.y && cy < gt.y + gt.h) {
                res.gt_matched_by[g] = static_cast<int>(oi);
                res.detection_is_tp[oi] = true;
                break;
            }
        }
    }
    for (bool tp : res.detection_is_tp) {
        if (tp)
            ++res.counts.tp;
        else
            ++res.counts.fp;
    }
    for (int m : res.gt_matched_by)
        if (m < 0) ++res.counts.fn;
    return res;
}

/// PPV = TP/(TP+FP) x 100%.
inline double ppv(const ConfusionCounts& c) {
    if (c.tp + c.fp == 0) throw UndefinedMetricError("ppv: tp+fp == 0");
    return 100.0 * c.tp / static_cast<double>(c.tp + c.fp);
}

/// Sensitivity = TP/(TP+FN) x 100%.
inline double sensitivity(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0) throw UndefinedMetricError("sensitivity: tp+fn == 0");
    return 100.0 * c.tp / static_cast<double>(c.tp + c.fn);
}

}  // namespace plasmo

#endif
