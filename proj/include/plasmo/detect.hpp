#ifndef PLASMO_DETECT_HPP
#define PLASMO_DETECT_HPP

#include <string>
#include <vector>

#include "plasmo/cluster.hpp"
#include "plasmo/evalkit.hpp"
#include "plasmo/image.hpp"
#include "plasmo/model.hpp"
#include "plasmo/roi.hpp"
#include "plasmo/tensor.hpp"
#include "plasmo/texture.hpp"

namespace plasmo {

struct DetectionEntry {
    Box box;
    double confidence = 0;
    TextureFeatures glcm;
    bool kept_by_filter = true;
};

struct DetectionRecord {
    std::string image;
    std::vector<DetectionEntry> detections;
    FilterReport filter_report;
};

struct DetectOptions {
    double threshold = 0.5;
    bool use_glcm_filter = true;
};

/// Full per-image chain: propose ROIs, classify each crop, keep CNN
/// positives, then GLCM-feature clustering to reject false positives.
template <typename T>
DetectionRecord detect_image(const RgbImage& img, const std::string& name,
                             const ModelParams<T>& params, const RoiConfig& roi_cfg,
                             const FilterConfig& filter_cfg, const DetectOptions& opt) {
    DetectionRecord rec;
    rec.image = name;
    const std::vector<RoiCandidate> rois = propose_rois(img, roi_cfg);
    for (const RoiCandidate& r : rois) {
        const RgbImage patch =
            resize(crop(img, r.box.x, r.box.y, r.box.w, r.box.h), params.cfg.input_size,
                   params.cfg.input_size);
        const std::vector<T> probs = predict(params, normalize_patch<T>(patch));
        const double conf = static_cast<double>(probs[1]);  // class 1 = Plasmodium
        if (conf < opt.threshold) continue;
        DetectionEntry e;
        e.box = r.box;
        e.confidence = conf;
        e.glcm = roi_features(img, r.box);
        rec.detections.push_back(e);
    }
    if (opt.use_glcm_filter) {
        std::vector<FeaturePoint> pts;
        pts.reserve(rec.detections.size());
        for (std::size_t i = 0; i < rec.detections.size(); ++i)
            pts.push_back({rec.detections[i].glcm.homogeneity, rec.detections[i].glcm.energy,
                           static_cast<int>(i)});
        auto [keep, rep] = filter_false_positives(pts, filter_cfg);
        rec.filter_report = rep;
        for (std::size_t i = 0; i < rec.detections.size(); ++i)
            rec.detections[i].kept_by_filter = keep[i];
    } else {
        rec.filter_report.kept = static_cast<int>(rec.detections.size());
    }
    return rec;
}

/// Kept detections as evaluator input.
inline std::vector<Detection> kept_detections(const DetectionRecord& rec) {
    std::vector<Detection> out;
    for (const DetectionEntry& e : rec.detections)
        if (e.kept_by_filter) out.push_back({e.box, e.confidence});
    return out;
}

/// Draw a 2px rectangle outline.
inline void draw_box(RgbImage& img, const Box& b, std::uint8_t r, std::uint8_t g,
                     std::uint8_t bl) {
    auto set = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
        img.px(x, y)[0] = r;
        img.px(x, y)[1] = g;
        img.px(x, y)[2] = bl;
    };
    for (int t = 0; t < 2; ++t) {
        for (int x = b.x; x < b.x + b.w; ++x) {
            set(x, b.y + t);
            set(x, b.y + b.h - 1 - t);
        }
        for (int y = b.y; y < b.y + b.h; ++y) {
            set(b.x + t, y);
            set(b.x + b.w - 1 - t, y);
        }
    }
}

/// Kept boxes in green, filtered-out ones in red.
inline RgbImage annotate_detections(const RgbImage& img, const DetectionRecord& rec) {
    RgbImage out = img;
    for (const DetectionEntry& e : rec.detections) {
        if (e.kept_by_filter)
            draw_box(out, e.box, 0, 200, 0);
        else
            draw_box(out, e.box, 220, 0, 0);
    }
    return out;
}

}  // namespace plasmo

#endif
