#ifndef PLASMO_FORMATS_HPP
#define PLASMO_FORMATS_HPP

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plasmo/detect.hpp"
#include "plasmo/evalkit.hpp"
#include "plasmo/roi.hpp"

namespace plasmo {

using json = nlohmann::json;

struct AnnotationFile {
    std::string image;
    std::vector<Box> boxes;
    std::optional<std::string> class_hint;
};

inline json box_to_json(const Box& b) {
    return json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}};
}

inline Box box_from_json(const json& j) {
    Box b{j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(), j.at("h").get<int>()};
    if (b.w < 1 || b.h < 1 || b.x < 0 || b.y < 0)
        throw std::runtime_error("annotation: invalid box");
    return b;
}

inline json annotation_to_json(const AnnotationFile& a) {
    json j;
    j["image"] = a.image;
    j["boxes"] = json::array();
    for (const Box& b : a.boxes) j["boxes"].push_back(box_to_json(b));
    if (a.class_hint) j["class_hint"] = *a.class_hint;
    return j;
}

inline AnnotationFile annotation_from_json(const json& j) {
    AnnotationFile a;
    a.image = j.at("image").get<std::string>();
    for (const json& b : j.at("boxes")) a.boxes.push_back(box_from_json(b));
    if (j.contains("class_hint")) a.class_hint = j["class_hint"].get<std::string>();
    return a;
}

inline json detection_record_to_json(const DetectionRecord& rec) {
    json j;
    j["image"] = rec.image;
    j["detections"] = json::array();
    for (const DetectionEntry& e : rec.detections) {
        json d;
        d["box"] = box_to_json(e.box);
        d["confidence"] = e.confidence;
        d["glcm"] = {{"contrast", e.glcm.contrast},
                     {"dissimilarity", e.glcm.dissimilarity},
                     {"homogeneity", e.glcm.homogeneity},
                     {"energy", e.glcm.energy},
                     {"correlation", e.glcm.correlation}};
        d["kept_by_filter"] = e.kept_by_filter;
        j["detections"].push_back(d);
    }
    j["filter_report"] = {{"k", rec.filter_report.k},
                          {"silhouette", rec.filter_report.silhouette},
                          {"kept", rec.filter_report.kept},
                          {"dropped", rec.filter_report.dropped}};
    return j;
}

inline DetectionRecord detection_record_from_json(const json& j) {
    DetectionRecord rec;
    rec.image = j.at("image").get<std::string>();
    for (const json& d : j.at("detections")) {
        DetectionEntry e;
        e.box = box_from_json(d.at("box"));
        e.confidence = d.at("confidence").get<double>();
        const json& g = d.at("glcm");
        e.glcm.contrast = g.at("contrast").get<double>();
        e.glcm.dissimilarity = g.at("dissimilarity").get<double>();
        e.glcm.homogeneity = g.at("homogeneity").get<double>();
        e.glcm.energy = g.at("energy").get<double>();
        e.glcm.correlation = g.at("correlation").get<double>();
        e.kept_by_filter = d.at("kept_by_filter").get<bool>();
        rec.detections.push_back(e);
    }
    const json& fr = j.at("filter_report");
    rec.filter_report.k = fr.at("k").get<int>();
    rec.filter_report.silhouette = fr.at("silhouette").get<double>();
    rec.filter_report.kept = fr.at("kept").get<int>();
    rec.filter_report.dropped = fr.at("dropped").get<int>();
    return rec;
}

struct ImageMetrics {
    std::string image;
    ConfusionCounts counts;
};

inline json metrics_to_json(const std::vector<ImageMetrics>& per_image) {
    ConfusionCounts agg;
    json j;
    j["per_image"] = json::array();
    for (const ImageMetrics& m : per_image) {
        agg += m.counts;
        json e;
        e["image"] = m.image;
        e["tp"] = m.counts.tp;
        e["fp"] = m.counts.fp;
        e["fn"] = m.counts.fn;
        j["per_image"].push_back(e);
    }
    json a;
    a["tp"] = agg.tp;
    a["fp"] = agg.fp;
    a["fn"] = agg.fn;
    a["ppv"] = agg.tp + agg.fp > 0 ? json(ppv(agg)) : json(nullptr);
    a["sensitivity"] = agg.tp + agg.fn > 0 ? json(sensitivity(agg)) : json(nullptr);
    j["aggregate"] = a;
    return j;
}

inline json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return json::parse(is);
}

inline void save_json(const std::string& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << "\n";
}

}  // namespace plasmo

#endif
