#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "plasmo/config.hpp"
#include "plasmo/formats.hpp"
#include "plasmo/png_io.hpp"

using namespace plasmo;
namespace fs = std::filesystem;

TEST_CASE("annotation json round-trip") {
    AnnotationFile a;
    a.image = "smear_000.png";
    a.boxes = {Box{10, 20, 30, 40}, Box{0, 0, 5, 5}};
    a.class_hint = "falciparum";
    const AnnotationFile b = annotation_from_json(annotation_to_json(a));
    CHECK(b.image == a.image);
    REQUIRE(b.boxes.size() == 2);
    CHECK(b.boxes[0].x == 10);
    CHECK(b.boxes[1].w == 5);
    CHECK(b.class_hint == a.class_hint);
}

TEST_CASE("annotation rejects invalid boxes") {
    json j;
    j["image"] = "x.png";
    j["boxes"] = json::array({{{"x", -1}, {"y", 0}, {"w", 10}, {"h", 10}}});
    CHECK_THROWS(annotation_from_json(j));
    j["boxes"] = json::array({{{"x", 0}, {"y", 0}, {"w", 0}, {"h", 10}}});
    CHECK_THROWS(annotation_from_json(j));
}

TEST_CASE("detection record json round-trip preserves everything") {
    DetectionRecord rec;
    rec.image = "img.png";
    DetectionEntry e;
    e.box = {5, 6, 40, 40};
    e.confidence = 0.875;
    e.glcm = {1.5, 0.75, 0.8125, 0.5, 0.25};
    e.kept_by_filter = false;
    rec.detections.push_back(e);
    rec.filter_report = {2, 0.625, 1, 1, true};
    const DetectionRecord b = detection_record_from_json(detection_record_to_json(rec));
    CHECK(b.image == rec.image);
    REQUIRE(b.detections.size() == 1);
    CHECK(b.detections[0].confidence == rec.detections[0].confidence);
    CHECK(b.detections[0].glcm.homogeneity == e.glcm.homogeneity);
    CHECK(b.detections[0].glcm.correlation == e.glcm.correlation);
    CHECK_FALSE(b.detections[0].kept_by_filter);
    CHECK(b.filter_report.k == 2);
    CHECK(b.filter_report.silhouette == 0.625);
}

TEST_CASE("metrics json: aggregate with null ppv on empty detections") {
    std::vector<ImageMetrics> per;
    ImageMetrics m;
    m.image = "a.png";
    m.counts.fn = 4;
    per.push_back(m);
    const json j = metrics_to_json(per);
    CHECK(j["aggregate"]["ppv"].is_null());
    CHECK(j["aggregate"]["sensitivity"].get<double>() == doctest::Approx(0.0));
    CHECK(j["aggregate"]["fn"].get<int>() == 4);
}

TEST_CASE("reference confusion counts through the metrics json") {
    std::vector<ImageMetrics> per;
    ImageMetrics m;
    m.image = "table.png";
    m.counts.tp = 64;
    m.counts.fp = 15;
    m.counts.fn = 2;
    per.push_back(m);
    const json j = metrics_to_json(per);
    CHECK(std::abs(j["aggregate"]["ppv"].get<double>() - 81.0) < 0.05);
    CHECK(std::abs(j["aggregate"]["sensitivity"].get<double>() - 96.97) < 0.05);
}

TEST_CASE("config file parsing with overrides and unknown-key rejection") {
    const fs::path path = fs::temp_directory_path() / "plasmo_test_cfg.txt";
    {
        std::ofstream os(path);
        os << "# comment\n";
        os << "sigmas = 3,4,5\n";
        os << "box_sizes = 32,64\n";
        os << "silhouette_min = 0.45\n";
        os << "threshold = 0.7\n";
        os << "seed = 99\n";
    }
    const RunConfig cfg = load_config(path.string());
    CHECK(cfg.roi.sigmas == std::vector<double>{3, 4, 5});
    CHECK(cfg.roi.box_sizes == std::vector<int>{32, 64});
    CHECK(cfg.filter.silhouette_min == 0.45);
    CHECK(cfg.threshold == 0.7);
    CHECK(cfg.train.rng_seed == 99);
    CHECK(cfg.augment.rng_seed == 99);

    RunConfig c2;
    CHECK_THROWS_AS(config_set(c2, "not_a_key", "1"), std::invalid_argument);
    {
        std::ofstream os(path);
        os << "bogus_key = 5\n";
    }
    CHECK_THROWS_AS(load_config(path.string()), std::invalid_argument);
    fs::remove(path);
}

TEST_CASE("png round-trip") {
    RgbImage img(13, 9);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        img.data[i] = static_cast<std::uint8_t>((i * 37) % 256);
    const fs::path path = fs::temp_directory_path() / "plasmo_test_rt.png";
    write_png(path.string(), img);
    const RgbImage back = read_png(path.string());
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.data == img.data);
    fs::remove(path);
    CHECK_THROWS(read_png((fs::temp_directory_path() / "plasmo_no_such.png").string()));
}
