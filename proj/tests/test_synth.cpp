#include <doctest.h>

#include <random>

#include "plasmo/image.hpp"
#include "plasmo/synth.hpp"
#include "plasmo/texture.hpp"

using namespace plasmo;

TEST_CASE("zero parasites gives empty annotation") {
    SynthSmearConfig cfg;
    cfg.seed = 1;
    cfg.n_parasites = 0;
    cfg.n_distractors = 0;
    const SynthSmear s = synth_smear(cfg);
    CHECK(s.boxes.empty());
    CHECK(s.image.width == 1280);
    CHECK(s.image.height == 960);
}

TEST_CASE("five parasites give five non-overlapping ground-truth boxes") {
    SynthSmearConfig cfg;
    cfg.seed = 2;
    cfg.n_parasites = 5;
    const SynthSmear s = synth_smear(cfg);
    REQUIRE(s.boxes.size() == 5);
    for (std::size_t i = 0; i < s.boxes.size(); ++i) {
        const Box& a = s.boxes[i];
        CHECK(a.x >= 0);
        CHECK(a.y >= 0);
        CHECK(a.x + a.w <= 1280);
        CHECK(a.y + a.h <= 960);
        for (std::size_t j = i + 1; j < s.boxes.size(); ++j) {
            const Box& b = s.boxes[j];
            const bool overlap = a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
            CHECK_FALSE(overlap);
        }
    }
}

TEST_CASE("parasite regions are far more saturated than the background") {
    SynthSmearConfig cfg;
    cfg.seed = 3;
    cfg.n_parasites = 5;
    cfg.n_distractors = 0;
    const SynthSmear s = synth_smear(cfg);
    const GrayImage sat = rgb_to_saturation(s.image);
    double bg_mean = 0;
    int bg_n = 0;
    for (int y = 0; y < 50; ++y)
        for (int x = 0; x < 50; ++x) {
            bg_mean += sat.at(x, y);
            ++bg_n;
        }
    bg_mean /= bg_n;
    for (const Box& b : s.boxes) {
        // sample the blob core at the box center
        double core = 0;
        int n = 0;
        const int cx = b.x + b.w / 2, cy = b.y + b.h / 2;
        for (int y = cy - 3; y <= cy + 3; ++y)
            for (int x = cx - 3; x <= cx + 3; ++x) {
                core += sat.at(x, y);
                ++n;
            }
        core /= n;
        CHECK(core - bg_mean >= 0.3);
    }
}

TEST_CASE("smear generation is deterministic given the seed") {
    SynthSmearConfig cfg;
    cfg.seed = 4;
    const SynthSmear a = synth_smear(cfg);
    const SynthSmear b = synth_smear(cfg);
    CHECK(a.image.data == b.image.data);
    REQUIRE(a.boxes.size() == b.boxes.size());
    for (std::size_t i = 0; i < a.boxes.size(); ++i) CHECK(a.boxes[i].x == b.boxes[i].x);
}

TEST_CASE("parasite patches are textured, distractors uniform") {
    SynthSmearConfig cfg;
    cfg.seed = 5;
    cfg.n_parasites = 4;
    cfg.n_distractors = 4;
    const SynthSmear s = synth_smear(cfg);
    // parasite boxes should have clearly lower GLCM homogeneity than a
    // background box of the same size
    const TextureFeatures bg = roi_features(s.image, Box{2, 2, 40, 40});
    for (const Box& b : s.boxes) {
        const Box probe = clamp_box(b.x + b.w / 2, b.y + b.h / 2, 40, s.image.width, s.image.height);
        const TextureFeatures f = roi_features(s.image, probe);
        CHECK(f.homogeneity < bg.homogeneity - 0.1);
    }
}

TEST_CASE("patch generator produces both classes deterministically") {
    std::mt19937_64 rng1(9), rng2(9);
    const RgbImage a = synth_patch(true, rng1);
    const RgbImage b = synth_patch(true, rng2);
    CHECK(a.data == b.data);
    const RgbImage neg = synth_patch(false, rng1);
    CHECK(neg.width >= 40);
    // negative patches contain no strongly saturated pixels
    const GrayImage sat = rgb_to_saturation(neg);
    for (double v : sat.data) CHECK(v < 0.4);
}
