#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "plasmo/texture.hpp"

using namespace plasmo;

namespace {

// Brute-force pair enumeration, independent of compute_glcm.
std::map<std::pair<int, int>, long> pair_oracle(const GrayImage& patch, int dx, int dy) {
    std::map<std::pair<int, int>, long> counts;
    for (int y = 0; y < patch.height; ++y)
        for (int x = 0; x < patch.width; ++x) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= patch.width || ny >= patch.height) continue;
            ++counts[{static_cast<int>(patch.at(x, y)), static_cast<int>(patch.at(nx, ny))}];
            ++counts[{static_cast<int>(patch.at(nx, ny)), static_cast<int>(patch.at(x, y))}];
        }
    return counts;
}

GrayImage random_patch(int w, int h, std::mt19937_64& rng, int levels = 256) {
    std::uniform_int_distribution<int> level(0, levels - 1);
    GrayImage img(w, h);
    for (double& v : img.data) v = level(rng);
    return img;
}

}  // namespace

TEST_CASE("constant patch gives a single diagonal entry") {
    GrayImage patch(5, 5, 37.0);
    const Glcm g = compute_glcm(patch);
    CHECK(g.at(37, 37) == doctest::Approx(1.0));
    double sum = 0;
    for (double v : g.matrix) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    const TextureFeatures f = features(g);
    CHECK(f.contrast == doctest::Approx(0.0));
    CHECK(f.dissimilarity == doctest::Approx(0.0));
    CHECK(f.homogeneity == doctest::Approx(1.0));
    CHECK(f.energy == doctest::Approx(1.0));
    CHECK(f.correlation == doctest::Approx(1.0));  // zero-variance convention
}

TEST_CASE("alternating 1x4 row has the documented GLCM and features") {
    GrayImage patch(4, 1);
    patch.data = {0, 1, 0, 1};
    const Glcm g = compute_glcm(patch, 1, 0.0);
    CHECK(g.at(0, 1) == doctest::Approx(0.5));
    CHECK(g.at(1, 0) == doctest::Approx(0.5));
    CHECK(g.at(0, 0) == doctest::Approx(0.0));
    CHECK(g.at(1, 1) == doctest::Approx(0.0));
    const TextureFeatures f = features(g);
    CHECK(f.contrast == doctest::Approx(1.0));
    CHECK(f.dissimilarity == doctest::Approx(1.0));
    CHECK(f.homogeneity == doctest::Approx(0.5));
    CHECK(f.energy == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("glcm equals the brute-force pair oracle on random patches") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const GrayImage patch = random_patch(16, 16, rng);
        const Glcm g = compute_glcm(patch, 1, 0.0);
        const auto oracle = pair_oracle(patch, 1, 0);
        long total = 0;
        for (const auto& [k, v] : oracle) total += v;
        for (const auto& [k, v] : oracle)
            CHECK(g.at(k.first, k.second) == doctest::Approx(static_cast<double>(v) / total).epsilon(1e-12));
        double sum = 0;
        for (int i = 0; i < g.levels; ++i)
            for (int j = 0; j < g.levels; ++j) {
                sum += g.at(i, j);
                CHECK(g.at(i, j) == g.at(j, i));  // symmetry
                CHECK(g.at(i, j) >= 0.0);
            }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("features match direct summation on random glcms") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const GrayImage patch = random_patch(12, 12, rng, 32);
        const Glcm g = compute_glcm(patch);
        const TextureFeatures f = features(g);
        double contrast = 0, dissim = 0, homog = 0, energy2 = 0, mi = 0, mj = 0;
        for (int i = 0; i < g.levels; ++i)
            for (int j = 0; j < g.levels; ++j) {
                const double p = g.at(i, j);
                contrast += p * (i - j) * (i - j);
                dissim += p * std::abs(i - j);
                homog += p / (1.0 + (i - j) * (i - j));
                energy2 += p * p;
                mi += p * i;
                mj += p * j;
            }
        double vi = 0, vj = 0, cov = 0;
        for (int i = 0; i < g.levels; ++i)
            for (int j = 0; j < g.levels; ++j) {
                const double p = g.at(i, j);
                vi += p * (i - mi) * (i - mi);
                vj += p * (j - mj) * (j - mj);
                cov += p * (i - mi) * (j - mj);
            }
        CHECK(f.contrast == doctest::Approx(contrast).epsilon(1e-9));
        CHECK(f.dissimilarity == doctest::Approx(dissim).epsilon(1e-9));
        CHECK(f.homogeneity == doctest::Approx(homog).epsilon(1e-9));
        CHECK(f.energy == doctest::Approx(std::sqrt(energy2)).epsilon(1e-9));
        CHECK(f.correlation == doctest::Approx(cov / (std::sqrt(vi) * std::sqrt(vj))).epsilon(1e-9));
        CHECK(f.correlation >= -1.0 - 1e-12);
        CHECK(f.correlation <= 1.0 + 1e-12);
        CHECK(f.homogeneity > 0.0);
        CHECK(f.homogeneity <= 1.0 + 1e-12);
        CHECK(f.energy > 0.0);
        CHECK(f.energy <= 1.0 + 1e-12);
    }
}

TEST_CASE("features are invariant to translation of a periodic texture") {
    auto tiled = [](int shift) {
        GrayImage img(32, 32);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) img.at(x, y) = ((x + shift) / 2 + y / 2) % 2 ? 200.0 : 40.0;
        return img;
    };
    // interior crops avoid boundary-pair differences
    auto interior = [](const GrayImage& img) {
        GrayImage c(24, 24);
        for (int y = 0; y < 24; ++y)
            for (int x = 0; x < 24; ++x) c.at(x, y) = img.at(x + 4, y + 4);
        return c;
    };
    const TextureFeatures a = features(compute_glcm(interior(tiled(0))));
    const TextureFeatures b = features(compute_glcm(interior(tiled(4))));
    CHECK(a.contrast == doctest::Approx(b.contrast));
    CHECK(a.homogeneity == doctest::Approx(b.homogeneity));
    CHECK(a.energy == doctest::Approx(b.energy));
}

TEST_CASE("patch too small for the offset is rejected") {
    GrayImage one(1, 1, 5.0);
    CHECK_THROWS_AS(compute_glcm(one, 1, 0.0), std::invalid_argument);
    GrayImage col(1, 4, 5.0);
    CHECK_THROWS_AS(compute_glcm(col, 1, 0.0), std::invalid_argument);  // horizontal offset
    CHECK_NOTHROW(compute_glcm(col, 1, M_PI / 2));                      // vertical offset fits
}

TEST_CASE("roi_features: uniform box is near 1, noisy box is lower") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> byte(0, 255);
    RgbImage img(200, 100);
    for (int y = 0; y < 100; ++y)
        for (int x = 0; x < 200; ++x)
            for (int c = 0; c < 3; ++c)
                img.px(x, y)[c] = x < 100 ? 180 : static_cast<std::uint8_t>(byte(rng));
    const TextureFeatures uniform = roi_features(img, Box{10, 10, 60, 60});
    const TextureFeatures noisy = roi_features(img, Box{120, 10, 60, 60});
    CHECK(uniform.homogeneity >= 0.9);
    CHECK(uniform.energy >= 0.9);
    CHECK(noisy.homogeneity < uniform.homogeneity);
    CHECK(noisy.energy < uniform.energy);

    const TextureFeatures again = roi_features(img, Box{120, 10, 60, 60});
    CHECK(again.homogeneity == noisy.homogeneity);
    CHECK(again.energy == noisy.energy);
    CHECK(again.correlation == noisy.correlation);
}
