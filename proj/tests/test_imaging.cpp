#include <doctest.h>

#include <random>

#include "plasmo/image.hpp"
#include "plasmo/tensor.hpp"

using namespace plasmo;

namespace {

RgbImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            img.px(x, y)[0] = r;
            img.px(x, y)[1] = g;
            img.px(x, y)[2] = b;
        }
    return img;
}

}  // namespace

TEST_CASE("saturation of pure and achromatic pixels") {
    CHECK(rgb_to_saturation(solid(1, 1, 255, 0, 0)).data[0] == doctest::Approx(1.0));
    CHECK(rgb_to_saturation(solid(1, 1, 128, 128, 128)).data[0] == doctest::Approx(0.0));
    CHECK(rgb_to_saturation(solid(1, 1, 200, 100, 100)).data[0] == doctest::Approx(0.5));
    CHECK(rgb_to_saturation(solid(1, 1, 0, 0, 0)).data[0] == doctest::Approx(0.0));
}

TEST_CASE("saturation stays in [0,1] for random pixels") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> byte(0, 255);
    RgbImage img(100, 100);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(byte(rng));
    const GrayImage s = rgb_to_saturation(img);
    for (double v : s.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("resize identity and constant preservation") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> byte(0, 255);
    RgbImage img(100, 100);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(byte(rng));
    const RgbImage same = resize(img, 100, 100);
    CHECK(same.data == img.data);

    const RgbImage big = solid(200, 200, 17, 230, 99);
    const RgbImage small = resize(big, 100, 100);
    for (int y = 0; y < 100; ++y)
        for (int x = 0; x < 100; ++x) {
            CHECK(small.px(x, y)[0] == 17);
            CHECK(small.px(x, y)[1] == 230);
            CHECK(small.px(x, y)[2] == 99);
        }
}

TEST_CASE("resize of a 2x1 ramp is monotone") {
    RgbImage img(2, 1);
    for (int c = 0; c < 3; ++c) {
        img.px(0, 0)[c] = 0;
        img.px(1, 0)[c] = 255;
    }
    const RgbImage up = resize(img, 4, 1);
    for (int x = 1; x < 4; ++x) CHECK(up.px(x, 0)[0] >= up.px(x - 1, 0)[0]);
    CHECK(up.px(0, 0)[0] < up.px(3, 0)[0]);
}

TEST_CASE("resize preserves value range on byte data") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> byte(40, 200);
    RgbImage img(37, 23);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(byte(rng));
    const auto [mn, mx] = std::minmax_element(img.data.begin(), img.data.end());
    const RgbImage out = resize(img, 90, 55);
    for (auto v : out.data) {
        CHECK(v >= *mn);
        CHECK(v <= *mx);
    }
}

TEST_CASE("resize rejects zero target") {
    RgbImage img(4, 4);
    CHECK_THROWS_AS(resize(img, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(resize(img, 4, 0), std::invalid_argument);
}

TEST_CASE("normalize_patch maps bytes to [0,1] and is invertible") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> byte(0, 255);
    RgbImage img(8, 6);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(byte(rng));
    const Tensor<double> t = normalize_patch<double>(img);
    REQUIRE(t.shape == std::vector<int>{6, 8, 3});
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        CHECK(t.data[i] >= 0.0);
        CHECK(t.data[i] <= 1.0);
        CHECK(static_cast<int>(std::lround(t.data[i] * 255.0)) == img.data[i]);
    }
    CHECK(normalize_patch<double>(solid(1, 1, 255, 0, 51)).data[0] == doctest::Approx(1.0));
    CHECK(normalize_patch<double>(solid(1, 1, 255, 0, 51)).data[1] == doctest::Approx(0.0));
    CHECK(normalize_patch<double>(solid(1, 1, 255, 0, 51)).data[2] == doctest::Approx(0.2));
}

TEST_CASE("luminance endpoints and red weight") {
    CHECK(luminance(solid(1, 1, 255, 255, 255)).data[0] == 255);
    CHECK(luminance(solid(1, 1, 0, 0, 0)).data[0] == 0);
    CHECK(luminance(solid(1, 1, 255, 0, 0)).data[0] == 76);  // round(0.299*255)
}

TEST_CASE("crop bounds checking") {
    RgbImage img(10, 10);
    CHECK_THROWS_AS(crop(img, 5, 5, 6, 6), std::invalid_argument);
    const RgbImage c = crop(img, 2, 3, 4, 5);
    CHECK(c.width == 4);
    CHECK(c.height == 5);
}
