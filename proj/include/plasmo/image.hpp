#ifndef PLASMO_IMAGE_HPP
#define PLASMO_IMAGE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace plasmo {

/// 8-bit interleaved RGB raster, row-major, origin top-left.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // width*height*3

    RgbImage() = default;
    RgbImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("RgbImage: dimensions must be >= 1");
    }

    std::uint8_t* px(int x, int y) { return data.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
    const std::uint8_t* px(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    bool valid() const {
        return width >= 1 && height >= 1 &&
               data.size() == static_cast<std::size_t>(width) * height * 3;
    }
};

/// Real-valued single-channel raster (saturation, LoG responses, luminance).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // width*height

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("GrayImage: dimensions must be >= 1");
    }

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Boolean mask, true = foreground.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 0/1 per pixel

    BinaryImage() = default;
    BinaryImage(int w, int h, bool fill = false)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// HSV saturation channel: S = (max - min) / max, 0 for black pixels.
inline GrayImage rgb_to_saturation(const RgbImage& img) {
    GrayImage out(img.width, img.height);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t r = img.data[i * 3], g = img.data[i * 3 + 1], b = img.data[i * 3 + 2];
        const int mx = std::max({r, g, b});
        const int mn = std::min({r, g, b});
        out.data[i] = mx == 0 ? 0.0 : static_cast<double>(mx - mn) / mx;
    }
    return out;
}

/// Bilinear resize.
inline RgbImage resize(const RgbImage& img, int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("resize: target dimensions must be >= 1");
    if (w == img.width && h == img.height) return img;
    RgbImage out(w, h);
    // Pixel-center mapping: output center (x+0.5)/w maps to input center.
    const double sx = static_cast<double>(img.width) / w;
    const double sy = static_cast<double>(img.height) / h;
    for (int y = 0; y < h; ++y) {
        const double fy = (y + 0.5) * sy - 0.5;
        const double cy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(cy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = cy - y0;
        for (int x = 0; x < w; ++x) {
            const double fx = (x + 0.5) * sx - 0.5;
            const double cx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(cx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = cx - x0;
            for (int c = 0; c < 3; ++c) {
                const double v00 = img.px(x0, y0)[c], v10 = img.px(x1, y0)[c];
                const double v01 = img.px(x0, y1)[c], v11 = img.px(x1, y1)[c];
                const double v = (1 - wy) * ((1 - wx) * v00 + wx * v10) +
                                 wy * ((1 - wx) * v01 + wx * v11);
                out.px(x, y)[c] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return out;
}

/// ITU-R 601 luma, quantized to integer levels 0-255.
inline GrayImage luminance(const RgbImage& img) {
    GrayImage out(img.width, img.height);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = 0.299 * img.data[i * 3] + 0.587 * img.data[i * 3 + 1] +
                         0.114 * img.data[i * 3 + 2];
        out.data[i] = std::clamp<double>(std::lround(v), 0.0, 255.0);
    }
    return out;
}

/// Crop a sub-rectangle; rectangle must lie inside the image.
inline RgbImage crop(const RgbImage& img, int x, int y, int w, int h) {
    if (x < 0 || y < 0 || w < 1 || h < 1 || x + w > img.width || y + h > img.height)
        throw std::invalid_argument("crop: rectangle outside image");
    RgbImage out(w, h);
    for (int yy = 0; yy < h; ++yy)
        std::copy_n(img.px(x, y + yy), static_cast<std::size_t>(w) * 3, out.px(0, yy));
    return out;
}

}  // namespace plasmo

#endif
