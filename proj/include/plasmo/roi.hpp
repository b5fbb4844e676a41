#ifndef PLASMO_ROI_HPP
#define PLASMO_ROI_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "plasmo/image.hpp"

namespace plasmo {

struct RoiConfig {
    std::vector<double> sigmas{4, 5, 6, 7};
    std::vector<int> box_sizes{40, 60, 80};
    int min_component_area = 20;
    double merge_radius = 20.0;
    int opening_iterations = 1;
    int dilation_iterations = 2;

    void validate() const {
        if (sigmas.empty()) throw std::invalid_argument("RoiConfig: sigmas empty");
        for (double s : sigmas)
            if (s <= 0) throw std::invalid_argument("RoiConfig: sigma must be > 0");
        if (box_sizes.empty()) throw std::invalid_argument("RoiConfig: box_sizes empty");
        for (int b : box_sizes)
            if (b < 8) throw std::invalid_argument("RoiConfig: box size must be >= 8");
    }
};

struct Box {
    int x = 0, y = 0, w = 0, h = 0;
};

struct RoiCandidate {
    int center_x = 0;
    int center_y = 0;
    Box box;
};

namespace detail {

// Fold an index into [0, n) by reflection (edge pixel included once per bounce).
inline int reflect_index(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - i - 1;
    }
    return i;
}

// 1D correlation along rows with reflect padding; kernel has 2r+1 taps.
inline GrayImage conv_rows(const GrayImage& img, const std::vector<double>& k) {
    const int r = static_cast<int>(k.size()) / 2;
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        const double* row = img.data.data() + static_cast<std::size_t>(y) * img.width;
        for (int x = 0; x < img.width; ++x) {
            double acc = 0;
            for (int t = -r; t <= r; ++t)
                acc += k[t + r] * row[reflect_index(x + t, img.width)];
            out.at(x, y) = acc;
        }
    }
    return out;
}

inline GrayImage conv_cols(const GrayImage& img, const std::vector<double>& k) {
    const int r = static_cast<int>(k.size()) / 2;
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double acc = 0;
            for (int t = -r; t <= r; ++t)
                acc += k[t + r] * img.at(x, reflect_index(y + t, img.height));
            out.at(x, y) = acc;
        }
    return out;
}

inline int log_radius(double sigma) { return static_cast<int>(std::ceil(3.0 * sigma)); }

// 1D Gaussian and its second derivative, sampled at integer offsets.
inline void log_taps(double sigma, std::vector<double>& g, std::vector<double>& gdd) {
    const int r = log_radius(sigma);
    g.assign(2 * r + 1, 0.0);
    gdd.assign(2 * r + 1, 0.0);
    const double s2 = sigma * sigma;
    const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * sigma);
    for (int i = -r; i <= r; ++i) {
        const double gv = norm * std::exp(-0.5 * i * i / s2);
        g[i + r] = gv;
        gdd[i + r] = (i * i - s2) / (s2 * s2) * gv;
    }
}

}  // namespace detail

/// Sampled Laplacian-of-Gaussian kernel, side 2*ceil(3*sigma)+1, mean-subtracted.
inline GrayImage log_kernel(double sigma) {
    if (sigma <= 0) throw std::invalid_argument("log_kernel: sigma must be > 0");
    std::vector<double> g, gdd;
    detail::log_taps(sigma, g, gdd);
    const int side = static_cast<int>(g.size());
    GrayImage k(side, side);
    double sum = 0;
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            const double v = gdd[x] * g[y] + g[x] * gdd[y];
            k.at(x, y) = v;
            sum += v;
        }
    const double mean = sum / (static_cast<double>(side) * side);
    for (double& v : k.data) v -= mean;
    return k;
}

/// Per-pixel max over scales of -sigma^2 * (LoG_sigma * img), reflect borders.
/// Positive peaks mark bright-on-dark blobs.
inline GrayImage multiscale_log(const GrayImage& img, const RoiConfig& cfg) {
    cfg.validate();
    GrayImage out(img.width, img.height, -std::numeric_limits<double>::infinity());
    for (double sigma : cfg.sigmas) {
        std::vector<double> g, gdd;
        detail::log_taps(sigma, g, gdd);
        // Sampled 2D LoG separates as gdd(x)g(y) + g(x)gdd(y); the mean
        // subtraction applied in log_kernel becomes a box-sum correction.
        GrayImage a = detail::conv_cols(detail::conv_rows(img, gdd), g);
        GrayImage b = detail::conv_cols(detail::conv_rows(img, g), gdd);
        const std::vector<double> ones(g.size(), 1.0);
        GrayImage box = detail::conv_cols(detail::conv_rows(img, ones), ones);
        double gs = 0, gdds = 0;
        for (double v : g) gs += v;
        for (double v : gdd) gdds += v;
        const double side = static_cast<double>(g.size());
        const double mean = 2.0 * gs * gdds / (side * side);
        const double s2 = sigma * sigma;
        for (std::size_t i = 0; i < out.data.size(); ++i) {
            const double resp = -s2 * (a.data[i] + b.data[i] - mean * box.data[i]);
            out.data[i] = std::max(out.data[i], resp);
        }
    }
    return out;
}

struct OtsuResult {
    int threshold = 0;
    BinaryImage mask;
    bool degenerate = false;
};

/// Otsu binarization after min-max quantization to 256 levels.
/// Foreground = level > threshold; ties broken toward the smallest threshold.
inline OtsuResult otsu_threshold(const GrayImage& img) {
    OtsuResult res;
    res.mask = BinaryImage(img.width, img.height);
    const auto [mn_it, mx_it] = std::minmax_element(img.data.begin(), img.data.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mx - mn <= 0) {
        res.degenerate = true;
        res.threshold = 0;
        return res;
    }
    std::vector<int> level(img.data.size());
    std::array<std::int64_t, 256> hist{};
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        int l = static_cast<int>(std::lround((img.data[i] - mn) / (mx - mn) * 255.0));
        l = std::clamp(l, 0, 255);
        level[i] = l;
        ++hist[l];
    }
    const double total = static_cast<double>(img.data.size());
    double total_sum = 0;
    for (int l = 0; l < 256; ++l) total_sum += static_cast<double>(l) * hist[l];
    double w0 = 0, sum0 = 0, best = -1;
    int best_t = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        sum0 += static_cast<double>(t) * hist[t];
        const double w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (total_sum - sum0) / w1;
        const double var = (w0 / total) * (w1 / total) * (mu0 - mu1) * (mu0 - mu1);
        if (var > best) {
            best = var;
            best_t = t;
        }
    }
    res.threshold = best_t;
    for (std::size_t i = 0; i < level.size(); ++i)
        res.mask.data[i] = level[i] > best_t ? 1 : 0;
    return res;
}

namespace detail {

template <bool Erode>
inline BinaryImage morph3x3(const BinaryImage& img) {
    BinaryImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            bool v = Erode;
            for (int dy = -1; dy <= 1 && v == Erode; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    bool nb;
                    if (nx < 0 || ny < 0 || nx >= img.width || ny >= img.height)
                        nb = false;  // outside: background
                    else
                        nb = img.at(nx, ny) != 0;
                    if (Erode && !nb) { v = false; break; }
                    if (!Erode && nb) { v = true; break; }
                }
            out.at(x, y) = v ? 1 : 0;
        }
    return out;
}

}  // namespace detail

inline BinaryImage erode(BinaryImage img, int iterations = 1) {
    for (int i = 0; i < iterations; ++i) img = detail::morph3x3<true>(img);
    return img;
}

inline BinaryImage dilate(BinaryImage img, int iterations = 1) {
    for (int i = 0; i < iterations; ++i) img = detail::morph3x3<false>(img);
    return img;
}

inline BinaryImage open(const BinaryImage& img, int iterations = 1) {
    return dilate(erode(img, iterations), iterations);
}

struct Component {
    int center_x = 0;
    int center_y = 0;
    int area = 0;
};

/// 8-connected components; centroids rounded to nearest pixel; small
/// components dropped; sorted by (center_y, center_x).
inline std::vector<Component> components_centroids(const BinaryImage& img, const RoiConfig& cfg) {
    std::vector<int> label(img.data.size(), -1);
    std::vector<Component> comps;
    std::deque<std::pair<int, int>> queue;
    for (int sy = 0; sy < img.height; ++sy)
        for (int sx = 0; sx < img.width; ++sx) {
            const std::size_t sidx = static_cast<std::size_t>(sy) * img.width + sx;
            if (!img.data[sidx] || label[sidx] >= 0) continue;
            const int id = static_cast<int>(comps.size());
            label[sidx] = id;
            queue.emplace_back(sx, sy);
            std::int64_t sumx = 0, sumy = 0, area = 0;
            while (!queue.empty()) {
                auto [x, y] = queue.front();
                queue.pop_front();
                sumx += x;
                sumy += y;
                ++area;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= img.width || ny >= img.height) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * img.width + nx;
                        if (img.data[ni] && label[ni] < 0) {
                            label[ni] = id;
                            queue.emplace_back(nx, ny);
                        }
                    }
            }
            Component c;
            c.center_x = static_cast<int>(std::lround(static_cast<double>(sumx) / area));
            c.center_y = static_cast<int>(std::lround(static_cast<double>(sumy) / area));
            c.area = static_cast<int>(area);
            comps.push_back(c);
        }
    std::erase_if(comps, [&](const Component& c) { return c.area < cfg.min_component_area; });
    std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
        return std::tie(a.center_y, a.center_x) < std::tie(b.center_y, b.center_x);
    });
    return comps;
}

/// Centered square box, clamped fully inside a width x height image.
inline Box clamp_box(int cx, int cy, int size, int img_w, int img_h) {
    Box b;
    b.w = std::min(size, img_w);
    b.h = std::min(size, img_h);
    b.x = std::clamp(cx - size / 2, 0, img_w - b.w);
    b.y = std::clamp(cy - size / 2, 0, img_h - b.h);
    return b;
}

/// Full proposal chain: saturation -> multi-scale LoG -> Otsu -> opening ->
/// dilation -> centroids -> merged centroids -> multi-size boxes.
inline std::vector<RoiCandidate> propose_rois(const RgbImage& img, const RoiConfig& cfg) {
    cfg.validate();
    const GrayImage sat = rgb_to_saturation(img);
    const GrayImage resp = multiscale_log(sat, cfg);
    const OtsuResult otsu = otsu_threshold(resp);
    if (otsu.degenerate) return {};
    BinaryImage mask = open(otsu.mask, cfg.opening_iterations);
    mask = dilate(mask, cfg.dilation_iterations);
    std::vector<Component> comps = components_centroids(mask, cfg);

    // Merge near-duplicate centroids, keeping the larger-area one.
    std::stable_sort(comps.begin(), comps.end(),
                     [](const Component& a, const Component& b) { return a.area > b.area; });
    std::vector<Component> kept;
    for (const Component& c : comps) {
        bool merged = false;
        for (const Component& k : kept) {
            const double dx = c.center_x - k.center_x, dy = c.center_y - k.center_y;
            if (std::sqrt(dx * dx + dy * dy) < cfg.merge_radius) {
                merged = true;
                break;
            }
        }
        if (!merged) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end(), [](const Component& a, const Component& b) {
        return std::tie(a.center_y, a.center_x) < std::tie(b.center_y, b.center_x);
    });

    std::vector<RoiCandidate> out;
    for (const Component& c : kept)
        for (int s : cfg.box_sizes) {
            RoiCandidate r;
            r.center_x = c.center_x;
            r.center_y = c.center_y;
            r.box = clamp_box(c.center_x, c.center_y, s, img.width, img.height);
            out.push_back(r);
        }
    return out;
}

}  // namespace plasmo

#endif
