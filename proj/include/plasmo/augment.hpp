#ifndef PLASMO_AUGMENT_HPP
#define PLASMO_AUGMENT_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "plasmo/image.hpp"
#include "plasmo/roi.hpp"

namespace plasmo {

struct AugmentConfig {
    double max_translate_frac = 0.10;
    double max_rotate_deg = 20.0;
    double zoom_min = 0.9;
    double zoom_max = 1.1;
    int target_per_class = 2000;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (zoom_min <= 0 || zoom_max < zoom_min)
            throw std::invalid_argument("AugmentConfig: bad zoom range");
        if (target_per_class < 1)
            throw std::invalid_argument("AugmentConfig: target_per_class must be >= 1");
    }
};

struct LabeledPatch {
    RgbImage image;
    int label = 0;  // 0 = non-Plasmodium, 1 = Plasmodium
};

/// Translate/rotate/zoom about the image center, bilinear sampling,
/// reflect fill outside the source.
inline RgbImage affine_transform(const RgbImage& img, double tx, double ty, double angle_rad,
                                 double zoom) {
    RgbImage out(img.width, img.height);
    const double cx = (img.width - 1) / 2.0, cy = (img.height - 1) / 2.0;
    const double cosa = std::cos(angle_rad), sina = std::sin(angle_rad);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            // inverse map: undo translation, then rotation, then zoom
            const double dx = x - cx - tx, dy = y - cy - ty;
            const double rx = (cosa * dx + sina * dy) / zoom;
            const double ry = (-sina * dx + cosa * dy) / zoom;
            const double sx = cx + rx, sy = cy + ry;
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const double wx = sx - x0, wy = sy - y0;
            for (int c = 0; c < 3; ++c) {
                auto sample = [&](int xi, int yi) -> double {
                    return img.px(detail::reflect_index(xi, img.width),
                                  detail::reflect_index(yi, img.height))[c];
                };
                const double v = (1 - wy) * ((1 - wx) * sample(x0, y0) + wx * sample(x0 + 1, y0)) +
                                 wy * ((1 - wx) * sample(x0, y0 + 1) + wx * sample(x0 + 1, y0 + 1));
                out.px(x, y)[c] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    return out;
}

/// Class-balanced augmentation: exactly target_per_class outputs per class,
/// each a random translate/rotate/zoom of a source patch. Deterministic
/// given rng_seed.
inline std::vector<LabeledPatch> augment(const std::vector<LabeledPatch>& in,
                                         const AugmentConfig& cfg) {
    cfg.validate();
    if (in.empty()) throw std::invalid_argument("augment: empty input set");
    std::vector<const LabeledPatch*> by_class[2];
    for (const LabeledPatch& p : in) {
        if (p.label != 0 && p.label != 1) throw std::invalid_argument("augment: label must be 0/1");
        by_class[p.label].push_back(&p);
    }
    if (by_class[0].empty() || by_class[1].empty())
        throw std::invalid_argument("augment: both classes must be non-empty");

    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<LabeledPatch> out;
    out.reserve(2 * static_cast<std::size_t>(cfg.target_per_class));
    for (int cls = 0; cls < 2; ++cls) {
        const auto& src = by_class[cls];
        for (int i = 0; i < cfg.target_per_class; ++i) {
            const RgbImage& base = src[i % src.size()]->image;
            const double tx = (2 * unif(rng) - 1) * cfg.max_translate_frac * base.width;
            const double ty = (2 * unif(rng) - 1) * cfg.max_translate_frac * base.height;
            const double ang = (2 * unif(rng) - 1) * cfg.max_rotate_deg * M_PI / 180.0;
            const double zoom = cfg.zoom_min + unif(rng) * (cfg.zoom_max - cfg.zoom_min);
            out.push_back({affine_transform(base, tx, ty, ang, zoom), cls});
        }
    }
    return out;
}

}  // namespace plasmo

#endif
