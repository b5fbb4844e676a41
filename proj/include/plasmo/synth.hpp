#ifndef PLASMO_SYNTH_HPP
#define PLASMO_SYNTH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "plasmo/image.hpp"
#include "plasmo/roi.hpp"

namespace plasmo {

/// Stand-in data source for the unavailable smear dataset: pale-pink field,
/// low-saturation red-cell disks, textured magenta parasite blobs (ground
/// truth) and uniform-fill magenta distractors that only the texture stage
/// can reject.
struct SynthSmearConfig {
    int width = 1280;
    int height = 960;
    int n_parasites = 5;
    int n_distractors = 5;
    int n_rbcs = 60;
    std::uint64_t seed = 0;
};

struct SynthSmear {
    RgbImage image;
    std::vector<Box> boxes;  // parasite ground truth
};

namespace synth_detail {

constexpr std::array<int, 3> kBackground{248, 226, 228};
constexpr std::array<int, 3> kRbc{238, 198, 202};
constexpr std::array<int, 3> kParasite{165, 40, 140};
constexpr std::array<int, 3> kDistractor{200, 70, 160};

inline void fill_background(RgbImage& img) {
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c)
                img.px(x, y)[c] = static_cast<std::uint8_t>(kBackground[c]);
}

inline void draw_disk(RgbImage& img, double cx, double cy, double r,
                      const std::array<int, 3>& color) {
    const int x0 = std::max(0, static_cast<int>(cx - r - 1));
    const int x1 = std::min(img.width - 1, static_cast<int>(cx + r + 1));
    const int y0 = std::max(0, static_cast<int>(cy - r - 1));
    const int y1 = std::min(img.height - 1, static_cast<int>(cy + r + 1));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy > r * r) continue;
            for (int c = 0; c < 3; ++c)
                img.px(x, y)[c] = static_cast<std::uint8_t>(color[c]);
        }
}

/// Magenta blob whose per-pixel brightness is jittered by the given
/// amplitude (0 = uniform fill, 1 = strong texture).
inline void draw_textured_blob(RgbImage& img, double cx, double cy, double r, double amplitude,
                               std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int x0 = std::max(0, static_cast<int>(cx - r - 1));
    const int x1 = std::min(img.width - 1, static_cast<int>(cx + r + 1));
    const int y0 = std::max(0, static_cast<int>(cy - r - 1));
    const int y1 = std::min(img.height - 1, static_cast<int>(cy + r + 1));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy > r * r) continue;
            const double f = 1.0 + amplitude * (unif(rng) - 0.5) * 1.1;
            for (int c = 0; c < 3; ++c) {
                const double v = kParasite[c] * f;
                img.px(x, y)[c] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
}

}  // namespace synth_detail

/// Deterministic synthetic uncropped smear with parasite ground truth.
inline SynthSmear synth_smear(const SynthSmearConfig& cfg) {
    if (cfg.n_parasites < 0 || cfg.n_distractors < 0)
        throw std::invalid_argument("synth_smear: counts must be >= 0");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SynthSmear out;
    out.image = RgbImage(cfg.width, cfg.height);
    synth_detail::fill_background(out.image);

    // Non-overlapping object centers, kept away from borders.
    const double margin = 100.0, min_sep = 130.0;
    std::vector<std::pair<double, double>> centers;
    auto place = [&]() -> std::pair<double, double> {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            const double x = margin + unif(rng) * (cfg.width - 2 * margin);
            const double y = margin + unif(rng) * (cfg.height - 2 * margin);
            bool ok = true;
            for (auto [px, py] : centers) {
                const double dx = x - px, dy = y - py;
                if (dx * dx + dy * dy < min_sep * min_sep) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                centers.emplace_back(x, y);
                return {x, y};
            }
        }
        throw std::runtime_error("synth_smear: could not place all objects");
    };

    struct Obj {
        double x, y, r;
        bool parasite;
    };
    std::vector<Obj> objs;
    for (int i = 0; i < cfg.n_parasites; ++i) {
        auto [x, y] = place();
        objs.push_back({x, y, 11.0 + unif(rng) * 2.0, true});
    }
    for (int i = 0; i < cfg.n_distractors; ++i) {
        auto [x, y] = place();
        objs.push_back({x, y, 9.0 + unif(rng) * 4.0, false});
    }

    // Red cells first so parasites/distractors draw over them; keep their
    // centers clear of the annotated objects.
    for (int i = 0; i < cfg.n_rbcs; ++i) {
        const double r = 18.0 + unif(rng) * 10.0;
        const double x = unif(rng) * cfg.width;
        const double y = unif(rng) * cfg.height;
        bool clear = true;
        for (const Obj& o : objs) {
            const double dx = x - o.x, dy = y - o.y;
            if (std::sqrt(dx * dx + dy * dy) < r + 40.0) {
                clear = false;
                break;
            }
        }
        if (clear) synth_detail::draw_disk(out.image, x, y, r, synth_detail::kRbc);
    }

    for (const Obj& o : objs) {
        if (o.parasite) {
            synth_detail::draw_textured_blob(out.image, o.x, o.y, o.r, 1.0, rng);
            const int side = static_cast<int>(2 * o.r) + 12;
            out.boxes.push_back(clamp_box(static_cast<int>(std::lround(o.x)),
                                          static_cast<int>(std::lround(o.y)), side, cfg.width,
                                          cfg.height));
        } else {
            synth_detail::draw_disk(out.image, o.x, o.y, o.r, synth_detail::kDistractor);
        }
    }
    return out;
}

/// Training patch: 100x100 crop-like image. Parasite patches carry a magenta
/// blob of random texture amplitude (so the classifier learns the color cue,
/// not the texture); negatives are background/red-cell patches.
inline RgbImage synth_patch(bool parasite, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    static constexpr std::array<int, 3> sizes{40, 60, 80};
    const int s = sizes[static_cast<int>(unif(rng) * 3) % 3];
    RgbImage img(s, s);
    synth_detail::fill_background(img);
    const int n_rbc = static_cast<int>(unif(rng) * 3);
    for (int i = 0; i < n_rbc; ++i)
        synth_detail::draw_disk(img, unif(rng) * s, unif(rng) * s, 14 + unif(rng) * 10,
                                synth_detail::kRbc);
    if (parasite) {
        const double cx = s / 2.0 + (unif(rng) - 0.5) * s / 4.0;
        const double cy = s / 2.0 + (unif(rng) - 0.5) * s / 4.0;
        const double r = 8.0 + unif(rng) * 4.0;
        synth_detail::draw_textured_blob(img, cx, cy, r, unif(rng), rng);
    }
    return img;
}

}  // namespace plasmo

#endif
