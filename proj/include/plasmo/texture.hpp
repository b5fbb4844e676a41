#ifndef PLASMO_TEXTURE_HPP
#define PLASMO_TEXTURE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "plasmo/image.hpp"
#include "plasmo/roi.hpp"

namespace plasmo {

/// Symmetric, normalized gray-level co-occurrence matrix.
struct Glcm {
    int levels = 256;
    std::vector<double> matrix;  // levels x levels, row-major

    double at(int i, int j) const { return matrix[static_cast<std::size_t>(i) * levels + j]; }
    double& at(int i, int j) { return matrix[static_cast<std::size_t>(i) * levels + j]; }
};

struct TextureFeatures {
    double contrast = 0;
    double dissimilarity = 0;
    double homogeneity = 0;
    double energy = 0;
    double correlation = 0;
};

/// Co-occurrence counts at the given offset over an 8-bit gray patch,
/// symmetrized (transpose added) and normalized to sum 1.
inline Glcm compute_glcm(const GrayImage& patch, int distance = 1, double angle = 0.0,
                         int levels = 256) {
    const int dx = static_cast<int>(std::lround(distance * std::cos(angle)));
    const int dy = static_cast<int>(std::lround(-distance * std::sin(angle)));
    if (dx == 0 && dy == 0) throw std::invalid_argument("compute_glcm: zero offset");
    Glcm g;
    g.levels = levels;
    g.matrix.assign(static_cast<std::size_t>(levels) * levels, 0.0);
    long pairs = 0;
    for (int y = 0; y < patch.height; ++y)
        for (int x = 0; x < patch.width; ++x) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= patch.width || ny >= patch.height) continue;
            const int a = static_cast<int>(patch.at(x, y));
            const int b = static_cast<int>(patch.at(nx, ny));
            if (a < 0 || a >= levels || b < 0 || b >= levels)
                throw std::invalid_argument("compute_glcm: gray level out of range");
            g.at(a, b) += 1.0;
            g.at(b, a) += 1.0;  // symmetrize
            pairs += 2;
        }
    if (pairs == 0) throw std::invalid_argument("compute_glcm: patch too small for offset");
    for (double& v : g.matrix) v /= pairs;
    return g;
}

/// The five Haralick statistics used by the pipeline.
inline TextureFeatures features(const Glcm& g) {
    TextureFeatures f;
    double mu_i = 0, mu_j = 0;
    for (int i = 0; i < g.levels; ++i)
        for (int j = 0; j < g.levels; ++j) {
            const double p = g.at(i, j);
            if (p == 0) continue;
            const double d = i - j;
            f.contrast += p * d * d;
            f.dissimilarity += p * std::abs(d);
            f.homogeneity += p / (1.0 + d * d);
            f.energy += p * p;
            mu_i += p * i;
            mu_j += p * j;
        }
    f.energy = std::sqrt(f.energy);
    double var_i = 0, var_j = 0, cov = 0;
    for (int i = 0; i < g.levels; ++i)
        for (int j = 0; j < g.levels; ++j) {
            const double p = g.at(i, j);
            if (p == 0) continue;
            var_i += p * (i - mu_i) * (i - mu_i);
            var_j += p * (j - mu_j) * (j - mu_j);
            cov += p * (i - mu_i) * (j - mu_j);
        }
    const double denom = std::sqrt(var_i) * std::sqrt(var_j);
    f.correlation = denom > 0 ? cov / denom : 1.0;
    return f;
}

/// GLCM features of a box crop: luminance grayscale, distance 1, angle 0.
inline TextureFeatures roi_features(const RgbImage& img, const Box& box) {
    const RgbImage patch = crop(img, box.x, box.y, box.w, box.h);
    return features(compute_glcm(luminance(patch)));
}

}  // namespace plasmo

#endif
