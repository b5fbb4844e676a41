#ifndef PLASMO_TENSOR_HPP
#define PLASMO_TENSOR_HPP

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "plasmo/image.hpp"

namespace plasmo {

/// Dense row-major tensor. T is float in production, double in gradient tests.
template <typename T>
struct Tensor {
    std::vector<int> shape;
    std::vector<T> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s, T fill = T(0)) : shape(std::move(s)) {
        data.assign(size_of(shape), fill);
    }

    static std::size_t size_of(const std::vector<int>& s) {
        std::size_t n = 1;
        for (int d : s) {
            if (d < 1) throw std::invalid_argument("Tensor: dimensions must be >= 1");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }

    std::size_t size() const { return data.size(); }

    // (H,W,C) indexing for activation maps
    T& at3(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * shape[1] + x) * shape[2] + c];
    }
    T at3(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * shape[1] + x) * shape[2] + c];
    }
};

/// Scale bytes to [0,1]: out = raw / 255, shape (h, w, 3).
template <typename T = float>
Tensor<T> normalize_patch(const RgbImage& img) {
    Tensor<T> t({img.height, img.width, 3});
    for (std::size_t i = 0; i < img.data.size(); ++i)
        t.data[i] = static_cast<T>(img.data[i]) / T(255);
    return t;
}

}  // namespace plasmo

#endif
