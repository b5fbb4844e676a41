#ifndef PLASMO_LAYERS_HPP
#define PLASMO_LAYERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "plasmo/tensor.hpp"

namespace plasmo {

/// Valid-padding stride-1 convolution. in: (H,W,C), kernels: (F,k,k,C).
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& in, const Tensor<T>& kernels,
                         const std::vector<T>& bias) {
    if (in.shape.size() != 3 || kernels.shape.size() != 4)
        throw std::invalid_argument("conv2d_forward: rank mismatch");
    const int H = in.shape[0], W = in.shape[1], C = in.shape[2];
    const int F = kernels.shape[0], k = kernels.shape[1];
    if (kernels.shape[2] != k || kernels.shape[3] != C ||
        static_cast<int>(bias.size()) != F || H < k || W < k)
        throw std::invalid_argument("conv2d_forward: shape mismatch");
    const int OH = H - k + 1, OW = W - k + 1;
    Tensor<T> out({OH, OW, F});
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int y = 0; y < OH; ++y)
        for (int x = 0; x < OW; ++x)
            for (int f = 0; f < F; ++f) {
                T acc = bias[f];
                const T* kp = kernels.data.data() + static_cast<std::size_t>(f) * k * k * C;
                for (int i = 0; i < k; ++i) {
                    const T* ip = in.data.data() +
                                  (static_cast<std::size_t>(y + i) * W + x) * C;
                    for (int jc = 0; jc < k * C; ++jc) acc += ip[jc] * kp[i * k * C + jc];
                }
                out.at3(y, x, f) = acc;
            }
    return out;
}

template <typename T>
struct ConvGrads {
    Tensor<T> input;
    Tensor<T> kernels;
    std::vector<T> bias;
};

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& in, const Tensor<T>& kernels,
                             const Tensor<T>& grad_out) {
    const int H = in.shape[0], W = in.shape[1], C = in.shape[2];
    const int F = kernels.shape[0], k = kernels.shape[1];
    const int OH = grad_out.shape[0], OW = grad_out.shape[1];
    ConvGrads<T> g;
    g.input = Tensor<T>({H, W, C});
    g.kernels = Tensor<T>({F, k, k, C});
    g.bias.assign(F, T(0));
    for (int y = 0; y < OH; ++y)
        for (int x = 0; x < OW; ++x)
            for (int f = 0; f < F; ++f) {
                const T go = grad_out.at3(y, x, f);
                g.bias[f] += go;
            }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int f = 0; f < F; ++f) {
        T* kg = g.kernels.data.data() + static_cast<std::size_t>(f) * k * k * C;
        for (int y = 0; y < OH; ++y)
            for (int x = 0; x < OW; ++x) {
                const T go = grad_out.at3(y, x, f);
                for (int i = 0; i < k; ++i) {
                    const T* ip = in.data.data() +
                                  (static_cast<std::size_t>(y + i) * W + x) * C;
                    for (int jc = 0; jc < k * C; ++jc) kg[i * k * C + jc] += ip[jc] * go;
                }
            }
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int yi = 0; yi < H; ++yi)
        for (int y = std::max(0, yi - k + 1); y <= std::min(OH - 1, yi); ++y) {
            const int i = yi - y;
            for (int x = 0; x < OW; ++x)
                for (int f = 0; f < F; ++f) {
                    const T go = grad_out.at3(y, x, f);
                    const T* kp = kernels.data.data() +
                                  ((static_cast<std::size_t>(f) * k + i) * k) * C;
                    T* gp = g.input.data.data() +
                            (static_cast<std::size_t>(yi) * W + x) * C;
                    for (int jc = 0; jc < k * C; ++jc) gp[jc] += kp[jc] * go;
                }
        }
    return g;
}

template <typename T>
struct PoolResult {
    Tensor<T> out;
    std::vector<std::uint32_t> argmax;  // flat input index per output element
};

/// 2x2 stride-2 max pool; odd trailing row/column truncated.
template <typename T>
PoolResult<T> maxpool2x2_forward(const Tensor<T>& in) {
    if (in.shape.size() != 3) throw std::invalid_argument("maxpool2x2: rank mismatch");
    const int H = in.shape[0], W = in.shape[1], C = in.shape[2];
    const int OH = H / 2, OW = W / 2;
    if (OH < 1 || OW < 1) throw std::invalid_argument("maxpool2x2: input too small");
    PoolResult<T> res;
    res.out = Tensor<T>({OH, OW, C});
    res.argmax.resize(res.out.size());
    for (int y = 0; y < OH; ++y)
        for (int x = 0; x < OW; ++x)
            for (int c = 0; c < C; ++c) {
                T best = in.at3(2 * y, 2 * x, c);
                std::uint32_t bi =
                    static_cast<std::uint32_t>((static_cast<std::size_t>(2 * y) * W + 2 * x) * C + c);
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        const T v = in.at3(2 * y + dy, 2 * x + dx, c);
                        if (v > best) {
                            best = v;
                            bi = static_cast<std::uint32_t>(
                                (static_cast<std::size_t>(2 * y + dy) * W + 2 * x + dx) * C + c);
                        }
                    }
                const std::size_t oi = (static_cast<std::size_t>(y) * OW + x) * C + c;
                res.out.data[oi] = best;
                res.argmax[oi] = bi;
            }
    return res;
}

template <typename T>
Tensor<T> maxpool2x2_backward(const Tensor<T>& grad_out, const std::vector<std::uint32_t>& argmax,
                              const std::vector<int>& in_shape) {
    Tensor<T> gin(in_shape);
    for (std::size_t i = 0; i < grad_out.size(); ++i) gin.data[argmax[i]] += grad_out.data[i];
    return gin;
}

template <typename T>
Tensor<T> relu(const Tensor<T>& in) {
    Tensor<T> out = in;
    for (T& v : out.data) v = std::max(v, T(0));
    return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& pre, const Tensor<T>& grad_out) {
    Tensor<T> gin = grad_out;
    for (std::size_t i = 0; i < gin.size(); ++i)
        if (pre.data[i] <= T(0)) gin.data[i] = T(0);
    return gin;
}

/// y = Wx + b. weights: (out, in) row-major.
template <typename T>
std::vector<T> dense_forward(const std::vector<T>& in, const Tensor<T>& weights,
                             const std::vector<T>& bias) {
    const int O = weights.shape[0], I = weights.shape[1];
    if (static_cast<int>(in.size()) != I || static_cast<int>(bias.size()) != O)
        throw std::invalid_argument("dense_forward: shape mismatch");
    std::vector<T> out(O);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int o = 0; o < O; ++o) {
        T acc = bias[o];
        const T* wp = weights.data.data() + static_cast<std::size_t>(o) * I;
        for (int i = 0; i < I; ++i) acc += wp[i] * in[i];
        out[o] = acc;
    }
    return out;
}

template <typename T>
struct DenseGrads {
    std::vector<T> input;
    Tensor<T> weights;
    std::vector<T> bias;
};

template <typename T>
DenseGrads<T> dense_backward(const std::vector<T>& in, const Tensor<T>& weights,
                             const std::vector<T>& grad_out) {
    const int O = weights.shape[0], I = weights.shape[1];
    DenseGrads<T> g;
    g.input.assign(I, T(0));
    g.weights = Tensor<T>({O, I});
    g.bias = grad_out;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int o = 0; o < O; ++o) {
        const T go = grad_out[o];
        T* wg = g.weights.data.data() + static_cast<std::size_t>(o) * I;
        for (int i = 0; i < I; ++i) wg[i] = in[i] * go;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < I; ++i) {
        T acc = 0;
        for (int o = 0; o < O; ++o) acc += weights.data[static_cast<std::size_t>(o) * I + i] * grad_out[o];
        g.input[i] = acc;
    }
    return g;
}

/// Max-subtracted softmax.
template <typename T>
std::vector<T> softmax(const std::vector<T>& logits) {
    if (logits.empty()) throw std::invalid_argument("softmax: empty input");
    const T mx = *std::max_element(logits.begin(), logits.end());
    std::vector<T> out(logits.size());
    T sum = 0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - mx);
        sum += out[i];
    }
    for (T& v : out) v /= sum;
    return out;
}

template <typename T>
struct DropoutResult {
    std::vector<T> out;
    std::vector<std::uint8_t> mask;  // 1 = kept
};

/// Inverted dropout: survivors scaled by 1/(1-p); identity at inference.
template <typename T>
DropoutResult<T> dropout_forward(const std::vector<T>& in, double p, bool training,
                                 std::mt19937_64& rng) {
    if (p < 0 || p >= 1) throw std::invalid_argument("dropout: p must be in [0,1)");
    DropoutResult<T> res;
    res.out = in;
    res.mask.assign(in.size(), 1);
    if (!training || p == 0) return res;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const T scale = T(1) / static_cast<T>(1.0 - p);
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (unif(rng) < p) {
            res.out[i] = T(0);
            res.mask[i] = 0;
        } else {
            res.out[i] *= scale;
        }
    }
    return res;
}

template <typename T>
std::vector<T> dropout_backward(const std::vector<T>& grad_out,
                                const std::vector<std::uint8_t>& mask, double p) {
    std::vector<T> gin = grad_out;
    const T scale = T(1) / static_cast<T>(1.0 - p);
    for (std::size_t i = 0; i < gin.size(); ++i) gin[i] = mask[i] ? gin[i] * scale : T(0);
    return gin;
}

}  // namespace plasmo

#endif
