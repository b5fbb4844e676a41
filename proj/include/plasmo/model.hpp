#ifndef PLASMO_MODEL_HPP
#define PLASMO_MODEL_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "plasmo/layers.hpp"
#include "plasmo/tensor.hpp"

namespace plasmo {

struct CorruptModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Architecture hyperparameters. Defaults give the production
/// 100x100x3 -> conv(16@5x5) -> pool -> conv(32@5x5) -> pool -> fc(100) -> fc(2) net.
struct ModelConfig {
    int input_size = 100;
    int conv1_filters = 16;
    int conv2_filters = 32;
    int kernel = 5;
    int fc1_units = 100;
    int classes = 2;

    int conv1_out() const { return input_size - kernel + 1; }
    int pool1_out() const { return conv1_out() / 2; }
    int conv2_out() const { return pool1_out() - kernel + 1; }
    int pool2_out() const { return conv2_out() / 2; }
    int flatten_len() const { return pool2_out() * pool2_out() * conv2_filters; }

    void validate() const {
        if (conv1_out() < 1 || pool1_out() < 1 || conv2_out() < 1 || pool2_out() < 1)
            throw std::invalid_argument("ModelConfig: input too small for the layer stack");
    }
};

template <typename T>
struct ModelParams {
    ModelConfig cfg;
    Tensor<T> conv1_w, conv2_w, fc1_w, fc2_w;
    std::vector<T> conv1_b, conv2_b, fc1_b, fc2_b;

    static constexpr std::uint32_t kFormatVersion = 1;

    ModelParams() = default;
    explicit ModelParams(const ModelConfig& c) : cfg(c) {
        cfg.validate();
        conv1_w = Tensor<T>({c.conv1_filters, c.kernel, c.kernel, 3});
        conv2_w = Tensor<T>({c.conv2_filters, c.kernel, c.kernel, c.conv1_filters});
        fc1_w = Tensor<T>({c.fc1_units, c.flatten_len()});
        fc2_w = Tensor<T>({c.classes, c.fc1_units});
        conv1_b.assign(c.conv1_filters, T(0));
        conv2_b.assign(c.conv2_filters, T(0));
        fc1_b.assign(c.fc1_units, T(0));
        fc2_b.assign(c.classes, T(0));
    }

    std::size_t parameter_count() const {
        return conv1_w.size() + conv2_w.size() + fc1_w.size() + fc2_w.size() +
               conv1_b.size() + conv2_b.size() + fc1_b.size() + fc2_b.size();
    }

    template <typename Fn>
    void for_each_tensor(Fn&& fn) {
        fn("conv1_w", conv1_w.data);
        fn("conv1_b", conv1_b);
        fn("conv2_w", conv2_w.data);
        fn("conv2_b", conv2_b);
        fn("fc1_w", fc1_w.data);
        fn("fc1_b", fc1_b);
        fn("fc2_w", fc2_w.data);
        fn("fc2_b", fc2_b);
    }
};

/// Seeded He-normal initialization for all weight tensors, zero biases.
template <typename T>
ModelParams<T> init_params(const ModelConfig& cfg, std::uint64_t seed) {
    ModelParams<T> p(cfg);
    std::mt19937_64 rng(seed);
    auto he_fill = [&](Tensor<T>& w, int fan_in) {
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
        for (T& v : w.data) v = static_cast<T>(dist(rng));
    };
    he_fill(p.conv1_w, cfg.kernel * cfg.kernel * 3);
    he_fill(p.conv2_w, cfg.kernel * cfg.kernel * cfg.conv1_filters);
    he_fill(p.fc1_w, cfg.flatten_len());
    he_fill(p.fc2_w, cfg.fc1_units);
    return p;
}

/// Per-layer values retained by the forward pass, both for backprop and for
/// activation-map export.
template <typename T>
struct Activations {
    Tensor<T> input;
    Tensor<T> conv1_pre, conv1_act;  // pre-ReLU and post-ReLU
    PoolResult<T> pool1;
    Tensor<T> conv2_pre, conv2_act;
    PoolResult<T> pool2;
    DropoutResult<T> drop1;
    std::vector<T> fc1_pre, fc1_act;
    DropoutResult<T> drop2;
    std::vector<T> logits;
    std::vector<T> probs;
};

/// conv1 -> relu -> pool -> conv2 -> relu -> pool -> flatten -> dropout ->
/// fc1 -> relu -> dropout -> fc2 -> softmax.
template <typename T>
Activations<T> forward(const ModelParams<T>& p, const Tensor<T>& input, bool training,
                       double dropout_p, std::mt19937_64& rng) {
    if (input.shape.size() != 3 || input.shape[0] != p.cfg.input_size ||
        input.shape[1] != p.cfg.input_size || input.shape[2] != 3)
        throw std::invalid_argument("forward: input must be (input_size, input_size, 3)");
    Activations<T> a;
    a.input = input;
    a.conv1_pre = conv2d_forward(input, p.conv1_w, p.conv1_b);
    a.conv1_act = relu(a.conv1_pre);
    a.pool1 = maxpool2x2_forward(a.conv1_act);
    a.conv2_pre = conv2d_forward(a.pool1.out, p.conv2_w, p.conv2_b);
    a.conv2_act = relu(a.conv2_pre);
    a.pool2 = maxpool2x2_forward(a.conv2_act);
    std::vector<T> flat(a.pool2.out.data.begin(), a.pool2.out.data.end());
    a.drop1 = dropout_forward(flat, dropout_p, training, rng);
    a.fc1_pre = dense_forward(a.drop1.out, p.fc1_w, p.fc1_b);
    a.fc1_act = a.fc1_pre;
    for (T& v : a.fc1_act) v = std::max(v, T(0));
    a.drop2 = dropout_forward(a.fc1_act, dropout_p, training, rng);
    a.logits = dense_forward(a.drop2.out, p.fc2_w, p.fc2_b);
    a.probs = softmax(a.logits);
    return a;
}

/// Inference-only helper.
template <typename T>
std::vector<T> predict(const ModelParams<T>& p, const Tensor<T>& input) {
    std::mt19937_64 rng(0);
    return forward(p, input, false, 0.0, rng).probs;
}

namespace detail {

inline void write_u32(std::ostream& os, std::uint32_t v) {
    std::array<unsigned char, 4> b{static_cast<unsigned char>(v & 0xff),
                                   static_cast<unsigned char>((v >> 8) & 0xff),
                                   static_cast<unsigned char>((v >> 16) & 0xff),
                                   static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b.data()), 4);
}

inline std::uint32_t read_u32(std::istream& is) {
    std::array<unsigned char, 4> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), 4))
        throw CorruptModelError("model file truncated");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void write_f32(std::ostream& os, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    write_u32(os, bits);
}

inline float read_f32(std::istream& is) {
    const std::uint32_t bits = read_u32(is);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

constexpr char kModelMagic[8] = {'P', 'L', 'S', 'M', 'N', 'E', 'T', '\0'};

}  // namespace detail

/// Binary weight file: magic, version, architecture, shape table, float32 LE data.
template <typename T>
void save_params(const ModelParams<T>& p, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_params: cannot open " + path);
    os.write(detail::kModelMagic, 8);
    detail::write_u32(os, ModelParams<T>::kFormatVersion);
    for (int v : {p.cfg.input_size, p.cfg.conv1_filters, p.cfg.conv2_filters, p.cfg.kernel,
                  p.cfg.fc1_units, p.cfg.classes})
        detail::write_u32(os, static_cast<std::uint32_t>(v));
    auto& mp = const_cast<ModelParams<T>&>(p);
    mp.for_each_tensor([&](const char*, const std::vector<T>& data) {
        detail::write_u32(os, static_cast<std::uint32_t>(data.size()));
        for (T v : data) detail::write_f32(os, static_cast<float>(v));
    });
    if (!os) throw std::runtime_error("save_params: write failed for " + path);
}

template <typename T>
ModelParams<T> load_params(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CorruptModelError("load_params: cannot open " + path);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, detail::kModelMagic, 8) != 0)
        throw CorruptModelError("load_params: bad magic in " + path);
    const std::uint32_t version = detail::read_u32(is);
    if (version != ModelParams<T>::kFormatVersion)
        throw CorruptModelError("load_params: version mismatch, expected " +
                                std::to_string(ModelParams<T>::kFormatVersion) + ", found " +
                                std::to_string(version));
    ModelConfig cfg;
    cfg.input_size = static_cast<int>(detail::read_u32(is));
    cfg.conv1_filters = static_cast<int>(detail::read_u32(is));
    cfg.conv2_filters = static_cast<int>(detail::read_u32(is));
    cfg.kernel = static_cast<int>(detail::read_u32(is));
    cfg.fc1_units = static_cast<int>(detail::read_u32(is));
    cfg.classes = static_cast<int>(detail::read_u32(is));
    cfg.validate();
    ModelParams<T> p(cfg);
    p.for_each_tensor([&](const char* name, std::vector<T>& data) {
        const std::uint32_t n = detail::read_u32(is);
        if (n != data.size())
            throw CorruptModelError(std::string("load_params: shape mismatch for ") + name);
        for (std::uint32_t i = 0; i < n; ++i) data[i] = static_cast<T>(detail::read_f32(is));
    });
    return p;
}

}  // namespace plasmo

#endif
