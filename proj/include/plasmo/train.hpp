#ifndef PLASMO_TRAIN_HPP
#define PLASMO_TRAIN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "plasmo/augment.hpp"
#include "plasmo/model.hpp"
#include "plasmo/tensor.hpp"

namespace plasmo {

struct TrainingAbortError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 32;
    int epochs = 25;
    double dropout_p = 0.5;
    std::uint64_t rng_seed = 0;
    int validation_count = 100;

    void validate() const {
        if (dropout_p < 0 || dropout_p >= 1)
            throw std::invalid_argument("TrainConfig: dropout_p must be in [0,1)");
        if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    }
};

/// Gradient accumulator with the same layout as ModelParams.
template <typename T>
struct ParamGrads {
    Tensor<T> conv1_w, conv2_w, fc1_w, fc2_w;
    std::vector<T> conv1_b, conv2_b, fc1_b, fc2_b;

    explicit ParamGrads(const ModelConfig& c)
        : conv1_w({c.conv1_filters, c.kernel, c.kernel, 3}),
          conv2_w({c.conv2_filters, c.kernel, c.kernel, c.conv1_filters}),
          fc1_w({c.fc1_units, c.flatten_len()}),
          fc2_w({c.classes, c.fc1_units}),
          conv1_b(c.conv1_filters, T(0)),
          conv2_b(c.conv2_filters, T(0)),
          fc1_b(c.fc1_units, T(0)),
          fc2_b(c.classes, T(0)) {}

    template <typename Fn>
    void for_each(Fn&& fn) {
        fn(conv1_w.data);
        fn(conv1_b);
        fn(conv2_w.data);
        fn(conv2_b);
        fn(fc1_w.data);
        fn(fc1_b);
        fn(fc2_w.data);
        fn(fc2_b);
    }
};

/// Backprop through the whole net for one sample; accumulates into grads.
/// Returns the sample's cross-entropy loss.
template <typename T>
T backprop_sample(const ModelParams<T>& p, const Activations<T>& a, int label, double dropout_p,
                  ParamGrads<T>& grads) {
    const int classes = p.cfg.classes;
    if (label < 0 || label >= classes) throw std::invalid_argument("backprop_sample: bad label");
    const T loss = -std::log(std::max(a.probs[label], std::numeric_limits<T>::min()));

    // softmax + cross-entropy: dL/dlogits = probs - onehot
    std::vector<T> dlogits = a.probs;
    dlogits[label] -= T(1);

    DenseGrads<T> gfc2 = dense_backward(a.drop2.out, p.fc2_w, dlogits);
    std::vector<T> dfc1_act = dropout_backward(gfc2.input, a.drop2.mask, dropout_p);
    for (std::size_t i = 0; i < dfc1_act.size(); ++i)
        if (a.fc1_pre[i] <= T(0)) dfc1_act[i] = T(0);
    DenseGrads<T> gfc1 = dense_backward(a.drop1.out, p.fc1_w, dfc1_act);
    std::vector<T> dflat = dropout_backward(gfc1.input, a.drop1.mask, dropout_p);

    Tensor<T> dpool2(a.pool2.out.shape);
    dpool2.data.assign(dflat.begin(), dflat.end());
    Tensor<T> dconv2_act = maxpool2x2_backward(dpool2, a.pool2.argmax, a.conv2_act.shape);
    Tensor<T> dconv2_pre = relu_backward(a.conv2_pre, dconv2_act);
    ConvGrads<T> gconv2 = conv2d_backward(a.pool1.out, p.conv2_w, dconv2_pre);
    Tensor<T> dconv1_act = maxpool2x2_backward(gconv2.input, a.pool1.argmax, a.conv1_act.shape);
    Tensor<T> dconv1_pre = relu_backward(a.conv1_pre, dconv1_act);
    ConvGrads<T> gconv1 = conv2d_backward(a.input, p.conv1_w, dconv1_pre);

    auto add = [](std::vector<T>& dst, const std::vector<T>& src) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    };
    add(grads.conv1_w.data, gconv1.kernels.data);
    add(grads.conv1_b, gconv1.bias);
    add(grads.conv2_w.data, gconv2.kernels.data);
    add(grads.conv2_b, gconv2.bias);
    add(grads.fc1_w.data, gfc1.weights.data);
    add(grads.fc1_b, gfc1.bias);
    add(grads.fc2_w.data, gfc2.weights.data);
    add(grads.fc2_b, gfc2.bias);
    return loss;
}

/// Adam state (beta1=0.9, beta2=0.999, eps=1e-8).
template <typename T>
struct Adam {
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long step_count = 0;
    std::vector<std::vector<double>> m, v;

    explicit Adam(ModelParams<T>& p) {
        p.for_each_tensor([&](const char*, std::vector<T>& data) {
            m.emplace_back(data.size(), 0.0);
            v.emplace_back(data.size(), 0.0);
        });
    }

    void step(ModelParams<T>& p, ParamGrads<T>& g, double lr) {
        ++step_count;
        const double bc1 = 1.0 - std::pow(beta1, step_count);
        const double bc2 = 1.0 - std::pow(beta2, step_count);
        std::size_t slot = 0;
        std::vector<std::vector<T>*> gvecs;
        g.for_each([&](std::vector<T>& gv) { gvecs.push_back(&gv); });
        p.for_each_tensor([&](const char*, std::vector<T>& data) {
            std::vector<double>& ms = m[slot];
            std::vector<double>& vs = v[slot];
            const std::vector<T>& gv = *gvecs[slot];
            for (std::size_t i = 0; i < data.size(); ++i) {
                const double gi = gv[i];
                ms[i] = beta1 * ms[i] + (1 - beta1) * gi;
                vs[i] = beta2 * vs[i] + (1 - beta2) * gi * gi;
                data[i] -= static_cast<T>(lr * (ms[i] / bc1) / (std::sqrt(vs[i] / bc2) + eps));
            }
            ++slot;
        });
    }
};

struct Sample {
    int label;
};

/// One minibatch: forward + backprop + Adam update. Returns mean batch loss.
template <typename T>
T backward_and_step(ModelParams<T>& p, const std::vector<Tensor<T>>& inputs,
                    const std::vector<int>& labels, const TrainConfig& cfg, Adam<T>& opt,
                    std::mt19937_64& dropout_rng) {
    if (inputs.empty() || inputs.size() != labels.size())
        throw std::invalid_argument("backward_and_step: empty or mismatched batch");
    ParamGrads<T> grads(p.cfg);
    T loss_sum = 0;
    for (std::size_t s = 0; s < inputs.size(); ++s) {
        Activations<T> a = forward(p, inputs[s], true, cfg.dropout_p, dropout_rng);
        loss_sum += backprop_sample(p, a, labels[s], cfg.dropout_p, grads);
    }
    const T inv = T(1) / static_cast<T>(inputs.size());
    grads.for_each([&](std::vector<T>& g) {
        for (T& v : g) v *= inv;
    });
    const T mean_loss = loss_sum * inv;
    if (!std::isfinite(static_cast<double>(mean_loss)))
        throw TrainingAbortError("backward_and_step: non-finite loss, aborting training");
    opt.step(p, grads, cfg.learning_rate);
    return mean_loss;
}

struct EpochStats {
    int epoch;
    double train_acc;
    double val_acc;
    double loss;
};

template <typename T>
double accuracy(const ModelParams<T>& p, const std::vector<Tensor<T>>& inputs,
                const std::vector<int>& labels) {
    if (inputs.empty()) return 0.0;
    int correct = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const std::vector<T> probs = predict(p, inputs[i]);
        const int pred = static_cast<int>(
            std::max_element(probs.begin(), probs.end()) - probs.begin());
        if (pred == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / inputs.size();
}

struct TrainResult {
    std::vector<EpochStats> log;
};

/// Full training protocol: augment, hold out validation_count random augmented
/// patches, run epochs of minibatch Adam, return the best-validation params.
template <typename T>
TrainResult train(ModelParams<T>& params, const std::vector<LabeledPatch>& dataset,
                  const TrainConfig& tcfg, const AugmentConfig& acfg) {
    tcfg.validate();
    std::vector<LabeledPatch> aug = augment(dataset, acfg);

    std::mt19937_64 rng(tcfg.rng_seed);
    std::vector<std::size_t> order(aug.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    const std::size_t n_val = std::min<std::size_t>(tcfg.validation_count, aug.size() / 2);
    std::vector<Tensor<T>> val_x, train_x;
    std::vector<int> val_y, train_y;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const LabeledPatch& s = aug[order[i]];
        Tensor<T> t = normalize_patch<T>(s.image);
        if (i < n_val) {
            val_x.push_back(std::move(t));
            val_y.push_back(s.label);
        } else {
            train_x.push_back(std::move(t));
            train_y.push_back(s.label);
        }
    }

    TrainResult res;
    if (tcfg.epochs <= 0) return res;

    Adam<T> opt(params);
    std::mt19937_64 dropout_rng(tcfg.rng_seed ^ 0x9e3779b97f4a7c15ull);
    ModelParams<T> best = params;
    double best_val = -1.0;
    std::vector<std::size_t> idx(train_x.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (int epoch = 1; epoch <= tcfg.epochs; ++epoch) {
        std::shuffle(idx.begin(), idx.end(), rng);
        double loss_sum = 0;
        int batches = 0;
        for (std::size_t start = 0; start < idx.size(); start += tcfg.batch_size) {
            const std::size_t end = std::min(idx.size(), start + tcfg.batch_size);
            std::vector<Tensor<T>> bx;
            std::vector<int> by;
            for (std::size_t i = start; i < end; ++i) {
                bx.push_back(train_x[idx[i]]);
                by.push_back(train_y[idx[i]]);
            }
            loss_sum += static_cast<double>(backward_and_step(params, bx, by, tcfg, opt, dropout_rng));
            ++batches;
        }
        EpochStats st;
        st.epoch = epoch;
        st.loss = batches ? loss_sum / batches : 0.0;
        st.train_acc = accuracy(params, train_x, train_y);
        st.val_acc = accuracy(params, val_x, val_y);
        res.log.push_back(st);
        if (st.val_acc > best_val) {
            best_val = st.val_acc;
            best = params;
        }
    }
    params = best;
    return res;
}

}  // namespace plasmo

#endif
