#ifndef PLASMO_CONFIG_HPP
#define PLASMO_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "plasmo/augment.hpp"
#include "plasmo/cluster.hpp"
#include "plasmo/detect.hpp"
#include "plasmo/roi.hpp"
#include "plasmo/train.hpp"

namespace plasmo {

/// One bag of knobs for every pipeline stage. Loadable from a flat
/// key = value file; CLI flags override file values.
struct RunConfig {
    RoiConfig roi;
    TrainConfig train;
    AugmentConfig augment;
    FilterConfig filter;
    double threshold = 0.5;

    void set_seed(std::uint64_t seed) {
        train.rng_seed = seed;
        augment.rng_seed = seed;
        filter.rng_seed = seed;
    }

    void validate() const {
        roi.validate();
        train.validate();
        augment.validate();
        filter.validate();
        if (threshold < 0 || threshold > 1)
            throw std::invalid_argument("RunConfig: threshold must be in [0,1]");
    }
};

namespace detail {

template <typename T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::stringstream ts(tok);
        T v;
        if (!(ts >> v)) throw std::invalid_argument("config: bad list element '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("config: empty list");
    return out;
}

}  // namespace detail

/// Apply one key/value pair; unknown keys are rejected.
inline void config_set(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto as_d = [&] { return std::stod(value); };
    auto as_i = [&] { return std::stoi(value); };
    auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
    if (key == "sigmas")
        cfg.roi.sigmas = detail::parse_list<double>(value);
    else if (key == "box_sizes")
        cfg.roi.box_sizes = detail::parse_list<int>(value);
    else if (key == "min_component_area")
        cfg.roi.min_component_area = as_i();
    else if (key == "merge_radius")
        cfg.roi.merge_radius = as_d();
    else if (key == "opening_iterations")
        cfg.roi.opening_iterations = as_i();
    else if (key == "dilation_iterations")
        cfg.roi.dilation_iterations = as_i();
    else if (key == "learning_rate")
        cfg.train.learning_rate = as_d();
    else if (key == "batch_size")
        cfg.train.batch_size = as_i();
    else if (key == "epochs")
        cfg.train.epochs = as_i();
    else if (key == "dropout_p")
        cfg.train.dropout_p = as_d();
    else if (key == "validation_count")
        cfg.train.validation_count = as_i();
    else if (key == "seed")
        cfg.set_seed(as_u64());
    else if (key == "max_translate_frac")
        cfg.augment.max_translate_frac = as_d();
    else if (key == "max_rotate_deg")
        cfg.augment.max_rotate_deg = as_d();
    else if (key == "zoom_min")
        cfg.augment.zoom_min = as_d();
    else if (key == "zoom_max")
        cfg.augment.zoom_max = as_d();
    else if (key == "target_per_class")
        cfg.augment.target_per_class = as_i();
    else if (key == "silhouette_min")
        cfg.filter.silhouette_min = as_d();
    else if (key == "pair_distance_min")
        cfg.filter.pairwise_distance_min = as_d();
    else if (key == "k_candidates")
        cfg.filter.k_candidates = detail::parse_list<int>(value);
    else if (key == "threshold")
        cfg.threshold = as_d();
    else
        throw std::invalid_argument("config: unknown key '" + key + "'");
}

/// Flat "key = value" file; '#' starts a comment.
inline RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        config_set(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

}  // namespace plasmo

#endif
