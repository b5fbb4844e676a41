// Command-line front end: train, detect, eval, activations, synth.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "plasmo/config.hpp"
#include "plasmo/detect.hpp"
#include "plasmo/formats.hpp"
#include "plasmo/model.hpp"
#include "plasmo/png_io.hpp"
#include "plasmo/synth.hpp"
#include "plasmo/train.hpp"

namespace fs = std::filesystem;
using namespace plasmo;

namespace {

using Scalar = float;

struct CommonOpts {
    std::string config_path;
    std::int64_t seed = -1;
    std::string sigmas, box_sizes;
    double silhouette_min = -1, pair_distance_min = -1, threshold = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "flat key=value config file");
    cmd->add_option("--seed", o.seed, "RNG seed for all stages");
    cmd->add_option("--sigmas", o.sigmas, "comma-separated LoG scales");
    cmd->add_option("--box-sizes", o.box_sizes, "comma-separated ROI box sizes");
    cmd->add_option("--silhouette-min", o.silhouette_min, "cluster-trust threshold");
    cmd->add_option("--pair-distance-min", o.pair_distance_min, "two-ROI distance threshold");
    cmd->add_option("--threshold", o.threshold, "classifier probability threshold");
}

RunConfig resolve_config(const CommonOpts& o) {
    RunConfig cfg;
    if (!o.config_path.empty()) cfg = load_config(o.config_path);
    if (o.seed >= 0) cfg.set_seed(static_cast<std::uint64_t>(o.seed));
    if (!o.sigmas.empty()) config_set(cfg, "sigmas", o.sigmas);
    if (!o.box_sizes.empty()) config_set(cfg, "box_sizes", o.box_sizes);
    if (o.silhouette_min >= 0) cfg.filter.silhouette_min = o.silhouette_min;
    if (o.pair_distance_min >= 0) cfg.filter.pairwise_distance_min = o.pair_distance_min;
    if (o.threshold >= 0) cfg.threshold = o.threshold;
    cfg.validate();
    return cfg;
}

std::vector<fs::path> list_pngs(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".png") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

int run_train(const CommonOpts& common, const std::string& train_dir, const std::string& out_path,
              const std::string& log_path) {
    const RunConfig cfg = resolve_config(common);
    const fs::path pos_dir = fs::path(train_dir) / "plasmodium";
    const fs::path neg_dir = fs::path(train_dir) / "non_plasmodium";
    for (const fs::path& d : {pos_dir, neg_dir}) {
        if (!fs::is_directory(d) || list_pngs(d).empty()) {
            std::cerr << "error: missing or empty class folder " << d << "\n";
            return 2;
        }
    }
    std::vector<LabeledPatch> dataset;
    for (int cls = 0; cls < 2; ++cls)
        for (const fs::path& p : list_pngs(cls ? pos_dir : neg_dir))
            dataset.push_back({resize(read_png(p.string()), 100, 100), cls});

    ModelParams<Scalar> params = init_params<Scalar>(ModelConfig{}, cfg.train.rng_seed);
    const TrainResult res = train(params, dataset, cfg.train, cfg.augment);
    save_params(params, out_path);

    std::ofstream log(log_path);
    log << "epoch,train_acc,val_acc,loss\n";
    char buf[128];
    for (const EpochStats& s : res.log) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f\n", s.epoch, s.train_acc, s.val_acc,
                      s.loss);
        log << buf;
    }
    if (!res.log.empty()) {
        const EpochStats& last = res.log.back();
        double best_val = 0;
        for (const EpochStats& s : res.log) best_val = std::max(best_val, s.val_acc);
        std::cout << "final train_acc=" << last.train_acc << " val_acc=" << last.val_acc
                  << " best_val_acc=" << best_val << "\n";
    }
    std::cout << "weights written to " << out_path << "\n";
    return 0;
}

int run_detect(const CommonOpts& common, const std::string& weights, const std::string& input,
               const std::string& out_dir, bool no_glcm_filter) {
    const RunConfig cfg = resolve_config(common);
    const ModelParams<Scalar> params = load_params<Scalar>(weights);
    fs::create_directories(out_dir);

    std::vector<fs::path> inputs;
    if (fs::is_directory(input))
        inputs = list_pngs(input);
    else
        inputs.push_back(input);
    if (inputs.empty()) {
        std::cerr << "error: no input images\n";
        return 2;
    }

    DetectOptions opt;
    opt.threshold = cfg.threshold;
    opt.use_glcm_filter = !no_glcm_filter;

    int failures = 0;
    for (const fs::path& path : inputs) {
        RgbImage img;
        try {
            img = read_png(path.string());
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping " << path << ": " << e.what() << "\n";
            ++failures;
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const DetectionRecord rec =
            detect_image(img, path.filename().string(), params, cfg.roi, cfg.filter, opt);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string stem = path.stem().string();
        save_json((fs::path(out_dir) / (stem + ".json")).string(), detection_record_to_json(rec));
        write_png((fs::path(out_dir) / (stem + "_annotated.png")).string(),
                  annotate_detections(img, rec));
        std::cerr << path.filename().string() << ": " << rec.filter_report.kept << " kept, "
                  << rec.filter_report.dropped << " filtered, " << secs << " s\n";
    }
    return failures == static_cast<int>(inputs.size()) ? 1 : 0;
}

std::vector<fs::path> json_inputs(const std::string& arg) {
    std::vector<fs::path> out;
    if (fs::is_directory(arg)) {
        for (const auto& e : fs::directory_iterator(arg))
            if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
        std::sort(out.begin(), out.end());
    } else {
        out.push_back(arg);
    }
    return out;
}

int run_eval(const std::string& detections, const std::string& annotations,
             const std::string& out_path) {
    std::map<std::string, std::vector<Detection>> dets;
    for (const fs::path& p : json_inputs(detections)) {
        const DetectionRecord rec = detection_record_from_json(load_json(p.string()));
        dets[rec.image] = kept_detections(rec);
    }
    std::map<std::string, std::vector<Box>> gts;
    for (const fs::path& p : json_inputs(annotations)) {
        const AnnotationFile a = annotation_from_json(load_json(p.string()));
        gts[fs::path(a.image).filename().string()] = a.boxes;
    }
    std::vector<ImageMetrics> per_image;
    for (const auto& [image, boxes] : gts) {
        ImageMetrics m;
        m.image = image;
        const auto it = dets.find(image);
        const std::vector<Detection> empty;
        m.counts = match_boxes(it == dets.end() ? empty : it->second, boxes).counts;
        per_image.push_back(m);
    }
    const json j = metrics_to_json(per_image);
    if (!out_path.empty()) save_json(out_path, j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

/// Tile per-filter activation maps into one min-max normalized grayscale grid.
RgbImage activation_grid(const Tensor<Scalar>& act) {
    const int H = act.shape[0], W = act.shape[1], F = act.shape[2];
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(F))));
    const int rows = (F + cols - 1) / cols;
    const int pad = 2;
    RgbImage grid(cols * (W + pad) + pad, rows * (H + pad) + pad, 32);
    for (int f = 0; f < F; ++f) {
        Scalar mn = act.at3(0, 0, f), mx = mn;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                mn = std::min(mn, act.at3(y, x, f));
                mx = std::max(mx, act.at3(y, x, f));
            }
        const int gx = (f % cols) * (W + pad) + pad;
        const int gy = (f / cols) * (H + pad) + pad;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                const double v = mx > mn ? (act.at3(y, x, f) - mn) / (mx - mn) : 0.5;
                const auto byte = static_cast<std::uint8_t>(std::lround(v * 255.0));
                for (int c = 0; c < 3; ++c) grid.px(gx + x, gy + y)[c] = byte;
            }
    }
    return grid;
}

int run_activations(const std::string& weights, const std::string& patch_path,
                    const std::string& out_dir) {
    const ModelParams<Scalar> params = load_params<Scalar>(weights);
    const RgbImage patch =
        resize(read_png(patch_path), params.cfg.input_size, params.cfg.input_size);
    std::mt19937_64 rng(0);
    const Activations<Scalar> acts =
        forward(params, normalize_patch<Scalar>(patch), false, 0.0, rng);
    fs::create_directories(out_dir);
    write_png((fs::path(out_dir) / "conv1.png").string(), activation_grid(acts.conv1_act));
    write_png((fs::path(out_dir) / "conv2.png").string(), activation_grid(acts.conv2_act));
    std::cout << "activation grids written to " << out_dir << "\n";
    return 0;
}

int run_synth(std::uint64_t seed, int smears, int parasites, int distractors, int patches,
              const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (int i = 0; i < smears; ++i) {
        SynthSmearConfig scfg;
        scfg.seed = seed + static_cast<std::uint64_t>(i);
        scfg.n_parasites = parasites;
        scfg.n_distractors = distractors;
        const SynthSmear s = synth_smear(scfg);
        char name[64];
        std::snprintf(name, sizeof name, "smear_%03d", i);
        const std::string png = (fs::path(out_dir) / (std::string(name) + ".png")).string();
        write_png(png, s.image);
        AnnotationFile a;
        a.image = std::string(name) + ".png";
        a.boxes = s.boxes;
        save_json((fs::path(out_dir) / (std::string(name) + ".json")).string(),
                  annotation_to_json(a));
    }
    if (patches > 0) {
        const fs::path pos = fs::path(out_dir) / "patches" / "plasmodium";
        const fs::path neg = fs::path(out_dir) / "patches" / "non_plasmodium";
        fs::create_directories(pos);
        fs::create_directories(neg);
        std::mt19937_64 rng(seed ^ 0xa5a5a5a5a5a5a5a5ull);
        for (int i = 0; i < patches; ++i) {
            char name[64];
            std::snprintf(name, sizeof name, "patch_%04d.png", i);
            write_png((pos / name).string(), synth_patch(true, rng));
            write_png((neg / name).string(), synth_patch(false, rng));
        }
    }
    std::cout << "synthetic data written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Plasmodium detector for thin blood smear images"};
    app.require_subcommand(1);

    CommonOpts common;

    auto* c_train = app.add_subcommand("train", "train the CNN classifier");
    std::string train_dir, weights_out = "weights.bin", log_out = "train_log.csv";
    add_common(c_train, common);
    c_train->add_option("train_dir", train_dir,
                        "folder with plasmodium/ and non_plasmodium/ subfolders")
        ->required();
    c_train->add_option("--out", weights_out, "weights output path");
    c_train->add_option("--log", log_out, "per-epoch CSV log path");

    auto* c_detect = app.add_subcommand("detect", "detect parasites in smear images");
    std::string weights, detect_input, detect_out = "detections";
    bool no_glcm_filter = false;
    add_common(c_detect, common);
    c_detect->add_option("--weights", weights, "trained weights file")->required();
    c_detect->add_option("input", detect_input, "image file or folder")->required();
    c_detect->add_option("--out-dir", detect_out, "output folder");
    c_detect->add_flag("--no-glcm-filter", no_glcm_filter, "skip GLCM false-positive filtering");

    auto* c_eval = app.add_subcommand("eval", "score detections against annotations");
    std::string eval_dets, eval_gts, eval_out = "metrics.json";
    c_eval->add_option("--detections", eval_dets, "detection JSON file or folder")->required();
    c_eval->add_option("--annotations", eval_gts, "annotation JSON file or folder")->required();
    c_eval->add_option("--out", eval_out, "metrics JSON output path");

    auto* c_act = app.add_subcommand("activations", "export conv-layer activation grids");
    std::string act_patch, act_out = "activations";
    c_act->add_option("--weights", weights, "trained weights file")->required();
    c_act->add_option("patch", act_patch, "input patch image")->required();
    c_act->add_option("--out-dir", act_out, "output folder");

    auto* c_synth = app.add_subcommand("synth", "generate synthetic smears and patches");
    std::uint64_t synth_seed = 0;
    int smears = 0, parasites = 5, distractors = 5, patches = 0;
    std::string synth_out = "synth";
    c_synth->add_option("--seed", synth_seed, "generator seed");
    c_synth->add_option("--smears", smears, "number of smear images");
    c_synth->add_option("--parasites", parasites, "parasites per smear");
    c_synth->add_option("--distractors", distractors, "uniform-fill distractors per smear");
    c_synth->add_option("--patches", patches, "training patches per class");
    c_synth->add_option("--out-dir", synth_out, "output folder");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (c_train->parsed()) return run_train(common, train_dir, weights_out, log_out);
        if (c_detect->parsed())
            return run_detect(common, weights, detect_input, detect_out, no_glcm_filter);
        if (c_eval->parsed()) return run_eval(eval_dets, eval_gts, eval_out);
        if (c_act->parsed()) return run_activations(weights, act_patch, act_out);
        if (c_synth->parsed())
            return run_synth(synth_seed, smears, parasites, distractors, patches, synth_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
