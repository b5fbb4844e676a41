#include <doctest.h>

#include <random>

#include "plasmo/evalkit.hpp"

using namespace plasmo;

TEST_CASE("identical single box is a TP") {
    const Box b{10, 10, 40, 40};
    const MatchResult r = match_boxes({{b, 0.9}}, {b});
    CHECK(r.counts.tp == 1);
    CHECK(r.counts.fp == 0);
    CHECK(r.counts.fn == 0);
}

TEST_CASE("disjoint detection is FP plus FN") {
    const MatchResult r = match_boxes({{Box{200, 200, 40, 40}, 0.8}}, {Box{10, 10, 40, 40}});
    CHECK(r.counts.tp == 0);
    CHECK(r.counts.fp == 1);
    CHECK(r.counts.fn == 1);
}

TEST_CASE("two detections on one GT: one-to-one rule") {
    const Box gt{10, 10, 60, 60};
    const MatchResult r = match_boxes({{Box{20, 20, 20, 20}, 0.9}, {Box{30, 30, 20, 20}, 0.7}}, {gt});
    CHECK(r.counts.tp == 1);
    CHECK(r.counts.fp == 1);
    CHECK(r.counts.fn == 0);
    // the higher-confidence one got the match
    CHECK(r.detection_is_tp[0]);
    CHECK_FALSE(r.detection_is_tp[1]);
}

TEST_CASE("counts partition detections and ground truths") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> coord(0, 900);
    std::uniform_real_distribution<double> conf(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Detection> dets;
        std::vector<Box> gts;
        for (int i = 0; i < 12; ++i) dets.push_back({Box{coord(rng), coord(rng), 40, 40}, conf(rng)});
        for (int i = 0; i < 8; ++i) gts.push_back(Box{coord(rng), coord(rng), 60, 60});
        const MatchResult r = match_boxes(dets, gts);
        CHECK(r.counts.tp + r.counts.fp == static_cast<long>(dets.size()));
        CHECK(r.counts.tp + r.counts.fn == static_cast<long>(gts.size()));
    }
}

TEST_CASE("matching is invariant to detection order with distinct confidences") {
    std::vector<Detection> dets{{Box{10, 10, 20, 20}, 0.9},
                                {Box{15, 15, 20, 20}, 0.6},
                                {Box{100, 100, 20, 20}, 0.8}};
    std::vector<Box> gts{Box{5, 5, 40, 40}, Box{95, 95, 40, 40}};
    const MatchResult a = match_boxes(dets, gts);
    std::swap(dets[0], dets[2]);
    const MatchResult b = match_boxes(dets, gts);
    CHECK(a.counts.tp == b.counts.tp);
    CHECK(a.counts.fp == b.counts.fp);
    CHECK(a.counts.fn == b.counts.fn);
}

TEST_CASE("ppv and sensitivity reproduce the reference confusion counts") {
    ConfusionCounts c;
    c.tp = 64;
    c.fp = 15;
    c.fn = 2;
    CHECK(std::abs(ppv(c) - 81.0) < 0.05);
    CHECK(std::abs(sensitivity(c) - 96.97) < 0.05);
}

TEST_CASE("metric edge cases") {
    ConfusionCounts zero_tp;
    zero_tp.fp = 5;
    CHECK(ppv(zero_tp) == doctest::Approx(0.0));
    ConfusionCounts all_found;
    all_found.tp = 10;
    CHECK(sensitivity(all_found) == doctest::Approx(100.0));
    ConfusionCounts empty;
    CHECK_THROWS_AS(ppv(empty), UndefinedMetricError);
    CHECK_THROWS_AS(sensitivity(empty), UndefinedMetricError);
}

TEST_CASE("metrics are scale invariant") {
    ConfusionCounts c;
    c.tp = 7;
    c.fp = 3;
    c.fn = 2;
    ConfusionCounts c5;
    c5.tp = 35;
    c5.fp = 15;
    c5.fn = 10;
    CHECK(ppv(c) == doctest::Approx(ppv(c5)));
    CHECK(sensitivity(c) == doctest::Approx(sensitivity(c5)));
}

TEST_CASE("aggregation is an associative sum") {
    ConfusionCounts a, b;
    a.tp = 3;
    a.fp = 1;
    a.fn = 2;
    b.tp = 5;
    b.fp = 0;
    b.fn = 1;
    ConfusionCounts ab = a;
    ab += b;
    ConfusionCounts ba = b;
    ba += a;
    CHECK(ab.tp == ba.tp);
    CHECK(ab.fp == ba.fp);
    CHECK(ab.fn == ba.fn);
    CHECK(ab.tp == 8);
}
