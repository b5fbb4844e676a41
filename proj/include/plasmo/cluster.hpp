#ifndef PLASMO_CLUSTER_HPP
#define PLASMO_CLUSTER_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace plasmo {

struct InfeasibleClusteringError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UndefinedSilhouetteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FeaturePoint {
    double homogeneity = 0;
    double energy = 0;
    int roi_id = -1;
};

struct ClusterAssignment {
    int k = 0;
    std::vector<int> labels;
    std::vector<FeaturePoint> centroids;  // roi_id unused
    double mean_silhouette = 0;
};

struct FilterConfig {
    double silhouette_min = 0.50;
    double pairwise_distance_min = 0.06;
    std::vector<int> k_candidates{2, 3};
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (silhouette_min <= 0 || silhouette_min >= 1)
            throw std::invalid_argument("FilterConfig: silhouette_min must be in (0,1)");
        if (pairwise_distance_min <= 0)
            throw std::invalid_argument("FilterConfig: pairwise_distance_min must be > 0");
    }
};

namespace detail {

inline double dist2(const FeaturePoint& a, const FeaturePoint& b) {
    const double dh = a.homogeneity - b.homogeneity, de = a.energy - b.energy;
    return dh * dh + de * de;
}

}  // namespace detail

/// Seeded k-means++ with Lloyd iterations to assignment fixpoint (cap 300).
/// Empty clusters are repaired by stealing the point farthest from its centroid.
inline ClusterAssignment kmeans(const std::vector<FeaturePoint>& points, int k,
                                std::uint64_t seed) {
    std::set<std::pair<double, double>> distinct;
    for (const FeaturePoint& p : points) distinct.insert({p.homogeneity, p.energy});
    if (static_cast<int>(distinct.size()) < k)
        throw InfeasibleClusteringError("kmeans: fewer distinct points than k");

    const std::size_t n = points.size();
    std::mt19937_64 rng(seed);
    std::vector<FeaturePoint> centroids;

    // k-means++ seeding
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    centroids.push_back(points[first(rng)]);
    std::vector<double> d2(n);
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = detail::dist2(points[i], centroids[0]);
            for (std::size_t c = 1; c < centroids.size(); ++c)
                best = std::min(best, detail::dist2(points[i], centroids[c]));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0) {
            std::uniform_real_distribution<double> unif(0.0, total);
            double target = unif(rng), acc = 0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = first(rng);
        }
        centroids.push_back(points[pick]);
    }

    std::vector<int> labels(n, -1);
    double prev_inertia = std::numeric_limits<double>::infinity();
    bool repaired = false;
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        double inertia = 0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double bd = detail::dist2(points[i], centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double d = detail::dist2(points[i], centroids[c]);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
            inertia += bd;
        }
        // Lloyd inertia is non-increasing except across an empty-cluster repair.
        assert(repaired || inertia <= prev_inertia + 1e-12);
        prev_inertia = inertia;
        repaired = false;

        // repair empty clusters before recomputing means
        std::vector<int> counts(k, 0);
        for (int l : labels) ++counts[l];
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t farthest = 0;
            double fd = -1;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[labels[i]] <= 1) continue;
                const double d = detail::dist2(points[i], centroids[labels[i]]);
                if (d > fd) {
                    fd = d;
                    farthest = i;
                }
            }
            --counts[labels[farthest]];
            labels[farthest] = c;
            ++counts[c];
            changed = true;
            repaired = true;
        }

        std::vector<double> sh(k, 0), se(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sh[labels[i]] += points[i].homogeneity;
            se[labels[i]] += points[i].energy;
        }
        for (int c = 0; c < k; ++c) {
            centroids[c].homogeneity = sh[c] / counts[c];
            centroids[c].energy = se[c] / counts[c];
        }
        if (!changed) break;
    }

    ClusterAssignment a;
    a.k = k;
    a.labels = std::move(labels);
    a.centroids = std::move(centroids);
    return a;
}

/// Mean silhouette, euclidean metric. Singleton clusters contribute 0;
/// a(i)=b(i)=0 is defined as 0.
inline double silhouette(const std::vector<FeaturePoint>& points, const std::vector<int>& labels) {
    const std::size_t n = points.size();
    if (n < 3) throw UndefinedSilhouetteError("silhouette: need at least 3 points");
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    std::vector<int> counts(k, 0);
    for (int l : labels) ++counts[l];
    int nonempty = 0;
    for (int c : counts) nonempty += c > 0;
    if (nonempty < 2) throw UndefinedSilhouetteError("silhouette: needs >= 2 clusters");

    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (counts[labels[i]] == 1) continue;  // singleton contributes 0
        std::vector<double> sums(k, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[labels[j]] += std::sqrt(detail::dist2(points[i], points[j]));
        }
        const double a = sums[labels[i]] / (counts[labels[i]] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == labels[i] || counts[c] == 0) continue;
            b = std::min(b, sums[c] / counts[c]);
        }
        const double m = std::max(a, b);
        total += m > 0 ? (b - a) / m : 0.0;
    }
    return total / n;
}

/// Try each candidate k, keep the highest mean silhouette; ties toward smaller k.
inline ClusterAssignment select_k(const std::vector<FeaturePoint>& points,
                                  const FilterConfig& cfg) {
    if (points.size() < 3) throw InfeasibleClusteringError("select_k: need >= 3 points");
    std::vector<int> ks = cfg.k_candidates;
    std::sort(ks.begin(), ks.end());
    ClusterAssignment best;
    bool found = false;
    for (int k : ks) {
        if (k < 2) continue;
        ClusterAssignment a;
        try {
            a = kmeans(points, k, cfg.rng_seed);
        } catch (const InfeasibleClusteringError&) {
            continue;
        }
        a.mean_silhouette = silhouette(points, a.labels);
        if (!found || a.mean_silhouette > best.mean_silhouette) {
            best = std::move(a);
            found = true;
        }
    }
    if (!found) throw InfeasibleClusteringError("select_k: no feasible k");
    return best;
}

struct FilterReport {
    int k = 0;
    double silhouette = 0;
    int kept = 0;
    int dropped = 0;
    bool clustered = false;  // false when the keep-all fallback applied
};

/// False-positive rejection over (homogeneity, energy) points. Returns the
/// kept flag per input point plus a report.
inline std::pair<std::vector<bool>, FilterReport> filter_false_positives(
    const std::vector<FeaturePoint>& points, const FilterConfig& cfg) {
    cfg.validate();
    const std::size_t n = points.size();
    std::vector<bool> keep(n, true);
    FilterReport rep;

    if (n == 2) {
        const double d = std::sqrt(detail::dist2(points[0], points[1]));
        if (d > cfg.pairwise_distance_min) {
            const double s0 = points[0].homogeneity + points[0].energy;
            const double s1 = points[1].homogeneity + points[1].energy;
            keep[s0 <= s1 ? 1 : 0] = false;
            rep.clustered = true;
        }
    } else if (n >= 3) {
        try {
            const ClusterAssignment a = select_k(points, cfg);
            rep.k = a.k;
            rep.silhouette = a.mean_silhouette;
            if (a.mean_silhouette >= cfg.silhouette_min) {
                int target = 0;
                double best = std::numeric_limits<double>::infinity();
                for (int c = 0; c < a.k; ++c) {
                    const double s = a.centroids[c].homogeneity + a.centroids[c].energy;
                    if (s < best) {
                        best = s;
                        target = c;
                    }
                }
                for (std::size_t i = 0; i < n; ++i) keep[i] = a.labels[i] == target;
                rep.clustered = true;
            }
        } catch (const InfeasibleClusteringError&) {
            // keep all
        } catch (const UndefinedSilhouetteError&) {
            // keep all
        }
    }

    for (bool k : keep) {
        if (k)
            ++rep.kept;
        else
            ++rep.dropped;
    }
    return {keep, rep};
}

}  // namespace plasmo

#endif
