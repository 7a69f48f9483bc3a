#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ganet/dataset.hpp"
#include "ganet/errors.hpp"
#include "ganet/genome.hpp"

namespace ganet {

enum class Metric { euclidean, cosine };

inline const char* to_string(Metric m) {
    return m == Metric::euclidean ? "euclidean" : "cosine";
}

inline Metric metric_from_string(const std::string& s) {
    if (s == "euclidean") return Metric::euclidean;
    if (s == "cosine") return Metric::cosine;
    throw config_error("unknown similarity metric '" + s + "' (expected euclidean|cosine)");
}

// Pairwise similarity. Euclidean distances are mapped through 1/(1+d), which
// keeps scores in (0,1] and preserves the distance ranking; cosine similarity
// lies in [-1,1]. The diagonal is pinned to 1.
struct SimilarityMatrix {
    Metric metric = Metric::euclidean;
    std::size_t n = 0;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

namespace detail {

inline double euclidean_similarity(std::span<const double> a, std::span<const double> b) {
    double sq = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double diff = a[t] - b[t];
        sq += diff * diff;
    }
    return 1.0 / (1.0 + std::sqrt(sq));
}

inline double squared_norm(std::span<const double> a) {
    double sq = 0.0;
    for (double v : a) sq += v * v;
    return sq;
}

inline double cosine_similarity(std::span<const double> a, std::span<const double> b,
                                double norm_a, double norm_b) {
    double dot = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) dot += a[t] * b[t];
    return dot / (norm_a * norm_b);
}

} // namespace detail

// Similarity of one item against another under the given metric. For cosine
// the caller is responsible for rejecting zero rows.
inline double pair_similarity(std::span<const double> a, std::span<const double> b, Metric m) {
    if (m == Metric::euclidean) return detail::euclidean_similarity(a, b);
    const double na = std::sqrt(detail::squared_norm(a));
    const double nb = std::sqrt(detail::squared_norm(b));
    return detail::cosine_similarity(a, b, na, nb);
}

inline SimilarityMatrix compute_similarity(const std::vector<std::vector<double>>& rows,
                                           Metric metric,
                                           const std::vector<std::string>* row_names = nullptr) {
    const std::size_t n = rows.size();
    if (n < 2) throw config_error("similarity requires at least 2 items");

    std::vector<double> norms;
    if (metric == Metric::cosine) {
        norms.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            norms[i] = std::sqrt(detail::squared_norm(rows[i]));
            if (norms[i] == 0.0) {
                const std::string name = row_names ? (*row_names)[i] : std::to_string(i);
                throw input_error("cosine similarity undefined for all-zero sample '" + name + "'");
            }
        }
    }

    SimilarityMatrix sim;
    sim.metric = metric;
    sim.n = n;
    sim.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        sim.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = metric == Metric::euclidean
                                 ? detail::euclidean_similarity(rows[i], rows[j])
                                 : detail::cosine_similarity(rows[i], rows[j], norms[i], norms[j]);
            sim.at(i, j) = s;
            sim.at(j, i) = s;
        }
    }
    return sim;
}

inline SimilarityMatrix compute_similarity(const SpectrumDataset& ds, Metric metric) {
    return compute_similarity(ds.samples, metric, &ds.sample_ids);
}

// Per-vertex ranked candidate-neighbor table. Slot (i, z) holds the z-th most
// similar vertex of i when it shares i's class, otherwise it is empty; ranking
// ties break toward the lower vertex index.
struct MapMatrix {
    static constexpr std::int32_t empty_slot = -1;

    std::size_t n = 0;
    std::size_t q = 0;
    std::vector<std::int32_t> entries;

    std::int32_t at(std::size_t i, std::size_t z) const { return entries[i * q + z]; }
    std::int32_t& at(std::size_t i, std::size_t z) { return entries[i * q + z]; }
};

inline MapMatrix build_map_all(const SimilarityMatrix& sim,
                               const std::vector<std::string>& labels, std::size_t q) {
    const std::size_t n = sim.n;
    if (labels.size() != n) throw config_error("label count does not match similarity matrix");
    if (q < 1 || q >= n) {
        throw config_error("neighborhood size q=" + std::to_string(q) +
                           " must satisfy 1 <= q <= n-1 (n=" + std::to_string(n) + ")");
    }

    MapMatrix map;
    map.n = n;
    map.q = q;
    map.entries.assign(n * q, MapMatrix::empty_slot);

    std::vector<std::size_t> candidates(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t t = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) candidates[t++] = j;
        }
        std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            const double sa = sim.at(i, a);
            const double sb = sim.at(i, b);
            if (sa != sb) return sa > sb;
            return a < b;
        });
        for (std::size_t z = 0; z < q; ++z) {
            const std::size_t j = candidates[z];
            if (labels[j] == labels[i]) map.at(i, z) = static_cast<std::int32_t>(j);
        }
    }
    return map;
}

// Directed same-class graph decoded from a genome over MapMatrix slots, plus
// (once computed) per-vertex importance scores summing to 1.
struct ClassGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::uint32_t>> out_edges;
    std::vector<std::string> labels;
    std::vector<double> importance;

    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& adj : out_edges) e += adj.size();
        return e;
    }
};

// Edge (i -> map[i][z]) exists iff the genome bit is set and the slot is
// non-empty; bits over empty slots are ignored.
inline ClassGraph decode(const Genome& genome, const MapMatrix& map,
                         const std::vector<std::string>& labels) {
    if (!genome.same_shape(map.n, map.q)) {
        throw config_error("genome shape " + std::to_string(genome.n) + "x" +
                           std::to_string(genome.q) + " does not match map " +
                           std::to_string(map.n) + "x" + std::to_string(map.q));
    }
    if (labels.size() != map.n) throw config_error("label count does not match map");

    ClassGraph g;
    g.n = map.n;
    g.labels = labels;
    g.out_edges.resize(map.n);
    for (std::size_t i = 0; i < map.n; ++i) {
        for (std::size_t z = 0; z < map.q; ++z) {
            const std::int32_t target = map.at(i, z);
            if (target != MapMatrix::empty_slot && genome.at(i, z)) {
                g.out_edges[i].push_back(static_cast<std::uint32_t>(target));
            }
        }
    }
    return g;
}

enum class ImportanceMeasure { degree, pagerank };

inline const char* to_string(ImportanceMeasure m) {
    return m == ImportanceMeasure::degree ? "degree" : "pagerank";
}

inline ImportanceMeasure importance_measure_from_string(const std::string& s) {
    if (s == "degree") return ImportanceMeasure::degree;
    if (s == "pagerank") return ImportanceMeasure::pagerank;
    throw config_error("unknown importance measure '" + s + "' (expected degree|pagerank)");
}

struct ImportanceConfig {
    ImportanceMeasure measure = ImportanceMeasure::degree;
    double pagerank_damping = 0.85;
    double pagerank_tol = 1e-10;
    int pagerank_max_iter = 1000;
    double gamma = 1.0;
    // Temporary links a test item forms; 0 means "use the training q".
    std::size_t q_test = 0;

    void validate() const {
        if (!(pagerank_damping > 0.0 && pagerank_damping < 1.0)) {
            throw config_error("pagerank damping must lie in (0,1)");
        }
        if (!(pagerank_tol > 0.0)) throw config_error("pagerank tolerance must be > 0");
        if (pagerank_max_iter < 1) throw config_error("pagerank max iterations must be >= 1");
        if (!(gamma > 0.0)) throw config_error("gamma must be > 0");
    }
};

// Undirected deduplicated degree, normalized to sum 1. A pair connected in
// both directions counts as one link. Zero-edge graphs fall back to uniform
// scores so downstream class sums stay defined.
inline std::vector<double> degree_importance(const ClassGraph& g) {
    const std::size_t n = g.n;
    if (n == 0) return {};
    std::vector<std::pair<std::uint32_t, std::uint32_t>> undirected;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t j : g.out_edges[i]) {
            const auto a = static_cast<std::uint32_t>(i);
            undirected.emplace_back(std::min(a, j), std::max(a, j));
        }
    }
    std::sort(undirected.begin(), undirected.end());
    undirected.erase(std::unique(undirected.begin(), undirected.end()), undirected.end());

    if (undirected.empty()) {
        return std::vector<double>(n, 1.0 / static_cast<double>(n));
    }
    std::vector<double> degree(n, 0.0);
    for (const auto& [a, b] : undirected) {
        degree[a] += 1.0;
        degree[b] += 1.0;
    }
    const double total = 2.0 * static_cast<double>(undirected.size());
    for (double& d : degree) d /= total;
    return degree;
}

// Power iteration with uniform teleport and uniform redistribution of dangling
// mass; stops when the L1 change drops below tol. Each pass preserves the
// unit sum, so the result sums to 1 without renormalization.
inline std::vector<double> pagerank_importance(const ClassGraph& g, const ImportanceConfig& cfg) {
    cfg.validate();
    const std::size_t n = g.n;
    if (n == 0) return {};
    const double d = cfg.pagerank_damping;
    const double uniform = 1.0 / static_cast<double>(n);

    std::vector<double> rank(n, uniform);
    std::vector<double> next(n, 0.0);
    for (int iter = 0; iter < cfg.pagerank_max_iter; ++iter) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (g.out_edges[i].empty()) dangling += rank[i];
        }
        const double base = (1.0 - d) * uniform + d * dangling * uniform;
        std::fill(next.begin(), next.end(), base);
        for (std::size_t i = 0; i < n; ++i) {
            if (g.out_edges[i].empty()) continue;
            const double share = d * rank[i] / static_cast<double>(g.out_edges[i].size());
            for (std::uint32_t j : g.out_edges[i]) next[j] += share;
        }
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual += std::fabs(next[i] - rank[i]);
        rank.swap(next);
        if (residual < cfg.pagerank_tol) return rank;
    }

    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += std::fabs(rank[i] - next[i]);
    throw compute_error("pagerank did not converge after " +
                        std::to_string(cfg.pagerank_max_iter) +
                        " iterations (last L1 residual " + detail::format_double(residual) + ")");
}

inline std::vector<double> compute_importance(const ClassGraph& g, const ImportanceConfig& cfg) {
    return cfg.measure == ImportanceMeasure::degree ? degree_importance(g)
                                                    : pagerank_importance(g, cfg);
}

// --- Importance-based classification of a query item --------------------

struct LinkedVertex {
    std::size_t index = 0;
    double similarity = 0.0;
};

struct Classification {
    std::string label;
    // Per-class scores in sorted label order.
    std::map<std::string, double> class_scores;
};

// Indices of the q_test highest similarities, ties toward lower index.
inline std::vector<LinkedVertex> top_links(const std::vector<double>& similarities,
                                           std::size_t q_test) {
    std::vector<std::size_t> idx(similarities.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (similarities[a] != similarities[b]) return similarities[a] > similarities[b];
        return a < b;
    });
    const std::size_t take = std::min(q_test, idx.size());
    std::vector<LinkedVertex> links;
    links.reserve(take);
    for (std::size_t t = 0; t < take; ++t) links.push_back({idx[t], similarities[idx[t]]});
    return links;
}

namespace detail {

// Similarity weight s^gamma, extended monotonically to negative cosine values
// via sign(s)*|s|^gamma so non-integer gamma stays defined.
inline double similarity_weight(double s, double gamma) {
    if (s >= 0.0) return std::pow(s, gamma);
    return -std::pow(-s, gamma);
}

} // namespace detail

// Scores each class as the importance sum of the query's linked vertices of
// that class, weighted by similarity^gamma. Predicts the argmax; exact ties
// go to the class whose links are most similar on average, then label order.
inline Classification classify_links(const std::vector<LinkedVertex>& links,
                                     const std::vector<std::string>& train_labels,
                                     const std::vector<double>& importance, double gamma,
                                     const std::vector<std::string>& label_set) {
    std::map<std::string, double> score;
    std::map<std::string, double> sim_sum;
    std::map<std::string, std::size_t> link_count;
    for (const auto& label : label_set) {
        score[label] = 0.0;
        sim_sum[label] = 0.0;
        link_count[label] = 0;
    }
    for (const auto& link : links) {
        const std::string& label = train_labels[link.index];
        score[label] += importance[link.index] * detail::similarity_weight(link.similarity, gamma);
        sim_sum[label] += link.similarity;
        ++link_count[label];
    }

    Classification result;
    result.class_scores = score;
    bool first = true;
    double best_score = 0.0;
    double best_mean_sim = -std::numeric_limits<double>::infinity();
    for (const auto& label : label_set) {
        const double mean_sim = link_count[label] > 0
                                    ? sim_sum[label] / static_cast<double>(link_count[label])
                                    : -std::numeric_limits<double>::infinity();
        if (first || score[label] > best_score ||
            (score[label] == best_score && mean_sim > best_mean_sim)) {
            result.label = label;
            best_score = score[label];
            best_mean_sim = mean_sim;
            first = false;
        }
    }
    return result;
}

// Virtually inserts the query: links it to its q_test most similar training
// vertices regardless of class, then scores classes over those links.
inline Classification classify_item(std::span<const double> query,
                                    const std::vector<std::vector<double>>& train_samples,
                                    const std::vector<std::string>& train_labels,
                                    const std::vector<double>& importance, Metric metric,
                                    double gamma, std::size_t q_test) {
    if (train_samples.empty()) throw compute_error("classification requires training vertices");
    if (query.size() != train_samples.front().size()) {
        throw compute_error("dimensionality mismatch: query has " +
                            std::to_string(query.size()) + " values, training data has " +
                            std::to_string(train_samples.front().size()));
    }
    if (q_test < 1) throw config_error("q_test must be >= 1");

    std::vector<double> sims(train_samples.size());
    for (std::size_t j = 0; j < train_samples.size(); ++j) {
        sims[j] = pair_similarity(query, train_samples[j], metric);
    }
    std::set<std::string> label_set(train_labels.begin(), train_labels.end());
    const std::vector<std::string> labels_sorted(label_set.begin(), label_set.end());
    return classify_links(top_links(sims, q_test), train_labels, importance, gamma,
                          labels_sorted);
}

} // namespace ganet
