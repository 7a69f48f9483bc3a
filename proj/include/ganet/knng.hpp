#pragma once

#include <cstddef>
#include <vector>

#include "ganet/dataset.hpp"
#include "ganet/errors.hpp"
#include "ganet/genome.hpp"
#include "ganet/graph.hpp"

namespace ganet {

// Class-constrained kNN graph over the training set: every vertex links to
// its k most similar same-class neighbors. Construction is the all-ones
// genome decoded over a MapMatrix with q = k, which keeps the baseline and
// the evolved graphs on one code path.
inline ClassGraph build_knng(const SimilarityMatrix& sim, const std::vector<std::string>& labels,
                             std::size_t k, const ImportanceConfig& importance) {
    const MapMatrix map = build_map_all(sim, labels, k);
    Genome ones(map.n, map.q);
    std::fill(ones.bits.begin(), ones.bits.end(), std::uint8_t{1});
    ClassGraph graph = decode(ones, map, labels);
    graph.importance = compute_importance(graph, importance);
    return graph;
}

inline std::vector<Classification> knng_classify(const SpectrumDataset& train,
                                                 const SpectrumDataset& test, std::size_t k,
                                                 Metric metric,
                                                 const ImportanceConfig& importance) {
    if (train.wavenumbers != test.wavenumbers) {
        throw input_error("train and test wavenumber axes differ");
    }
    const SimilarityMatrix sim = compute_similarity(train, metric);
    const ClassGraph graph = build_knng(sim, train.labels, k, importance);
    const std::size_t q_test = importance.q_test > 0 ? importance.q_test : k;
    std::vector<Classification> predictions;
    predictions.reserve(test.n_samples());
    for (const auto& row : test.samples) {
        predictions.push_back(classify_item(row, train.samples, train.labels, graph.importance,
                                            metric, importance.gamma, q_test));
    }
    return predictions;
}

} // namespace ganet
