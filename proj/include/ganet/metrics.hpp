#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ganet/errors.hpp"

namespace ganet {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
    std::string positive_label;

    std::size_t total() const { return tp + fp + tn + fn; }
};

inline ConfusionCounts count_confusion(const std::vector<std::string>& truth,
                                       const std::vector<std::string>& predicted,
                                       const std::string& positive_label) {
    if (truth.size() != predicted.size()) {
        throw config_error("truth and prediction vectors have different lengths");
    }
    ConfusionCounts c;
    c.positive_label = positive_label;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool actual = truth[i] == positive_label;
        const bool called = predicted[i] == positive_label;
        if (actual && called) ++c.tp;
        else if (actual && !called) ++c.fn;
        else if (!actual && called) ++c.fp;
        else ++c.tn;
    }
    return c;
}

struct MetricSummary {
    double accuracy = 0.0;
    double sensitivity = 0.0;  // recall on the positive label
    double specificity = 0.0;  // recall on the negative side
    double h_mean = 0.0;       // harmonic mean of the three, 0 if any is 0
};

// Single-class denominators of zero yield a rate of zero rather than NaN,
// which also zeroes the harmonic mean.
inline MetricSummary metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw config_error("metrics require at least one labeled item");
    MetricSummary m;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    m.sensitivity = (c.tp + c.fn) > 0
                        ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn)
                        : 0.0;
    m.specificity = (c.tn + c.fp) > 0
                        ? static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp)
                        : 0.0;
    if (m.accuracy > 0.0 && m.sensitivity > 0.0 && m.specificity > 0.0) {
        m.h_mean = 3.0 / (1.0 / m.accuracy + 1.0 / m.sensitivity + 1.0 / m.specificity);
    }
    return m;
}

} // namespace ganet
