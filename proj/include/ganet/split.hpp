#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ganet/dataset.hpp"
#include "ganet/errors.hpp"
#include "ganet/rng.hpp"

namespace ganet {

struct SplitSpec {
    double train_fraction = 0.6;
    double validation_fraction = 0.2;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;

    void validate() const {
        for (double f : {train_fraction, validation_fraction, test_fraction}) {
            if (!(f > 0.0 && f < 1.0)) {
                throw config_error("split fractions must each lie in (0,1)");
            }
        }
        const double sum = train_fraction + validation_fraction + test_fraction;
        if (std::fabs(sum - 1.0) > 1e-9) {
            throw config_error("split fractions must sum to 1, got " +
                               detail::format_double(sum));
        }
    }
};

struct SplitResult {
    SpectrumDataset train;
    SpectrumDataset validation;
    SpectrumDataset test;
};

namespace detail {

struct SubjectGroup {
    std::string subject_id;
    std::string strat_label;
    std::vector<std::size_t> sample_rows;
};

inline SpectrumDataset take_rows(const SpectrumDataset& ds, const std::vector<bool>& keep) {
    SpectrumDataset out;
    out.wavenumbers = ds.wavenumbers;
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        if (!keep[i]) continue;
        out.samples.push_back(ds.samples[i]);
        out.labels.push_back(ds.labels[i]);
        out.subject_ids.push_back(ds.subject_ids[i]);
        out.sample_ids.push_back(ds.sample_ids[i]);
    }
    return out;
}

} // namespace detail

// Partitions subjects (never individual samples) into train/validation/test so
// the resulting sample counts track the requested fractions. Subjects are
// shuffled per seed within label strata and interleaved proportionally, then
// assigned greedily to the split with the largest remaining sample deficit.
// When every subject carries the same replicate count and the fractions divide
// the sample total evenly, the sizes come out exact.
inline SplitResult split_by_subject(const SpectrumDataset& ds, const SplitSpec& spec) {
    spec.validate();
    validate(ds);

    // Subject table in id order, with a majority label for stratification.
    std::map<std::string, std::vector<std::size_t>> rows_by_subject;
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        rows_by_subject[ds.subject_ids[i]].push_back(i);
    }
    if (rows_by_subject.size() < 3) {
        throw input_error("split requires at least 3 distinct subjects, got " +
                          std::to_string(rows_by_subject.size()));
    }
    std::map<std::string, std::set<std::string>> subjects_per_label;
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        subjects_per_label[ds.labels[i]].insert(ds.subject_ids[i]);
    }
    for (const auto& [label, subjects] : subjects_per_label) {
        if (subjects.size() < 3) {
            throw input_error("label '" + label + "' is present in only " +
                              std::to_string(subjects.size()) + " subjects; need at least 3");
        }
    }

    std::map<std::string, std::vector<detail::SubjectGroup>> strata;
    for (const auto& [subject, rows] : rows_by_subject) {
        std::map<std::string, std::size_t> label_counts;
        for (std::size_t i : rows) ++label_counts[ds.labels[i]];
        std::string strat = label_counts.begin()->first;
        for (const auto& [label, count] : label_counts) {
            if (count > label_counts[strat]) strat = label;
        }
        strata[strat].push_back({subject, strat, rows});
    }

    // Seeded shuffle inside each stratum, strata visited in label order.
    Rng rng = make_stream(spec.seed, Stream::split);
    for (auto& [label, group] : strata) {
        for (std::size_t i = group.size(); i > 1; --i) {
            const std::size_t j = rng.next_index(i);
            std::swap(group[i - 1], group[j]);
        }
    }

    // Proportional interleave: the j-th subject of a stratum of size m gets
    // key (j + 0.5) / m, so large and small strata mix evenly.
    struct Ordered {
        double key;
        std::string label;
        std::size_t pos;
        const detail::SubjectGroup* subject;
    };
    std::vector<Ordered> order;
    for (const auto& [label, group] : strata) {
        for (std::size_t j = 0; j < group.size(); ++j) {
            order.push_back({(static_cast<double>(j) + 0.5) / static_cast<double>(group.size()),
                             label, j, &group[j]});
        }
    }
    std::sort(order.begin(), order.end(), [](const Ordered& a, const Ordered& b) {
        if (a.key != b.key) return a.key < b.key;
        if (a.label != b.label) return a.label < b.label;
        return a.pos < b.pos;
    });

    const double n_total = static_cast<double>(ds.n_samples());
    const double targets[3] = {spec.train_fraction * n_total,
                               spec.validation_fraction * n_total,
                               spec.test_fraction * n_total};
    double assigned[3] = {0.0, 0.0, 0.0};
    std::vector<bool> keep[3];
    for (auto& k : keep) k.assign(ds.n_samples(), false);

    for (const auto& entry : order) {
        int best = 0;
        for (int s = 1; s < 3; ++s) {
            if (targets[s] - assigned[s] > targets[best] - assigned[best]) best = s;
        }
        for (std::size_t i : entry.subject->sample_rows) keep[best][i] = true;
        assigned[best] += static_cast<double>(entry.subject->sample_rows.size());
    }

    return {detail::take_rows(ds, keep[0]), detail::take_rows(ds, keep[1]),
            detail::take_rows(ds, keep[2])};
}

} // namespace ganet
