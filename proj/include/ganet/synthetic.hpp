#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "ganet/dataset.hpp"
#include "ganet/errors.hpp"
#include "ganet/rng.hpp"

namespace ganet {

struct SyntheticSpec {
    std::size_t n_subjects = 50;
    std::size_t replicates_per_subject = 3;
    std::size_t n_wavenumbers = 200;
    double class_separation = 1.0;
    double noise_sd = 0.05;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_subjects < 1) throw config_error("n_subjects must be positive");
        if (replicates_per_subject < 1) throw config_error("replicates_per_subject must be positive");
        if (n_wavenumbers < 2) throw config_error("n_wavenumbers must be at least 2");
        if (class_separation < 0.0) throw config_error("class_separation must be >= 0");
        if (!(noise_sd > 0.0)) throw config_error("noise_sd must be > 0");
    }
};

namespace detail {

inline double gauss_peak(double x, double center, double width) {
    const double d = (x - center) / width;
    return std::exp(-0.5 * d * d);
}

// Shared spectral shape: protein-like bands on a flat baseline. The amide
// band at 1645 dominates so the normalization window always has a positive
// maximum.
inline double synthetic_base(double wn) {
    return 0.3 + 3.2 * gauss_peak(wn, 1645.0, 18.0) + 2.0 * gauss_peak(wn, 1545.0, 22.0) +
           1.2 * gauss_peak(wn, 1450.0, 18.0) + 1.5 * gauss_peak(wn, 1240.0, 30.0) +
           1.8 * gauss_peak(wn, 1080.0, 35.0);
}

// Class-difference profile before scaling; the generator rescales it so its
// largest magnitude on the grid is exactly 1.
inline double synthetic_difference(double wn) {
    return gauss_peak(wn, 1740.0, 15.0) + 0.8 * gauss_peak(wn, 1160.0, 25.0) -
           0.6 * gauss_peak(wn, 1500.0, 20.0);
}

inline std::string zero_padded(const char* prefix, std::size_t value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%03zu", prefix, value);
    return buf;
}

} // namespace detail

// Two-class Gaussian-peak spectra on a descending 1800..900 grid. Class means
// differ by exactly class_separation at the strongest difference peak. Each
// subject carries a random gain and additive offset shared by its replicates;
// each replicate adds i.i.d. per-point noise with sd noise_sd.
inline SpectrumDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    SpectrumDataset ds;

    const std::size_t m = spec.n_wavenumbers;
    ds.wavenumbers.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        ds.wavenumbers[i] = 1800.0 - 900.0 * static_cast<double>(i) / static_cast<double>(m - 1);
    }

    double diff_scale = 0.0;
    for (const double wn : ds.wavenumbers) {
        diff_scale = std::max(diff_scale, std::abs(detail::synthetic_difference(wn)));
    }

    Rng rng = make_stream(spec.seed, Stream::datagen);
    for (std::size_t s = 0; s < spec.n_subjects; ++s) {
        const bool positive = s % 2 == 0;
        const std::string label = positive ? "ASD" : "CTRL";
        const std::string subject = detail::zero_padded("subj", s + 1);
        const double gain = rng.next_gaussian(1.0, 0.03);
        const double offset = rng.next_gaussian(0.0, 0.05);
        const double sign = positive ? 0.5 : -0.5;

        for (std::size_t r = 0; r < spec.replicates_per_subject; ++r) {
            std::vector<double> row(m);
            for (std::size_t i = 0; i < m; ++i) {
                const double wn = ds.wavenumbers[i];
                const double clean =
                    gain * detail::synthetic_base(wn) + offset +
                    sign * spec.class_separation * detail::synthetic_difference(wn) / diff_scale;
                row[i] = clean + rng.next_gaussian(0.0, spec.noise_sd);
            }
            ds.samples.push_back(std::move(row));
            ds.labels.push_back(label);
            ds.subject_ids.push_back(subject);
            ds.sample_ids.push_back(subject + "_r" + std::to_string(r + 1));
        }
    }
    return ds;
}

} // namespace ganet
