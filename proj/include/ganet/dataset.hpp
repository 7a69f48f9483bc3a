#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ganet/errors.hpp"

namespace ganet {

// Closed wavenumber interval [lo, hi] in cm^-1.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool operator==(const Interval&) const = default;
};

// Labeled absorbance spectra over a shared wavenumber axis. Wavenumbers are
// stored strictly descending; each sample row carries a class label, a
// subject id grouping replicates, and a unique sample id. Instances are
// immutable after construction and safe to share across threads.
struct SpectrumDataset {
    std::vector<double> wavenumbers;
    std::vector<std::vector<double>> samples;
    std::vector<std::string> labels;
    std::vector<std::string> subject_ids;
    std::vector<std::string> sample_ids;

    std::size_t n_samples() const { return samples.size(); }
    std::size_t n_wavenumbers() const { return wavenumbers.size(); }

    // Sorted unique class labels.
    std::vector<std::string> label_set() const {
        std::set<std::string> s(labels.begin(), labels.end());
        return {s.begin(), s.end()};
    }

    // Column indices whose wavenumber falls inside the interval.
    std::vector<std::size_t> columns_in(const Interval& window) const {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < wavenumbers.size(); ++j) {
            if (window.contains(wavenumbers[j])) idx.push_back(j);
        }
        return idx;
    }
};

namespace detail {

inline bool field_is_clean(const std::string& s) {
    return s.find_first_of(",\r\n") == std::string::npos;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace detail

// Checks the structural invariants; throws input_error on violation.
inline void validate(const SpectrumDataset& ds) {
    const std::size_t n = ds.samples.size();
    if (ds.labels.size() != n || ds.subject_ids.size() != n || ds.sample_ids.size() != n) {
        throw input_error("dataset metadata columns disagree with sample count");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (ds.samples[i].size() != ds.wavenumbers.size()) {
            throw input_error("sample '" + ds.sample_ids[i] + "' has " +
                              std::to_string(ds.samples[i].size()) + " values, expected " +
                              std::to_string(ds.wavenumbers.size()));
        }
    }
    for (std::size_t j = 1; j < ds.wavenumbers.size(); ++j) {
        if (!(ds.wavenumbers[j] < ds.wavenumbers[j - 1])) {
            throw input_error("wavenumbers must be strictly descending");
        }
    }
    std::set<std::string> seen;
    for (const auto& id : ds.sample_ids) {
        if (!seen.insert(id).second) throw input_error("duplicate sample_id '" + id + "'");
    }
    for (const auto& id : ds.sample_ids)
        if (!detail::field_is_clean(id)) throw input_error("sample_id contains separator: '" + id + "'");
    for (const auto& id : ds.subject_ids)
        if (!detail::field_is_clean(id)) throw input_error("subject_id contains separator: '" + id + "'");
    for (const auto& l : ds.labels)
        if (!detail::field_is_clean(l)) throw input_error("label contains separator: '" + l + "'");
}

// Reads the one-file dataset format. Header row is
//   sample_id,subject_id,label,<wn_1>,...,<wn_k>
// with wavenumber columns given ascending or descending; the loaded dataset
// always stores them descending, row values permuted to match.
inline SpectrumDataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open input file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw input_error("empty file '" + path + "'");
    auto header = detail::split_line(line);
    if (header.size() < 4 || header[0] != "sample_id" || header[1] != "subject_id" ||
        header[2] != "label") {
        throw input_error("malformed header: expected 'sample_id,subject_id,label,<wavenumbers...>'");
    }

    SpectrumDataset ds;
    const std::size_t k = header.size() - 3;
    ds.wavenumbers.reserve(k);
    for (std::size_t j = 3; j < header.size(); ++j) {
        double wn = 0.0;
        if (!detail::parse_double(header[j], wn)) {
            throw input_error("malformed header: column " + std::to_string(j + 1) +
                              " ('" + header[j] + "') is not a wavenumber");
        }
        ds.wavenumbers.push_back(wn);
    }

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto fields = detail::split_line(line);
        if (fields.size() != header.size()) {
            throw input_error("ragged row " + std::to_string(row) + ": got " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(header.size()));
        }
        std::vector<double> values(k);
        for (std::size_t j = 0; j < k; ++j) {
            if (!detail::parse_double(fields[3 + j], values[j])) {
                throw input_error("non-numeric cell at row " + std::to_string(row) +
                                  ", column " + std::to_string(4 + j) + " ('" + fields[3 + j] + "')");
            }
        }
        ds.sample_ids.push_back(fields[0]);
        ds.subject_ids.push_back(fields[1]);
        ds.labels.push_back(fields[2]);
        ds.samples.push_back(std::move(values));
    }

    // Normalize axis orientation to descending.
    bool ascending = true, descending = true;
    for (std::size_t j = 1; j < ds.wavenumbers.size(); ++j) {
        if (!(ds.wavenumbers[j] > ds.wavenumbers[j - 1])) ascending = false;
        if (!(ds.wavenumbers[j] < ds.wavenumbers[j - 1])) descending = false;
    }
    if (!ascending && !descending) {
        throw input_error("wavenumber columns are not strictly monotonic");
    }
    if (ascending && ds.wavenumbers.size() > 1) {
        std::reverse(ds.wavenumbers.begin(), ds.wavenumbers.end());
        for (auto& rowv : ds.samples) std::reverse(rowv.begin(), rowv.end());
    }

    validate(ds);
    return ds;
}

// Serializes with 17 significant digits so load_csv(save_csv(ds)) round-trips
// every double exactly. Writes to a temp file and renames on success.
inline void save_csv(const SpectrumDataset& ds, const std::string& path) {
    validate(ds);
    std::ostringstream out;
    out << "sample_id,subject_id,label";
    for (double wn : ds.wavenumbers) out << ',' << detail::format_double(wn);
    out << '\n';
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        out << ds.sample_ids[i] << ',' << ds.subject_ids[i] << ',' << ds.labels[i];
        for (double v : ds.samples[i]) out << ',' << detail::format_double(v);
        out << '\n';
    }

    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw input_error("cannot write to '" + tmp + "'");
        f << out.str();
        if (!f) throw input_error("write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

} // namespace ganet
