#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ganet/errors.hpp"
#include "ganet/ga.hpp"

namespace ganet {

namespace detail {

constexpr const char* model_format = "ganet-model";
constexpr int model_version = 1;

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw input_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out) throw input_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw input_error("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
}

inline nlohmann::json importance_to_json(const ImportanceConfig& cfg) {
    return {{"measure", to_string(cfg.measure)},
            {"pagerank_damping", cfg.pagerank_damping},
            {"pagerank_tol", cfg.pagerank_tol},
            {"pagerank_max_iter", cfg.pagerank_max_iter},
            {"gamma", cfg.gamma},
            {"q_test", cfg.q_test}};
}

inline ImportanceConfig importance_from_json(const nlohmann::json& j) {
    ImportanceConfig cfg;
    cfg.measure = importance_measure_from_string(j.at("measure").get<std::string>());
    cfg.pagerank_damping = j.at("pagerank_damping").get<double>();
    cfg.pagerank_tol = j.at("pagerank_tol").get<double>();
    cfg.pagerank_max_iter = j.at("pagerank_max_iter").get<std::size_t>();
    cfg.gamma = j.at("gamma").get<double>();
    cfg.q_test = j.at("q_test").get<std::size_t>();
    return cfg;
}

inline nlohmann::json ga_to_json(const GaConfig& cfg) {
    return {{"population_size", cfg.population_size},
            {"generations", cfg.generations},
            {"selection", to_string(cfg.selection)},
            {"tournament_size", cfg.tournament_size},
            {"crossover", to_string(cfg.crossover)},
            {"crossover_rate", cfg.crossover_rate},
            {"mutation_rate", cfg.mutation_rate},
            {"reinsertion", to_string(cfg.reinsertion)},
            {"seed", cfg.seed},
            {"q", cfg.q},
            {"metric", to_string(cfg.metric)},
            {"importance", importance_to_json(cfg.importance)}};
}

inline GaConfig ga_from_json(const nlohmann::json& j) {
    GaConfig cfg;
    cfg.population_size = j.at("population_size").get<std::size_t>();
    cfg.generations = j.at("generations").get<std::size_t>();
    cfg.selection = selection_from_string(j.at("selection").get<std::string>());
    cfg.tournament_size = j.at("tournament_size").get<std::size_t>();
    cfg.crossover = crossover_from_string(j.at("crossover").get<std::string>());
    cfg.crossover_rate = j.at("crossover_rate").get<double>();
    cfg.mutation_rate = j.at("mutation_rate").get<double>();
    cfg.reinsertion = reinsertion_from_string(j.at("reinsertion").get<std::string>());
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.q = j.at("q").get<std::size_t>();
    cfg.metric = metric_from_string(j.at("metric").get<std::string>());
    cfg.importance = importance_from_json(j.at("importance"));
    return cfg;
}

inline nlohmann::json preprocess_to_json(const PreprocessConfig& cfg) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto s : cfg.step_order) steps.push_back(to_string(s));
    return {{"amide_window", {cfg.amide_window.lo, cfg.amide_window.hi}},
            {"savgol_window", cfg.savgol_window},
            {"savgol_degree", cfg.savgol_degree},
            {"derivative_order", cfg.derivative_order},
            {"truncate_range", {cfg.truncate_range.lo, cfg.truncate_range.hi}},
            {"step_order", steps}};
}

inline PreprocessConfig preprocess_from_json(const nlohmann::json& j) {
    PreprocessConfig cfg;
    cfg.amide_window = {j.at("amide_window").at(0).get<double>(),
                        j.at("amide_window").at(1).get<double>()};
    cfg.savgol_window = j.at("savgol_window").get<int>();
    cfg.savgol_degree = j.at("savgol_degree").get<int>();
    cfg.derivative_order = j.at("derivative_order").get<int>();
    cfg.truncate_range = {j.at("truncate_range").at(0).get<double>(),
                          j.at("truncate_range").at(1).get<double>()};
    cfg.step_order.clear();
    for (const auto& s : j.at("step_order")) {
        cfg.step_order.push_back(preprocess_step_from_string(s.get<std::string>()));
    }
    return cfg;
}

inline nlohmann::json dataset_to_json(const SpectrumDataset& ds) {
    return {{"wavenumbers", ds.wavenumbers},
            {"samples", ds.samples},
            {"labels", ds.labels},
            {"subject_ids", ds.subject_ids},
            {"sample_ids", ds.sample_ids}};
}

inline SpectrumDataset dataset_from_json(const nlohmann::json& j) {
    SpectrumDataset ds;
    ds.wavenumbers = j.at("wavenumbers").get<std::vector<double>>();
    ds.samples = j.at("samples").get<std::vector<std::vector<double>>>();
    ds.labels = j.at("labels").get<std::vector<std::string>>();
    ds.subject_ids = j.at("subject_ids").get<std::vector<std::string>>();
    ds.sample_ids = j.at("sample_ids").get<std::vector<std::string>>();
    return ds;
}

} // namespace detail

inline nlohmann::json model_to_json(const GanetModel& model) {
    std::string bits(model.best_genome.bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) {
        bits[i] = model.best_genome.bits[i] ? '1' : '0';
    }
    nlohmann::json j;
    j["format"] = detail::model_format;
    j["version"] = detail::model_version;
    j["ga"] = detail::ga_to_json(model.ga);
    j["preprocess"] = detail::preprocess_to_json(model.preprocess);
    j["genome"] = {{"n", model.best_genome.n}, {"q", model.best_genome.q}, {"bits", bits}};
    if (model.best_genome.fitness) j["genome"]["fitness"] = *model.best_genome.fitness;
    j["map"] = {{"n", model.map.n}, {"q", model.map.q}, {"entries", model.map.entries}};
    j["graph"] = {{"out_edges", model.train_graph.out_edges},
                  {"importance", model.train_graph.importance}};
    j["train"] = detail::dataset_to_json(model.train_data);
    nlohmann::json history = nlohmann::json::array();
    for (const auto& h : model.history) {
        history.push_back({{"best", h.best}, {"mean", h.mean}, {"best_ever", h.best_ever}});
    }
    j["history"] = history;
    return j;
}

inline GanetModel model_from_json(const nlohmann::json& j) {
    try {
        if (!j.contains("format") || j.at("format").get<std::string>() != detail::model_format) {
            throw input_error("not a ganet model file");
        }
        if (j.at("version").get<int>() != detail::model_version) {
            throw input_error("unsupported model version " + j.at("version").dump());
        }
        GanetModel model;
        model.ga = detail::ga_from_json(j.at("ga"));
        model.preprocess = detail::preprocess_from_json(j.at("preprocess"));

        const auto& jg = j.at("genome");
        Genome genome(jg.at("n").get<std::size_t>(), jg.at("q").get<std::size_t>());
        const auto bits = jg.at("bits").get<std::string>();
        if (bits.size() != genome.flat_size()) {
            throw input_error("genome bit string does not match its declared shape");
        }
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] != '0' && bits[i] != '1') {
                throw input_error("genome bit string contains characters other than 0/1");
            }
            genome.bits[i] = bits[i] == '1' ? 1 : 0;
        }
        if (jg.contains("fitness")) genome.fitness = jg.at("fitness").get<double>();
        model.best_genome = std::move(genome);

        const auto& jm = j.at("map");
        model.map.n = jm.at("n").get<std::size_t>();
        model.map.q = jm.at("q").get<std::size_t>();
        model.map.entries = jm.at("entries").get<std::vector<std::int32_t>>();
        if (model.map.entries.size() != model.map.n * model.map.q) {
            throw input_error("map entry count does not match its declared shape");
        }

        model.train_data = detail::dataset_from_json(j.at("train"));
        validate(model.train_data);

        const auto& jgraph = j.at("graph");
        model.train_graph.n = model.map.n;
        model.train_graph.labels = model.train_data.labels;
        model.train_graph.out_edges =
            jgraph.at("out_edges").get<std::vector<std::vector<std::uint32_t>>>();
        model.train_graph.importance = jgraph.at("importance").get<std::vector<double>>();
        if (model.train_graph.out_edges.size() != model.train_graph.n ||
            model.train_graph.importance.size() != model.train_graph.n ||
            model.train_data.n_samples() != model.train_graph.n) {
            throw input_error("graph sections do not agree on the number of vertices");
        }

        for (const auto& h : j.at("history")) {
            model.history.push_back({h.at("best").get<double>(), h.at("mean").get<double>(),
                                     h.at("best_ever").get<double>()});
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("malformed model file: ") + e.what());
    }
}

inline void save_model(const GanetModel& model, const std::filesystem::path& path) {
    detail::write_file_atomic(path, model_to_json(model).dump(2) + "\n");
}

inline GanetModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open model file '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("cannot parse model file '" + path.string() + "': " + e.what());
    }
    return model_from_json(j);
}

} // namespace ganet
