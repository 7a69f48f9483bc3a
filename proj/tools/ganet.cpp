#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ganet/ganet.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* report_format = "ganet-report";
constexpr int report_version = 1;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// ---- option bundles ------------------------------------------------------

struct PreprocessCli {
    std::string preset;
    std::string steps;
    ganet::PreprocessConfig cfg;

    CLI::Option* o_preset = nullptr;
    CLI::Option* o_steps = nullptr;
    CLI::Option* o_window = nullptr;
    CLI::Option* o_degree = nullptr;
    CLI::Option* o_deriv = nullptr;
    CLI::Option* o_amide_lo = nullptr;
    CLI::Option* o_amide_hi = nullptr;
    CLI::Option* o_trunc_lo = nullptr;
    CLI::Option* o_trunc_hi = nullptr;
};

void add_preprocess_flags(CLI::App* sub, PreprocessCli& p) {
    p.o_preset = sub->add_option("--preprocess-preset", p.preset,
                                 "preprocessing preset: amide-i|smoot-diff-norm");
    p.o_steps = sub->add_option(
        "--steps", p.steps,
        "comma-separated step order from {smooth,differentiate,normalize,truncate}, or 'none'");
    p.o_window = sub->add_option("--savgol-window", p.cfg.savgol_window,
                                 "Savitzky-Golay window length (odd)");
    p.o_degree = sub->add_option("--savgol-degree", p.cfg.savgol_degree,
                                 "Savitzky-Golay polynomial degree");
    p.o_deriv = sub->add_option("--derivative-order", p.cfg.derivative_order,
                                "derivative order of the smoothing step (0 or 1)");
    p.o_amide_lo = sub->add_option("--amide-lo", p.cfg.amide_window.lo,
                                   "lower bound of the normalization window (cm^-1)");
    p.o_amide_hi = sub->add_option("--amide-hi", p.cfg.amide_window.hi,
                                   "upper bound of the normalization window (cm^-1)");
    p.o_trunc_lo = sub->add_option("--truncate-lo", p.cfg.truncate_range.lo,
                                   "lower bound of the retained wavenumber range (cm^-1)");
    p.o_trunc_hi = sub->add_option("--truncate-hi", p.cfg.truncate_range.hi,
                                   "upper bound of the retained wavenumber range (cm^-1)");
}

std::vector<ganet::PreprocessStep> parse_steps(const std::string& text) {
    if (text.empty() || text == "none") return {};
    std::vector<ganet::PreprocessStep> steps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        steps.push_back(ganet::preprocess_step_from_string(item));
    }
    return steps;
}

// flag/config beats preset beats default: the preset rewrites the step order,
// then any explicitly passed option wins.
ganet::PreprocessConfig resolve_preprocess(const PreprocessCli& p) {
    ganet::PreprocessConfig cfg;
    if (p.o_preset->count() > 0) cfg.step_order = ganet::preprocess_preset(p.preset);
    if (p.o_steps->count() > 0) cfg.step_order = parse_steps(p.steps);
    if (p.o_window->count() > 0) cfg.savgol_window = p.cfg.savgol_window;
    if (p.o_degree->count() > 0) cfg.savgol_degree = p.cfg.savgol_degree;
    if (p.o_deriv->count() > 0) cfg.derivative_order = p.cfg.derivative_order;
    if (p.o_amide_lo->count() > 0) cfg.amide_window.lo = p.cfg.amide_window.lo;
    if (p.o_amide_hi->count() > 0) cfg.amide_window.hi = p.cfg.amide_window.hi;
    if (p.o_trunc_lo->count() > 0) cfg.truncate_range.lo = p.cfg.truncate_range.lo;
    if (p.o_trunc_hi->count() > 0) cfg.truncate_range.hi = p.cfg.truncate_range.hi;
    cfg.validate();
    return cfg;
}

struct GaCli {
    std::string preset;
    std::string selection = "tournament";
    std::string crossover = "two_point";
    std::string reinsertion = "pure";
    std::string metric = "euclidean";
    std::string importance = "degree";
    ganet::GaConfig cfg;

    CLI::Option* o_preset = nullptr;
    CLI::Option* o_q = nullptr;
    CLI::Option* o_gamma = nullptr;
    CLI::Option* o_reinsertion = nullptr;
};

void add_ga_flags(CLI::App* sub, GaCli& g) {
    g.o_preset =
        sub->add_option("--preset", g.preset, "named configuration: ganet-c|ganet-e|ganet-g|ganet-k");
    sub->add_option("--population", g.cfg.population_size, "population size (even, >= 2)");
    sub->add_option("--generations", g.cfg.generations, "number of generations");
    sub->add_option("--selection", g.selection, "parent selection: tournament|roulette");
    sub->add_option("--tournament-size", g.cfg.tournament_size, "tournament draw count");
    sub->add_option("--crossover", g.crossover, "crossover operator: two_point|uniform");
    sub->add_option("--crossover-rate", g.cfg.crossover_rate, "probability a pair is recombined");
    sub->add_option("--mutation-rate", g.cfg.mutation_rate,
                    "per-bit flip probability (default: 1/(n*q))");
    g.o_reinsertion = sub->add_option("--reinsertion", g.reinsertion, "reinsertion: pure|ordered");
    g.o_q = sub->add_option("--q", g.cfg.q, "same-class candidate slots per vertex");
    sub->add_option("--metric", g.metric, "similarity metric: euclidean|cosine");
    g.o_gamma =
        sub->add_option("--gamma", g.cfg.importance.gamma, "similarity exponent in class scores");
    sub->add_option("--q-test", g.cfg.importance.q_test,
                    "training vertices linked to a query item (default: q)");
    sub->add_option("--importance", g.importance, "vertex importance measure: degree|pagerank");
    sub->add_option("--pagerank-damping", g.cfg.importance.pagerank_damping,
                    "pagerank damping factor");
    sub->add_option("--pagerank-tol", g.cfg.importance.pagerank_tol,
                    "pagerank L1 convergence tolerance");
    sub->add_option("--pagerank-max-iter", g.cfg.importance.pagerank_max_iter,
                    "pagerank iteration cap");
}

ganet::GaConfig resolve_ga(const GaCli& g, std::uint64_t seed) {
    ganet::GaConfig cfg = g.cfg;
    cfg.selection = ganet::selection_from_string(g.selection);
    cfg.crossover = ganet::crossover_from_string(g.crossover);
    cfg.reinsertion = ganet::reinsertion_from_string(g.reinsertion);
    cfg.metric = ganet::metric_from_string(g.metric);
    cfg.importance.measure = ganet::importance_measure_from_string(g.importance);
    if (g.o_preset->count() > 0) {
        const ganet::GanetPreset preset = ganet::ganet_preset(g.preset);
        if (g.o_gamma->count() == 0) cfg.importance.gamma = preset.gamma;
        if (g.o_q->count() == 0) cfg.q = preset.q;
        if (g.o_reinsertion->count() == 0) cfg.reinsertion = preset.reinsertion;
    }
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

struct SplitCli {
    ganet::SplitSpec spec;
};

void add_split_flags(CLI::App* sub, SplitCli& s) {
    sub->add_option("--train-frac", s.spec.train_fraction, "training fraction of subjects");
    sub->add_option("--val-frac", s.spec.validation_fraction, "validation fraction of subjects");
    sub->add_option("--test-frac", s.spec.test_fraction, "test fraction of subjects");
}

// ---- report helpers ------------------------------------------------------

json counts_to_json(const ganet::ConfusionCounts& c) {
    return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn},
            {"positive_label", c.positive_label}};
}

json metrics_to_json(const ganet::MetricSummary& m) {
    return {{"accuracy", m.accuracy},
            {"sensitivity", m.sensitivity},
            {"specificity", m.specificity},
            {"h_mean", m.h_mean}};
}

json history_to_json(const std::vector<ganet::HistoryEntry>& history) {
    json rows = json::array();
    for (std::size_t g = 0; g < history.size(); ++g) {
        rows.push_back({{"generation", g},
                        {"best", history[g].best},
                        {"mean", history[g].mean},
                        {"best_ever", history[g].best_ever}});
    }
    return rows;
}

void write_json_file(const fs::path& path, const json& j) {
    ganet::detail::write_file_atomic(path, j.dump(2) + "\n");
}

std::string history_csv(const std::vector<ganet::HistoryEntry>& history) {
    std::string out = "generation,best,mean,best_ever\n";
    for (std::size_t g = 0; g < history.size(); ++g) {
        out += std::to_string(g) + ',' + ganet::detail::format_double(history[g].best) + ',' +
               ganet::detail::format_double(history[g].mean) + ',' +
               ganet::detail::format_double(history[g].best_ever) + '\n';
    }
    return out;
}

std::string metrics_csv_row(const ganet::ConfusionCounts& c, const ganet::MetricSummary& m) {
    return std::to_string(c.tp) + ',' + std::to_string(c.fp) + ',' + std::to_string(c.tn) + ',' +
           std::to_string(c.fn) + ',' + ganet::detail::format_double(m.accuracy) + ',' +
           ganet::detail::format_double(m.sensitivity) + ',' +
           ganet::detail::format_double(m.specificity) + ',' +
           ganet::detail::format_double(m.h_mean);
}

std::vector<std::string> predict_labels(const ganet::GanetModel& model,
                                        const ganet::SpectrumDataset& ds) {
    std::vector<std::string> out;
    out.reserve(ds.n_samples());
    for (const auto& row : ds.samples) out.push_back(ganet::classify(row, model).label);
    return out;
}

std::string resolve_positive_label(const std::string& flag,
                                   const std::vector<std::string>& label_set) {
    if (!flag.empty()) {
        if (std::find(label_set.begin(), label_set.end(), flag) == label_set.end()) {
            throw ganet::config_error("positive label '" + flag + "' not present in the dataset");
        }
        return flag;
    }
    return label_set.front();
}

void print_metrics(std::ostream& os, const ganet::ConfusionCounts& c,
                   const ganet::MetricSummary& m) {
    os << "counts: tp=" << c.tp << " fp=" << c.fp << " tn=" << c.tn << " fn=" << c.fn
       << " (positive label " << c.positive_label << ")\n";
    os << "accuracy " << m.accuracy << "  sensitivity " << m.sensitivity << "  specificity "
       << m.specificity << "  h_mean " << m.h_mean << "\n";
}

// ---- subcommands ---------------------------------------------------------

struct PreprocessArgs {
    std::string input;
    std::string output;
    PreprocessCli pre;
};

void run_preprocess(const PreprocessArgs& a) {
    const ganet::PreprocessConfig cfg = resolve_preprocess(a.pre);
    ganet::SpectrumDataset ds = ganet::load_csv(a.input);
    for (const ganet::PreprocessStep step : cfg.step_order) {
        ds = ganet::apply_step(ds, cfg, step);
        std::cout << ganet::to_string(step) << ": " << ds.n_wavenumbers() << " columns\n";
    }
    ganet::save_csv(ds, a.output);
    std::cout << "wrote " << a.output << " (" << ds.n_samples() << " samples, "
              << ds.n_wavenumbers() << " columns)\n";
}

struct DatagenArgs {
    std::string output;
    ganet::SyntheticSpec spec;
};

void run_datagen(const DatagenArgs& a) {
    const ganet::SpectrumDataset ds = ganet::generate_synthetic(a.spec);
    ganet::save_csv(ds, a.output);
    std::cout << "wrote " << a.output << " (" << ds.n_samples() << " samples, "
              << ds.n_wavenumbers() << " wavenumbers)\n";
}

struct TrainArgs {
    std::string dataset;
    std::string output_dir;
    std::uint64_t seed = 0;
    std::string positive_label;
    PreprocessCli pre;
    GaCli ga;
    SplitCli split;
};

struct TrainedRun {
    ganet::GanetModel model;
    ganet::SplitResult raw_splits;
    ganet::SpectrumDataset test;
    ganet::ConfusionCounts val_counts;
    ganet::MetricSummary val_metrics;
    ganet::ConfusionCounts test_counts;
    ganet::MetricSummary test_metrics;
    std::string positive_label;
};

// Shared by train and compare: split raw data by subject, preprocess each
// split with one config, evolve on train/validation, score on test.
TrainedRun execute_training(const std::string& dataset_path, const PreprocessCli& pre_cli,
                            const GaCli& ga_cli, SplitCli split_cli, std::uint64_t seed,
                            const std::string& positive_flag) {
    const ganet::SpectrumDataset raw = ganet::load_csv(dataset_path);
    const ganet::PreprocessConfig pre = resolve_preprocess(pre_cli);
    const ganet::GaConfig ga = resolve_ga(ga_cli, seed);
    split_cli.spec.seed = seed;
    split_cli.spec.validate();

    TrainedRun run;
    run.positive_label = resolve_positive_label(positive_flag, raw.label_set());
    run.raw_splits = ganet::split_by_subject(raw, split_cli.spec);

    const ganet::SpectrumDataset train = ganet::run_pipeline(run.raw_splits.train, pre);
    const ganet::SpectrumDataset validation = ganet::run_pipeline(run.raw_splits.validation, pre);
    run.test = ganet::run_pipeline(run.raw_splits.test, pre);

    run.model = ganet::run_ganet(train, validation, ga);
    run.model.preprocess = pre;

    run.val_counts =
        ganet::count_confusion(validation.labels, predict_labels(run.model, validation),
                               run.positive_label);
    run.val_metrics = ganet::metrics(run.val_counts);
    run.test_counts = ganet::count_confusion(run.test.labels, predict_labels(run.model, run.test),
                                             run.positive_label);
    run.test_metrics = ganet::metrics(run.test_counts);
    return run;
}

json split_sizes_json(const ganet::SplitResult& s) {
    return {{"train", s.train.n_samples()},
            {"validation", s.validation.n_samples()},
            {"test", s.test.n_samples()}};
}

json train_config_echo(const TrainArgs& a, const TrainedRun& run,
                       const ganet::SplitSpec& split_spec) {
    return {{"dataset", a.dataset},
            {"output_dir", a.output_dir},
            {"seed", a.seed},
            {"positive_label", run.positive_label},
            {"split",
             {{"train_fraction", split_spec.train_fraction},
              {"validation_fraction", split_spec.validation_fraction},
              {"test_fraction", split_spec.test_fraction}}},
            {"preprocess", ganet::detail::preprocess_to_json(run.model.preprocess)},
            {"ga", ganet::detail::ga_to_json(run.model.ga)}};
}

void run_train(const TrainArgs& a) {
    Stopwatch timer;
    TrainedRun run = execute_training(a.dataset, a.pre, a.ga, a.split, a.seed, a.positive_label);

    fs::create_directories(a.output_dir);
    const fs::path dir(a.output_dir);
    ganet::save_csv(run.raw_splits.train, dir / "split_train.csv");
    ganet::save_csv(run.raw_splits.validation, dir / "split_validation.csv");
    ganet::save_csv(run.raw_splits.test, dir / "split_test.csv");
    ganet::save_model(run.model, dir / "model.json");
    ganet::detail::write_file_atomic(dir / "history.csv", history_csv(run.model.history));

    std::string metrics_table = "split,tp,fp,tn,fn,accuracy,sensitivity,specificity,h_mean\n";
    metrics_table += "validation," + metrics_csv_row(run.val_counts, run.val_metrics) + '\n';
    metrics_table += "test," + metrics_csv_row(run.test_counts, run.test_metrics) + '\n';
    ganet::detail::write_file_atomic(dir / "metrics.csv", metrics_table);

    json report;
    report["format"] = report_format;
    report["version"] = report_version;
    report["command"] = "train";
    report["config"] = train_config_echo(a, run, a.split.spec);
    report["split_sizes"] = split_sizes_json(run.raw_splits);
    report["history"] = history_to_json(run.model.history);
    report["validation"] = {{"counts", counts_to_json(run.val_counts)},
                            {"metrics", metrics_to_json(run.val_metrics)}};
    report["test"] = {{"counts", counts_to_json(run.test_counts)},
                      {"metrics", metrics_to_json(run.test_metrics)}};
    report["artifacts"] = {{"model", "model.json"},
                           {"history", "history.csv"},
                           {"metrics", "metrics.csv"},
                           {"split_train", "split_train.csv"},
                           {"split_validation", "split_validation.csv"},
                           {"split_test", "split_test.csv"}};
    report["wall_clock_seconds"] = timer.seconds();
    write_json_file(dir / "report.json", report);

    std::cout << "split sizes: train " << run.raw_splits.train.n_samples() << ", validation "
              << run.raw_splits.validation.n_samples() << ", test "
              << run.raw_splits.test.n_samples() << "\n";
    std::cout << "best validation fitness: " << *run.model.best_genome.fitness << "\n";
    std::cout << "test split\n";
    print_metrics(std::cout, run.test_counts, run.test_metrics);
    std::cout << "artifacts written to " << a.output_dir << "\n";
}

struct CompareArgs {
    TrainArgs train;
    std::vector<std::size_t> ks{1, 3, 5};
};

void run_compare(const CompareArgs& a) {
    Stopwatch timer;
    const TrainArgs& t = a.train;
    TrainedRun run = execute_training(t.dataset, t.pre, t.ga, t.split, t.seed, t.positive_label);

    struct Row {
        std::string method;
        std::size_t k;
        ganet::ConfusionCounts counts;
        ganet::MetricSummary metrics;
    };
    std::vector<Row> rows;
    rows.push_back({"ganet", run.model.ga.q, run.test_counts, run.test_metrics});

    // kNNG sees the same preprocessed training split and test items.
    for (const std::size_t k : a.ks) {
        ganet::ImportanceConfig icfg = run.model.ga.importance;
        icfg.q_test = 0;  // resolves to k
        const auto predictions = ganet::knng_classify(run.model.train_data, run.test, k,
                                                      run.model.ga.metric, icfg);
        std::vector<std::string> labels;
        labels.reserve(predictions.size());
        for (const auto& p : predictions) labels.push_back(p.label);
        const auto counts = ganet::count_confusion(run.test.labels, labels, run.positive_label);
        rows.push_back({"knng", k, counts, ganet::metrics(counts)});
    }

    fs::create_directories(t.output_dir);
    const fs::path dir(t.output_dir);
    std::string table = "method,k,tp,fp,tn,fn,accuracy,sensitivity,specificity,h_mean\n";
    for (const Row& r : rows) {
        table += r.method + ',' + std::to_string(r.k) + ',' + metrics_csv_row(r.counts, r.metrics) +
                 '\n';
    }
    ganet::detail::write_file_atomic(dir / "comparison.csv", table);

    json jrows = json::array();
    for (const Row& r : rows) {
        jrows.push_back({{"method", r.method},
                         {"k", r.k},
                         {"counts", counts_to_json(r.counts)},
                         {"metrics", metrics_to_json(r.metrics)}});
    }
    json report;
    report["format"] = report_format;
    report["version"] = report_version;
    report["command"] = "compare";
    report["config"] = train_config_echo(t, run, t.split.spec);
    report["config"]["k_list"] = a.ks;
    report["split_sizes"] = split_sizes_json(run.raw_splits);
    report["results"] = jrows;
    report["wall_clock_seconds"] = timer.seconds();
    write_json_file(dir / "report.json", report);

    std::cout << "method  k  accuracy  sensitivity  specificity  h_mean\n";
    for (const Row& r : rows) {
        std::cout << r.method << "  " << r.k << "  " << r.metrics.accuracy << "  "
                  << r.metrics.sensitivity << "  " << r.metrics.specificity << "  "
                  << r.metrics.h_mean << "\n";
    }
    std::cout << "artifacts written to " << t.output_dir << "\n";
}

struct EvaluateArgs {
    std::string model_path;
    std::string dataset;
    std::string output_dir;
    std::string positive_label;
};

void run_evaluate(const EvaluateArgs& a) {
    Stopwatch timer;
    const ganet::GanetModel model = ganet::load_model(a.model_path);
    const ganet::SpectrumDataset raw = ganet::load_csv(a.dataset);
    const ganet::SpectrumDataset ds = ganet::run_pipeline(raw, model.preprocess);

    if (ds.wavenumbers != model.train_data.wavenumbers) {
        throw ganet::compute_error(
            "dataset is incompatible with the model after stored preprocessing: got " +
            std::to_string(ds.n_wavenumbers()) + " wavenumbers, model expects " +
            std::to_string(model.train_data.n_wavenumbers()));
    }
    const std::vector<std::string> known = model.train_data.label_set();
    for (const auto& label : ds.labels) {
        if (std::find(known.begin(), known.end(), label) == known.end()) {
            throw ganet::input_error("unknown label '" + label + "' not present at training time");
        }
    }

    const std::string positive = resolve_positive_label(a.positive_label, known);
    const auto counts = ganet::count_confusion(ds.labels, predict_labels(model, ds), positive);
    const auto summary = ganet::metrics(counts);
    print_metrics(std::cout, counts, summary);

    if (!a.output_dir.empty()) {
        fs::create_directories(a.output_dir);
        json report;
        report["format"] = report_format;
        report["version"] = report_version;
        report["command"] = "evaluate";
        report["config"] = {{"model", a.model_path},
                            {"dataset", a.dataset},
                            {"positive_label", positive}};
        report["counts"] = counts_to_json(counts);
        report["metrics"] = metrics_to_json(summary);
        report["wall_clock_seconds"] = timer.seconds();
        write_json_file(fs::path(a.output_dir) / "evaluation.json", report);
        std::cout << "artifacts written to " << a.output_dir << "\n";
    }
}

// Applies a flat key=value configuration file to every named option the
// command line left unset, preserving the precedence
// flag > config file > preset > default ('#'/';' lines are comments, keys are
// long option names without the leading dashes).
void apply_config_file(CLI::App* sub, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw ganet::config_error("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = CLI::detail::trim_copy(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ganet::config_error("config file line " + std::to_string(lineno) +
                                      " is not key=value: '" + text + "'");
        }
        const std::string key = CLI::detail::trim_copy(text.substr(0, eq));
        const std::string value = CLI::detail::trim_copy(text.substr(eq + 1));
        CLI::Option* opt = key == "config" ? nullptr : sub->get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw ganet::config_error("unknown config key '" + key + "' on line " +
                                      std::to_string(lineno));
        }
        if (opt->count() > 0) continue;  // the command line already set it
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw ganet::config_error("config key '" + key + "': " + e.what());
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GANet: evolved class-respecting similarity graphs for spectral classification"};
    app.require_subcommand(1);
    std::string config_path;
    const auto with_config = [&config_path](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key=value configuration file");
        return sub;
    };

    PreprocessArgs pre_args;
    CLI::App* pre = with_config(
        app.add_subcommand("preprocess", "apply the spectral preprocessing pipeline"));
    pre->add_option("input", pre_args.input, "input CSV")->required();
    pre->add_option("-o,--output", pre_args.output, "output CSV")->required();
    add_preprocess_flags(pre, pre_args.pre);
    pre->callback([&] {
        apply_config_file(pre, config_path);
        run_preprocess(pre_args);
    });

    DatagenArgs gen_args;
    CLI::App* gen =
        with_config(app.add_subcommand("datagen", "generate a synthetic two-class dataset"));
    gen->add_option("-o,--output", gen_args.output, "output CSV")->required();
    gen->add_option("--subjects", gen_args.spec.n_subjects, "number of subjects");
    gen->add_option("--replicates", gen_args.spec.replicates_per_subject,
                    "replicate spectra per subject");
    gen->add_option("--wavenumbers", gen_args.spec.n_wavenumbers, "grid points per spectrum");
    gen->add_option("--separation", gen_args.spec.class_separation, "peak class-mean separation");
    gen->add_option("--noise-sd", gen_args.spec.noise_sd, "per-replicate noise sd");
    gen->add_option("--seed", gen_args.spec.seed, "generator seed");
    gen->callback([&] {
        apply_config_file(gen, config_path);
        run_datagen(gen_args);
    });

    TrainArgs train_args;
    CLI::App* train =
        with_config(app.add_subcommand("train", "split, preprocess, and evolve a model"));
    train->add_option("dataset", train_args.dataset, "labeled CSV dataset")->required();
    train->add_option("-o,--output-dir", train_args.output_dir, "artifact directory")->required();
    train->add_option("--seed", train_args.seed, "master seed for split and GA streams");
    train->add_option("--positive-label", train_args.positive_label,
                      "positive class (default: lexicographically first)");
    add_preprocess_flags(train, train_args.pre);
    add_ga_flags(train, train_args.ga);
    add_split_flags(train, train_args.split);
    train->callback([&] {
        apply_config_file(train, config_path);
        run_train(train_args);
    });

    CompareArgs cmp_args;
    CLI::App* cmp = with_config(
        app.add_subcommand("compare", "train GANet and kNNG baselines on one split"));
    cmp->add_option("dataset", cmp_args.train.dataset, "labeled CSV dataset")->required();
    cmp->add_option("-o,--output-dir", cmp_args.train.output_dir, "artifact directory")->required();
    cmp->add_option("--seed", cmp_args.train.seed, "master seed for split and GA streams");
    cmp->add_option("--positive-label", cmp_args.train.positive_label,
                    "positive class (default: lexicographically first)");
    cmp->add_option("--k", cmp_args.ks, "kNNG neighbor counts")->delimiter(',');
    add_preprocess_flags(cmp, cmp_args.train.pre);
    add_ga_flags(cmp, cmp_args.train.ga);
    add_split_flags(cmp, cmp_args.train.split);
    cmp->callback([&] {
        apply_config_file(cmp, config_path);
        run_compare(cmp_args);
    });

    EvaluateArgs eval_args;
    CLI::App* ev = with_config(
        app.add_subcommand("evaluate", "classify a labeled CSV with a saved model"));
    ev->add_option("model", eval_args.model_path, "model file from train")->required();
    ev->add_option("dataset", eval_args.dataset, "labeled CSV dataset")->required();
    ev->add_option("-o,--output-dir", eval_args.output_dir, "artifact directory (optional)");
    ev->add_option("--positive-label", eval_args.positive_label,
                   "positive class (default: lexicographically first)");
    ev->callback([&] {
        apply_config_file(ev, config_path);
        run_evaluate(eval_args);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    } catch (const ganet::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
