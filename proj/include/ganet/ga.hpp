#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ganet/dataset.hpp"
#include "ganet/errors.hpp"
#include "ganet/genome.hpp"
#include "ganet/graph.hpp"
#include "ganet/preprocess.hpp"
#include "ganet/rng.hpp"

namespace ganet {

enum class Selection { tournament, roulette };
enum class Crossover { two_point, uniform };
enum class Reinsertion { pure, ordered };

inline const char* to_string(Selection s) {
    return s == Selection::tournament ? "tournament" : "roulette";
}
inline const char* to_string(Crossover c) {
    return c == Crossover::two_point ? "two_point" : "uniform";
}
inline const char* to_string(Reinsertion r) { return r == Reinsertion::pure ? "pure" : "ordered"; }

inline Selection selection_from_string(const std::string& s) {
    if (s == "tournament") return Selection::tournament;
    if (s == "roulette") return Selection::roulette;
    throw config_error("unknown selection '" + s + "' (expected tournament|roulette)");
}
inline Crossover crossover_from_string(const std::string& s) {
    if (s == "two_point") return Crossover::two_point;
    if (s == "uniform") return Crossover::uniform;
    throw config_error("unknown crossover '" + s + "' (expected two_point|uniform)");
}
inline Reinsertion reinsertion_from_string(const std::string& s) {
    if (s == "pure") return Reinsertion::pure;
    if (s == "ordered") return Reinsertion::ordered;
    throw config_error("unknown reinsertion '" + s + "' (expected pure|ordered)");
}

struct GaConfig {
    std::size_t population_size = 100;
    std::size_t generations = 100;
    Selection selection = Selection::tournament;
    std::size_t tournament_size = 2;
    Crossover crossover = Crossover::two_point;
    double crossover_rate = 0.9;
    // Per-bit flip probability; negative means "resolve to 1/(n*q) at run time".
    double mutation_rate = -1.0;
    Reinsertion reinsertion = Reinsertion::pure;
    std::uint64_t seed = 0;
    std::size_t q = 3;
    Metric metric = Metric::euclidean;
    ImportanceConfig importance;

    void validate() const {
        if (population_size < 2 || population_size % 2 != 0) {
            throw config_error("population_size must be even and >= 2");
        }
        if (tournament_size < 1) throw config_error("tournament_size must be >= 1");
        if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
            throw config_error("crossover_rate must lie in [0,1]");
        }
        if (mutation_rate > 1.0) throw config_error("mutation_rate must lie in [0,1]");
        if (q < 1) throw config_error("q must be >= 1");
        importance.validate();
    }
};

// The four named configurations of the evaluation study.
struct GanetPreset {
    double gamma;
    std::size_t q;
    Reinsertion reinsertion;
};

inline GanetPreset ganet_preset(const std::string& name) {
    if (name == "ganet-c") return {1.0, 3, Reinsertion::pure};
    if (name == "ganet-e") return {1.0, 5, Reinsertion::ordered};
    if (name == "ganet-g") return {1.0, 5, Reinsertion::pure};
    if (name == "ganet-k") return {2.0, 3, Reinsertion::pure};
    throw config_error("unknown preset '" + name + "' (expected ganet-c|ganet-e|ganet-g|ganet-k)");
}

struct HistoryEntry {
    double best = 0.0;       // best fitness in the population after this generation
    double mean = 0.0;       // mean fitness of the population
    double best_ever = 0.0;  // best fitness seen in any generation so far
};

// Trained model: the winning genome, the candidate map and decoded training
// graph (with importance), the preprocessed training data, and the resolved
// configuration needed to classify new items.
struct GanetModel {
    Genome best_genome;
    MapMatrix map;
    ClassGraph train_graph;
    SpectrumDataset train_data;
    GaConfig ga;
    PreprocessConfig preprocess;
    std::vector<HistoryEntry> history;

    std::size_t resolved_q_test() const {
        return ga.importance.q_test > 0 ? ga.importance.q_test : ga.q;
    }
};

using Population = std::vector<Genome>;

inline Population init_population(const MapMatrix& map, const GaConfig& cfg, Rng& rng) {
    Population pop;
    pop.reserve(cfg.population_size);
    for (std::size_t i = 0; i < cfg.population_size; ++i) {
        Genome g(map.n, map.q);
        for (auto& bit : g.bits) bit = rng.next_bit();
        pop.push_back(std::move(g));
    }
    return pop;
}

inline Population init_population(const MapMatrix& map, const GaConfig& cfg) {
    Rng rng = make_stream(cfg.seed, Stream::ga);
    return init_population(map, cfg, rng);
}

// Caches the query-side work of the fitness function: similarities between
// every validation item and the training vertices do not depend on the
// genome, so they are ranked once. Evaluation then only decodes the genome,
// recomputes importance, and rescores the fixed link lists.
class FitnessEvaluator {
public:
    FitnessEvaluator(const MapMatrix& map, const SpectrumDataset& train,
                     const SpectrumDataset& validation, Metric metric,
                     const ImportanceConfig& importance, std::size_t q_test)
        : map_(&map), train_labels_(&train.labels), importance_cfg_(importance) {
        if (validation.n_samples() == 0) {
            throw config_error("fitness evaluation requires a non-empty validation set");
        }
        label_set_ = train.label_set();
        truth_ = validation.labels;
        links_.reserve(validation.n_samples());
        std::vector<double> sims(train.n_samples());
        for (const auto& row : validation.samples) {
            if (row.size() != train.n_wavenumbers()) {
                throw compute_error("validation rows do not match training dimensionality");
            }
            for (std::size_t j = 0; j < train.n_samples(); ++j) {
                sims[j] = pair_similarity(row, train.samples[j], metric);
            }
            links_.push_back(top_links(sims, q_test));
        }
    }

    // Validation accuracy of the decoded graph; stores it on the genome.
    double evaluate(Genome& genome) const {
        ClassGraph graph = decode(genome, *map_, *train_labels_);
        graph.importance = compute_importance(graph, importance_cfg_);
        std::size_t correct = 0;
        for (std::size_t v = 0; v < links_.size(); ++v) {
            const auto result = classify_links(links_[v], *train_labels_, graph.importance,
                                               importance_cfg_.gamma, label_set_);
            if (result.label == truth_[v]) ++correct;
        }
        const double fitness = static_cast<double>(correct) / static_cast<double>(links_.size());
        genome.fitness = fitness;
        return fitness;
    }

private:
    const MapMatrix* map_;
    const std::vector<std::string>* train_labels_;
    ImportanceConfig importance_cfg_;
    std::vector<std::string> label_set_;
    std::vector<std::string> truth_;
    std::vector<std::vector<LinkedVertex>> links_;
};

inline double evaluate_genome(Genome& genome, const MapMatrix& map, const SpectrumDataset& train,
                              const SpectrumDataset& validation, Metric metric,
                              const ImportanceConfig& importance) {
    const std::size_t q_test = importance.q_test > 0 ? importance.q_test : map.q;
    FitnessEvaluator evaluator(map, train, validation, metric, importance, q_test);
    return evaluator.evaluate(genome);
}

namespace detail {

inline double fitness_of(const Genome& g) {
    if (!g.fitness.has_value()) throw compute_error("genome has no fitness value");
    return *g.fitness;
}

} // namespace detail

// k uniform draws with replacement; returns the index of the fittest drawn
// individual, ties toward the earlier population index.
inline std::size_t select_tournament(const Population& pop, std::size_t k, Rng& rng) {
    if (pop.empty()) throw config_error("selection from empty population");
    std::size_t best = rng.next_index(pop.size());
    for (std::size_t t = 1; t < k; ++t) {
        const std::size_t candidate = rng.next_index(pop.size());
        const double fc = detail::fitness_of(pop[candidate]);
        const double fb = detail::fitness_of(pop[best]);
        if (fc > fb || (fc == fb && candidate < best)) best = candidate;
    }
    return best;
}

// Fitness-proportional draw; uniform fallback when total fitness is zero.
inline std::size_t select_roulette(const Population& pop, Rng& rng) {
    if (pop.empty()) throw config_error("selection from empty population");
    double total = 0.0;
    for (const auto& g : pop) {
        const double f = detail::fitness_of(g);
        if (f < 0.0) throw config_error("roulette selection requires non-negative fitness");
        total += f;
    }
    if (total <= 0.0) return rng.next_index(pop.size());
    const double u = rng.next_double() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        cum += *pop[i].fitness;
        if (u < cum) return i;
    }
    return pop.size() - 1;
}

inline std::size_t select_parent(const Population& pop, const GaConfig& cfg, Rng& rng) {
    return cfg.selection == Selection::tournament
               ? select_tournament(pop, cfg.tournament_size, rng)
               : select_roulette(pop, rng);
}

namespace detail {

inline void require_same_shape(const Genome& a, const Genome& b) {
    if (!a.same_shape(b.n, b.q)) throw config_error("crossover parents have different shapes");
}

} // namespace detail

// Children swap the flat bit segment [p1, p2); bits outside are unchanged.
inline std::pair<Genome, Genome> two_point_segment_swap(const Genome& a, const Genome& b,
                                                        std::size_t p1, std::size_t p2) {
    detail::require_same_shape(a, b);
    Genome c1 = a;
    Genome c2 = b;
    c1.fitness.reset();
    c2.fitness.reset();
    for (std::size_t t = p1; t < p2; ++t) std::swap(c1.bits[t], c2.bits[t]);
    return {std::move(c1), std::move(c2)};
}

inline std::pair<Genome, Genome> crossover_two_point(const Genome& a, const Genome& b, Rng& rng) {
    detail::require_same_shape(a, b);
    const std::size_t len = a.flat_size();
    std::size_t p1 = 0;
    std::size_t p2 = 0;
    do {
        p1 = rng.next_index(len + 1);
        p2 = rng.next_index(len + 1);
    } while (p1 == p2);
    if (p1 > p2) std::swap(p1, p2);
    return two_point_segment_swap(a, b, p1, p2);
}

// mask bit 1 copies from the first parent into child1 (child2 takes the
// complementary assignment).
inline std::pair<Genome, Genome> uniform_mask_mix(const Genome& a, const Genome& b,
                                                  const std::vector<std::uint8_t>& mask) {
    detail::require_same_shape(a, b);
    Genome c1 = a;
    Genome c2 = b;
    c1.fitness.reset();
    c2.fitness.reset();
    for (std::size_t t = 0; t < mask.size(); ++t) {
        if (!mask[t]) std::swap(c1.bits[t], c2.bits[t]);
    }
    return {std::move(c1), std::move(c2)};
}

inline std::pair<Genome, Genome> crossover_uniform(const Genome& a, const Genome& b, Rng& rng) {
    detail::require_same_shape(a, b);
    std::vector<std::uint8_t> mask(a.flat_size());
    for (auto& m : mask) m = rng.next_bit();
    return uniform_mask_mix(a, b, mask);
}

// Each bit flips independently with the given probability.
inline Genome mutate(const Genome& g, double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw config_error("mutation rate must lie in [0,1]");
    Genome out = g;
    out.fitness.reset();
    for (auto& bit : out.bits) {
        if (rng.next_bool(rate)) bit ^= 1;
    }
    return out;
}

// pure: generational replacement. ordered: elitist merge keeping the top
// population_size individuals of parents + offspring, ties resolved toward
// offspring, then by index.
inline Population reinsert(const Population& parents, const Population& offspring,
                           Reinsertion mode) {
    if (offspring.size() != parents.size()) {
        throw config_error("reinsertion requires equally sized parent and offspring populations");
    }
    if (mode == Reinsertion::pure) return offspring;

    struct Ranked {
        double fitness;
        int parent_tag;  // offspring first on ties
        std::size_t index;
        const Genome* genome;
    };
    std::vector<Ranked> merged;
    merged.reserve(parents.size() * 2);
    for (std::size_t i = 0; i < offspring.size(); ++i) {
        merged.push_back({detail::fitness_of(offspring[i]), 0, i, &offspring[i]});
    }
    for (std::size_t i = 0; i < parents.size(); ++i) {
        merged.push_back({detail::fitness_of(parents[i]), 1, i, &parents[i]});
    }
    std::sort(merged.begin(), merged.end(), [](const Ranked& a, const Ranked& b) {
        if (a.fitness != b.fitness) return a.fitness > b.fitness;
        if (a.parent_tag != b.parent_tag) return a.parent_tag < b.parent_tag;
        return a.index < b.index;
    });
    Population next;
    next.reserve(parents.size());
    for (std::size_t i = 0; i < parents.size(); ++i) next.push_back(*merged[i].genome);
    return next;
}

namespace detail {

inline std::size_t fittest_index(const Population& pop) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        if (fitness_of(pop[i]) > fitness_of(pop[best])) best = i;
    }
    return best;
}

inline HistoryEntry population_stats(const Population& pop, double best_ever) {
    double best = fitness_of(pop[0]);
    double sum = 0.0;
    for (const auto& g : pop) {
        const double f = fitness_of(g);
        best = std::max(best, f);
        sum += f;
    }
    return {best, sum / static_cast<double>(pop.size()), best_ever};
}

} // namespace detail

// Full optimization loop: init -> [select -> crossover -> mutate -> evaluate
// -> reinsert] x generations. The returned model carries the best genome seen
// in any generation, independent of the reinsertion mode. The RNG stream is
// consumed in a fixed order (selection draws, then crossover points/masks,
// then mutation), so a (seed, config, data) triple reproduces bit-identically.
inline GanetModel run_ganet(const SpectrumDataset& train, const SpectrumDataset& validation,
                            const GaConfig& cfg) {
    cfg.validate();
    if (train.wavenumbers != validation.wavenumbers) {
        throw input_error("train and validation wavenumber axes differ");
    }
    if (train.label_set() != validation.label_set()) {
        throw input_error("train and validation label sets differ");
    }

    const SimilarityMatrix sim = compute_similarity(train, cfg.metric);
    MapMatrix map = build_map_all(sim, train.labels, cfg.q);
    const std::size_t q_test = cfg.importance.q_test > 0 ? cfg.importance.q_test : cfg.q;
    const FitnessEvaluator evaluator(map, train, validation, cfg.metric, cfg.importance, q_test);

    const double mutation_rate = cfg.mutation_rate >= 0.0
                                     ? cfg.mutation_rate
                                     : 1.0 / static_cast<double>(map.n * map.q);

    Rng rng = make_stream(cfg.seed, Stream::ga);
    Population pop = init_population(map, cfg, rng);
    for (auto& g : pop) evaluator.evaluate(g);

    Genome best = pop[detail::fittest_index(pop)];
    std::vector<HistoryEntry> history;
    history.push_back(detail::population_stats(pop, *best.fitness));

    for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
        Population offspring;
        offspring.reserve(cfg.population_size);
        for (std::size_t pair = 0; pair < cfg.population_size / 2; ++pair) {
            const std::size_t ia = select_parent(pop, cfg, rng);
            const std::size_t ib = select_parent(pop, cfg, rng);
            Genome c1, c2;
            if (rng.next_bool(cfg.crossover_rate)) {
                auto children = cfg.crossover == Crossover::two_point
                                    ? crossover_two_point(pop[ia], pop[ib], rng)
                                    : crossover_uniform(pop[ia], pop[ib], rng);
                c1 = std::move(children.first);
                c2 = std::move(children.second);
            } else {
                c1 = pop[ia];
                c2 = pop[ib];
            }
            offspring.push_back(mutate(c1, mutation_rate, rng));
            offspring.push_back(mutate(c2, mutation_rate, rng));
        }
        for (auto& g : offspring) evaluator.evaluate(g);

        const std::size_t gen_best = detail::fittest_index(offspring);
        if (*offspring[gen_best].fitness > *best.fitness) best = offspring[gen_best];

        pop = reinsert(pop, offspring, cfg.reinsertion);
        history.push_back(detail::population_stats(pop, *best.fitness));
    }

    GanetModel model;
    model.best_genome = best;
    model.train_graph = decode(best, map, train.labels);
    model.train_graph.importance = compute_importance(model.train_graph, cfg.importance);
    model.map = std::move(map);
    model.train_data = train;
    model.ga = cfg;
    model.ga.mutation_rate = mutation_rate;
    model.ga.importance.q_test = q_test;
    model.history = std::move(history);
    return model;
}

// Classifies one already-preprocessed spectrum row against the model.
inline Classification classify(std::span<const double> query, const GanetModel& model) {
    return classify_item(query, model.train_data.samples, model.train_data.labels,
                         model.train_graph.importance, model.ga.metric,
                         model.ga.importance.gamma, model.resolved_q_test());
}

} // namespace ganet
