#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <ganet/ga.hpp>
#include <ganet/split.hpp>
#include <ganet/synthetic.hpp>

using namespace ganet;

namespace {

MapMatrix plain_map(std::size_t n, std::size_t q) {
    MapMatrix map;
    map.n = n;
    map.q = q;
    map.entries.assign(n * q, MapMatrix::empty_slot);
    return map;
}

// chi-square statistic for observed counts against expected probabilities
double chi_square(const std::vector<std::size_t>& observed, const std::vector<double>& expected_p,
                  std::size_t draws) {
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = expected_p[i] * static_cast<double>(draws);
        stat += (static_cast<double>(observed[i]) - e) * (static_cast<double>(observed[i]) - e) / e;
    }
    return stat;
}

Population fixed_fitness_population(const std::vector<double>& fitnesses) {
    Population pop;
    for (std::size_t i = 0; i < fitnesses.size(); ++i) {
        Genome g(2, 1);
        g.bits = {static_cast<std::uint8_t>(i & 1), static_cast<std::uint8_t>((i >> 1) & 1)};
        g.fitness = fitnesses[i];
        pop.push_back(g);
    }
    return pop;
}

// Small two-cluster dataset: subjects alternate classes, replicates jitter
// around the subject point.
SpectrumDataset cluster_dataset(std::size_t n_subjects, std::size_t replicates,
                                std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_subjects = n_subjects;
    spec.replicates_per_subject = replicates;
    spec.n_wavenumbers = 24;
    spec.class_separation = 2.0;
    spec.noise_sd = 0.08;
    spec.seed = seed;
    return generate_synthetic(spec);
}

} // namespace

TEST(Rng, StreamsAreDistinctAndReproducible) {
    Rng a = make_stream(42, Stream::ga);
    Rng b = make_stream(42, Stream::ga);
    Rng c = make_stream(42, Stream::split);
    const std::uint64_t a1 = a.next_u64();
    EXPECT_EQ(a1, b.next_u64());
    EXPECT_NE(a1, c.next_u64());

    Rng d(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = d.next_double();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        EXPECT_LT(d.next_index(17), 17u);
    }
    EXPECT_FALSE(d.next_bool(0.0));
    EXPECT_TRUE(d.next_bool(1.0));
}

TEST(InitPopulation, DeterministicShapeAndBalance) {
    const MapMatrix map = plain_map(93, 3);
    GaConfig cfg;
    cfg.population_size = 100;
    cfg.seed = 5;
    const Population a = init_population(map, cfg);
    const Population b = init_population(map, cfg);
    ASSERT_EQ(a.size(), 100u);
    std::size_t ones = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].flat_size(), 279u);
        EXPECT_EQ(a[i].bits, b[i].bits);
        for (const auto bit : a[i].bits) {
            ASSERT_LE(bit, 1);
            ones += bit;
            ++total;
        }
    }
    const double frac = static_cast<double>(ones) / static_cast<double>(total);
    EXPECT_GE(frac, 0.47);
    EXPECT_LE(frac, 0.53);
}

TEST(Evaluate, FullyConnectedClassScoresPerfectly) {
    // Train: tight class A cluster, far-away class B cluster. Validation
    // copies the A points, so their nearest links are all class A.
    SpectrumDataset train;
    train.wavenumbers = {1800.0, 1500.0, 900.0};
    train.samples = {{0.0, 0.1, 0.0}, {0.1, 0.0, 0.0}, {0.0, 0.0, 0.1},
                     {9.0, 9.1, 9.0}, {9.1, 9.0, 9.0}, {9.0, 9.0, 9.1}};
    train.labels = {"A", "A", "A", "B", "B", "B"};
    train.subject_ids = {"s1", "s2", "s3", "s4", "s5", "s6"};
    train.sample_ids = {"s1_r1", "s2_r1", "s3_r1", "s4_r1", "s5_r1", "s6_r1"};

    SpectrumDataset validation = train;
    validation.samples.resize(3);
    validation.labels.resize(3);
    validation.subject_ids.resize(3);
    validation.sample_ids = {"v1_r1", "v2_r1", "v3_r1"};

    const SimilarityMatrix sim = compute_similarity(train, Metric::euclidean);
    const MapMatrix map = build_map_all(sim, train.labels, 2);
    Genome ones(6, 2);
    std::fill(ones.bits.begin(), ones.bits.end(), std::uint8_t{1});
    ImportanceConfig icfg;
    const double fitness =
        evaluate_genome(ones, map, train, validation, Metric::euclidean, icfg);
    EXPECT_DOUBLE_EQ(fitness, 1.0);
    EXPECT_DOUBLE_EQ(*ones.fitness, 1.0);
}

TEST(Evaluate, ZeroGenomeMatchesUniformImportanceOracle) {
    const SpectrumDataset data = cluster_dataset(8, 2, 31);
    SpectrumDataset train = data;
    SpectrumDataset validation = data;
    // First 10 rows train, last 6 validate.
    auto shrink = [](SpectrumDataset& ds, std::size_t from, std::size_t to) {
        ds.samples = {ds.samples.begin() + from, ds.samples.begin() + to};
        ds.labels = {ds.labels.begin() + from, ds.labels.begin() + to};
        ds.subject_ids = {ds.subject_ids.begin() + from, ds.subject_ids.begin() + to};
        ds.sample_ids = {ds.sample_ids.begin() + from, ds.sample_ids.begin() + to};
    };
    shrink(train, 0, 10);
    shrink(validation, 10, 16);

    const SimilarityMatrix sim = compute_similarity(train, Metric::euclidean);
    const MapMatrix map = build_map_all(sim, train.labels, 3);
    Genome zeros(10, 3);
    ImportanceConfig icfg;
    const double fitness =
        evaluate_genome(zeros, map, train, validation, Metric::euclidean, icfg);

    // Oracle: uniform importance 1/10, gamma=1, q_test=3, literal score sums
    // with the documented tie rules (mean link similarity, then label order).
    std::size_t correct = 0;
    for (std::size_t v = 0; v < validation.n_samples(); ++v) {
        std::vector<double> sims(train.n_samples());
        for (std::size_t j = 0; j < train.n_samples(); ++j) {
            double d2 = 0.0;
            for (std::size_t t = 0; t < train.n_wavenumbers(); ++t) {
                const double diff = validation.samples[v][t] - train.samples[j][t];
                d2 += diff * diff;
            }
            sims[j] = 1.0 / (1.0 + std::sqrt(d2));
        }
        std::vector<std::size_t> order(train.n_samples());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (sims[a] != sims[b]) return sims[a] > sims[b];
            return a < b;
        });
        std::string want;
        double best_score = 0.0;
        double best_mean = 0.0;
        for (const std::string cls : {"ASD", "CTRL"}) {
            double score = 0.0;
            double sim_sum = 0.0;
            std::size_t links = 0;
            for (std::size_t r = 0; r < 3; ++r) {
                const std::size_t j = order[r];
                if (train.labels[j] != cls) continue;
                score += 0.1 * sims[j];
                sim_sum += sims[j];
                ++links;
            }
            const double mean = links > 0 ? sim_sum / static_cast<double>(links) : -1e300;
            if (want.empty() || score > best_score ||
                (score == best_score && mean > best_mean)) {
                want = cls;
                best_score = score;
                best_mean = mean;
            }
        }
        if (want == validation.labels[v]) ++correct;
    }
    EXPECT_DOUBLE_EQ(fitness,
                     static_cast<double>(correct) / static_cast<double>(validation.n_samples()));
}

TEST(Selection, TournamentEnumeratedProbabilities) {
    // k=2 over fitnesses {1,1,0}: winner index has pmf {5/9, 3/9, 1/9}
    // (uniform pair draws; equal fitness resolves to the lower index).
    const Population pop = fixed_fitness_population({1.0, 1.0, 0.0});
    Rng rng(101);
    const std::size_t draws = 10000;
    std::vector<std::size_t> counts(3, 0);
    for (std::size_t d = 0; d < draws; ++d) ++counts[select_tournament(pop, 2, rng)];
    const double stat = chi_square(counts, {5.0 / 9, 3.0 / 9, 1.0 / 9}, draws);
    EXPECT_LT(stat, 9.21);  // df=2, p=0.01
}

TEST(Selection, TournamentSizeOneIsUniform) {
    const Population pop = fixed_fitness_population({0.5, 0.5, 0.5});
    Rng rng(55);
    const std::size_t draws = 10000;
    std::vector<std::size_t> counts(3, 0);
    for (std::size_t d = 0; d < draws; ++d) ++counts[select_tournament(pop, 1, rng)];
    const double stat = chi_square(counts, {1.0 / 3, 1.0 / 3, 1.0 / 3}, draws);
    EXPECT_LT(stat, 9.21);
}

TEST(Selection, RouletteProportionalAndFallback) {
    Rng rng(77);
    const std::size_t draws = 10000;

    const Population zero_mass = fixed_fitness_population({1.0, 0.0});
    for (std::size_t d = 0; d < 1000; ++d) EXPECT_EQ(select_roulette(zero_mass, rng), 0u);

    const Population biased = fixed_fitness_population({0.75, 0.25});
    std::vector<std::size_t> counts(2, 0);
    for (std::size_t d = 0; d < draws; ++d) ++counts[select_roulette(biased, rng)];
    EXPECT_LT(chi_square(counts, {0.75, 0.25}, draws), 6.63);  // df=1, p=0.01

    const Population flat = fixed_fitness_population({0.0, 0.0, 0.0});
    std::vector<std::size_t> uniform_counts(3, 0);
    for (std::size_t d = 0; d < draws; ++d) ++uniform_counts[select_roulette(flat, rng)];
    EXPECT_LT(chi_square(uniform_counts, {1.0 / 3, 1.0 / 3, 1.0 / 3}, draws), 9.21);
}

TEST(CrossoverTwoPoint, HandTracedSegmentSwap) {
    Genome zeros(4, 2);
    Genome ones(4, 2);
    std::fill(ones.bits.begin(), ones.bits.end(), std::uint8_t{1});
    const auto [c1, c2] = two_point_segment_swap(zeros, ones, 2, 5);
    EXPECT_EQ(c1.bits, (std::vector<std::uint8_t>{0, 0, 1, 1, 1, 0, 0, 0}));
    EXPECT_EQ(c2.bits, (std::vector<std::uint8_t>{1, 1, 0, 0, 0, 1, 1, 1}));
    EXPECT_FALSE(c1.fitness.has_value());
}

TEST(CrossoverTwoPoint, IdenticalParentsAndConservation) {
    Rng rng(9);
    Genome a(6, 3);
    for (auto& bit : a.bits) bit = rng.next_bit();
    const auto [s1, s2] = crossover_two_point(a, a, rng);
    EXPECT_EQ(s1.bits, a.bits);
    EXPECT_EQ(s2.bits, a.bits);

    for (int trial = 0; trial < 200; ++trial) {
        Genome x(6, 3), y(6, 3);
        for (std::size_t f = 0; f < x.bits.size(); ++f) {
            x.bits[f] = rng.next_bit();
            y.bits[f] = rng.next_bit();
        }
        const auto [c1, c2] = crossover_two_point(x, y, rng);
        for (std::size_t f = 0; f < x.bits.size(); ++f) {
            EXPECT_EQ(c1.bits[f] + c2.bits[f], x.bits[f] + y.bits[f]);
        }
    }
}

TEST(CrossoverUniform, MaskSemantics) {
    Rng rng(10);
    Genome a(4, 2), b(4, 2);
    for (std::size_t f = 0; f < a.bits.size(); ++f) {
        a.bits[f] = rng.next_bit();
        b.bits[f] = 1 - a.bits[f];  // complementary parents
    }
    const auto [c1, c2] = crossover_uniform(a, b, rng);
    for (std::size_t f = 0; f < a.bits.size(); ++f) EXPECT_EQ(c1.bits[f] ^ c2.bits[f], 1);

    const std::vector<std::uint8_t> all_ones_mask(a.flat_size(), 1);
    const auto [m1, m2] = uniform_mask_mix(a, b, all_ones_mask);
    EXPECT_EQ(m1.bits, a.bits);
    EXPECT_EQ(m2.bits, b.bits);

    const auto [i1, i2] = crossover_uniform(a, a, rng);
    EXPECT_EQ(i1.bits, a.bits);
    EXPECT_EQ(i2.bits, a.bits);
}

TEST(Mutate, RateExtremesAndBinomialFraction) {
    Rng rng(12);
    Genome g(100, 100);  // 10^4 bits
    for (auto& bit : g.bits) bit = rng.next_bit();

    const Genome same = mutate(g, 0.0, rng);
    EXPECT_EQ(same.bits, g.bits);

    const Genome flipped = mutate(g, 1.0, rng);
    for (std::size_t f = 0; f < g.bits.size(); ++f) EXPECT_EQ(flipped.bits[f], 1 - g.bits[f]);

    const Genome half = mutate(g, 0.5, rng);
    std::size_t diffs = 0;
    for (std::size_t f = 0; f < g.bits.size(); ++f) diffs += half.bits[f] != g.bits[f];
    const double frac = static_cast<double>(diffs) / static_cast<double>(g.bits.size());
    EXPECT_GE(frac, 0.47);
    EXPECT_LE(frac, 0.53);

    EXPECT_THROW(mutate(g, 1.5, rng), config_error);
}

TEST(Reinsert, PureAndOrderedRules) {
    const Population parents = fixed_fitness_population({0.9, 0.1});
    const Population offspring = fixed_fitness_population({0.5, 0.4});

    const Population pure = reinsert(parents, offspring, Reinsertion::pure);
    EXPECT_DOUBLE_EQ(*pure[0].fitness, 0.5);
    EXPECT_DOUBLE_EQ(*pure[1].fitness, 0.4);

    const Population ordered = reinsert(parents, offspring, Reinsertion::ordered);
    EXPECT_DOUBLE_EQ(*ordered[0].fitness, 0.9);
    EXPECT_DOUBLE_EQ(*ordered[1].fitness, 0.5);

    const Population weak = fixed_fitness_population({0.05, 0.02});
    const Population keep = reinsert(parents, weak, Reinsertion::ordered);
    EXPECT_DOUBLE_EQ(*keep[0].fitness, 0.9);
    EXPECT_DOUBLE_EQ(*keep[1].fitness, 0.1);
}

TEST(Reinsert, OrderedTiesPreferOffspring) {
    Population parents = fixed_fitness_population({0.5, 0.3});
    Population offspring = fixed_fitness_population({0.5, 0.2});
    parents[0].bits = {0, 0};
    offspring[0].bits = {1, 1};
    const Population next = reinsert(parents, offspring, Reinsertion::ordered);
    EXPECT_EQ(next[0].bits, (std::vector<std::uint8_t>{1, 1}));  // offspring first on tie
    EXPECT_DOUBLE_EQ(*next[1].fitness, 0.5);
}

TEST(RunGanet, ZeroGenerationsReturnsBestOfInit) {
    const SpectrumDataset data = cluster_dataset(10, 3, 17);
    SplitSpec split;
    split.seed = 17;
    const SplitResult parts = split_by_subject(data, split);

    GaConfig cfg;
    cfg.population_size = 12;
    cfg.generations = 0;
    cfg.q = 2;
    cfg.seed = 17;
    const GanetModel model = run_ganet(parts.train, parts.validation, cfg);
    ASSERT_EQ(model.history.size(), 1u);

    const SimilarityMatrix sim = compute_similarity(parts.train, cfg.metric);
    const MapMatrix map = build_map_all(sim, parts.train.labels, cfg.q);
    Population manual = init_population(map, cfg);
    double best = -1.0;
    std::vector<std::uint8_t> best_bits;
    for (auto& g : manual) {
        const double f =
            evaluate_genome(g, map, parts.train, parts.validation, cfg.metric, cfg.importance);
        if (f > best) {
            best = f;
            best_bits = g.bits;
        }
    }
    EXPECT_EQ(model.best_genome.bits, best_bits);
    EXPECT_DOUBLE_EQ(*model.best_genome.fitness, best);
    EXPECT_DOUBLE_EQ(model.history[0].best_ever, best);
}

TEST(RunGanet, DeterministicPerSeedAndMonotoneBestEver) {
    const SpectrumDataset data = cluster_dataset(10, 3, 23);
    SplitSpec split;
    split.seed = 23;
    const SplitResult parts = split_by_subject(data, split);

    for (const char* preset_name : {"ganet-c", "ganet-e"}) {
        const GanetPreset preset = ganet_preset(preset_name);
        GaConfig cfg;
        cfg.population_size = 10;
        cfg.generations = 8;
        cfg.q = preset.q;
        cfg.importance.gamma = preset.gamma;
        cfg.reinsertion = preset.reinsertion;
        cfg.seed = 23;

        const GanetModel a = run_ganet(parts.train, parts.validation, cfg);
        const GanetModel b = run_ganet(parts.train, parts.validation, cfg);
        ASSERT_EQ(a.history.size(), 9u);
        EXPECT_EQ(a.best_genome.bits, b.best_genome.bits);
        for (std::size_t g = 0; g < a.history.size(); ++g) {
            EXPECT_DOUBLE_EQ(a.history[g].best, b.history[g].best);
            EXPECT_DOUBLE_EQ(a.history[g].mean, b.history[g].mean);
            if (g > 0) EXPECT_GE(a.history[g].best_ever, a.history[g - 1].best_ever);
            if (g > 0 && cfg.reinsertion == Reinsertion::ordered) {
                EXPECT_GE(a.history[g].best, a.history[g - 1].best);
            }
        }
        EXPECT_GE(a.history.back().best_ever, a.history.front().best);

        // The stored fitness is the re-evaluated validation accuracy.
        Genome best = a.best_genome;
        const double refit = evaluate_genome(best, a.map, a.train_data, parts.validation,
                                             a.ga.metric, a.ga.importance);
        EXPECT_DOUBLE_EQ(refit, *a.best_genome.fitness);
    }
}

TEST(RunGanet, RejectsIncompatibleSplits) {
    const SpectrumDataset data = cluster_dataset(8, 2, 29);
    SplitSpec split;
    split.seed = 29;
    const SplitResult parts = split_by_subject(data, split);

    GaConfig cfg;
    cfg.population_size = 4;
    cfg.generations = 1;
    cfg.q = 1;

    SpectrumDataset bad_axis = parts.validation;
    bad_axis.wavenumbers[0] += 1.0;
    EXPECT_THROW(run_ganet(parts.train, bad_axis, cfg), input_error);

    SpectrumDataset bad_labels = parts.validation;
    for (auto& l : bad_labels.labels) l = "ASD";
    EXPECT_THROW(run_ganet(parts.train, bad_labels, cfg), input_error);

    GaConfig odd = cfg;
    odd.population_size = 5;
    EXPECT_THROW(odd.validate(), config_error);
}

TEST(GaConfig, PresetTableRows) {
    const GanetPreset c = ganet_preset("ganet-c");
    EXPECT_DOUBLE_EQ(c.gamma, 1.0);
    EXPECT_EQ(c.q, 3u);
    EXPECT_EQ(c.reinsertion, Reinsertion::pure);

    const GanetPreset e = ganet_preset("ganet-e");
    EXPECT_DOUBLE_EQ(e.gamma, 1.0);
    EXPECT_EQ(e.q, 5u);
    EXPECT_EQ(e.reinsertion, Reinsertion::ordered);

    const GanetPreset g = ganet_preset("ganet-g");
    EXPECT_DOUBLE_EQ(g.gamma, 1.0);
    EXPECT_EQ(g.q, 5u);
    EXPECT_EQ(g.reinsertion, Reinsertion::pure);

    const GanetPreset k = ganet_preset("ganet-k");
    EXPECT_DOUBLE_EQ(k.gamma, 2.0);
    EXPECT_EQ(k.q, 3u);
    EXPECT_EQ(k.reinsertion, Reinsertion::pure);

    EXPECT_THROW(ganet_preset("ganet-z"), config_error);
}
