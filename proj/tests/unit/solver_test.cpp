#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "eax/solver.hpp"
#include "oracles.hpp"

namespace {

using eax::ABCycle;
using eax::ESet;
using eax::Instance;
using eax::RatioMask;
using eax::Rng;
using eax::SolverConfig;
using eax::Tour;
using eax::Variant;
using eax::Vertex;

Instance circle(int n) {
    std::vector<eax::Point> pts;
    for (int i = 0; i < n; ++i) {
        const double t = 2 * std::numbers::pi * ((i * 5) % n) / n;
        pts.push_back({1000 * std::cos(t), 1000 * std::sin(t)});
    }
    return Instance("circle", std::move(pts));
}

SolverConfig small_config(Variant v, std::uint64_t seed) {
    SolverConfig cfg;
    cfg.variant = v;
    cfg.seed = seed;
    cfg.population_size = 30;
    cfg.n_children_stage1 = 10;
    cfg.n_children_stage2 = 5;
    cfg.stagnation_generations = 10;
    cfg.cutoff = std::chrono::duration<double>(30.0);
    return cfg;
}

TEST(Variant, NamesRoundTrip) {
    for (auto v : {Variant::Vanilla, Variant::OnlyComplete, Variant::RatioBased}) {
        EXPECT_EQ(eax::parse_variant(eax::to_string(v)), v);
    }
    EXPECT_EQ(eax::parse_variant("only-complete"), Variant::OnlyComplete);
    EXPECT_FALSE(eax::parse_variant("greedy"));
}

TEST(RatioMask, DefaultRule) {
    const RatioMask m;
    EXPECT_TRUE(m.accepts(2, 1));
    EXPECT_TRUE(m.accepts(40, 1));
    EXPECT_TRUE(m.accepts(4, 1));
    EXPECT_FALSE(m.accepts(4, 2));
    EXPECT_FALSE(m.accepts(6, 2));
    EXPECT_TRUE(m.accepts(8, 2));
    EXPECT_FALSE(m.accepts(8, 3));
    EXPECT_TRUE(m.accepts(16, 4));
    EXPECT_FALSE(m.accepts(16, 5));
}

TEST(RatioMask, OverridesAndJson) {
    RatioMask m;
    m.set(4, 2, true);
    m.set(8, 2, false);
    EXPECT_TRUE(m.accepts(4, 2));
    EXPECT_FALSE(m.accepts(8, 2));
    EXPECT_THROW(m.set(6, 1, false), std::invalid_argument);
    const auto back = RatioMask::from_json(m.to_json());
    EXPECT_EQ(back.entries(), m.entries());
    EXPECT_THROW(RatioMask::from_json("[1]"), std::invalid_argument);
    EXPECT_THROW(RatioMask::from_json(R"({"4-2": true})"), std::invalid_argument);
    EXPECT_THROW(RatioMask::from_json(R"({"4,2": 1})"), std::invalid_argument);
    EXPECT_THROW(RatioMask::from_json(R"({"4,1": false})"), std::invalid_argument);
}

TEST(RatioMask, FromHistogramKeepsNetGainTypes) {
    eax::TypeHistogram h;
    auto rec = [](int p, int s, int gc, int lc) {
        eax::OffspringRecord r;
        r.portals = p;
        r.subtours = s;
        r.accepted = true;
        r.optimal_edges = eax::OptimalEdgeCounts{gc, lc, 0, 0};
        return r;
    };
    h.record(rec(8, 2, 3, 1));
    h.record(rec(8, 3, 1, 4));
    h.record(rec(4, 1, 0, 2));
    const auto m = RatioMask::from_histogram(h);
    EXPECT_TRUE(m.accepts(8, 2));
    EXPECT_FALSE(m.accepts(8, 3));
    EXPECT_TRUE(m.accepts(4, 1));
}

TEST(SolverConfig, ValidateRejectsNonPositive) {
    SolverConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.population_size = 1;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.n_children_stage1 = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.cutoff = std::chrono::duration<double>(0);
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(StageOne, IdenticalParentsSignalNoOffspring) {
    const auto inst = eax::generate_rue(20, 1000, 1);
    const auto t = eax::greedy_2opt_init(inst, 1);
    Rng rng(1);
    eax::ValidityChecker ck;
    const auto out = eax::stage1_offspring(inst, t, t, SolverConfig{}, rng, ck);
    EXPECT_TRUE(out.no_offspring);
    EXPECT_FALSE(out.best_child);
    const auto two = eax::stage2_offspring(inst, t, t, SolverConfig{}, rng);
    EXPECT_TRUE(two.no_offspring);
}

// Replays the generator's use of the stream: one decomposition, then one
// shuffle of the cycle order.
TEST(StageOne, RecordsMatchSetAlgebraReplay) {
    std::mt19937_64 gen(2);
    for (auto variant : {Variant::Vanilla, Variant::OnlyComplete, Variant::RatioBased}) {
        for (int rep = 0; rep < 150; ++rep) {
            const auto inst = eax::generate_rue(64, 100000, gen());
            const auto [oa, ob] = oracle::random_parents(inst, gen);
            const Tour a(inst, oa), b(inst, ob);
            SolverConfig cfg;
            cfg.variant = variant;
            cfg.n_children_stage1 = 1 + static_cast<int>(gen() % 8);
            const std::uint64_t seed = gen();

            Rng replay(seed);
            const auto cycles = eax::trace_ab_cycles(eax::UnionGraph(a, b), replay);
            std::vector<int> order(cycles.size());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), replay);

            Rng rng(seed);
            eax::ValidityChecker ck;
            const auto out = eax::stage1_offspring(inst, a, b, cfg, rng, ck);
            if (cycles.empty()) {
                EXPECT_TRUE(out.no_offspring);
                continue;
            }
            int accepted = 0;
            eax::Length best = 0;
            int best_idx = -1;
            ASSERT_LE(out.records.size(), cycles.size());
            for (std::size_t i = 0; i < out.records.size(); ++i) {
                const auto& rec = out.records[i];
                const ABCycle& c = cycles[order[i]];
                const auto edges = oracle::offspring_edges(a, {&c});
                const int truth = oracle::component_count(64, edges);
                EXPECT_EQ(rec.portals, static_cast<int>(c.portals().size()));
                EXPECT_EQ(rec.subtours, truth);
                EXPECT_LE(rec.subtours, std::max(1, rec.portals / 2));
                switch (variant) {
                    case Variant::Vanilla:
                        EXPECT_TRUE(rec.accepted);
                        break;
                    case Variant::OnlyComplete:
                        EXPECT_EQ(rec.accepted, truth == 1);
                        EXPECT_FALSE(rec.repaired);
                        break;
                    case Variant::RatioBased:
                        EXPECT_EQ(rec.accepted, RatioMask::default_rule(rec.portals, rec.subtours));
                        break;
                }
                if (!rec.accepted) continue;
                ++accepted;
                EXPECT_EQ(rec.repaired, truth > 1);
                if (truth == 1) {
                    eax::Length len = 0;
                    for (const auto& e : edges) len += inst.distance(e.u, e.v);
                    EXPECT_EQ(rec.length, len);
                }
                if (best_idx < 0 || rec.length < best) {
                    best = rec.length;
                    best_idx = static_cast<int>(i);
                }
            }
            EXPECT_LE(accepted, cfg.n_children_stage1);
            EXPECT_EQ(out.best_record, best_idx);
            if (best_idx >= 0) {
                ASSERT_TRUE(out.best_child);
                EXPECT_EQ(out.best_child->length(), best);
                EXPECT_EQ(out.records[best_idx].selected, best < a.length());
                if (!out.records[best_idx].repaired) {
                    const auto edges = oracle::offspring_edges(a, {&cycles[order[best_idx]]});
                    EXPECT_EQ(oracle::edge_set(*out.best_child), std::set<eax::EdgeKey>(edges.begin(), edges.end()));
                }
            }
        }
    }
}

TEST(StageTwo, SearchBoundsAndBestSeenMonotone) {
    std::mt19937_64 gen(3);
    int searches = 0;
    for (int rep = 0; rep < 400; ++rep) {
        const auto inst = eax::generate_rue(64, 100000, gen());
        const auto [oa, ob] = oracle::random_parents(inst, gen);
        const Tour a(inst, oa), b(inst, ob);
        const auto cycles = eax::trace_ab_cycles(eax::UnionGraph(a, b), gen());
        if (cycles.empty()) continue;
        const std::uint64_t seed = gen();
        Rng peek(seed);
        const int start = std::uniform_int_distribution<int>(0, static_cast<int>(cycles.size()) - 1)(peek);
        const int start_c = static_cast<int>(cycles[start].portals().size());

        Rng rng(seed);
        const auto s = eax::stage2_eset(cycles, 64, rng);
        ++searches;
        EXPECT_LE(s.iterations, eax::StageTwoSearcher::kMaxIterations);
        EXPECT_LE(s.combined_portals, start_c);
        EXPECT_EQ(s.combined_portals, s.eset.combined_portal_count());
        EXPECT_FALSE(s.eset.empty());
        if (start_c <= 2) {
            EXPECT_EQ(s.iterations, 0);
        }
        std::set<const ABCycle*> uniq(s.eset.cycles.begin(), s.eset.cycles.end());
        EXPECT_EQ(uniq.size(), s.eset.cycles.size());
        // The E-set applies cleanly and respects m <= #C / 2.
        const int m = eax::count_subtours(eax::apply_eset(a, b, s.eset));
        if (s.combined_portals > 0) {
            EXPECT_LE(m, s.combined_portals / 2);
        }
    }
    EXPECT_GT(searches, 300);
}

TEST(StageTwo, TwoPortalStartReturnsImmediately) {
    std::mt19937_64 gen(4);
    int seen = 0;
    for (int rep = 0; rep < 3000 && seen < 30; ++rep) {
        const auto inst = eax::generate_rue(16, 10000, gen());
        const auto [oa, ob] = oracle::random_parents(inst, gen);
        const Tour a(inst, oa), b(inst, ob);
        const auto cycles = eax::trace_ab_cycles(eax::UnionGraph(a, b), gen());
        for (std::size_t i = 0; i < cycles.size(); ++i) {
            if (cycles[i].portals().size() != 2) continue;
            ++seen;
            const std::span<const ABCycle> one(&cycles[i], 1);
            Rng rng(1);
            const auto s = eax::stage2_eset(one, 16, rng);
            EXPECT_EQ(s.iterations, 0);
            EXPECT_EQ(s.combined_portals, 2);
        }
    }
    EXPECT_GT(seen, 0);
}

TEST(StageTwo, OffspringAreValidTours) {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 50; ++rep) {
        const auto inst = eax::generate_rue(80, 100000, gen());
        const Tour a = eax::greedy_2opt_init(inst, gen());
        const Tour b = eax::greedy_2opt_init(inst, gen());
        SolverConfig cfg;
        Rng rng(gen());
        eax::TimingSample times;
        const auto out = eax::stage2_offspring(inst, a, b, cfg, rng, &times);
        if (out.no_offspring) continue;
        EXPECT_EQ(out.offspring, cfg.n_children_stage2);
        EXPECT_EQ(static_cast<int>(times.count()), out.repairs);
        ASSERT_TRUE(out.best_child);
        EXPECT_EQ(out.best_child->length(), oracle::order_length(inst, out.best_child->order()));
    }
}

TEST(Evolve, CircleOptimumForEveryVariant) {
    const auto inst = circle(8);
    const auto [opt, order] = oracle::brute_force_optimum(inst);
    for (auto v : {Variant::Vanilla, Variant::OnlyComplete, Variant::RatioBased}) {
        auto cfg = small_config(v, 3);
        cfg.target = opt;
        const auto r = eax::evolve(inst, cfg);
        EXPECT_TRUE(r.target_hit);
        EXPECT_EQ(r.best.length(), opt);
        EXPECT_EQ(r.termination, "target");
    }
}

TEST(Evolve, DeterministicForFixedSeed) {
    const auto inst = eax::generate_rue(150, 100000, 5);
    for (auto v : {Variant::Vanilla, Variant::OnlyComplete, Variant::RatioBased}) {
        auto cfg = small_config(v, 11);
        cfg.max_generations = 40;
        std::vector<eax::Length> trace_a, trace_b;
        const auto x = eax::evolve(inst, cfg, [&](const eax::GenerationReport& g) { trace_a.push_back(g.best); });
        const auto y = eax::evolve(inst, cfg, [&](const eax::GenerationReport& g) { trace_b.push_back(g.best); });
        EXPECT_TRUE(x.best == y.best);
        EXPECT_EQ(x.generations, y.generations);
        EXPECT_EQ(x.restarts, y.restarts);
        EXPECT_EQ(x.stage1_attempts, y.stage1_attempts);
        EXPECT_EQ(x.stage2_repairs, y.stage2_repairs);
        EXPECT_EQ(trace_a, trace_b);
    }
}

TEST(Evolve, ElitistWithinEpochsAndConsistentCounters) {
    const auto inst = eax::generate_rue(120, 100000, 6);
    for (auto v : {Variant::Vanilla, Variant::OnlyComplete, Variant::RatioBased}) {
        auto cfg = small_config(v, 2);
        cfg.max_generations = 120;
        std::vector<eax::GenerationReport> reports;
        const auto r = eax::evolve(inst, cfg, [&](const eax::GenerationReport& g) { reports.push_back(g); });
        ASSERT_EQ(static_cast<std::int64_t>(reports.size()), r.generations);
        EXPECT_EQ(r.termination, "max_generations");
        for (std::size_t i = 1; i < reports.size(); ++i) {
            if (reports[i].restart == reports[i - 1].restart) {
                EXPECT_LE(reports[i].best, reports[i - 1].best);
            }
            EXPECT_LE(reports[i].selected, cfg.population_size);
        }
        EXPECT_EQ(r.histogram.total_attempts(), r.stage1_attempts);
        for (const auto& [key, cell] : r.histogram.cells()) EXPECT_LE(key.second, std::max(1, key.first / 2));
        if (v == Variant::OnlyComplete) {
            EXPECT_EQ(r.stage1_repairs, 0);
        }
        if (v == Variant::RatioBased) {
            for (const auto& [key, cell] : r.histogram.cells()) {
                if (!RatioMask::default_rule(key.first, key.second)) {
                    EXPECT_EQ(cell.accepted, 0);
                }
            }
        }
        EXPECT_EQ(r.best.length(), oracle::order_length(inst, r.best.order()));
        std::int64_t stage2 = 0;
        for (const auto& g : reports) {
            if (g.stage == 2) ++stage2;
        }
        if (v == Variant::Vanilla) {
            EXPECT_GT(stage2, 0);
        }
    }
}

TEST(Evolve, TerminatesOnConvergenceWithoutRestart) {
    const auto inst = eax::generate_rue(40, 100000, 7);
    auto cfg = small_config(Variant::Vanilla, 1);
    cfg.restart = false;
    const auto r = eax::evolve(inst, cfg);
    EXPECT_EQ(r.termination, "converged");
    EXPECT_EQ(r.restarts, 0);
    EXPECT_FALSE(r.timed_out);
}

TEST(Evolve, CutoffMarksTimeout) {
    const auto inst = eax::generate_rue(2000, 1000000, 8);
    SolverConfig cfg;
    cfg.population_size = 10;
    cfg.cutoff = std::chrono::duration<double>(0.3);
    const auto r = eax::evolve(inst, cfg);
    EXPECT_TRUE(r.timed_out);
    EXPECT_EQ(r.termination, "cutoff");
    EXPECT_FALSE(r.target_hit);
}

}  // namespace
