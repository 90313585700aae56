#include "eax/solver.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

#include "eax/repair.hpp"
#include "json.hpp"

namespace eax {

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::Vanilla:
            return "vanilla";
        case Variant::OnlyComplete:
            return "only_complete";
        case Variant::RatioBased:
            return "ratio_based";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '-', '_');
    if (s == "vanilla") return Variant::Vanilla;
    if (s == "only_complete") return Variant::OnlyComplete;
    if (s == "ratio_based") return Variant::RatioBased;
    return std::nullopt;
}

bool RatioMask::default_rule(int portals, int subtours) {
    return subtours == 1 || subtours <= std::max(1, portals / 4);
}

bool RatioMask::accepts(int portals, int subtours) const {
    if (const auto it = entries_.find({portals, subtours}); it != entries_.end()) return it->second;
    return default_rule(portals, subtours);
}

void RatioMask::set(int portals, int subtours, bool accept) {
    if (subtours == 1 && !accept) {
        throw std::invalid_argument("ratio mask must accept single-subtour AB-cycles");
    }
    entries_[{portals, subtours}] = accept;
}

RatioMask RatioMask::from_json(std::string_view text) {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_object()) throw std::invalid_argument("ratio mask must be a JSON object");
    RatioMask mask;
    for (const auto& [key, value] : doc.items()) {
        const auto comma = key.find(',');
        int p = 0;
        int s = 0;
        const bool ok = comma != std::string::npos &&
                        std::from_chars(key.data(), key.data() + comma, p).ec == std::errc{} &&
                        std::from_chars(key.data() + comma + 1, key.data() + key.size(), s).ec == std::errc{};
        if (!ok || !value.is_boolean()) {
            throw std::invalid_argument("ratio mask entry `" + key + "` must be \"portals,subtours\": bool");
        }
        mask.set(p, s, value.get<bool>());
    }
    return mask;
}

std::string RatioMask::to_json() const {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [key, accept] : entries_) {
        doc[std::to_string(key.first) + "," + std::to_string(key.second)] = accept;
    }
    return doc.dump(2);
}

RatioMask RatioMask::from_histogram(const TypeHistogram& histogram) {
    RatioMask mask;
    for (const auto& [key, cell] : histogram.cells()) {
        if (cell.instrumented == 0) continue;
        const auto gained = cell.opt_gained_cycle + cell.opt_gained_repair;
        const auto lost = cell.opt_lost_cycle + cell.opt_lost_repair;
        mask.set(key.first, key.second, key.second == 1 || gained > lost);
    }
    return mask;
}

void SolverConfig::validate() const {
    if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (n_children_stage1 < 1 || n_children_stage2 < 1) {
        throw std::invalid_argument("offspring counts must be positive");
    }
    if (stagnation_generations < 1) throw std::invalid_argument("stagnation_generations must be positive");
    if (neighbor_k < 1) throw std::invalid_argument("neighbor_k must be positive");
    if (tabu_tenure < 0) throw std::invalid_argument("tabu_tenure must be nonnegative");
    if (cutoff.count() <= 0) throw std::invalid_argument("cutoff must be positive");
}

StageOneOutcome stage1_offspring(const Instance& inst, const Tour& a, const Tour& b, const SolverConfig& cfg,
                                 Rng& rng, ValidityChecker& checker, const std::optional<Tour>& optimal) {
    StageOneOutcome out;
    const UnionGraph g(a, b);
    if (g.empty()) {
        out.no_offspring = true;
        return out;
    }
    const auto cycles = trace_ab_cycles(g, rng);
    std::vector<int> order(cycles.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    const bool instrument = cfg.instrument && optimal.has_value();
    int children = 0;
    int best_cycle = -1;
    Length best_length = 0;

    for (const int idx : order) {
        if (children >= cfg.n_children_stage1) break;
        const ESet e(cycles[idx]);
        OffspringRecord rec;

        const auto t0 = std::chrono::steady_clock::now();
        const auto verdict = checker.check(a, b, e);
        rec.check_time = std::chrono::steady_clock::now() - t0;
        rec.portals = checker.last_profile().portal_count();
        rec.subtours = verdict.subtour_count;

        switch (cfg.variant) {
            case Variant::Vanilla:
                rec.accepted = true;
                break;
            case Variant::OnlyComplete:
                rec.accepted = verdict.is_valid;
                break;
            case Variant::RatioBased:
                rec.accepted = cfg.ratio_mask.accepts(rec.portals, rec.subtours);
                break;
        }
        if (!rec.accepted) {
            out.records.push_back(rec);
            continue;
        }
        ++children;

        std::optional<Tour> repaired;
        if (verdict.is_valid) {
            rec.length = a.length() + e.gain_delta(inst);
            if (instrument) rec.optimal_edges = optimal_edge_counts(*optimal, e, nullptr);
        } else {
            auto outcome = repair(inst, apply_eset(a, b, e));
            rec.repaired = true;
            rec.repair_time = outcome.elapsed;
            rec.length = outcome.tour.length();
            if (instrument) rec.optimal_edges = optimal_edge_counts(*optimal, e, &outcome);
            repaired = std::move(outcome.tour);
        }

        if (out.best_record < 0 || rec.length < best_length) {
            best_length = rec.length;
            out.best_record = static_cast<int>(out.records.size());
            best_cycle = idx;
            out.best_child = std::move(repaired);
        }
        out.records.push_back(rec);
    }

    if (out.best_record >= 0 && !out.best_child) {
        out.best_child = tour_from_structure(inst, apply_eset(a, b, ESet(cycles[best_cycle])));
    }
    if (out.best_record >= 0 && best_length < a.length()) out.records[out.best_record].selected = true;
    return out;
}

StageTwoSearcher::StageTwoSearcher(std::span<const ABCycle> pool, int dimension, int tabu_tenure)
    : pool_(pool), tenure_(tabu_tenure), cycles_at_(dimension, {-1, -1}), degree_(dimension, 0) {
    members_.resize(pool.size());
    for (std::size_t c = 0; c < pool.size(); ++c) {
        auto chain = pool[c].chain();
        std::sort(chain.begin(), chain.end());
        auto& m = members_[c];
        for (std::size_t i = 0; i < chain.size();) {
            std::size_t j = i;
            while (j < chain.size() && chain[j] == chain[i]) ++j;
            m.emplace_back(chain[i], static_cast<int>(j - i));
            auto& at = cycles_at_[chain[i]];
            (at[0] < 0 ? at[0] : at[1]) = static_cast<int>(c);
            i = j;
        }
    }
}

int StageTwoSearcher::toggle_delta(int cycle, bool adding) const {
    int delta = 0;
    for (const auto& [v, m] : members_[cycle]) {
        const int before = degree_[v];
        const int after = adding ? before + m : before - m;
        delta += (after == 1) - (before == 1);
    }
    return delta;
}

void StageTwoSearcher::toggle(int cycle) {
    const bool adding = !in_set_[cycle];
    c_count_ += toggle_delta(cycle, adding);
    for (const auto& [v, m] : members_[cycle]) degree_[v] = adding ? degree_[v] + m : degree_[v] - m;
    in_set_[cycle] = adding;
    set_size_ += adding ? 1 : -1;
}

StageTwoSearch StageTwoSearcher::run(Rng& rng) {
    const int pool_size = static_cast<int>(pool_.size());
    std::fill(degree_.begin(), degree_.end(), 0);
    in_set_.assign(pool_size, 0);
    set_size_ = 0;
    c_count_ = 0;

    StageTwoSearch result;
    if (pool_size == 0) return result;

    const int start = std::uniform_int_distribution<int>(0, pool_size - 1)(rng);
    toggle(start);
    int best_c = c_count_;
    std::vector<int> best_set{start};

    std::vector<int> tabu_until(pool_size, 0);
    std::vector<int> stamp(pool_size, -1);
    int iterations = 0;
    while (best_c > 2 && iterations < kMaxIterations) {
        ++iterations;
        int chosen = -1;
        int chosen_c = 0;
        int chosen_size = 0;
        for (int c = 0; c < pool_size; ++c) {
            if (!in_set_[c]) continue;
            for (const auto& [v, m] : members_[c]) {
                if (degree_[v] != 1) continue;
                for (const int cand : cycles_at_[v]) {
                    if (cand < 0 || stamp[cand] == iterations) continue;
                    stamp[cand] = iterations;
                    const bool adding = !in_set_[cand];
                    if (!adding && set_size_ == 1) continue;
                    const int new_c = c_count_ + toggle_delta(cand, adding);
                    const int new_size = set_size_ + (adding ? 1 : -1);
                    const bool aspiration = new_c < best_c;
                    if (tabu_until[cand] > iterations && !aspiration) continue;
                    if (chosen < 0 || new_c < chosen_c || (new_c == chosen_c && new_size < chosen_size) ||
                        (new_c == chosen_c && new_size == chosen_size && cand < chosen)) {
                        chosen = cand;
                        chosen_c = new_c;
                        chosen_size = new_size;
                    }
                }
            }
        }
        if (chosen < 0) break;
        toggle(chosen);
        tabu_until[chosen] = iterations + 1 + tenure_;
        if (c_count_ < best_c || (c_count_ == best_c && set_size_ < static_cast<int>(best_set.size()))) {
            best_c = c_count_;
            best_set.clear();
            for (int c = 0; c < pool_size; ++c) {
                if (in_set_[c]) best_set.push_back(c);
            }
        }
    }

    for (const int c : best_set) result.eset.cycles.push_back(&pool_[c]);
    result.combined_portals = best_c;
    result.iterations = iterations;
    return result;
}

StageTwoSearch stage2_eset(std::span<const ABCycle> pool, int dimension, Rng& rng, int tabu_tenure) {
    StageTwoSearcher searcher(pool, dimension, tabu_tenure);
    return searcher.run(rng);
}

StageTwoOutcome stage2_offspring(const Instance& inst, const Tour& a, const Tour& b, const SolverConfig& cfg,
                                 Rng& rng, TimingSample* repair_times) {
    StageTwoOutcome out;
    const UnionGraph g(a, b);
    if (g.empty()) {
        out.no_offspring = true;
        return out;
    }
    const auto cycles = trace_ab_cycles(g, rng);
    StageTwoSearcher searcher(cycles, inst.dimension(), cfg.tabu_tenure);

    std::optional<Length> best_length;
    ESet best_valid;
    for (int child = 0; child < cfg.n_children_stage2; ++child) {
        const auto search = searcher.run(rng);
        auto structure = apply_eset(a, b, search.eset);
        ++out.offspring;
        if (count_subtours(structure) == 1) {
            const Length len = a.length() + search.eset.gain_delta(inst);
            if (!best_length || len < *best_length) {
                best_length = len;
                best_valid = search.eset;
                out.best_child.reset();
            }
        } else {
            auto outcome = repair(inst, std::move(structure));
            ++out.repairs;
            if (repair_times) repair_times->add(outcome.elapsed);
            if (!best_length || outcome.tour.length() < *best_length) {
                best_length = outcome.tour.length();
                best_valid = {};
                out.best_child = std::move(outcome.tour);
            }
        }
    }
    if (best_length && !out.best_child) {
        out.best_child = tour_from_structure(inst, apply_eset(a, b, best_valid));
    }
    return out;
}

namespace {

struct PopulationStats {
    Length best;
    Length worst;
    double mean;
    int best_index;
};

PopulationStats stats_of(const std::vector<Tour>& pop) {
    PopulationStats s{pop[0].length(), pop[0].length(), 0.0, 0};
    double total = 0.0;
    for (int i = 0; i < static_cast<int>(pop.size()); ++i) {
        const Length len = pop[i].length();
        total += static_cast<double>(len);
        if (len < s.best) {
            s.best = len;
            s.best_index = i;
        }
        s.worst = std::max(s.worst, len);
    }
    s.mean = total / static_cast<double>(pop.size());
    return s;
}

std::vector<Tour> initial_population(const Instance& inst, int size, Rng& rng) {
    std::vector<Tour> pop;
    pop.reserve(size);
    for (int i = 0; i < size; ++i) pop.push_back(greedy_2opt_init(inst, rng()));
    return pop;
}

}  // namespace

RunResult evolve(const Instance& inst, const SolverConfig& cfg, const GenerationCallback& on_generation) {
    cfg.validate();
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();
    const auto deadline = started + std::chrono::duration_cast<Clock::duration>(cfg.cutoff);

    Rng rng(cfg.seed);
    ValidityChecker checker;
    std::optional<Tour> optimal;
    if (cfg.instrument && inst.optimal_tour()) optimal = Tour(inst, *inst.optimal_tour());

    RunResult result;
    auto population = initial_population(inst, cfg.population_size, rng);
    auto stats = stats_of(population);
    result.best = population[stats.best_index];

    auto target_reached = [&] { return cfg.target && result.best.length() <= *cfg.target; };

    int stage = 1;
    int stagnation = 0;
    Length epoch_best = stats.best;
    std::int64_t generation = 0;

    while (true) {
        if (target_reached()) {
            result.target_hit = true;
            result.termination = "target";
            break;
        }
        if (Clock::now() >= deadline) {
            result.timed_out = true;
            result.termination = "cutoff";
            break;
        }
        if (cfg.max_generations && generation >= *cfg.max_generations) {
            result.termination = "max_generations";
            break;
        }

        GenerationReport report;
        report.generation = generation;
        report.restart = result.restarts;
        report.stage = stage;

        const int pop_size = static_cast<int>(population.size());
        std::vector<int> perm(pop_size);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);

        bool interrupted = false;
        int pairs_with_offspring = 0;
        for (int i = 0; i < pop_size; ++i) {
            if (Clock::now() >= deadline) {
                interrupted = true;
                break;
            }
            Tour& a = population[perm[i]];
            const Tour& b = population[perm[(i + 1) % pop_size]];
            if (stage == 1) {
                auto out = stage1_offspring(inst, a, b, cfg, rng, checker, optimal);
                if (out.no_offspring) continue;
                for (const auto& rec : out.records) {
                    result.histogram.record(rec);
                    result.check_times.add(rec.check_time);
                    if (rec.repaired) {
                        result.repair_times.add(rec.repair_time);
                        ++result.stage1_repairs;
                        ++report.repairs;
                    }
                    report.offspring += rec.accepted;
                }
                report.attempts += static_cast<int>(out.records.size());
                result.stage1_attempts += static_cast<std::int64_t>(out.records.size());
                if (out.best_record >= 0) ++pairs_with_offspring;
                if (out.best_child && out.best_child->length() < a.length()) {
                    a = std::move(*out.best_child);
                    ++report.selected;
                }
                if (cfg.keep_offspring_records) {
                    report.records.insert(report.records.end(), out.records.begin(), out.records.end());
                }
            } else {
                auto out = stage2_offspring(inst, a, b, cfg, rng, &result.repair_times);
                if (out.no_offspring) continue;
                report.attempts += out.offspring;
                report.offspring += out.offspring;
                report.repairs += out.repairs;
                result.stage2_repairs += out.repairs;
                if (out.best_child) ++pairs_with_offspring;
                if (out.best_child && out.best_child->length() < a.length()) {
                    a = std::move(*out.best_child);
                    ++report.selected;
                }
            }
        }

        stats = stats_of(population);
        if (stats.best < result.best.length()) result.best = population[stats.best_index];
        report.best = stats.best;
        report.mean = stats.mean;
        report.worst = stats.worst;
        report.elapsed = Clock::now() - started;
        ++generation;
        result.generations = generation;
        if (on_generation) on_generation(report);

        if (interrupted) continue;  // loop head records the cutoff

        if (stats.best < epoch_best) {
            epoch_best = stats.best;
            stagnation = 0;
        } else {
            ++stagnation;
        }
        if (target_reached()) continue;

        const bool converged = stats.best == stats.worst || pairs_with_offspring == 0 ||
                               (stage == 2 && stagnation >= cfg.stagnation_generations);
        if (converged) {
            if (!cfg.restart) {
                result.termination = "converged";
                break;
            }
            ++result.restarts;
            population = initial_population(inst, cfg.population_size, rng);
            stats = stats_of(population);
            if (stats.best < result.best.length()) result.best = population[stats.best_index];
            epoch_best = stats.best;
            stage = 1;
            stagnation = 0;
        } else if (stage == 1 && stagnation >= cfg.stagnation_generations) {
            stage = 2;
            stagnation = 0;
        }
    }

    result.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
    return result;
}

}  // namespace eax
