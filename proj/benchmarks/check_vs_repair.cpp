#include <benchmark/benchmark.h>

#include <map>
#include <vector>

#include "eax/ab_cycle.hpp"
#include "eax/repair.hpp"
#include "eax/validity.hpp"

namespace {

// Parent pairs of locally optimal tours, as they occur early in a run.
struct Corpus {
    eax::Instance inst;
    eax::Tour a, b;
    std::vector<eax::ABCycle> cycles;
    std::vector<eax::VertexDegreeStructure> broken;

    explicit Corpus(int n) : inst(eax::generate_rue(n, 1000000, n)) {
        for (std::uint64_t s = 1; cycles.empty() || broken.empty(); s += 2) {
            a = eax::greedy_2opt_init(inst, s);
            b = eax::greedy_2opt_init(inst, s + 1);
            cycles = eax::trace_ab_cycles(eax::UnionGraph(a, b), s);
            broken.clear();
            for (const auto& c : cycles) {
                auto st = eax::apply_eset(a, b, eax::ESet(c));
                if (eax::count_subtours(st) > 1) broken.push_back(std::move(st));
            }
        }
    }
};

const Corpus& corpus(int n) {
    static std::map<int, Corpus> cache;
    return cache.try_emplace(n, n).first->second;
}

void BM_FastCheck(benchmark::State& state) {
    const auto& c = corpus(static_cast<int>(state.range(0)));
    eax::ValidityChecker checker;
    std::size_t i = 0;
    for (auto _ : state) {
        const eax::ESet e(c.cycles[i++ % c.cycles.size()]);
        benchmark::DoNotOptimize(checker.check(c.a, c.b, e));
    }
}

void BM_ApplyAndCount(benchmark::State& state) {
    const auto& c = corpus(static_cast<int>(state.range(0)));
    std::size_t i = 0;
    for (auto _ : state) {
        const eax::ESet e(c.cycles[i++ % c.cycles.size()]);
        benchmark::DoNotOptimize(eax::count_subtours(eax::apply_eset(c.a, c.b, e)));
    }
}

void BM_Repair(benchmark::State& state) {
    const auto& c = corpus(static_cast<int>(state.range(0)));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eax::repair(c.inst, c.broken[i++ % c.broken.size()]));
    }
}

}  // namespace

BENCHMARK(BM_FastCheck)->Arg(500)->Arg(1000)->Arg(2000);
BENCHMARK(BM_ApplyAndCount)->Arg(500)->Arg(1000)->Arg(2000);
BENCHMARK(BM_Repair)->Arg(500)->Arg(1000)->Arg(2000);

BENCHMARK_MAIN();
