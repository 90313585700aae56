#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "eax/ab_cycle.hpp"
#include "eax/bench.hpp"
#include "eax/instance.hpp"
#include "eax/run_log.hpp"
#include "eax/solver.hpp"
#include "eax/tour.hpp"
#include "eax/validity.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Plain list of 1-based ids, or a TSPLIB .tour file.
std::vector<eax::Vertex> read_tour(const std::string& path) {
    std::string text = slurp(path);
    const auto section = text.find("TOUR_SECTION");
    if (section != std::string::npos) {
        text = text.substr(section + 12);
        const auto end = text.find("-1");
        if (end != std::string::npos) text.resize(end);
        const auto eof = text.find("EOF");
        if (eof != std::string::npos) text.resize(eof);
    }
    return eax::parse_tour_line(text);
}

int cmd_solve(const std::string& file, const std::string& variant, std::uint64_t seed, double cutoff,
              std::optional<eax::Length> target, int pop, int k1, int k2, const std::string& log_path,
              std::optional<std::int64_t> max_gen, const std::string& mask_path, bool instrument) {
    const auto inst = eax::load_instance(file);
    eax::SolverConfig cfg;
    const auto v = eax::parse_variant(variant);
    if (!v) throw std::invalid_argument("unknown variant `" + variant + "`");
    cfg.variant = *v;
    cfg.seed = seed;
    cfg.cutoff = std::chrono::duration<double>(cutoff);
    cfg.target = target ? target : inst.known_optimum();
    cfg.population_size = pop;
    cfg.n_children_stage1 = k1;
    cfg.n_children_stage2 = k2;
    cfg.max_generations = max_gen;
    cfg.instrument = instrument;
    cfg.keep_offspring_records = instrument;
    if (!mask_path.empty()) cfg.ratio_mask = eax::RatioMask::from_json(slurp(mask_path));

    std::ofstream log;
    if (!log_path.empty()) {
        log.open(log_path, std::ios::trunc);
        if (!log) throw std::runtime_error("cannot write " + log_path);
    }
    eax::GenerationCallback cb;
    if (log.is_open()) cb = [&log](const eax::GenerationReport& r) { log << eax::generation_json(r) << '\n'; };

    const auto result = eax::evolve(inst, cfg, cb);
    const auto summary = eax::summary_json(inst, cfg, result);
    if (log.is_open()) log << summary << '\n';
    std::cout << summary << '\n';
    return 0;
}

int cmd_check(const std::string& file, const std::string& ta, const std::string& tb, std::uint64_t seed) {
    const auto inst = eax::load_instance(file);
    const eax::Tour a(inst, read_tour(ta));
    const eax::Tour b(inst, read_tour(tb));
    const eax::UnionGraph g(a, b);
    const auto cycles = eax::trace_ab_cycles(g, seed);
    std::cout << "# " << cycles.size() << " AB-cycles, |A|=" << a.length() << " |B|=" << b.length() << '\n';
    eax::ValidityChecker checker;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        const eax::ESet e(cycles[i]);
        const auto verdict = checker.check(a, b, e);
        std::cout << '(' << checker.last_profile().portal_count() << ", " << verdict.subtour_count << ")\n";
    }
    return 0;
}

int cmd_bench(const std::string& grid_path) {
    const std::filesystem::path p(grid_path);
    const auto cfg = eax::GridConfig::from_json(slurp(grid_path), p.has_parent_path() ? p.parent_path() : ".");
    const auto result = eax::run_grid(cfg);
    for (const auto& f : result.parse_failures) std::cerr << "parse failure: " << f << '\n';
    for (const auto& c : result.par10) {
        std::cout << c.instance << ' ' << eax::to_string(c.variant) << " solved " << c.solved << '/' << c.runs
                  << " PAR10 " << c.par10_seconds << " s\n";
    }
    for (const auto& [v, mean] : result.grand_mean_par10) {
        std::cout << "grand mean " << eax::to_string(v) << " PAR10 " << mean << " s\n";
    }
    std::cout << "results in " << cfg.output_dir.string() << '\n';
    return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EAX genetic algorithm for the symmetric TSP"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "Run the GA on one TSPLIB instance");
    std::string solve_file, variant = "vanilla", log_path, mask_path;
    std::uint64_t seed = 1;
    double cutoff = 60.0;
    std::optional<eax::Length> target;
    std::optional<std::int64_t> max_gen;
    int pop = 100, k1 = 30, k2 = 20;
    bool instrument = false;
    solve->add_option("file", solve_file, "TSPLIB EUC_2D file")->required()->check(CLI::ExistingFile);
    solve->add_option("--variant", variant, "vanilla | only_complete | ratio_based");
    solve->add_option("--seed", seed);
    solve->add_option("--cutoff", cutoff, "Wall-clock cutoff in seconds");
    solve->add_option("--target", target, "Stop at this length (defaults to the .opt sidecar)");
    solve->add_option("--pop", pop, "Population size");
    solve->add_option("--children-s1", k1, "Offspring per pair in stage I");
    solve->add_option("--children-s2", k2, "Offspring per pair in stage II");
    solve->add_option("--log", log_path, "JSON-lines run log");
    solve->add_option("--max-generations", max_gen);
    solve->add_option("--ratio-mask", mask_path, "JSON ratio mask for ratio_based")->check(CLI::ExistingFile);
    solve->add_flag("--instrument", instrument, "Record optimal-edge ledgers (needs an optimal tour)");

    auto* bench = app.add_subcommand("bench", "Run a variant x instance x seed grid");
    std::string grid;
    bench->add_option("grid", grid, "Grid config JSON")->required()->check(CLI::ExistingFile);

    auto* check = app.add_subcommand("check", "Check every traced AB-cycle of two tours");
    std::string check_file, tour_a, tour_b;
    std::uint64_t check_seed = 1;
    check->add_option("file", check_file)->required()->check(CLI::ExistingFile);
    check->add_option("--tour-a", tour_a, "Tour file (1-based ids)")->required()->check(CLI::ExistingFile);
    check->add_option("--tour-b", tour_b, "Tour file (1-based ids)")->required()->check(CLI::ExistingFile);
    check->add_option("--seed", check_seed, "Seed for the cycle decomposition");

    auto* gen = app.add_subcommand("gen-rue", "Print a random uniform Euclidean instance");
    int n = 0, side = 1000000;
    std::uint64_t gen_seed = 0;
    std::string out_path;
    gen->add_option("n", n)->required()->check(CLI::Range(4, 100000000));
    gen->add_option("seed", gen_seed)->required();
    gen->add_option("--side", side, "Square side length");
    gen->add_option("-o,--output", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) {
            return cmd_solve(solve_file, variant, seed, cutoff, target, pop, k1, k2, log_path, max_gen, mask_path,
                             instrument);
        }
        if (*bench) return cmd_bench(grid);
        if (*check) return cmd_check(check_file, tour_a, tour_b, check_seed);
        if (*gen) {
            const auto text = eax::to_tsplib(eax::generate_rue(n, side, gen_seed));
            if (out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream(out_path) << text;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
