#include "eax/bench.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace eax {

double par10(std::span<const RunTime> runs, double cutoff_seconds) {
    if (runs.empty()) throw std::invalid_argument("par10 of an empty run list");
    double total = 0.0;
    for (const auto& r : runs) total += r.solved ? r.seconds : 10.0 * cutoff_seconds;
    return total / static_cast<double>(runs.size());
}

GridConfig GridConfig::from_json(std::string_view text, const std::filesystem::path& base_dir) {
    const auto doc = nlohmann::json::parse(text);
    GridConfig cfg;
    cfg.base_dir = base_dir;
    if (!doc.contains("instances") || !doc["instances"].is_array() || doc["instances"].empty()) {
        throw std::invalid_argument("grid config needs a nonempty `instances` array");
    }
    for (const auto& g : doc["instances"]) cfg.instance_globs.push_back(g.get<std::string>());

    if (doc.contains("variants")) {
        for (const auto& v : doc["variants"]) {
            const auto parsed = parse_variant(v.get<std::string>());
            if (!parsed) throw std::invalid_argument("unknown variant `" + v.get<std::string>() + "`");
            cfg.variants.push_back(*parsed);
        }
    } else {
        cfg.variants = {Variant::Vanilla};
    }
    if (doc.contains("seeds")) {
        for (const auto& s : doc["seeds"]) cfg.seeds.push_back(s.get<std::uint64_t>());
    } else {
        for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
    }
    cfg.cutoff_seconds = doc.value("cutoff", 60.0);
    cfg.output_dir = base_dir / doc.value("output_dir", std::string("bench_out"));
    cfg.instrument = doc.value("instrument", false);
    if (doc.contains("ratio_mask")) cfg.ratio_mask_file = base_dir / doc["ratio_mask"].get<std::string>();
    cfg.workers = doc.value("workers", 1);

    auto& s = cfg.solver;
    s.population_size = doc.value("population", s.population_size);
    s.n_children_stage1 = doc.value("children_s1", s.n_children_stage1);
    s.n_children_stage2 = doc.value("children_s2", s.n_children_stage2);
    s.stagnation_generations = doc.value("stagnation", s.stagnation_generations);
    s.restart = doc.value("restart", s.restart);
    s.neighbor_k = doc.value("neighbor_k", s.neighbor_k);
    if (doc.contains("max_generations")) s.max_generations = doc["max_generations"].get<std::int64_t>();

    if (cfg.variants.empty() || cfg.seeds.empty()) throw std::invalid_argument("grid has no variants or seeds");
    if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (cfg.cutoff_seconds <= 0) throw std::invalid_argument("cutoff must be positive");
    return cfg;
}

std::vector<std::filesystem::path> expand_glob(const std::filesystem::path& pattern) {
    const auto name = pattern.filename().string();
    if (name.find_first_of("*?[") == std::string::npos) return {pattern};
    std::vector<std::filesystem::path> out;
    const auto dir = pattern.has_parent_path() ? pattern.parent_path() : std::filesystem::path(".");
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        if (fnmatch(name.c_str(), entry.path().filename().c_str(), 0) == 0) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::int64_t to_us(double seconds) { return static_cast<std::int64_t>(std::llround(seconds * 1e6)); }

constexpr const char* kRunsHeader =
    "instance,variant,seed,status,solved,found_length,target,generations,restarts,stage1_attempts,"
    "stage1_repairs,wall_us";

std::string csv_row(const RunRow& r) {
    std::ostringstream out;
    out << r.instance << ',' << to_string(r.variant) << ',' << r.seed << ',' << r.status << ','
        << (r.solved ? 1 : 0) << ',' << r.found_length << ',' << (r.target ? std::to_string(*r.target) : "")
        << ',' << r.generations << ',' << r.restarts << ',' << r.stage1_attempts << ',' << r.stage1_repairs
        << ',' << to_us(r.wall_seconds);
    return out.str();
}

struct Job {
    std::size_t instance;
    Variant variant;
    std::uint64_t seed;
};

}  // namespace

BenchResult run_grid(const GridConfig& config) {
    BenchResult result;
    std::filesystem::create_directories(config.output_dir);

    std::vector<Instance> instances;
    for (const auto& glob : config.instance_globs) {
        const auto files = expand_glob(config.base_dir / glob);
        if (files.empty()) result.parse_failures.push_back(glob + ": no matching files");
        for (const auto& f : files) {
            try {
                instances.push_back(load_instance(f, config.solver.neighbor_k));
            } catch (const std::exception& e) {
                result.parse_failures.push_back(f.string() + ": " + e.what());
            }
        }
    }

    RatioMask mask;
    if (config.ratio_mask_file) {
        std::ifstream in(*config.ratio_mask_file);
        if (!in) throw std::runtime_error("cannot read ratio mask " + config.ratio_mask_file->string());
        std::stringstream ss;
        ss << in.rdbuf();
        mask = RatioMask::from_json(ss.str());
    }

    std::vector<Job> jobs;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (const auto v : config.variants) {
            for (const auto s : config.seeds) jobs.push_back({i, v, s});
        }
    }

    const auto runs_path = config.output_dir / "runs.csv";
    std::ofstream runs_out(runs_path, std::ios::trunc);
    runs_out << "# eax-bench runs v1\n" << kRunsHeader << '\n' << std::flush;

    std::mutex sink;
    std::atomic<std::size_t> next_job{0};
    auto worker = [&] {
        while (true) {
            const std::size_t j = next_job.fetch_add(1);
            if (j >= jobs.size()) return;
            const auto& job = jobs[j];
            const auto& inst = instances[job.instance];

            SolverConfig cfg = config.solver;
            cfg.variant = job.variant;
            cfg.seed = job.seed;
            cfg.cutoff = std::chrono::duration<double>(config.cutoff_seconds);
            cfg.target = inst.known_optimum();
            cfg.instrument = config.instrument;
            cfg.ratio_mask = mask;

            RunRow row;
            row.instance = inst.name();
            row.variant = job.variant;
            row.seed = job.seed;
            row.target = cfg.target;
            std::optional<RunResult> run;
            try {
                run = evolve(inst, cfg);
                row.found_length = run->best.length();
                row.generations = run->generations;
                row.restarts = run->restarts;
                row.stage1_attempts = run->stage1_attempts;
                row.stage1_repairs = run->stage1_repairs;
                row.wall_seconds = run->wall_seconds;
                row.solved = run->target_hit;
                if (!cfg.target) {
                    row.status = "no_target";
                } else if (run->target_hit) {
                    row.status = "solved";
                } else {
                    row.status = run->timed_out ? "timeout" : "converged";
                }
            } catch (const std::exception& e) {
                row.status = "error";
                row.error = e.what();
            }

            const std::lock_guard lock(sink);
            runs_out << csv_row(row) << '\n' << std::flush;
            if (run) {
                result.histograms[job.variant].merge(run->histogram);
                result.check_times[job.variant].merge(run->check_times);
                result.repair_times[job.variant].merge(run->repair_times);
            }
            result.rows.push_back(std::move(row));
        }
    };

    const int n_workers = std::max(1, std::min<int>(config.workers, static_cast<int>(jobs.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    }
    runs_out.close();

    std::sort(result.rows.begin(), result.rows.end(), [](const RunRow& x, const RunRow& y) {
        return std::tie(x.instance, x.variant, x.seed) < std::tie(y.instance, y.variant, y.seed);
    });
    {
        std::ofstream out(runs_path, std::ios::trunc);
        out << "# eax-bench runs v1\n" << kRunsHeader << '\n';
        for (const auto& r : result.rows) out << csv_row(r) << '\n';
    }

    // PAR10 per (instance, variant) over runs with a target.
    std::map<std::pair<std::string, Variant>, std::vector<RunTime>> groups;
    for (const auto& r : result.rows) {
        if (!r.target) continue;
        groups[{r.instance, r.variant}].push_back({r.solved, r.wall_seconds});
    }
    std::map<Variant, std::vector<double>> per_variant;
    for (const auto& [key, runs] : groups) {
        Par10Cell cell;
        cell.instance = key.first;
        cell.variant = key.second;
        cell.runs = static_cast<int>(runs.size());
        cell.solved = static_cast<int>(std::count_if(runs.begin(), runs.end(), [](const RunTime& r) { return r.solved; }));
        cell.par10_seconds = par10(runs, config.cutoff_seconds);
        per_variant[cell.variant].push_back(cell.par10_seconds);
        result.par10.push_back(cell);
    }
    for (const auto& [variant, values] : per_variant) {
        result.grand_mean_par10[variant] =
            std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    }
    {
        std::ofstream out(config.output_dir / "par10.csv", std::ios::trunc);
        out << "# eax-bench par10 v1 cutoff_us=" << to_us(config.cutoff_seconds) << "\n"
            << "instance,variant,runs,solved,par10_us\n";
        for (const auto& c : result.par10) {
            out << c.instance << ',' << to_string(c.variant) << ',' << c.runs << ',' << c.solved << ','
                << to_us(c.par10_seconds) << '\n';
        }
        for (const auto& [variant, mean] : result.grand_mean_par10) {
            out << "__grand_mean__," << to_string(variant) << ",,," << to_us(mean) << '\n';
        }
    }
    {
        std::ofstream out(config.output_dir / "histogram.csv", std::ios::trunc);
        out << "# eax-bench stage-I AB-cycle types v1\n"
            << "variant,portals,subtours,attempts,accepted,selected,repairs,instrumented,opt_gained_cycle,"
               "opt_lost_cycle,opt_gained_repair,opt_lost_repair\n";
        for (const auto& [variant, hist] : result.histograms) {
            for (const auto& [key, c] : hist.cells()) {
                out << to_string(variant) << ',' << key.first << ',' << key.second << ',' << c.attempts << ','
                    << c.accepted << ',' << c.selected << ',' << c.repairs << ',' << c.instrumented << ','
                    << c.opt_gained_cycle << ',' << c.opt_lost_cycle << ',' << c.opt_gained_repair << ','
                    << c.opt_lost_repair << '\n';
            }
        }
    }
    {
        std::ofstream out(config.output_dir / "timing.csv", std::ios::trunc);
        out << "# eax-bench check vs repair v1\n"
            << "variant,check_calls,check_median_ns,check_mean_ns,repair_calls,repair_median_ns,repair_mean_ns\n";
        for (const auto v : config.variants) {
            const auto& ct = result.check_times[v];
            const auto& rt = result.repair_times[v];
            out << to_string(v) << ',' << ct.count() << ',' << std::llround(ct.median_us() * 1000) << ','
                << std::llround(ct.mean_us() * 1000) << ',' << rt.count() << ','
                << std::llround(rt.median_us() * 1000) << ',' << std::llround(rt.mean_us() * 1000) << '\n';
        }
    }
    if (config.instrument) {
        TypeHistogram all;
        for (const auto& [variant, hist] : result.histograms) all.merge(hist);
        std::ofstream out(config.output_dir / "derived_mask.json", std::ios::trunc);
        out << RatioMask::from_histogram(all).to_json() << '\n';
    }
    return result;
}

}  // namespace eax
