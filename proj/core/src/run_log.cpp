#include "eax/run_log.hpp"

#include <sstream>

#include "json.hpp"

namespace eax {

namespace {

using json = nlohmann::ordered_json;

std::int64_t micros(std::chrono::nanoseconds d) {
    return std::chrono::duration_cast<std::chrono::microseconds>(d).count();
}

json record_json(const OffspringRecord& r) {
    json j;
    j["portals"] = r.portals;
    j["subtours"] = r.subtours;
    j["accepted"] = r.accepted;
    j["selected"] = r.selected;
    j["repaired"] = r.repaired;
    j["length"] = r.length;
    if (r.optimal_edges) {
        j["opt_gained_cycle"] = r.optimal_edges->gained_cycle;
        j["opt_lost_cycle"] = r.optimal_edges->lost_cycle;
        j["opt_gained_repair"] = r.optimal_edges->gained_repair;
        j["opt_lost_repair"] = r.optimal_edges->lost_repair;
    }
    j["check_us"] = micros(r.check_time);
    j["repair_us"] = micros(r.repair_time);
    return j;
}

bool is_timing_key(const std::string& key) {
    auto ends_with = [&key](std::string_view suffix) {
        return key.size() >= suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return ends_with("_us") || ends_with("_seconds");
}

void strip(json& j) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end();) {
            if (is_timing_key(it.key())) {
                it = j.erase(it);
            } else {
                strip(it.value());
                ++it;
            }
        }
    } else if (j.is_array()) {
        for (auto& e : j) strip(e);
    }
}

}  // namespace

std::string generation_json(const GenerationReport& report) {
    json j;
    j["type"] = "generation";
    j["generation"] = report.generation;
    j["restart"] = report.restart;
    j["stage"] = report.stage;
    j["best"] = report.best;
    j["mean"] = report.mean;
    j["worst"] = report.worst;
    j["attempts"] = report.attempts;
    j["offspring"] = report.offspring;
    j["selected"] = report.selected;
    j["repairs"] = report.repairs;
    j["elapsed_us"] = micros(report.elapsed);
    if (!report.records.empty()) {
        json records = json::array();
        for (const auto& r : report.records) records.push_back(record_json(r));
        j["records"] = std::move(records);
    }
    return j.dump();
}

std::string summary_json(const Instance& inst, const SolverConfig& cfg, const RunResult& result) {
    json j;
    j["type"] = "summary";
    j["instance"] = inst.name();
    j["variant"] = std::string(to_string(cfg.variant));
    j["seed"] = cfg.seed;
    j["found_length"] = result.best.length();
    if (cfg.target) j["target"] = *cfg.target;
    j["target_hit"] = result.target_hit;
    j["timed_out"] = result.timed_out;
    j["termination"] = result.termination;
    j["generations"] = result.generations;
    j["restarts"] = result.restarts;
    j["stage1_attempts"] = result.stage1_attempts;
    j["stage1_repairs"] = result.stage1_repairs;
    j["stage2_repairs"] = result.stage2_repairs;
    j["wall_seconds"] = result.wall_seconds;
    j["check_median_us"] = result.check_times.median_us();
    j["repair_median_us"] = result.repair_times.median_us();
    std::string tour;
    for (int i = 0; i < result.best.size(); ++i) {
        if (i) tour += ' ';
        tour += std::to_string(result.best.at(i) + 1);
    }
    j["tour"] = tour;
    return j.dump();
}

std::string strip_timing_fields(const std::string& jsonl) {
    std::istringstream in(jsonl);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = json::parse(line);
        strip(j);
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace eax
