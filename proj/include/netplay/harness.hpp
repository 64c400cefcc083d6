#pragma once

// Batch runner: seeded runs of an agent on a scenario or the full game, plus reporting.

#include "netplay/agent.hpp"
#include "netplay/baseline.hpp"
#include "netplay/scenario.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace netplay {

enum class AgentKind : uint8_t { Llm, Handcrafted, Scripted };
std::string_view agent_kind_name(AgentKind k);
std::optional<AgentKind> agent_kind_from_name(std::string_view name);

enum class Verdict : uint8_t { Success, Fail, Death, Timeout, TaskFinished };
std::string_view verdict_name(Verdict v);

struct RunSummary {
    std::string agent;
    std::string target;  // scenario name or "full-game"
    uint64_t seed = 0;
    Verdict verdict = Verdict::Fail;
    std::string death_cause;
    RunOutcome run_outcome = RunOutcome::TaskFinished;
    int score = 0;
    int max_depth = 1;
    int xp_level = 1;
    int turns = 0;
    int llm_calls = 0;
};

// Success beats death beats stall timeout beats an unmet finish_task; anything else fails.
Verdict classify(const RunRecord& record, bool goal_met);

// Backend for one run. Called once per run so stateful backends are never shared.
using BackendFactory = std::function<std::shared_ptr<Backend>(const std::string& target, uint64_t seed)>;

struct BatchOptions {
    AgentKind agent = AgentKind::Handcrafted;
    std::string scenario;  // empty: full game
    int runs = 1;
    uint64_t base_seed = 0;
    BackendFactory backend;  // llm / scripted agents
    std::string out_dir;     // empty: no files
    bool censor = false;
    bool replicate_occlusion_bug = false;
    int full_game_turn_cap = 5000;
    int threads = 1;
    bool record_cassettes = true;
};

struct MetricStats {
    double mean = 0;
    double stderr_ = 0;
};
MetricStats mean_stderr(const std::vector<double>& values);
std::string format_mean_stderr(const MetricStats& s);  // "200.00 ± 100.00"

struct BatchReport {
    std::string agent;
    std::string target;
    std::vector<RunSummary> runs;
    MetricStats score, depth, level, time;
    int successes = 0;
    std::map<std::string, int> outcomes;      // verdict histogram
    std::map<std::string, int> death_causes;  // Death runs only
};

BatchReport aggregate(std::vector<RunSummary> runs);
std::string format_report(const BatchReport& report);
std::string report_json(const BatchReport& report);

// One run with its full record; `cassette` receives the recorded backend traffic when non-null.
struct RunResult {
    RunSummary summary;
    RunRecord record;
    std::optional<Cassette> cassette;
};
RunResult run_one(const BatchOptions& options, uint64_t seed);

// Throws std::invalid_argument for an unknown scenario or a missing backend.
BatchReport run_batch(const BatchOptions& options);

// Task text for the full game, where finish_task is withheld.
std::string full_game_task();

}  // namespace netplay
