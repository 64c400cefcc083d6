#include "netplay/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace netplay {

using nlohmann::json;

std::string_view agent_kind_name(AgentKind k) {
    switch (k) {
        case AgentKind::Llm: return "llm";
        case AgentKind::Handcrafted: return "handcrafted";
        case AgentKind::Scripted: return "scripted";
    }
    return "?";
}

std::optional<AgentKind> agent_kind_from_name(std::string_view name) {
    if (name == "llm") return AgentKind::Llm;
    if (name == "handcrafted") return AgentKind::Handcrafted;
    if (name == "scripted") return AgentKind::Scripted;
    return std::nullopt;
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Success: return "success";
        case Verdict::Fail: return "fail";
        case Verdict::Death: return "death";
        case Verdict::Timeout: return "timeout";
        case Verdict::TaskFinished: return "task_finished";
    }
    return "?";
}

Verdict classify(const RunRecord& record, bool goal_met) {
    if (goal_met) return Verdict::Success;
    if (record.death_cause) return Verdict::Death;
    if (record.outcome == RunOutcome::Timeout) return Verdict::Timeout;
    if (record.outcome == RunOutcome::TaskFinished) return Verdict::TaskFinished;
    return Verdict::Fail;
}

MetricStats mean_stderr(const std::vector<double>& values) {
    MetricStats s;
    if (values.empty()) return s;
    double sum = 0;
    for (double v : values) sum += v;
    const double n = static_cast<double>(values.size());
    s.mean = sum / n;
    if (values.size() < 2) return s;
    double sq = 0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stderr_ = std::sqrt(sq / (n - 1)) / std::sqrt(n);
    return s;
}

std::string format_mean_stderr(const MetricStats& s) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.2f ± %.2f", s.mean, s.stderr_);
    return buf;
}

BatchReport aggregate(std::vector<RunSummary> runs) {
    BatchReport r;
    std::sort(runs.begin(), runs.end(), [](const RunSummary& a, const RunSummary& b) {
        if (a.target != b.target) return a.target < b.target;
        return a.seed < b.seed;
    });
    std::vector<double> score, depth, level, time;
    for (const auto& s : runs) {
        score.push_back(s.score);
        depth.push_back(s.max_depth);
        level.push_back(s.xp_level);
        time.push_back(s.turns);
        if (s.verdict == Verdict::Success) ++r.successes;
        ++r.outcomes[std::string(verdict_name(s.verdict))];
        if (s.verdict == Verdict::Death) ++r.death_causes[s.death_cause];
    }
    if (!runs.empty()) {
        r.agent = runs.front().agent;
        r.target = runs.front().target;
    }
    r.score = mean_stderr(score);
    r.depth = mean_stderr(depth);
    r.level = mean_stderr(level);
    r.time = mean_stderr(time);
    r.runs = std::move(runs);
    return r;
}

std::string format_report(const BatchReport& r) {
    std::ostringstream out;
    out << "Agent: " << r.agent << "   Target: " << r.target << "   Runs: " << r.runs.size() << "\n";
    out << "Score  " << format_mean_stderr(r.score) << "\n";
    out << "Depth  " << format_mean_stderr(r.depth) << "\n";
    out << "Level  " << format_mean_stderr(r.level) << "\n";
    out << "Time   " << format_mean_stderr(r.time) << "\n";
    out << "Success " << r.successes << "/" << r.runs.size() << "\n";
    out << "Outcomes:\n";
    for (const auto& [k, v] : r.outcomes) out << "  " << k << ": " << v << "\n";
    if (!r.death_causes.empty()) {
        out << "Death causes:\n";
        for (const auto& [k, v] : r.death_causes) out << "  " << k << ": " << v << "\n";
    }
    return out.str();
}

std::string report_json(const BatchReport& r) {
    json j;
    j["agent"] = r.agent;
    j["target"] = r.target;
    auto metric = [](const MetricStats& s) { return json{{"mean", s.mean}, {"stderr", s.stderr_}}; };
    j["score"] = metric(r.score);
    j["depth"] = metric(r.depth);
    j["level"] = metric(r.level);
    j["time"] = metric(r.time);
    j["successes"] = r.successes;
    j["outcomes"] = r.outcomes;
    j["death_causes"] = r.death_causes;
    j["runs"] = json::array();
    for (const auto& s : r.runs) {
        json e{{"seed", s.seed},           {"verdict", verdict_name(s.verdict)}, {"run_outcome", run_outcome_name(s.run_outcome)},
               {"score", s.score},         {"max_depth", s.max_depth},           {"xp_level", s.xp_level},
               {"turns", s.turns},         {"llm_calls", s.llm_calls}};
        if (!s.death_cause.empty()) e["death_cause"] = s.death_cause;
        j["runs"].push_back(e);
    }
    return j.dump(2) + "\n";
}

std::string full_game_task() {
    return "Explore the dungeon, descend as deep as you can and gain experience along the way. Stay alive.";
}

namespace {

ScenarioSpec load_scenario(const std::string& name) {
    if (const BuiltinScenario* b = find_builtin(name)) return parse_scenario(b->source);
    if (std::filesystem::exists(name)) {
        std::ifstream in(name);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_scenario(ss.str());
    }
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::string target_name(const BatchOptions& o) { return o.scenario.empty() ? "full-game" : o.scenario; }

}  // namespace

RunResult run_one(const BatchOptions& options, uint64_t seed) {
    const bool full = options.scenario.empty();
    std::optional<ScenarioSpec> spec;
    GameState state = full ? new_full_game(seed) : new_game(*(spec = load_scenario(options.scenario)), seed);

    TrackerConfig tc;
    tc.replicate_occlusion_bug = options.replicate_occlusion_bug;
    AgentConfig ac;
    tc.low_health = ac.low_health;
    Tracker tracker(tc);
    tracker.update(state, {});

    RunHooks hooks;
    if (spec) hooks.goal = [&](const GameState& s) { return evaluate_success(spec->success, s); };

    RunResult result;
    if (options.agent == AgentKind::Handcrafted) {
        BaselineConfig bc;
        bc.turn_limit = full ? options.full_game_turn_cap : spec->time_limit;
        result.record = run_baseline(state, tracker, bc, hooks);
    } else {
        if (!options.backend) throw std::invalid_argument("the " + std::string(agent_kind_name(options.agent)) + " agent needs a backend");
        std::shared_ptr<Backend> inner = options.backend(target_name(options), seed);
        std::shared_ptr<CassetteBackend> recorder;
        Backend* backend = inner.get();
        if (options.record_cassettes && !dynamic_cast<CassetteBackend*>(inner.get())) {
            recorder = std::make_shared<CassetteBackend>(inner, Cassette{}, CassetteBackend::Mode::Record);
            backend = recorder.get();
        }
        ac.censor_game_name = options.censor;
        if (full) {
            ac.finish_task_enabled = false;
            ac.turn_limit = options.full_game_turn_cap;
        } else {
            ac.turn_limit = spec->time_limit;
            ac.llm_call_limit = spec->llm_call_limit;
            ac.guide = spec->guide.value_or("");
        }
        result.record = run_task(state, tracker, *backend, full ? full_game_task() : spec->task, ac, hooks);
        if (recorder) result.cassette = recorder->cassette();
    }

    const bool goal = full ? state.done.status == RunStatus::Won : evaluate_success(spec->success, state);
    RunSummary& s = result.summary;
    s.agent = std::string(agent_kind_name(options.agent));
    s.target = target_name(options);
    s.seed = seed;
    s.verdict = classify(result.record, goal);
    s.death_cause = result.record.death_cause.value_or("");
    s.run_outcome = result.record.outcome;
    s.score = result.record.score;
    s.max_depth = result.record.max_depth;
    s.xp_level = result.record.xp_level;
    s.turns = result.record.turns;
    s.llm_calls = result.record.llm_calls;
    return result;
}

BatchReport run_batch(const BatchOptions& options) {
    if (options.runs < 1) throw std::invalid_argument("runs must be at least 1");
    if (!options.scenario.empty()) load_scenario(options.scenario);  // fail fast on unknown names
    if (options.agent != AgentKind::Handcrafted && !options.backend) {
        throw std::invalid_argument("the " + std::string(agent_kind_name(options.agent)) + " agent needs a backend");
    }
    if (!options.out_dir.empty()) std::filesystem::create_directories(options.out_dir);

    std::vector<RunSummary> summaries(static_cast<size_t>(options.runs));
    std::vector<std::string> errors(static_cast<size_t>(options.runs));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < options.runs; i = next++) {
            const uint64_t seed = options.base_seed + static_cast<uint64_t>(i);
            try {
                RunResult r = run_one(options, seed);
                if (!options.out_dir.empty()) {
                    const std::string stem = options.out_dir + "/" + target_name(options) + "_seed" + std::to_string(seed);
                    std::ofstream(stem + ".jsonl") << r.record.to_jsonl();
                    if (r.cassette) r.cassette->save(stem + ".cassette.jsonl");
                }
                summaries[static_cast<size_t>(i)] = std::move(r.summary);
            } catch (const std::exception& e) {
                errors[static_cast<size_t>(i)] = e.what();
            }
        }
    };
    const int threads = std::max(1, std::min(options.threads, options.runs));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) throw std::runtime_error("run with seed " + std::to_string(options.base_seed + i) + ": " + errors[i]);
    }

    BatchReport report = aggregate(std::move(summaries));
    if (!options.out_dir.empty()) {
        std::ofstream(options.out_dir + "/report.txt") << format_report(report);
        std::ofstream(options.out_dir + "/summary.json") << report_json(report);
    }
    return report;
}

}  // namespace netplay
