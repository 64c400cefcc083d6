#include "netplay/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace netplay;

namespace {

RunSummary summary(uint64_t seed, Verdict v, int score, std::string cause = "") {
    RunSummary s;
    s.agent = "handcrafted";
    s.target = "full-game";
    s.seed = seed;
    s.verdict = v;
    s.score = score;
    s.death_cause = std::move(cause);
    s.turns = static_cast<int>(seed) * 10;
    return s;
}

BackendFactory builtin_solution() {
    return [](const std::string& target, uint64_t) -> std::shared_ptr<Backend> {
        return std::make_shared<ScriptedBackend>(ScriptedBackend::parse_rules(find_builtin(target)->solution));
    };
}

}  // namespace

TEST_CASE("mean and standard error") {
    CHECK(format_mean_stderr(mean_stderr({100, 300})) == "200.00 ± 100.00");
    CHECK(format_mean_stderr(mean_stderr({250})) == "250.00 ± 0.00");
    // Oracle: sample stddev over sqrt(n), by the textbook two-pass formula.
    const std::vector<double> v{3, 7, 7, 19, 24};
    double mean = 0;
    for (double x : v) mean += x / 5.0;
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const MetricStats s = mean_stderr(v);
    CHECK(s.mean == doctest::Approx(mean));
    CHECK(s.stderr_ == doctest::Approx(std::sqrt(ss / 4.0) / std::sqrt(5.0)));
}

TEST_CASE("classify precedence") {
    RunRecord r;
    r.outcome = RunOutcome::TaskFinished;
    CHECK(classify(r, true) == Verdict::Success);
    CHECK(classify(r, false) == Verdict::TaskFinished);
    r.outcome = RunOutcome::GameEnded;
    r.death_cause = "starvation";
    CHECK(classify(r, true) == Verdict::Success);
    CHECK(classify(r, false) == Verdict::Death);
    r.death_cause.reset();
    r.outcome = RunOutcome::Timeout;
    CHECK(classify(r, false) == Verdict::Timeout);
    r.outcome = RunOutcome::TimeLimit;
    CHECK(classify(r, false) == Verdict::Fail);
}

TEST_CASE("report: histograms sum to n") {
    const BatchReport r = aggregate({summary(0, Verdict::Death, 10, "starvation"), summary(1, Verdict::Death, 20, "killed by a jackal"),
                                     summary(2, Verdict::Timeout, 30), summary(3, Verdict::Success, 40),
                                     summary(4, Verdict::Death, 50, "starvation")});
    int n = 0;
    for (const auto& [k, v] : r.outcomes) n += v;
    CHECK(n == 5);
    CHECK(r.death_causes.at("starvation") == 2);
    CHECK(r.successes == 1);
    const std::string text = format_report(r);
    CHECK(text.find("Score  30.00 ± 7.07") != std::string::npos);
    CHECK(text.find("Success 1/5") != std::string::npos);
    CHECK(text.find("  death: 3") != std::string::npos);
    CHECK(report_json(r).find("\"death_causes\"") != std::string::npos);
}

TEST_CASE("property: aggregation ignores summary order") {
    std::vector<RunSummary> runs;
    for (uint64_t i = 0; i < 12; ++i) runs.push_back(summary(i, static_cast<Verdict>(i % 5), static_cast<int>(i * 37 % 101), i % 5 == 2 ? "illness" : ""));
    const std::string base = report_json(aggregate(runs));
    std::mt19937 rng(5);
    for (int k = 0; k < 20; ++k) {
        std::shuffle(runs.begin(), runs.end(), rng);
        CHECK(report_json(aggregate(runs)) == base);
    }
}

TEST_CASE("run_batch: handcrafted full game is deterministic") {
    BatchOptions o;
    o.agent = AgentKind::Handcrafted;
    o.runs = 5;
    o.full_game_turn_cap = 600;
    o.threads = 3;
    const BatchReport a = run_batch(o);
    o.threads = 1;
    const BatchReport b = run_batch(o);
    REQUIRE(a.runs.size() == 5);
    CHECK(report_json(a) == report_json(b));
    for (size_t i = 0; i < a.runs.size(); ++i) {
        CHECK(a.runs[i].seed == i);
        CHECK(a.runs[i].llm_calls == 0);
    }
}

TEST_CASE("run_batch: ordered scenario solution succeeds 5/5") {
    BatchOptions o;
    o.agent = AgentKind::Scripted;
    o.scenario = "ordered";
    o.runs = 5;
    o.backend = builtin_solution();
    const BatchReport r = run_batch(o);
    CHECK(r.successes == 5);
    for (const auto& s : r.runs) CHECK(s.turns <= 200);
}

TEST_CASE("run_batch: logs and cassettes replay to the same summary") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "netplay_harness_test";
    fs::remove_all(dir);
    BatchOptions o;
    o.agent = AgentKind::Scripted;
    o.scenario = "wand";
    o.runs = 2;
    o.base_seed = 40;
    o.backend = builtin_solution();
    o.out_dir = dir.string();
    const BatchReport first = run_batch(o);
    CHECK(fs::exists(dir / "report.txt"));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "wand_seed40.jsonl"));
    REQUIRE(fs::exists(dir / "wand_seed41.cassette.jsonl"));

    BatchOptions replay = o;
    replay.out_dir.clear();
    replay.backend = [dir](const std::string& target, uint64_t seed) -> std::shared_ptr<Backend> {
        const auto file = dir / (target + "_seed" + std::to_string(seed) + ".cassette.jsonl");
        return std::make_shared<CassetteBackend>(nullptr, Cassette::load(file.string()), CassetteBackend::Mode::Replay);
    };
    CHECK(report_json(run_batch(replay)) == report_json(first));
    fs::remove_all(dir);
}

TEST_CASE("run_batch: argument errors") {
    BatchOptions o;
    o.scenario = "no-such-scenario";
    CHECK_THROWS_AS(run_batch(o), std::invalid_argument);
    o.scenario = "wand";
    o.agent = AgentKind::Llm;
    CHECK_THROWS_AS(run_batch(o), std::invalid_argument);
    o.agent = AgentKind::Handcrafted;
    o.runs = 0;
    CHECK_THROWS_AS(run_batch(o), std::invalid_argument);
    CHECK(agent_kind_from_name("scripted") == AgentKind::Scripted);
    CHECK_FALSE(agent_kind_from_name("gpt").has_value());
}
