#include "netplay/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace netplay;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --backend http | script:FILE | replay:FILE_OR_DIR; empty picks the scenario's own solution.
BackendFactory make_factory(const std::string& spec, AgentKind agent) {
    if (spec.empty()) {
        if (agent == AgentKind::Scripted) {
            return [](const std::string& target, uint64_t) -> std::shared_ptr<Backend> {
                const BuiltinScenario* b = find_builtin(target);
                if (!b) throw std::invalid_argument("no builtin solution for '" + target + "'; pass --backend script:FILE");
                return std::make_shared<ScriptedBackend>(ScriptedBackend::parse_rules(b->solution));
            };
        }
        if (agent == AgentKind::Llm) return make_factory("http", agent);
        return {};
    }
    if (spec == "http") {
        auto config = HttpConfig::from_env();
        if (!config) throw std::invalid_argument("set NETPLAY_LLM_ENDPOINT (and NETPLAY_LLM_API_KEY) for the http backend");
        auto shared = std::make_shared<HttpBackend>(*config);
        return [shared](const std::string&, uint64_t) -> std::shared_ptr<Backend> { return shared; };
    }
    if (spec.rfind("script:", 0) == 0) {
        const std::string text = read_file(spec.substr(7));
        ScriptedBackend::parse_rules(text);  // validate once up front
        return [text](const std::string&, uint64_t) -> std::shared_ptr<Backend> {
            return std::make_shared<ScriptedBackend>(ScriptedBackend::parse_rules(text));
        };
    }
    if (spec.rfind("replay:", 0) == 0) {
        const std::string path = spec.substr(7);
        return [path](const std::string& target, uint64_t seed) -> std::shared_ptr<Backend> {
            std::string file = path;
            if (std::filesystem::is_directory(path)) file = path + "/" + target + "_seed" + std::to_string(seed) + ".cassette.jsonl";
            return std::make_shared<CassetteBackend>(nullptr, Cassette::load(file), CassetteBackend::Mode::Replay);
        };
    }
    throw std::invalid_argument("unknown backend '" + spec + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Roguelike LLM-agent harness"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a batch of seeded games");
    std::string agent_name = "handcrafted", scenario, backend, out;
    bool full_game = false, censor = false, occlusion_bug = false;
    int runs = 1, threads = 1, max_turns = 5000;
    uint64_t seed = 0;
    run->add_option("--agent", agent_name, "llm | handcrafted | scripted")->check(CLI::IsMember({"llm", "handcrafted", "scripted"}));
    auto* scen_opt = run->add_option("--scenario", scenario, "Builtin scenario name or scenario file");
    auto* full_opt = run->add_flag("--full-game", full_game, "Play the generated ten-level dungeon");
    scen_opt->excludes(full_opt);
    run->add_option("--runs", runs, "Number of runs")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "First seed; runs use seed..seed+runs-1");
    run->add_option("--backend", backend, "http | script:FILE | replay:FILE_OR_DIR");
    run->add_option("--out", out, "Directory for run logs, cassettes and the report");
    run->add_flag("--censor", censor, "Do not name the game in prompts");
    run->add_flag("--replicate-occlusion-bug", occlusion_bug, "Keep items that vanished under a monster");
    run->add_option("--threads", threads, "Parallel runs")->check(CLI::PositiveNumber);
    run->add_option("--max-turns", max_turns, "Full-game turn cap")->check(CLI::PositiveNumber);

    auto* list = app.add_subcommand("list", "List builtin scenarios");
    auto* show = app.add_subcommand("show", "Print a scenario in canonical form");
    std::string show_name;
    show->add_option("scenario", show_name, "Builtin name or file")->required();
    auto* solution = app.add_subcommand("solution", "Print a builtin scenario's scripted solution");
    std::string solution_name;
    solution->add_option("scenario", solution_name, "Builtin name")->required();
    auto* check = app.add_subcommand("check", "Parse a scenario file and report diagnostics");
    std::string check_file;
    check->add_option("file", check_file, "Scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& b : builtin_scenario_sources()) {
                const ScenarioSpec s = parse_scenario(b.source);
                std::cout << b.name << "  (time " << s.time_limit << ")  " << s.task << "\n";
            }
            return 0;
        }
        if (*show) {
            const BuiltinScenario* b = find_builtin(show_name);
            std::cout << print_scenario(parse_scenario(b ? b->source : read_file(show_name)));
            return 0;
        }
        if (*solution) {
            const BuiltinScenario* b = find_builtin(solution_name);
            if (!b) throw std::invalid_argument("unknown scenario '" + solution_name + "'");
            std::cout << b->solution;
            return 0;
        }
        if (*check) {
            try {
                const ScenarioSpec s = parse_scenario(read_file(check_file));
                std::cout << check_file << ": ok (" << s.name << ")\n";
                return 0;
            } catch (const ScenarioError& e) {
                std::cerr << check_file << ":" << e.line() << ":" << e.col() << ": " << error_kind_name(e.kind()) << ": "
                          << e.detail() << "\n";
                return 1;
            }
        }
        if (!full_game && scenario.empty()) throw std::invalid_argument("pass --scenario NAME or --full-game");
        BatchOptions o;
        o.agent = *agent_kind_from_name(agent_name);
        o.scenario = full_game ? "" : scenario;
        o.runs = runs;
        o.base_seed = seed;
        o.backend = make_factory(backend, o.agent);
        o.out_dir = out;
        o.censor = censor;
        o.replicate_occlusion_bug = occlusion_bug;
        o.threads = threads;
        o.full_game_turn_cap = max_turns;
        const BatchReport report = run_batch(o);
        std::cout << format_report(report);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
