#include "netplay/describe.hpp"
#include "netplay/harness.hpp"
#include "netplay/scenario.hpp"
#include "netplay/sim.hpp"
#include "netplay/tracker.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace netplay;

namespace {

std::string status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Running: return "running";
        case RunStatus::Dead: return "dead";
        case RunStatus::Won: return "won";
    }
    return "?";
}

// A game plus the tracker that watches it, stepped one primitive action at a time.
class Game {
public:
    Game(const std::optional<std::string>& scenario, uint64_t seed) {
        if (!scenario) {
            state_ = new_full_game(seed);
        } else if (const BuiltinScenario* b = find_builtin(*scenario)) {
            spec_ = parse_scenario(b->source);
            state_ = new_game(*spec_, seed);
        } else {
            spec_ = parse_scenario(*scenario);
            state_ = new_game(*spec_, seed);
        }
        tracker_.update(state_, {});
    }

    py::dict step(const std::string& action_text) {
        const auto action = parse_action(action_text);
        if (!action) throw py::value_error("unknown action: " + action_text);
        const StepResult r = netplay::step(state_, *action);
        py::list events;
        for (const Event& e : tracker_.update(state_, r.messages)) events.append(e.describe());
        py::dict out;
        out["messages"] = r.messages;
        out["events"] = events;
        out["turn_delta"] = r.turn_delta;
        out["invalid"] = r.invalid;
        out["status"] = status_name(r.done);
        return out;
    }

    std::string observation() const { return describe_observation(tracker_, state_).rendered; }
    std::string render() const { return render_map(state_); }
    std::string digest() const { return state_digest(state_); }
    int turn() const { return state_.turn; }
    int score() const { return compute_score(state_); }
    std::string status() const { return status_name(state_.done.status); }
    std::string cause() const { return state_.done.cause; }
    bool goal_met() const { return spec_ ? evaluate_success(spec_->success, state_) : state_.done.status == RunStatus::Won; }

    py::dict player() const {
        const PlayerState& p = state_.player;
        py::dict d;
        d["x"] = p.pos.x;
        d["y"] = p.pos.y;
        d["depth"] = p.depth;
        d["max_depth"] = p.max_depth;
        d["hp"] = p.hp;
        d["max_hp"] = p.max_hp;
        d["xp_level"] = p.xp_level;
        d["nutrition"] = p.nutrition;
        d["gold"] = p.gold;
        return d;
    }

private:
    std::optional<ScenarioSpec> spec_;
    GameState state_;
    Tracker tracker_;
};

std::pair<std::string, std::string> run_batch_py(const std::string& agent, const std::optional<std::string>& scenario, int runs,
                                                 uint64_t seed, const std::optional<std::string>& rules, int threads, int turn_cap,
                                                 const std::string& out_dir, bool censor) {
    const auto kind = agent_kind_from_name(agent);
    if (!kind) throw py::value_error("unknown agent: " + agent);
    BatchOptions o;
    o.agent = *kind;
    o.scenario = scenario.value_or("");
    o.runs = runs;
    o.base_seed = seed;
    o.threads = threads;
    o.full_game_turn_cap = turn_cap;
    o.out_dir = out_dir;
    o.censor = censor;
    if (rules) {
        ScriptedBackend::parse_rules(*rules);
        o.backend = [text = *rules](const std::string&, uint64_t) -> std::shared_ptr<Backend> {
            return std::make_shared<ScriptedBackend>(ScriptedBackend::parse_rules(text));
        };
    } else if (o.agent == AgentKind::Scripted) {
        o.backend = [](const std::string& target, uint64_t) -> std::shared_ptr<Backend> {
            const BuiltinScenario* b = find_builtin(target);
            if (!b) throw std::invalid_argument("no builtin solution for '" + target + "'");
            return std::make_shared<ScriptedBackend>(ScriptedBackend::parse_rules(b->solution));
        };
    } else if (o.agent == AgentKind::Llm) {
        const auto config = HttpConfig::from_env();
        if (!config) throw py::value_error("set NETPLAY_LLM_ENDPOINT for the llm agent");
        auto shared = std::make_shared<HttpBackend>(*config);
        o.backend = [shared](const std::string&, uint64_t) -> std::shared_ptr<Backend> { return shared; };
    }
    BatchReport report;
    {
        py::gil_scoped_release release;
        report = run_batch(o);
    }
    return {report_json(report), format_report(report)};
}

}  // namespace

PYBIND11_MODULE(_netplay, m) {
    m.doc() = "Text roguelike simulator, skill agent and evaluation harness";

    // ScenarioError(message, kind, line, col)
    static py::exception<ScenarioError> scenario_error(m, "ScenarioError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ScenarioError& e) {
            const py::tuple args = py::make_tuple(e.what(), std::string(error_kind_name(e.kind())), e.line(), e.col());
            PyErr_SetObject(scenario_error.ptr(), args.ptr());
        }
    });

    m.def("builtin_names", [] {
        std::vector<std::string> names;
        for (const auto& b : builtin_scenario_sources()) names.push_back(b.name);
        return names;
    });
    m.def("builtin_source", [](const std::string& name) {
        const BuiltinScenario* b = find_builtin(name);
        if (!b) throw py::key_error(name);
        return b->source;
    });
    m.def("builtin_solution", [](const std::string& name) {
        const BuiltinScenario* b = find_builtin(name);
        if (!b) throw py::key_error(name);
        return b->solution;
    });
    m.def("normalize_scenario", [](const std::string& text) { return print_scenario(parse_scenario(text)); },
          "Parse a scenario and print it back in canonical form.");

    py::class_<Game>(m, "Game")
        .def(py::init<const std::optional<std::string>&, uint64_t>(), py::arg("scenario") = py::none(), py::arg("seed") = 0,
             "scenario: builtin name, scenario source, or None for a full game")
        .def("step", &Game::step, py::arg("action"))
        .def("observation", &Game::observation)
        .def("render", &Game::render)
        .def("digest", &Game::digest)
        .def("goal_met", &Game::goal_met)
        .def_property_readonly("turn", &Game::turn)
        .def_property_readonly("score", &Game::score)
        .def_property_readonly("status", &Game::status)
        .def_property_readonly("cause", &Game::cause)
        .def_property_readonly("player", &Game::player);

    m.def("run_batch", &run_batch_py, py::arg("agent"), py::arg("scenario") = py::none(), py::arg("runs") = 1,
          py::arg("seed") = 0, py::arg("rules") = py::none(), py::arg("threads") = 1, py::arg("turn_cap") = 5000,
          py::arg("out_dir") = "", py::arg("censor") = false,
          "Returns (summary json, text report).");
}
