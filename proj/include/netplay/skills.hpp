#pragma once

// Parameterized behaviours the agent selects from. Each compiles to engine actions.

#include "netplay/tracker.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace netplay {

enum class SkillKind : uint8_t { Special, Basic, Position, Inventory, Direction };
enum class ParamType : uint8_t { Int, String, Bool };

std::string_view skill_kind_name(SkillKind k);
std::string_view param_type_name(ParamType t);

struct ParamSpec {
    std::string name;
    ParamType type = ParamType::Int;
    bool optional = false;
};

struct SkillSpec {
    std::string name;
    SkillKind kind = SkillKind::Basic;
    std::vector<ParamSpec> params;
    std::string description;

    // "name(param: type, [param: type]) - description"
    std::string render() const;
};

const std::vector<SkillSpec>& skill_registry();
const SkillSpec* find_skill(std::string_view name);

using ParamValue = std::variant<int64_t, bool, std::string>;

struct SkillCall {
    std::string thoughts;
    std::string skill;
    std::map<std::string, ParamValue> params;

    bool operator==(const SkillCall&) const = default;
};

std::string format_call(const SkillCall& call);  // pickup(x=3, y=2)

// Empty when the call matches its spec; otherwise the reason.
std::optional<std::string> validate_call(const SkillCall& call);

struct TraceStep {
    Action action;
    std::vector<Event::Kind> events;
    bool interrupted = false;
};

struct SkillOutcome {
    enum class Kind : uint8_t { Completed, Failed, Interrupted, TaskFinished };
    Kind kind = Kind::Completed;
    std::vector<std::string> feedback;  // skill-level notes (Completed)
    std::string reason;                 // Failed
    std::vector<Event> interrupts;      // the events that stopped the skill
    std::vector<Event> events;          // every tracker event produced during execution
    std::vector<TraceStep> trace;
    int turns = 0;

    std::string summary() const;
};

std::string_view outcome_kind_name(SkillOutcome::Kind k);

const std::set<Event::Kind>& default_interrupt_set();

struct SkillContext {
    SkillContext(GameState& s, Tracker& t) : state(s), tracker(t) {}

    GameState& state;
    Tracker& tracker;
    bool avoid_monsters = false;
    std::set<Event::Kind> interrupt_set = default_interrupt_set();
    std::optional<int> turn_limit;           // stop once state.turn reaches it
    std::function<bool()> stop_requested;    // checked after every action
    std::function<void(const TraceStep&)> on_step;
    int max_actions = kMapWidth * kMapHeight * 14;
};

// Navigation helpers shared with the baseline agent.
// 8-connected shortest path over known passable tiles, excluding `from`, ending at `to`.
std::optional<std::vector<Pos>> plan_path(const Tracker& tracker, Pos from, Pos to, const std::set<Pos>& avoid = {});
// Tile 8-adjacent to `target` with the fewest steps from `from`; ties by lowest (y, x).
std::optional<Pos> approach_tile(const Tracker& tracker, Pos from, Pos target);

struct ExploreTarget {
    enum class Kind : uint8_t { Frontier, Door, DeadEnd };
    Kind kind = Kind::Frontier;
    Pos pos;
};

// What explore_level would do next from `from`; nullopt once the level is exhausted.
// Doors with `open_attempts` at the retry cap are skipped.
std::optional<ExploreTarget> next_explore_target(const Tracker& tracker, Pos from,
                                                 const std::map<Pos, int>& open_attempts = {});
std::vector<std::string> exploration_blockers(const Tracker& tracker);  // locked doors and boulders

SkillOutcome execute_skill(const SkillCall& call, SkillContext& ctx);

}  // namespace netplay
