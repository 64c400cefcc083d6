#pragma once

// Handcrafted priority-rule agent used as the non-LLM comparison.

#include "netplay/agent.hpp"

#include <array>
#include <map>

namespace netplay {

struct BaselineConfig {
    double heal_below = 0.6;
    int close_monster_steps = 8;
    int pickup_attempts = 2;  // per item id, then the item is ignored
    std::optional<int> turn_limit;
    int idle_limit = 20;  // decisions without game time passing before a forced wait
};

struct BaselineDecision {
    int rule = 7;  // 1..7
    SkillCall call;
    int item_id = 0;  // rule 5 target
};

// Rule conditions evaluated independently: index i holds rule i+1.
// `pickup_tries` counts earlier pickup attempts per item id.
std::array<bool, 7> rule_conditions(const Tracker& tracker, const GameState& state, const BaselineConfig& config,
                                    const std::map<int, int>& pickup_tries = {});

class BaselineAgent {
public:
    explicit BaselineAgent(BaselineConfig config = {}) : config_(config) {}

    BaselineDecision select_skill(const Tracker& tracker, const GameState& state) const;
    void observe(const BaselineDecision& decision, const SkillOutcome& outcome);
    const std::map<int, int>& pickup_tries() const { return pickup_tries_; }

private:
    BaselineConfig config_;
    std::map<int, int> pickup_tries_;
};

RunRecord run_baseline(GameState& state, Tracker& tracker, const BaselineConfig& config = {}, const RunHooks& hooks = {});

}  // namespace netplay
