#pragma once

// Text rendering of the tracker snapshot for the prompt's observation part.

#include "netplay/tracker.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace netplay {

int estimate_tokens(std::string_view text);  // ceil(chars / 4)
using TokenCounter = std::function<int(std::string_view)>;

struct DescribeOptions {
    int close_monster_steps = 8;
    bool level = true;
    bool monsters = true;
    bool inventory = true;
    bool stats = true;
    bool menu = true;
};

std::string describe_level(const Tracker& tracker, const PlayerState& player);
std::string describe_monsters(const Tracker& tracker, const PlayerState& player, int close_steps = 8);
std::string describe_inventory(const PlayerState& player);
std::string describe_stats(const GameState& state);
std::string describe_menu(const std::optional<MenuState>& menu);

struct Observation {
    std::vector<std::pair<std::string, std::string>> sections;  // (title, body)
    std::string rendered;
    int token_estimate = 0;
};

Observation describe_observation(const Tracker& tracker, const GameState& state, const DescribeOptions& options = {});

}  // namespace netplay
