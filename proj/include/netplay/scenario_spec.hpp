#pragma once

#include "netplay/core.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace netplay {

enum class TileKind : uint8_t {
    Wall,
    Floor,
    Corridor,
    DoorOpen,
    DoorClosed,
    DoorLocked,
    StairsUp,
    StairsDown,
    Fountain,
    Altar,
    Boulder,
    Statue,
    Unknown,  // render-only: never stored in a level
};

enum class Attitude : uint8_t { Hostile, Peaceful, Pet };

struct Region {
    std::string name;
    Pos lo;
    Pos hi;  // inclusive

    bool contains(Pos p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
    bool operator==(const Region&) const = default;
};

struct Placement {
    enum class Mode : uint8_t { Fixed, Random, RandomIn };
    Mode mode = Mode::Fixed;
    Pos pos;
    std::string region;  // RandomIn only

    bool operator==(const Placement&) const = default;
};

struct ObjectPlacement {
    std::string name;
    Placement where;
    bool unidentified = false;
    bool operator==(const ObjectPlacement&) const = default;
};

struct MonsterPlacement {
    std::string kind;
    Placement where;
    Attitude attitude = Attitude::Hostile;
    bool operator==(const MonsterPlacement&) const = default;
};

struct InventoryEntry {
    std::string name;
    bool wielded = false;
    bool worn = false;
    bool unidentified = false;
    bool operator==(const InventoryEntry&) const = default;
};

struct Engraving {
    Pos pos;
    std::string text;
    bool operator==(const Engraving&) const = default;
};

using AtomArg = std::variant<long long, std::string>;

// Boolean expression over game-state atoms. Leaves are Atom/True/False.
struct SuccessExpr {
    enum class Op : uint8_t { True, False, Atom, All, Any, Not, Then };
    Op op = Op::True;
    std::string atom;
    std::vector<AtomArg> args;
    std::vector<SuccessExpr> children;

    bool operator==(const SuccessExpr&) const = default;
};

struct ScenarioSpec {
    std::string name;
    std::vector<std::string> map;
    std::map<char, TileKind> legend;  // glyphs beyond the built-in set
    std::vector<Region> regions;
    std::vector<ObjectPlacement> objects;
    std::vector<MonsterPlacement> monsters;
    std::vector<InventoryEntry> inventory;
    std::vector<Engraving> engravings;
    std::vector<Pos> brittle_walls;
    Placement start;
    std::string task;
    std::optional<std::string> guide;
    SuccessExpr success;
    int time_limit = 200;
    int llm_call_limit = 100;

    const Region* find_region(const std::string& region_name) const;
    bool operator==(const ScenarioSpec&) const = default;
};

}  // namespace netplay
