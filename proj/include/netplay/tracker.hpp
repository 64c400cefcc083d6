#pragma once

// Agent-side world model: remembered map, structures, known entities, events.

#include "netplay/sim.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace netplay {

struct Structure {
    enum class Kind : uint8_t { Room, Corridor };
    int id = 0;
    Kind kind = Kind::Room;
    std::set<Pos> tiles;
    int discovered_turn = 0;

    std::string label() const;  // "room_2", "corridor_5"
    bool operator==(const Structure&) const = default;
};

using KnownGrid = std::vector<TileKind>;  // kMapWidth * kMapHeight, Unknown when never seen

// Pure segmentation. Ids are 1..n in order of each structure's lowest (y, x) tile.
std::vector<Structure> segment_structures(const KnownGrid& grid);

struct LevelMemory {
    KnownGrid grid = KnownGrid(kMapWidth * kMapHeight, TileKind::Unknown);
    std::set<Pos> seen;
    std::map<Pos, int> searched_count;
    std::vector<Structure> structures;
    std::map<Pos, TileKind> features;
    int next_structure_id = 1;

    TileKind at(Pos p) const { return in_bounds(p) ? grid[index_of(p)] : TileKind::Unknown; }
};

struct KnownItem {
    int id = 0;
    std::string name;  // as displayed
    ItemKind kind = ItemKind::Rock;
    int depth = 1;
    Pos pos;
    bool occluded = false;  // a monster stood on it after it was last seen
};

struct KnownMonster {
    int id = 0;
    std::string kind;
    Pos pos;
    Attitude attitude = Attitude::Hostile;
};

struct StatsSnapshot {
    int hp = 0;
    int max_hp = 0;
    Hunger hunger = Hunger::NotHungry;
    int xp_level = 1;
    int gold = 0;
    bool operator==(const StatsSnapshot&) const = default;
};

struct Event {
    enum class Kind : uint8_t {
        NewMessage,
        NewStructure,
        LevelChanged,
        Teleported,
        StatChanged,
        LowHealth,
        NewMonster,
        NewItem,
        NewFeature,
        MenuOpened,
        GameEnded,
    };
    Kind kind = Kind::NewMessage;
    int turn = 0;
    std::string text;  // message, stat name, entity name or menu prompt
    int id = 0;        // structure / monster / item id
    int old_value = 0;
    int new_value = 0;  // also depth for LevelChanged
    Pos pos;
    TileKind feature = TileKind::Unknown;
    RunStatus status = RunStatus::Running;

    std::string describe() const;
};

std::string_view event_kind_name(Event::Kind k);

struct TrackerConfig {
    double low_health = 0.5;
    // Keep items that vanished while a monster stood on them (the failure mode under study).
    bool replicate_occlusion_bug = false;
};

class Tracker {
public:
    explicit Tracker(TrackerConfig config = {}) : config_(config) {}

    std::vector<Event> update(const GameState& state, const std::vector<std::string>& step_messages);
    void record_search(Pos p);
    // Replaces the current level's memory with `grid` as if every known tile had been seen.
    // Used by map-revealing fixtures; emits no events.
    void assume_known(const KnownGrid& grid);

    std::optional<int> steps_to(Pos from, Pos to) const;
    // Distances from `from` to every reachable known-passable tile (-1 elsewhere).
    std::vector<int> distance_map(Pos from) const;

    const LevelMemory& level() const;  // empty memory before the first update
    int depth() const { return depth_; }
    Pos player_pos() const { return pos_; }
    int turn() const { return turn_; }
    const TrackerConfig& config() const { return config_; }

    const std::map<int, KnownItem>& known_items() const { return known_items_; }
    std::vector<KnownItem> items_on_level() const;
    const std::map<int, KnownMonster>& known_monsters() const { return known_monsters_; }

    bool is_frontier(Pos p) const;
    std::vector<Pos> frontier() const;
    bool is_dead_end(Pos p) const;
    const Structure* structure_at(Pos p) const;
    const Structure* structure_by_id(int id) const;
    bool structure_explorable(const Structure& s) const;

private:
    TrackerConfig config_;
    std::map<int, LevelMemory> levels_;
    int depth_ = 1;
    Pos pos_;
    int turn_ = 0;
    bool initialized_ = false;
    StatsSnapshot stats_;
    std::optional<MenuState> menu_;
    bool game_end_reported_ = false;
    std::map<int, KnownItem> known_items_;
    std::map<int, KnownMonster> known_monsters_;
    std::set<int> seen_item_ids_;
    std::set<int> seen_monster_ids_;

    LevelMemory& mem() { return levels_[depth_]; }
    void resegment(LevelMemory& m, int turn, std::vector<Event>& out);
};

}  // namespace netplay
