#pragma once

// Deterministic turn-based roguelike engine. A GameState is a plain value:
// identical seed + identical action sequence gives an identical state.

#include "netplay/core.hpp"
#include "netplay/scenario_spec.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace netplay {

bool is_passable(TileKind k);
bool is_opaque(TileKind k);
bool is_door(TileKind k);
bool is_room_interior(TileKind k);  // floor-like tiles that make up a room
std::string_view tile_name(TileKind k);
std::optional<TileKind> tile_from_name(std::string_view name);
char tile_glyph(TileKind k);  // map-dump glyph

// ---------------------------------------------------------------- items

enum class ItemKind : uint8_t {
    FoodRation,
    Corpse,
    Potion,
    Wand,
    Scroll,
    Weapon,
    Pickaxe,
    BagOfHolding,
    Ring,
    Gold,
    Rock,
    Amulet,
};

enum class PotionEffect : uint8_t { Healing, ExtraHealing, Water, Sickness };
enum class WandEffect : uint8_t { Digging, Teleportation, Polymorph, Striking };
enum class ScrollEffect : uint8_t { Identify, Light, Teleportation };
enum class RingEffect : uint8_t { PolymorphControl, Protection };

struct Item {
    int id = 0;
    char letter = 0;  // 0 when not in the player's inventory
    ItemKind kind = ItemKind::Rock;
    std::string name;        // true name, e.g. "wand of digging"
    std::string appearance;  // shown while unidentified, e.g. "oak wand"
    bool identified = true;
    int weight = 0;
    int effect = 0;       // PotionEffect / WandEffect / ScrollEffect / RingEffect
    int charges = 0;      // wands
    int damage = 0;       // weapons: damage-die maximum
    int amount = 0;       // gold
    std::string corpse_of;
    int kill_turn = 0;
    int nutrition = 0;
    std::vector<Item> contents;  // bag of holding only, never nested

    std::string display_name() const;
    bool operator==(const Item&) const = default;
};

// Builds an item from its catalog name ("potion of healing", "12 gold pieces",
// "newt corpse", ...). Returns nullopt for unknown names.
std::optional<Item> make_item(std::string_view name);
int total_weight(const Item& item);

// ---------------------------------------------------------------- monsters

struct MonsterStats {
    std::string kind;
    int hp = 1;
    int damage = 1;
    int xp = 1;
    int difficulty = 1;
    int nutrition = 50;
    bool stationary = false;
    bool phases = false;  // walks through walls
};

const MonsterStats* monster_stats(std::string_view kind);
const std::vector<MonsterStats>& monster_catalog();

struct Monster {
    int id = 0;
    std::string kind;
    Pos pos;
    int hp = 1;
    int max_hp = 1;
    Attitude attitude = Attitude::Hostile;
    int xp_value = 0;
    int damage = 1;
    std::vector<Item> inventory;

    bool operator==(const Monster&) const = default;
};

// ---------------------------------------------------------------- player

enum class Hunger : uint8_t { Satiated, NotHungry, Hungry, Weak, Starving };
std::string_view hunger_name(Hunger h);
Hunger hunger_for(int nutrition);

enum class Status : uint8_t { Ill, Blind };

int xp_threshold(int level);      // points needed to reach `level`
int xp_level_for(int xp_points);  // largest level whose threshold is met

struct PlayerState {
    Pos pos;
    int depth = 1;
    int max_depth = 1;
    int hp = 16;
    int max_hp = 16;
    int xp_points = 0;
    int xp_level = 1;
    int nutrition = 900;
    std::set<Status> status;
    int ill_since = 0;
    std::vector<Item> inventory;
    char wielded = 0;
    char worn_ring = 0;
    int gold = 0;
    int prayer_cooldown = 0;
    std::string form;  // polymorphed form; empty for the natural form

    Hunger hunger() const { return hunger_for(nutrition); }
    const Item* item(char letter) const;
    Item* item(char letter);
    int carried_weight() const;
    bool operator==(const PlayerState&) const = default;
};

// ---------------------------------------------------------------- menus

enum class MenuKind : uint8_t { PickupMulti, ContainerLoot, DirectionPrompt, ConfirmPrompt, TextEntry };

struct MenuEntry {
    char letter = 0;
    std::string label;
    bool marked = false;
    int item_id = 0;
    bool operator==(const MenuEntry&) const = default;
};

// What committing the menu does.
enum class MenuPurpose : uint8_t {
    Pickup,
    LootChoice,  // first container menu: take out / put in
    PutIn,
    TakeOut,
    Zap,
    Apply,
    Open,
    Close,
    AttackPeaceful,
    PolymorphForm,
    Identify,
    Engrave,
};

struct MenuState {
    MenuKind kind = MenuKind::ConfirmPrompt;
    MenuPurpose purpose = MenuPurpose::Pickup;
    std::string prompt;
    std::vector<MenuEntry> entries;
    bool requires_confirm = false;  // marks commit only on ENTER
    char item_letter = 0;           // zap/apply/put-in source item
    int target_id = 0;              // peaceful monster under attack
    Pos target;
    bool operator==(const MenuState&) const = default;
};

// ---------------------------------------------------------------- level / game

struct LevelMap {
    std::vector<TileKind> tiles = std::vector<TileKind>(kMapWidth * kMapHeight, TileKind::Wall);
    std::vector<uint8_t> hidden = std::vector<uint8_t>(kMapWidth * kMapHeight, 0);  // secret corridor tiles
    std::map<Pos, std::vector<Item>> piles;
    std::vector<Monster> monsters;
    std::map<Pos, TileKind> boulder_base;  // terrain under each boulder
    std::set<Pos> brittle;
    std::map<Pos, std::string> engravings;

    TileKind at(Pos p) const { return in_bounds(p) ? tiles[index_of(p)] : TileKind::Wall; }
    void set(Pos p, TileKind k) { tiles[index_of(p)] = k; }
    bool is_hidden(Pos p) const { return in_bounds(p) && hidden[index_of(p)] != 0; }
    // What an observer sees: secret corridors look like wall.
    TileKind apparent(Pos p) const { return is_hidden(p) ? TileKind::Wall : at(p); }
    Monster* monster_at(Pos p);
    const Monster* monster_at(Pos p) const;
    const std::vector<Item>* pile(Pos p) const;
    bool operator==(const LevelMap&) const = default;
};

struct HistoryEntry {
    int turn = 0;
    std::string verb;  // pickup, drink, kill, identify, destroy, zap, ...
    std::string subject;
    bool operator==(const HistoryEntry&) const = default;
};

enum class RunStatus : uint8_t { Running, Dead, Won };

struct DoneState {
    RunStatus status = RunStatus::Running;
    std::string cause;
    bool operator==(const DoneState&) const = default;
};

struct GameState {
    std::vector<LevelMap> levels;
    PlayerState player;
    int turn = 0;
    std::optional<MenuState> open_menu;
    std::vector<std::string> pending_messages;  // messages of the most recent step
    Rng rng;
    DoneState done;
    int next_id = 1;
    bool full_game = false;
    std::vector<HistoryEntry> history;
    std::vector<Region> regions;

    LevelMap& level() { return levels[player.depth - 1]; }
    const LevelMap& level() const { return levels[player.depth - 1]; }
    bool running() const { return done.status == RunStatus::Running; }
};

// ---------------------------------------------------------------- actions

struct Action {
    enum class Type : uint8_t {
        Move, Kick, Pickup, Drop, Wield, Eat, Quaff, Zap, Apply, Pray, Search, Open, Close,
        GoUp, GoDown, Engrave, ReadFloor, Read, PutOn, Pay, Cast, PressKey, TypeText, Wait,
    };
    Type type = Type::Wait;
    std::optional<Dir> dir;  // absent: the engine prompts for a direction
    char letter = 0;         // 0: floor corpse (Eat) / fountain (Quaff)
    std::string text;        // Engrave, TypeText, PressKey ("a", "ESC", "SPACE", "ENTER")

    static Action move(Dir d) { return {Type::Move, d, 0, {}}; }
    static Action kick(Dir d) { return {Type::Kick, d, 0, {}}; }
    static Action simple(Type t) { return {t, std::nullopt, 0, {}}; }
    static Action with_letter(Type t, char letter) { return {t, std::nullopt, letter, {}}; }
    static Action zap(char letter, std::optional<Dir> d = std::nullopt) { return {Type::Zap, d, letter, {}}; }
    static Action apply(char letter, std::optional<Dir> d = std::nullopt) { return {Type::Apply, d, letter, {}}; }
    static Action key(std::string k) { return {Type::PressKey, std::nullopt, 0, std::move(k)}; }
    static Action type_text(std::string t) { return {Type::TypeText, std::nullopt, 0, std::move(t)}; }

    bool operator==(const Action&) const = default;
};

std::string to_string(const Action& a);
// Parses the compact text form produced by to_string ("move e", "zap a l", "key ESC").
std::optional<Action> parse_action(std::string_view text);

struct StepResult {
    std::vector<std::string> messages;
    int turn_delta = 0;
    RunStatus done = RunStatus::Running;
    bool invalid = false;  // precondition failed; state unchanged except messages
};

class PlacementImpossible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GameOver : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Rules {
    static constexpr int kRotThreshold = 30;
    static constexpr int kIllnessLimit = 40;
    static constexpr int kPrayerCooldown = 500;
    static constexpr int kStartNutrition = 900;
    static constexpr int kStarvationDeath = -200;
    static constexpr int kCarryCapacity = 600;
    static constexpr int kRegenInterval = 10;
    static constexpr int kRespawnOdds = 60;  // 1 in N per turn, full game only
    static constexpr int kFullGameLevels = 10;
    static constexpr int kRayRange = 8;
};

GameState new_game(const ScenarioSpec& spec, uint64_t seed);
GameState new_full_game(uint64_t seed);

// Throws GameOver when the game has already ended.
StepResult step(GameState& state, const Action& action);

std::set<Pos> visible_tiles(const GameState& state);
int compute_score(const GameState& state);

bool corpse_is_fresh(const Item& corpse, int turn);
std::string state_digest(const GameState& state);
std::string render_map(const GameState& state);  // plain-text dump of the current level

// Every item id in the world, for conservation checks.
std::vector<int> all_item_ids(const GameState& state);

}  // namespace netplay
