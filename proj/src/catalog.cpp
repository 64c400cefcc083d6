#include "netplay/sim.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace netplay {

bool is_passable(TileKind k) {
    switch (k) {
        case TileKind::Floor:
        case TileKind::Corridor:
        case TileKind::DoorOpen:
        case TileKind::StairsUp:
        case TileKind::StairsDown:
        case TileKind::Fountain:
        case TileKind::Altar:
        case TileKind::Statue:
            return true;
        default:
            return false;
    }
}

bool is_opaque(TileKind k) {
    return k == TileKind::Wall || k == TileKind::DoorClosed || k == TileKind::DoorLocked || k == TileKind::Boulder;
}

bool is_door(TileKind k) {
    return k == TileKind::DoorOpen || k == TileKind::DoorClosed || k == TileKind::DoorLocked;
}

bool is_room_interior(TileKind k) {
    switch (k) {
        case TileKind::Floor:
        case TileKind::StairsUp:
        case TileKind::StairsDown:
        case TileKind::Fountain:
        case TileKind::Altar:
        case TileKind::Statue:
            return true;
        default:
            return false;
    }
}

namespace {
constexpr std::array<std::pair<TileKind, std::string_view>, 13> kTileNames = {{
    {TileKind::Wall, "wall"},
    {TileKind::Floor, "floor"},
    {TileKind::Corridor, "corridor"},
    {TileKind::DoorOpen, "open door"},
    {TileKind::DoorClosed, "closed door"},
    {TileKind::DoorLocked, "locked door"},
    {TileKind::StairsUp, "staircase up"},
    {TileKind::StairsDown, "staircase down"},
    {TileKind::Fountain, "fountain"},
    {TileKind::Altar, "altar"},
    {TileKind::Boulder, "boulder"},
    {TileKind::Statue, "statue"},
    {TileKind::Unknown, "unknown"},
}};
}  // namespace

std::string_view tile_name(TileKind k) {
    for (const auto& [kind, name] : kTileNames) {
        if (kind == k) return name;
    }
    return "unknown";
}

std::optional<TileKind> tile_from_name(std::string_view name) {
    std::string n = lowercase(trim(name));
    std::replace(n.begin(), n.end(), '_', ' ');
    for (const auto& [kind, tname] : kTileNames) {
        if (n == tname) return kind;
    }
    if (n == "door open") return TileKind::DoorOpen;
    if (n == "door closed" || n == "door") return TileKind::DoorClosed;
    if (n == "door locked") return TileKind::DoorLocked;
    if (n == "stairs up" || n == "upstairs") return TileKind::StairsUp;
    if (n == "stairs down" || n == "downstairs") return TileKind::StairsDown;
    return std::nullopt;
}

// ---------------------------------------------------------------- items

std::string Item::display_name() const {
    if (kind == ItemKind::Gold) return std::to_string(amount) + (amount == 1 ? " gold piece" : " gold pieces");
    return identified ? name : appearance;
}

int total_weight(const Item& item) {
    if (item.kind != ItemKind::BagOfHolding) return item.weight;
    int inner = 0;
    for (const auto& c : item.contents) inner += total_weight(c);
    return item.weight + (inner + 1) / 2;
}

namespace {

struct ItemTemplate {
    std::string_view name;
    ItemKind kind;
    int weight;
    int effect;
    int damage;
    std::string_view appearance;
};

constexpr ItemTemplate kItems[] = {
    {"food ration", ItemKind::FoodRation, 20, 0, 0, ""},
    {"potion of healing", ItemKind::Potion, 20, int(PotionEffect::Healing), 0, "pink potion"},
    {"potion of extra healing", ItemKind::Potion, 20, int(PotionEffect::ExtraHealing), 0, "ruby potion"},
    {"potion of water", ItemKind::Potion, 20, int(PotionEffect::Water), 0, "clear potion"},
    {"potion of sickness", ItemKind::Potion, 20, int(PotionEffect::Sickness), 0, "murky potion"},
    {"wand of digging", ItemKind::Wand, 7, int(WandEffect::Digging), 0, "oak wand"},
    {"wand of teleportation", ItemKind::Wand, 7, int(WandEffect::Teleportation), 0, "iron wand"},
    {"wand of polymorph", ItemKind::Wand, 7, int(WandEffect::Polymorph), 0, "glass wand"},
    {"wand of striking", ItemKind::Wand, 7, int(WandEffect::Striking), 0, "maple wand"},
    {"scroll of identify", ItemKind::Scroll, 5, int(ScrollEffect::Identify), 0, "scroll labeled KIRJE"},
    {"scroll of light", ItemKind::Scroll, 5, int(ScrollEffect::Light), 0, "scroll labeled ELBIB YLOH"},
    {"scroll of teleportation", ItemKind::Scroll, 5, int(ScrollEffect::Teleportation), 0, "scroll labeled VE FORBRYDERNE"},
    {"long sword", ItemKind::Weapon, 40, 0, 8, ""},
    {"short sword", ItemKind::Weapon, 30, 0, 6, ""},
    {"dagger", ItemKind::Weapon, 10, 0, 4, ""},
    {"mace", ItemKind::Weapon, 30, 0, 6, ""},
    {"pickaxe", ItemKind::Pickaxe, 100, 0, 6, ""},
    {"bag of holding", ItemKind::BagOfHolding, 15, 0, 0, ""},
    {"ring of polymorph control", ItemKind::Ring, 3, int(RingEffect::PolymorphControl), 0, "jade ring"},
    {"ring of protection", ItemKind::Ring, 3, int(RingEffect::Protection), 0, "coral ring"},
    {"rock", ItemKind::Rock, 10, 0, 0, ""},
    {"huge stone", ItemKind::Rock, 400, 0, 0, ""},
    {"amulet of yendor", ItemKind::Amulet, 20, 0, 0, ""},
};

}  // namespace

std::optional<Item> make_item(std::string_view raw) {
    const std::string name = lowercase(trim(raw));
    for (const auto& t : kItems) {
        if (name == t.name) {
            Item it;
            it.kind = t.kind;
            it.name = std::string(t.name);
            it.appearance = t.appearance.empty() ? it.name : std::string(t.appearance);
            it.weight = t.weight;
            it.effect = t.effect;
            it.damage = t.damage;
            if (t.kind == ItemKind::Wand) it.charges = 5;
            if (t.kind == ItemKind::FoodRation) it.nutrition = 800;
            return it;
        }
    }
    // "<n> gold pieces" / "gold piece"
    if (name.ends_with("gold pieces") || name.ends_with("gold piece")) {
        Item it;
        it.kind = ItemKind::Gold;
        it.name = "gold";
        it.appearance = "gold";
        std::istringstream in(name);
        int amount = 1;
        if (std::isdigit(static_cast<unsigned char>(name[0]))) in >> amount;
        it.amount = std::max(1, amount);
        it.weight = 0;
        return it;
    }
    const std::string corpse_suffix = " corpse";
    if (name.ends_with(corpse_suffix)) {
        const std::string kind = name.substr(0, name.size() - corpse_suffix.size());
        const MonsterStats* stats = monster_stats(kind);
        if (!stats) return std::nullopt;
        Item it;
        it.kind = ItemKind::Corpse;
        it.name = name;
        it.appearance = name;
        it.corpse_of = kind;
        it.weight = std::max(10, stats->hp * 10);
        it.nutrition = stats->nutrition;
        return it;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- monsters

const std::vector<MonsterStats>& monster_catalog() {
    static const std::vector<MonsterStats> catalog = {
        // kind, hp, damage, xp, difficulty, nutrition, stationary, phases
        {"newt", 1, 1, 1, 1, 20, false, false},
        {"grid bug", 1, 1, 1, 1, 10, false, false},
        {"jackal", 3, 2, 3, 1, 250, false, false},
        {"sewer rat", 4, 2, 5, 1, 250, false, false},
        {"kitten", 8, 3, 5, 2, 150, false, false},
        {"gnome", 6, 3, 8, 2, 100, false, false},
        {"gnome lord", 8, 3, 10, 3, 120, false, false},
        {"hill orc", 10, 4, 15, 3, 200, false, false},
        {"giant ant", 10, 4, 20, 4, 150, false, false},
        {"dwarf", 12, 5, 20, 4, 300, false, false},
        {"water moccasin", 10, 4, 20, 4, 80, false, false},
        {"soldier ant", 16, 6, 40, 6, 150, false, false},
        {"wolf", 16, 6, 40, 6, 250, false, false},
        {"owlbear", 28, 8, 60, 8, 700, false, false},
        {"troll", 30, 9, 80, 9, 800, false, false},
        {"xorn", 24, 6, 60, 9, 700, false, true},
        {"shopkeeper", 60, 12, 100, 12, 400, true, false},
    };
    return catalog;
}

const MonsterStats* monster_stats(std::string_view kind) {
    const std::string k = lowercase(trim(kind));
    for (const auto& m : monster_catalog()) {
        if (m.kind == k) return &m;
    }
    return nullptr;
}

// ---------------------------------------------------------------- player

std::string_view hunger_name(Hunger h) {
    switch (h) {
        case Hunger::Satiated: return "Satiated";
        case Hunger::NotHungry: return "Not Hungry";
        case Hunger::Hungry: return "Hungry";
        case Hunger::Weak: return "Weak";
        case Hunger::Starving: return "Starving";
    }
    return "Not Hungry";
}

Hunger hunger_for(int nutrition) {
    if (nutrition > 1000) return Hunger::Satiated;
    if (nutrition >= 150) return Hunger::NotHungry;
    if (nutrition >= 50) return Hunger::Hungry;
    if (nutrition >= 0) return Hunger::Weak;
    return Hunger::Starving;
}

int xp_threshold(int level) {
    if (level <= 1) return 0;
    return 20 << (level - 2);
}

int xp_level_for(int xp_points) {
    int level = 1;
    while (level < 30 && xp_points >= xp_threshold(level + 1)) ++level;
    return level;
}

const Item* PlayerState::item(char letter) const {
    for (const auto& it : inventory) {
        if (it.letter == letter) return &it;
    }
    return nullptr;
}

Item* PlayerState::item(char letter) {
    for (auto& it : inventory) {
        if (it.letter == letter) return &it;
    }
    return nullptr;
}

int PlayerState::carried_weight() const {
    int w = 0;
    for (const auto& it : inventory) w += total_weight(it);
    return w;
}

// ---------------------------------------------------------------- level

Monster* LevelMap::monster_at(Pos p) {
    for (auto& m : monsters) {
        if (m.pos == p) return &m;
    }
    return nullptr;
}

const Monster* LevelMap::monster_at(Pos p) const {
    for (const auto& m : monsters) {
        if (m.pos == p) return &m;
    }
    return nullptr;
}

const std::vector<Item>* LevelMap::pile(Pos p) const {
    auto it = piles.find(p);
    if (it == piles.end() || it->second.empty()) return nullptr;
    return &it->second;
}

const Region* ScenarioSpec::find_region(const std::string& region_name) const {
    for (const auto& r : regions) {
        if (r.name == region_name) return &r;
    }
    return nullptr;
}

// ---------------------------------------------------------------- actions

namespace {

struct ActionName {
    Action::Type type;
    std::string_view name;
};

constexpr ActionName kActionNames[] = {
    {Action::Type::Move, "move"},       {Action::Type::Kick, "kick"},       {Action::Type::Pickup, "pickup"},
    {Action::Type::Drop, "drop"},       {Action::Type::Wield, "wield"},     {Action::Type::Eat, "eat"},
    {Action::Type::Quaff, "quaff"},     {Action::Type::Zap, "zap"},         {Action::Type::Apply, "apply"},
    {Action::Type::Pray, "pray"},       {Action::Type::Search, "search"},   {Action::Type::Open, "open"},
    {Action::Type::Close, "close"},     {Action::Type::GoUp, "up"},         {Action::Type::GoDown, "down"},
    {Action::Type::Engrave, "engrave"}, {Action::Type::ReadFloor, "readfloor"}, {Action::Type::Read, "read"},
    {Action::Type::PutOn, "puton"},     {Action::Type::Pay, "pay"},         {Action::Type::Cast, "cast"},
    {Action::Type::PressKey, "key"},    {Action::Type::TypeText, "type"},   {Action::Type::Wait, "wait"},
};

bool takes_letter(Action::Type t) {
    using T = Action::Type;
    return t == T::Drop || t == T::Wield || t == T::Eat || t == T::Quaff || t == T::Zap || t == T::Apply ||
           t == T::Read || t == T::PutOn;
}

bool takes_dir(Action::Type t) {
    using T = Action::Type;
    return t == T::Move || t == T::Kick || t == T::Zap || t == T::Apply || t == T::Open || t == T::Close;
}

std::string_view short_dir(Dir d) {
    switch (d) {
        case Dir::N: return "n";
        case Dir::NE: return "ne";
        case Dir::E: return "e";
        case Dir::SE: return "se";
        case Dir::S: return "s";
        case Dir::SW: return "sw";
        case Dir::W: return "w";
        case Dir::NW: return "nw";
        case Dir::Self: return "self";
    }
    return "self";
}

}  // namespace

std::string to_string(const Action& a) {
    std::string out;
    for (const auto& n : kActionNames) {
        if (n.type == a.type) out = std::string(n.name);
    }
    if (a.type == Action::Type::PressKey || a.type == Action::Type::TypeText || a.type == Action::Type::Engrave) {
        if (!a.text.empty()) out += " " + a.text;
        return out;
    }
    if (takes_letter(a.type)) out += std::string(" ") + (a.letter ? a.letter : '-');
    if (takes_dir(a.type) && a.dir) out += " " + std::string(short_dir(*a.dir));
    return out;
}

std::optional<Action> parse_action(std::string_view text) {
    const std::string t = trim(text);
    const auto sp = t.find(' ');
    const std::string verb = lowercase(t.substr(0, sp));
    std::string rest = sp == std::string::npos ? "" : trim(t.substr(sp + 1));
    Action a;
    bool found = false;
    for (const auto& n : kActionNames) {
        if (n.name == verb) {
            a.type = n.type;
            found = true;
        }
    }
    if (!found) return std::nullopt;
    if (a.type == Action::Type::PressKey || a.type == Action::Type::TypeText || a.type == Action::Type::Engrave) {
        a.text = rest;
        return a;
    }
    std::istringstream in(rest);
    std::string tok;
    if (takes_letter(a.type)) {
        if (!(in >> tok) || tok.size() != 1) return std::nullopt;
        a.letter = tok[0] == '-' ? 0 : tok[0];
    }
    if (takes_dir(a.type) && (in >> tok)) {
        a.dir = dir_from_name(tok);
        if (!a.dir) return std::nullopt;
    }
    if ((a.type == Action::Type::Move || a.type == Action::Type::Kick) && (!a.dir || *a.dir == Dir::Self)) {
        return std::nullopt;
    }
    return a;
}

}  // namespace netplay
