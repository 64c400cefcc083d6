#include "netplay/sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace netplay {

namespace {

TileKind base_glyph(char c, const std::map<char, TileKind>& legend, bool& known) {
    known = true;
    if (auto it = legend.find(c); it != legend.end()) return it->second;
    switch (c) {
        case ' ':
        case '-':
        case '|': return TileKind::Wall;
        case '.': return TileKind::Floor;
        case '#': return TileKind::Corridor;
        case '+': return TileKind::DoorClosed;
        case '<': return TileKind::StairsUp;
        case '>': return TileKind::StairsDown;
        default: known = false; return TileKind::Wall;
    }
}

bool tile_is_free(const GameState& s, const LevelMap& L, Pos p, bool player_placed) {
    const TileKind k = L.at(p);
    if (!is_passable(k) || L.is_hidden(p)) return false;
    if (L.pile(p) || L.monster_at(p)) return false;
    if (player_placed && s.player.pos == p) return false;
    return true;
}

Pos pick_tile(GameState& s, const ScenarioSpec& spec, const Placement& where, bool player_placed, const std::string& what) {
    LevelMap& L = s.levels.front();
    if (where.mode == Placement::Mode::Fixed) {
        if (!in_bounds(where.pos)) throw PlacementImpossible(what + " placed outside the map at " + format_pos(where.pos));
        return where.pos;
    }
    const Region* region = nullptr;
    if (where.mode == Placement::Mode::RandomIn) {
        region = spec.find_region(where.region);
        if (!region) throw PlacementImpossible("unknown region '" + where.region + "' for " + what);
    }
    std::vector<Pos> options;
    for (int i = 0; i < kMapWidth * kMapHeight; ++i) {
        const Pos p = pos_of(i);
        if (region && !region->contains(p)) continue;
        if (tile_is_free(s, L, p, player_placed)) options.push_back(p);
    }
    if (options.empty()) throw PlacementImpossible("no free tile for " + what);
    return options[static_cast<size_t>(rng_range(s.rng, 0, static_cast<int>(options.size()) - 1))];
}

Monster spawn_monster(GameState& s, const std::string& kind, Pos at, Attitude attitude) {
    const MonsterStats* st = monster_stats(kind);
    if (!st) throw std::invalid_argument("unknown monster kind '" + kind + "'");
    return Monster{s.next_id++, st->kind, at, st->hp, st->hp, attitude, st->xp, st->damage, {}};
}

Item spawn_item(GameState& s, const std::string& name) {
    auto item = make_item(name);
    if (!item) throw std::invalid_argument("unknown item '" + name + "'");
    item->id = s.next_id++;
    return *item;
}

// Terrain left behind when a boulder goes away: room floor if it touches a room, else corridor.
TileKind guess_boulder_base(const LevelMap& L, Pos p) {
    for (Dir d : {Dir::N, Dir::E, Dir::S, Dir::W}) {
        if (is_room_interior(L.at(p + d))) return TileKind::Floor;
    }
    return TileKind::Corridor;
}

// ---------------------------------------------------------------- generator

struct Room {
    int x0, y0, x1, y1;  // interior, inclusive

    bool contains_walls(Pos p) const { return p.x >= x0 - 1 && p.x <= x1 + 1 && p.y >= y0 - 1 && p.y <= y1 + 1; }
    Pos center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
};

Pos random_in(Rng& rng, const Room& r) { return {rng_range(rng, r.x0, r.x1), rng_range(rng, r.y0, r.y1)}; }

TileKind random_door(Rng& rng) {
    const int roll = rng_range(rng, 0, 9);
    if (roll < 5) return TileKind::DoorOpen;
    if (roll < 8) return TileKind::DoorClosed;
    return TileKind::DoorLocked;
}

// Picks a door on the wall of `a` facing `b`, returning (door, tile just outside).
std::pair<Pos, Pos> door_towards(Rng& rng, const Room& a, const Room& b) {
    if (b.x0 > a.x1 + 1) {
        const Pos d{a.x1 + 1, rng_range(rng, a.y0, a.y1)};
        return {d, {d.x + 1, d.y}};
    }
    if (b.x1 < a.x0 - 1) {
        const Pos d{a.x0 - 1, rng_range(rng, a.y0, a.y1)};
        return {d, {d.x - 1, d.y}};
    }
    if (b.y0 > a.y1 + 1) {
        const Pos d{rng_range(rng, a.x0, a.x1), a.y1 + 1};
        return {d, {d.x, d.y + 1}};
    }
    const Pos d{rng_range(rng, a.x0, a.x1), a.y0 - 1};
    return {d, {d.x, d.y - 1}};
}

bool carve_corridor(LevelMap& L, const std::vector<Room>& rooms, Pos from, Pos to) {
    auto blocked = [&](Pos p) {
        if (!in_bounds(p) || on_boundary(p)) return true;
        return std::any_of(rooms.begin(), rooms.end(), [&](const Room& r) { return r.contains_walls(p); });
    };
    if (blocked(from) || blocked(to)) return false;
    std::vector<int> prev(static_cast<size_t>(kMapWidth * kMapHeight), -2);
    std::deque<Pos> q{from};
    prev[static_cast<size_t>(index_of(from))] = -1;
    while (!q.empty()) {
        const Pos p = q.front();
        q.pop_front();
        if (p == to) break;
        for (Dir d : {Dir::N, Dir::E, Dir::S, Dir::W}) {
            const Pos n = p + d;
            if (blocked(n) || prev[static_cast<size_t>(index_of(n))] != -2) continue;
            prev[static_cast<size_t>(index_of(n))] = index_of(p);
            q.push_back(n);
        }
    }
    if (prev[static_cast<size_t>(index_of(to))] == -2) return false;
    for (int i = index_of(to); i != -1; i = prev[static_cast<size_t>(i)]) L.tiles[static_cast<size_t>(i)] = TileKind::Corridor;
    return true;
}

bool connected(const LevelMap& L, Pos a, Pos b) {
    std::vector<uint8_t> seen(static_cast<size_t>(kMapWidth * kMapHeight), 0);
    std::deque<Pos> q{a};
    seen[static_cast<size_t>(index_of(a))] = 1;
    while (!q.empty()) {
        const Pos p = q.front();
        q.pop_front();
        if (p == b) return true;
        for (Dir d : kCompass) {
            const Pos n = p + d;
            if (!in_bounds(n) || seen[static_cast<size_t>(index_of(n))]) continue;
            const TileKind k = L.at(n);
            if (!is_passable(k) && !is_door(k)) continue;
            seen[static_cast<size_t>(index_of(n))] = 1;
            q.push_back(n);
        }
    }
    return false;
}

std::optional<LevelMap> try_generate(GameState& s, int depth, std::vector<Room>& rooms_out) {
    Rng& rng = s.rng;
    LevelMap L;
    std::vector<Room> rooms;
    const int want = rng_range(rng, 4, 8);
    for (int attempt = 0; attempt < 200 && static_cast<int>(rooms.size()) < want; ++attempt) {
        const int w = rng_range(rng, 3, 12);
        const int h = rng_range(rng, 2, 5);
        const int x0 = rng_range(rng, 2, kMapWidth - w - 3);
        const int y0 = rng_range(rng, 2, kMapHeight - h - 3);
        const Room r{x0, y0, x0 + w - 1, y0 + h - 1};
        const bool overlaps = std::any_of(rooms.begin(), rooms.end(), [&](const Room& o) {
            return !(r.x1 + 3 < o.x0 || o.x1 + 3 < r.x0 || r.y1 + 3 < o.y0 || o.y1 + 3 < r.y0);
        });
        if (!overlaps) rooms.push_back(r);
    }
    if (rooms.size() < 3) return std::nullopt;
    std::sort(rooms.begin(), rooms.end(), [](const Room& a, const Room& b) { return a.x0 < b.x0; });
    for (const auto& r : rooms) {
        for (int y = r.y0; y <= r.y1; ++y) {
            for (int x = r.x0; x <= r.x1; ++x) L.set({x, y}, TileKind::Floor);
        }
    }
    auto join = [&](size_t i, size_t j) {
        auto [da, oa] = door_towards(rng, rooms[i], rooms[j]);
        auto [db, ob] = door_towards(rng, rooms[j], rooms[i]);
        if (!carve_corridor(L, rooms, oa, ob)) return false;
        if (!is_door(L.at(da))) L.set(da, random_door(rng));
        if (!is_door(L.at(db))) L.set(db, random_door(rng));
        return true;
    };
    for (size_t i = 0; i + 1 < rooms.size(); ++i) {
        if (!join(i, i + 1)) return std::nullopt;
    }
    if (rng_chance(rng, 1, 2)) {
        const size_t a = static_cast<size_t>(rng_range(rng, 0, int(rooms.size()) - 3));
        join(a, a + 2);
    }

    const Pos up = random_in(rng, rooms.front());
    L.set(up, TileKind::StairsUp);
    Pos down = up;
    if (depth < Rules::kFullGameLevels) {
        down = random_in(rng, rooms.back());
        L.set(down, TileKind::StairsDown);
    }
    for (size_t i = 0; i + 1 < rooms.size(); ++i) {
        if (!connected(L, rooms[i].center(), rooms[i + 1].center())) return std::nullopt;
    }
    if (!connected(L, up, down)) return std::nullopt;

    // Occasionally hide one corridor tile that is not next to a door.
    if (rng_chance(rng, 1, 4)) {
        std::vector<Pos> candidates;
        for (int i = 0; i < kMapWidth * kMapHeight; ++i) {
            const Pos p = pos_of(i);
            if (L.at(p) != TileKind::Corridor) continue;
            bool near_door = false;
            for (Dir d : kCompass) near_door = near_door || is_door(L.at(p + d));
            if (!near_door) candidates.push_back(p);
        }
        if (!candidates.empty()) {
            const Pos h = candidates[static_cast<size_t>(rng_range(rng, 0, int(candidates.size()) - 1))];
            L.hidden[static_cast<size_t>(index_of(h))] = 1;
        }
    }

    auto free_floor = [&](const Room& r) -> std::optional<Pos> {
        for (int tries = 0; tries < 30; ++tries) {
            const Pos p = random_in(rng, r);
            if (L.at(p) == TileKind::Floor && !L.pile(p) && !L.monster_at(p)) return p;
        }
        return std::nullopt;
    };
    auto random_room = [&](size_t from) -> const Room& {
        return rooms[static_cast<size_t>(rng_range(rng, static_cast<int>(from), int(rooms.size()) - 1))];
    };
    if (rng_chance(rng, 1, 3)) {
        if (auto p = free_floor(random_room(0))) L.set(*p, TileKind::Fountain);
    }
    if (rng_chance(rng, 1, 6)) {
        if (auto p = free_floor(random_room(0))) L.set(*p, TileKind::Altar);
    }

    static const char* const kLoot[] = {
        "food ration", "food ration", "food ration", "potion of healing", "potion of healing",
        "potion of extra healing", "potion of water", "potion of sickness", "dagger", "short sword",
        "mace", "scroll of identify", "scroll of light", "wand of striking", "wand of digging", "rock",
    };
    const int loot = rng_range(rng, 2, 4);
    for (int i = 0; i < loot; ++i) {
        if (auto p = free_floor(random_room(0))) {
            std::string name;
            if (rng_chance(rng, 1, 4)) {
                name = std::to_string(rng_range(rng, 5, 10 * depth + 20)) + " gold pieces";
            } else {
                name = kLoot[rng_range(rng, 0, static_cast<int>(std::size(kLoot)) - 1)];
            }
            Item item = spawn_item(s, name);
            if (item.kind == ItemKind::Potion || item.kind == ItemKind::Wand || item.kind == ItemKind::Scroll) {
                item.identified = rng_chance(rng, 1, 2);
            }
            L.piles[*p].push_back(std::move(item));
        }
    }
    if (depth == Rules::kFullGameLevels) {
        if (auto p = free_floor(random_room(1))) L.piles[*p].push_back(spawn_item(s, "amulet of yendor"));
        else return std::nullopt;
    }

    std::vector<const MonsterStats*> pool;
    for (const auto& st : monster_catalog()) {
        if (st.kind == "kitten" || st.kind == "shopkeeper" || st.kind == "xorn") continue;
        if (st.difficulty <= depth + 1) pool.push_back(&st);
    }
    const int hostiles = 2 + depth / 2;
    for (int i = 0; i < hostiles; ++i) {
        // Keep the arrival room on level 1 quiet.
        if (auto p = free_floor(random_room(depth == 1 ? 1 : 0))) {
            const MonsterStats* st = pool[static_cast<size_t>(rng_range(rng, 0, int(pool.size()) - 1))];
            L.monsters.push_back(spawn_monster(s, st->kind, *p, Attitude::Hostile));
        }
    }
    rooms_out = rooms;
    return L;
}

// ---------------------------------------------------------------- digest

nlohmann::json item_json(const Item& it) {
    nlohmann::json contents = nlohmann::json::array();
    for (const auto& c : it.contents) contents.push_back(item_json(c));
    return {{"id", it.id},         {"letter", int(it.letter)}, {"kind", int(it.kind)},     {"name", it.name},
            {"app", it.appearance}, {"ident", it.identified},   {"w", it.weight},          {"fx", it.effect},
            {"ch", it.charges},     {"dmg", it.damage},         {"amt", it.amount},        {"corpse", it.corpse_of},
            {"kt", it.kill_turn},   {"nut", it.nutrition},      {"contents", contents}};
}

nlohmann::json pos_json(Pos p) { return {p.x, p.y}; }

}  // namespace

GameState new_game(const ScenarioSpec& spec, uint64_t seed) {
    GameState s;
    s.rng.seed(seed);
    s.levels.resize(1);
    s.regions = spec.regions;
    LevelMap& L = s.levels.front();
    for (size_t y = 0; y < spec.map.size() && y < static_cast<size_t>(kMapHeight); ++y) {
        const std::string& row = spec.map[y];
        for (size_t x = 0; x < row.size() && x < static_cast<size_t>(kMapWidth); ++x) {
            bool known = false;
            const TileKind k = base_glyph(row[x], spec.legend, known);
            if (!known) throw std::invalid_argument(std::string("unknown map glyph '") + row[x] + "'");
            L.set({int(x), int(y)}, k);
        }
    }
    for (int i = 0; i < kMapWidth * kMapHeight; ++i) {
        const Pos p = pos_of(i);
        if (L.at(p) == TileKind::Boulder) L.boulder_base[p] = guess_boulder_base(L, p);
    }
    for (const auto& e : spec.engravings) L.engravings[e.pos] = e.text;
    for (const auto& b : spec.brittle_walls) L.brittle.insert(b);

    auto place_object = [&](const ObjectPlacement& o, bool player_placed) {
        Item item = spawn_item(s, o.name);
        if (o.unidentified) item.identified = false;
        const Pos p = pick_tile(s, spec, o.where, player_placed, o.name);
        L.piles[p].push_back(std::move(item));
    };
    auto place_monster = [&](const MonsterPlacement& m, bool player_placed) {
        const Pos p = pick_tile(s, spec, m.where, player_placed, m.kind);
        L.monsters.push_back(spawn_monster(s, m.kind, p, m.attitude));
    };

    const bool fixed_start = spec.start.mode == Placement::Mode::Fixed;
    if (fixed_start) s.player.pos = pick_tile(s, spec, spec.start, false, "the player");
    for (const auto& o : spec.objects) {
        if (o.where.mode == Placement::Mode::Fixed) place_object(o, false);
    }
    for (const auto& m : spec.monsters) {
        if (m.where.mode == Placement::Mode::Fixed) place_monster(m, false);
    }
    if (!fixed_start) s.player.pos = pick_tile(s, spec, spec.start, false, "the player");
    for (const auto& o : spec.objects) {
        if (o.where.mode != Placement::Mode::Fixed) place_object(o, true);
    }
    for (const auto& m : spec.monsters) {
        if (m.where.mode != Placement::Mode::Fixed) place_monster(m, true);
    }

    char letter = 'a';
    for (const auto& e : spec.inventory) {
        Item item = spawn_item(s, e.name);
        if (item.kind == ItemKind::Gold) {
            s.player.gold += item.amount;
            continue;
        }
        if (e.unidentified) item.identified = false;
        item.letter = letter++;
        if (e.wielded) s.player.wielded = item.letter;
        if (e.worn) s.player.worn_ring = item.letter;
        s.player.inventory.push_back(std::move(item));
    }
    return s;
}

GameState new_full_game(uint64_t seed) {
    GameState s;
    s.rng.seed(seed);
    s.full_game = true;
    std::vector<Room> first_rooms;
    for (int depth = 1; depth <= Rules::kFullGameLevels; ++depth) {
        std::vector<Room> rooms;
        std::optional<LevelMap> level;
        while (!(level = try_generate(s, depth, rooms))) {
        }
        if (depth == 1) first_rooms = rooms;
        s.levels.push_back(std::move(*level));
    }
    LevelMap& L = s.levels.front();
    for (int i = 0; i < kMapWidth * kMapHeight; ++i) {
        if (L.tiles[static_cast<size_t>(i)] == TileKind::StairsUp) s.player.pos = pos_of(i);
    }
    const char* kit[] = {"long sword", "dagger", "food ration"};
    char letter = 'a';
    for (const char* name : kit) {
        Item item = spawn_item(s, name);
        item.letter = letter++;
        s.player.inventory.push_back(std::move(item));
    }
    s.player.wielded = 'a';
    for (Dir d : kCompass) {
        const Pos q = s.player.pos + d;
        if (is_passable(L.at(q)) && !L.monster_at(q)) {
            L.monsters.push_back(spawn_monster(s, "kitten", q, Attitude::Pet));
            break;
        }
    }
    return s;
}

std::set<Pos> visible_tiles(const GameState& state) {
    const LevelMap& L = state.level();
    const Pos me = state.player.pos;
    std::set<Pos> out;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const Pos q{me.x + dx, me.y + dy};
            if (in_bounds(q)) out.insert(q);
        }
    }
    if (!is_room_interior(L.apparent(me))) return out;

    // Flood the room interior, then add its rim (walls, doors, boulders).
    std::vector<uint8_t> in_room(static_cast<size_t>(kMapWidth * kMapHeight), 0);
    std::deque<Pos> q{me};
    in_room[static_cast<size_t>(index_of(me))] = 1;
    std::set<Pos> candidates{me};
    while (!q.empty()) {
        const Pos p = q.front();
        q.pop_front();
        for (Dir d : kCompass) {
            const Pos n = p + d;
            if (!in_bounds(n)) continue;
            candidates.insert(n);
            if (in_room[static_cast<size_t>(index_of(n))] || !is_room_interior(L.apparent(n))) continue;
            in_room[static_cast<size_t>(index_of(n))] = 1;
            q.push_back(n);
        }
    }
    auto line_clear = [&](Pos t) {
        // Bresenham line; every tile strictly between the endpoints must be transparent.
        int x0 = me.x, y0 = me.y;
        const int dx = std::abs(t.x - x0), sx = x0 < t.x ? 1 : -1;
        const int dy = -std::abs(t.y - y0), sy = y0 < t.y ? 1 : -1;
        int err = dx + dy;
        bool clear = true;
        while (!(x0 == t.x && y0 == t.y)) {
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
            if (x0 == t.x && y0 == t.y) break;
            if (is_opaque(L.apparent({x0, y0}))) {
                clear = false;
                break;
            }
        }
        return clear;
    };
    // Interior tiles need a clear line. Rim tiles show once any neighbouring interior tile does,
    // so corner positions still see the whole wall.
    std::set<Pos> lit;
    for (const Pos& t : candidates) {
        if (in_room[static_cast<size_t>(index_of(t))] && line_clear(t)) lit.insert(t);
    }
    for (const Pos& t : candidates) {
        if (in_room[static_cast<size_t>(index_of(t))]) continue;
        bool show = line_clear(t);
        for (Dir d : kCompass) {
            if (show) break;
            show = lit.count(t + d) > 0;
        }
        if (show) out.insert(t);
    }
    out.insert(lit.begin(), lit.end());
    return out;
}

int compute_score(const GameState& state) {
    const PlayerState& p = state.player;
    return p.xp_points + 100 * (p.max_depth - 1) + p.gold;
}

std::string state_digest(const GameState& state) {
    nlohmann::json j;
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& L : state.levels) {
        std::string tiles;
        tiles.reserve(L.tiles.size());
        for (size_t i = 0; i < L.tiles.size(); ++i) tiles.push_back(char('A' + int(L.tiles[i]) + (L.hidden[i] ? 32 : 0)));
        nlohmann::json piles = nlohmann::json::array();
        for (const auto& [p, pile] : L.piles) {
            nlohmann::json items = nlohmann::json::array();
            for (const auto& it : pile) items.push_back(item_json(it));
            piles.push_back({pos_json(p), items});
        }
        nlohmann::json mons = nlohmann::json::array();
        for (const auto& m : L.monsters) {
            nlohmann::json inv = nlohmann::json::array();
            for (const auto& it : m.inventory) inv.push_back(item_json(it));
            mons.push_back({m.id, m.kind, pos_json(m.pos), m.hp, m.max_hp, int(m.attitude), m.xp_value, m.damage, inv});
        }
        nlohmann::json extra = nlohmann::json::array();
        for (const auto& [p, k] : L.boulder_base) extra.push_back({"b", pos_json(p), int(k)});
        for (const auto& p : L.brittle) extra.push_back({"w", pos_json(p)});
        for (const auto& [p, t] : L.engravings) extra.push_back({"e", pos_json(p), t});
        levels.push_back({tiles, piles, mons, extra});
    }
    j["levels"] = levels;
    const PlayerState& p = state.player;
    nlohmann::json inv = nlohmann::json::array();
    for (const auto& it : p.inventory) inv.push_back(item_json(it));
    nlohmann::json status = nlohmann::json::array();
    for (Status st : p.status) status.push_back(int(st));
    j["player"] = {pos_json(p.pos), p.depth, p.max_depth, p.hp, p.max_hp, p.xp_points, p.xp_level, p.nutrition,
                   status, p.ill_since, inv, int(p.wielded), int(p.worn_ring), p.gold, p.prayer_cooldown, p.form};
    j["turn"] = state.turn;
    if (state.open_menu) {
        const MenuState& m = *state.open_menu;
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& e : m.entries) entries.push_back({int(e.letter), e.label, e.marked, e.item_id});
        j["menu"] = {int(m.kind), int(m.purpose), m.prompt, entries, m.requires_confirm, int(m.item_letter), m.target_id,
                     pos_json(m.target)};
    }
    j["messages"] = state.pending_messages;
    std::ostringstream rng;
    rng << state.rng;
    j["rng"] = rng.str();
    j["done"] = {int(state.done.status), state.done.cause};
    j["next_id"] = state.next_id;
    j["full"] = state.full_game;
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& h : state.history) hist.push_back({h.turn, h.verb, h.subject});
    j["history"] = hist;
    return hex64(fnv1a64(j.dump()));
}

namespace {

char item_glyph(ItemKind k) {
    switch (k) {
        case ItemKind::FoodRation:
        case ItemKind::Corpse: return '%';
        case ItemKind::Potion: return '!';
        case ItemKind::Wand: return '/';
        case ItemKind::Scroll: return '?';
        case ItemKind::Weapon: return ')';
        case ItemKind::Pickaxe:
        case ItemKind::BagOfHolding: return '(';
        case ItemKind::Ring: return '=';
        case ItemKind::Gold: return '$';
        case ItemKind::Rock: return '*';
        case ItemKind::Amulet: return '"';
    }
    return '?';
}

}  // namespace

char tile_glyph(TileKind k) {
    switch (k) {
        case TileKind::Wall: return '-';
        case TileKind::Floor: return '.';
        case TileKind::Corridor: return '#';
        case TileKind::DoorOpen: return '\'';
        case TileKind::DoorClosed:
        case TileKind::DoorLocked: return '+';
        case TileKind::StairsUp: return '<';
        case TileKind::StairsDown: return '>';
        case TileKind::Fountain: return '{';
        case TileKind::Altar: return '_';
        case TileKind::Boulder: return '0';
        case TileKind::Statue: return '`';
        case TileKind::Unknown: return ' ';
    }
    return ' ';
}

std::string render_map(const GameState& state) {
    const LevelMap& L = state.level();
    std::string out;
    for (int y = 0; y < kMapHeight; ++y) {
        std::string row(kMapWidth, ' ');
        for (int x = 0; x < kMapWidth; ++x) {
            const Pos p{x, y};
            const TileKind k = L.apparent(p);
            char c = tile_glyph(k);
            if (k == TileKind::Wall) {
                // Only walls bordering open space are drawn; deep rock stays blank.
                bool rim = false;
                for (Dir d : kCompass) {
                    const Pos n = p + d;
                    rim = rim || (in_bounds(n) && L.apparent(n) != TileKind::Wall);
                }
                c = rim ? '-' : ' ';
            }
            if (const auto* pile = L.pile(p)) c = item_glyph(pile->back().kind);
            if (const Monster* m = L.monster_at(p)) c = m->kind.empty() ? 'M' : m->kind[0];
            if (p == state.player.pos) c = '@';
            row[static_cast<size_t>(x)] = c;
        }
        while (!row.empty() && row.back() == ' ') row.pop_back();
        out += row;
        out += '\n';
    }
    return out;
}

std::vector<int> all_item_ids(const GameState& state) {
    std::vector<int> ids;
    std::function<void(const Item&)> visit = [&](const Item& it) {
        ids.push_back(it.id);
        for (const auto& c : it.contents) visit(c);
    };
    for (const auto& L : state.levels) {
        for (const auto& [p, pile] : L.piles) {
            for (const auto& it : pile) visit(it);
        }
        for (const auto& m : L.monsters) {
            for (const auto& it : m.inventory) visit(it);
        }
    }
    for (const auto& it : state.player.inventory) visit(it);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace netplay
