#include "netplay/tracker.hpp"

#include <algorithm>
#include <deque>

namespace netplay {

std::string Structure::label() const {
    return (kind == Kind::Room ? "room_" : "corridor_") + std::to_string(id);
}

namespace {

bool is_feature(TileKind k) {
    return k == TileKind::Fountain || k == TileKind::Altar || k == TileKind::StairsUp || k == TileKind::StairsDown ||
           k == TileKind::Statue;
}

// Tiles the navigator may step on according to memory.
bool known_passable(TileKind k) { return k != TileKind::Unknown && is_passable(k); }

}  // namespace

std::vector<Structure> segment_structures(const KnownGrid& grid) {
    const int n = kMapWidth * kMapHeight;
    std::vector<int> comp(static_cast<size_t>(n), -1);
    std::vector<Structure> out;
    auto tile = [&](Pos p) { return in_bounds(p) ? grid[static_cast<size_t>(index_of(p))] : TileKind::Unknown; };

    // Row-major scan, so components are numbered by their lowest (y, x) tile.
    for (int i = 0; i < n; ++i) {
        const TileKind k = grid[static_cast<size_t>(i)];
        const bool room = is_room_interior(k);
        if ((!room && k != TileKind::Corridor) || comp[static_cast<size_t>(i)] >= 0) continue;
        Structure s;
        s.kind = room ? Structure::Kind::Room : Structure::Kind::Corridor;
        const int cid = static_cast<int>(out.size());
        std::deque<Pos> q{pos_of(i)};
        comp[static_cast<size_t>(i)] = cid;
        while (!q.empty()) {
            const Pos p = q.front();
            q.pop_front();
            s.tiles.insert(p);
            for (Dir d : kCompass) {
                const Pos m = p + d;
                if (!in_bounds(m) || comp[static_cast<size_t>(index_of(m))] >= 0) continue;
                const TileKind mk = tile(m);
                if (room ? !is_room_interior(mk) : mk != TileKind::Corridor) continue;
                comp[static_cast<size_t>(index_of(m))] = cid;
                q.push_back(m);
            }
        }
        out.push_back(std::move(s));
    }

    // Doors join the room they open into, else an adjoining corridor, else stand alone.
    for (int i = 0; i < n; ++i) {
        if (!is_door(grid[static_cast<size_t>(i)])) continue;
        const Pos p = pos_of(i);
        int target = -1;
        for (bool want_room : {true, false}) {
            Pos best{kMapWidth, kMapHeight};
            for (Dir d : {Dir::N, Dir::W, Dir::E, Dir::S}) {
                const Pos m = p + d;
                if (!in_bounds(m)) continue;
                const int c = comp[static_cast<size_t>(index_of(m))];
                if (c < 0 || is_door(tile(m))) continue;
                if ((out[static_cast<size_t>(c)].kind == Structure::Kind::Room) != want_room) continue;
                if (m < best) {
                    best = m;
                    target = c;
                }
            }
            if (target >= 0) break;
        }
        if (target < 0) {
            Structure s;
            s.kind = Structure::Kind::Corridor;
            target = static_cast<int>(out.size());
            out.push_back(std::move(s));
        }
        out[static_cast<size_t>(target)].tiles.insert(p);
    }

    std::sort(out.begin(), out.end(), [](const Structure& a, const Structure& b) { return *a.tiles.begin() < *b.tiles.begin(); });
    for (size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i) + 1;
    return out;
}

std::string_view event_kind_name(Event::Kind k) {
    switch (k) {
        case Event::Kind::NewMessage: return "NewMessage";
        case Event::Kind::NewStructure: return "NewStructure";
        case Event::Kind::LevelChanged: return "LevelChanged";
        case Event::Kind::Teleported: return "Teleported";
        case Event::Kind::StatChanged: return "StatChanged";
        case Event::Kind::LowHealth: return "LowHealth";
        case Event::Kind::NewMonster: return "NewMonster";
        case Event::Kind::NewItem: return "NewItem";
        case Event::Kind::NewFeature: return "NewFeature";
        case Event::Kind::MenuOpened: return "MenuOpened";
        case Event::Kind::GameEnded: return "GameEnded";
    }
    return "NewMessage";
}

std::string Event::describe() const {
    switch (kind) {
        case Kind::NewMessage: return "Game message: " + text;
        case Kind::NewStructure: return "Discovered " + text + ".";
        case Kind::LevelChanged: return "Entered dungeon level " + std::to_string(new_value) + ".";
        case Kind::Teleported: return "You were teleported to " + format_pos(pos) + ".";
        case Kind::StatChanged:
            return "Stat " + text + " changed from " + std::to_string(old_value) + " to " + std::to_string(new_value) + ".";
        case Kind::LowHealth:
            return "Low health: " + std::to_string(old_value) + "/" + std::to_string(new_value) + " hit points.";
        case Kind::NewMonster: return "New monster spotted: " + text + " at " + format_pos(pos) + ".";
        case Kind::NewItem: return "New item spotted: " + text + " at " + format_pos(pos) + ".";
        case Kind::NewFeature: return "New feature spotted: " + text + " at " + format_pos(pos) + ".";
        case Kind::MenuOpened: return "A menu opened: " + text;
        case Kind::GameEnded: return "The game ended: " + text + ".";
    }
    return text;
}

const LevelMemory& Tracker::level() const {
    static const LevelMemory empty;
    auto it = levels_.find(depth_);
    return it == levels_.end() ? empty : it->second;
}

void Tracker::resegment(LevelMemory& m, int turn, std::vector<Event>& out) {
    std::vector<Structure> fresh = segment_structures(m.grid);
    // Inherit ids by overlap: biggest structures claim first, each picks its largest same-kind predecessor.
    std::vector<size_t> order(fresh.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fresh[a].tiles.size() > fresh[b].tiles.size(); });
    std::set<int> claimed;
    std::vector<int> assigned(fresh.size(), 0);
    std::vector<int> discovered(fresh.size(), turn);
    for (size_t idx : order) {
        const Structure& s = fresh[idx];
        int best_id = 0;
        size_t best_overlap = 0;
        int best_turn = turn;
        for (const auto& old : m.structures) {
            if (old.kind != s.kind || claimed.count(old.id)) continue;
            size_t overlap = 0;
            for (const Pos& p : s.tiles) overlap += old.tiles.count(p);
            if (overlap > best_overlap || (overlap == best_overlap && overlap > 0 && old.id < best_id)) {
                best_overlap = overlap;
                best_id = old.id;
                best_turn = old.discovered_turn;
            }
        }
        if (best_overlap > 0) {
            claimed.insert(best_id);
            assigned[idx] = best_id;
            discovered[idx] = best_turn;
        }
    }
    std::vector<Structure> next;
    for (size_t i = 0; i < fresh.size(); ++i) {
        Structure s = std::move(fresh[i]);
        if (assigned[i]) {
            s.id = assigned[i];
            s.discovered_turn = discovered[i];
        } else {
            s.id = m.next_structure_id++;
            s.discovered_turn = turn;
            Event e;
            e.kind = Event::Kind::NewStructure;
            e.turn = turn;
            e.id = s.id;
            e.text = s.label();
            e.pos = *s.tiles.begin();
            out.push_back(e);
        }
        next.push_back(std::move(s));
    }
    std::sort(next.begin(), next.end(), [](const Structure& a, const Structure& b) { return a.id < b.id; });
    m.structures = std::move(next);
}

std::vector<Event> Tracker::update(const GameState& state, const std::vector<std::string>& step_messages) {
    std::vector<Event> messages, level_events, structure_events, monster_events, item_events, feature_events,
        stat_events, tail_events;
    const int turn = state.turn;
    const PlayerState& pl = state.player;
    const LevelMap& L = state.level();

    for (const auto& m : step_messages) {
        Event e;
        e.kind = Event::Kind::NewMessage;
        e.turn = turn;
        e.text = m;
        messages.push_back(e);
    }

    if (initialized_) {
        if (pl.depth != depth_) {
            Event e;
            e.kind = Event::Kind::LevelChanged;
            e.turn = turn;
            e.old_value = depth_;
            e.new_value = pl.depth;
            e.pos = pl.pos;
            level_events.push_back(e);
        } else if (chebyshev(pl.pos, pos_) > 1) {
            Event e;
            e.kind = Event::Kind::Teleported;
            e.turn = turn;
            e.pos = pl.pos;
            level_events.push_back(e);
        }
    }
    depth_ = pl.depth;
    pos_ = pl.pos;
    turn_ = turn;
    LevelMemory& m = mem();

    // Terrain.
    const std::set<Pos> visible = visible_tiles(state);
    bool terrain_changed = false;
    for (const Pos& p : visible) {
        const TileKind k = L.apparent(p);
        TileKind& slot = m.grid[static_cast<size_t>(index_of(p))];
        if (slot != k) {
            slot = k;
            terrain_changed = true;
        }
        m.seen.insert(p);
        if (is_feature(k) && !m.features.count(p)) {
            m.features[p] = k;
            Event e;
            e.kind = Event::Kind::NewFeature;
            e.turn = turn;
            e.pos = p;
            e.feature = k;
            e.text = std::string(tile_name(k));
            feature_events.push_back(e);
        } else if (!is_feature(k) && m.features.count(p)) {
            m.features.erase(p);
        }
    }
    if (terrain_changed) resegment(m, turn, structure_events);

    // Monsters: only currently visible ones are known.
    known_monsters_.clear();
    for (const auto& mon : L.monsters) {
        if (!visible.count(mon.pos)) continue;
        known_monsters_[mon.id] = {mon.id, mon.kind, mon.pos, mon.attitude};
        if (seen_monster_ids_.insert(mon.id).second) {
            Event e;
            e.kind = Event::Kind::NewMonster;
            e.turn = turn;
            e.id = mon.id;
            e.text = mon.kind;
            e.pos = mon.pos;
            monster_events.push_back(e);
        }
    }

    // Items.
    for (const auto& it : pl.inventory) {
        seen_item_ids_.insert(it.id);
        for (const auto& c : it.contents) seen_item_ids_.insert(c.id);
        known_items_.erase(it.id);
    }
    for (const Pos& p : visible) {
        const bool occluded = p != pl.pos && L.monster_at(p) != nullptr;
        if (occluded) {
            for (auto& [id, ki] : known_items_) {
                if (ki.depth == depth_ && ki.pos == p) ki.occluded = true;
            }
            continue;
        }
        const std::vector<Item>* pile = L.pile(p);
        std::set<int> present;
        if (pile) {
            for (const auto& it : *pile) {
                present.insert(it.id);
                KnownItem ki{it.id, it.display_name(), it.kind, depth_, p, false};
                auto existing = known_items_.find(it.id);
                if (existing == known_items_.end() && seen_item_ids_.insert(it.id).second) {
                    Event e;
                    e.kind = Event::Kind::NewItem;
                    e.turn = turn;
                    e.id = it.id;
                    e.text = ki.name;
                    e.pos = p;
                    item_events.push_back(e);
                }
                known_items_[it.id] = ki;
            }
        }
        for (auto iter = known_items_.begin(); iter != known_items_.end();) {
            const KnownItem& ki = iter->second;
            const bool here = ki.depth == depth_ && ki.pos == p && !present.count(ki.id);
            const bool keep_stale = config_.replicate_occlusion_bug && ki.occluded;
            if (here && !keep_stale) iter = known_items_.erase(iter);
            else ++iter;
        }
    }

    // Stats.
    const StatsSnapshot now{pl.hp, pl.max_hp, pl.hunger(), pl.xp_level, pl.gold};
    if (initialized_) {
        auto stat = [&](const char* name, int before, int after) {
            if (before == after) return;
            Event e;
            e.kind = Event::Kind::StatChanged;
            e.turn = turn;
            e.text = name;
            e.old_value = before;
            e.new_value = after;
            stat_events.push_back(e);
        };
        stat("hp", stats_.hp, now.hp);
        stat("hunger", static_cast<int>(stats_.hunger), static_cast<int>(now.hunger));
        stat("xp_level", stats_.xp_level, now.xp_level);
        stat("gold", stats_.gold, now.gold);
        const double before_frac = stats_.max_hp > 0 ? double(stats_.hp) / stats_.max_hp : 1.0;
        const double after_frac = now.max_hp > 0 ? double(now.hp) / now.max_hp : 1.0;
        if (before_frac >= config_.low_health && after_frac < config_.low_health && state.running()) {
            Event e;
            e.kind = Event::Kind::LowHealth;
            e.turn = turn;
            e.old_value = now.hp;
            e.new_value = now.max_hp;
            tail_events.push_back(e);
        }
    }
    stats_ = now;

    if (state.open_menu) {
        const MenuState& cur = *state.open_menu;
        const bool same = menu_ && menu_->kind == cur.kind && menu_->purpose == cur.purpose && menu_->prompt == cur.prompt;
        if (!same) {
            Event e;
            e.kind = Event::Kind::MenuOpened;
            e.turn = turn;
            e.text = cur.prompt;
            tail_events.push_back(e);
        }
        menu_ = cur;
    } else {
        menu_.reset();
    }

    if (!state.running() && !game_end_reported_) {
        game_end_reported_ = true;
        Event e;
        e.kind = Event::Kind::GameEnded;
        e.turn = turn;
        e.status = state.done.status;
        e.text = state.done.status == RunStatus::Won ? "won" : state.done.cause;
        tail_events.push_back(e);
    }
    initialized_ = true;

    std::vector<Event> out;
    for (auto* group : {&messages, &level_events, &structure_events, &monster_events, &item_events, &feature_events,
                        &stat_events, &tail_events}) {
        out.insert(out.end(), group->begin(), group->end());
    }
    return out;
}

void Tracker::record_search(Pos p) { ++mem().searched_count[p]; }

void Tracker::assume_known(const KnownGrid& grid) {
    LevelMemory& m = mem();
    m.grid = grid;
    m.seen.clear();
    m.features.clear();
    for (int i = 0; i < kMapWidth * kMapHeight; ++i) {
        const TileKind k = grid[static_cast<size_t>(i)];
        if (k == TileKind::Unknown) continue;
        m.seen.insert(pos_of(i));
        if (is_feature(k)) m.features[pos_of(i)] = k;
    }
    std::vector<Event> ignored;
    resegment(m, turn_, ignored);
}

std::vector<int> Tracker::distance_map(Pos from) const {
    const LevelMemory& m = level();
    std::vector<int> dist(static_cast<size_t>(kMapWidth * kMapHeight), -1);
    if (!in_bounds(from)) return dist;
    std::deque<Pos> q{from};
    dist[static_cast<size_t>(index_of(from))] = 0;
    while (!q.empty()) {
        const Pos p = q.front();
        q.pop_front();
        const int dp = dist[static_cast<size_t>(index_of(p))];
        for (Dir d : kCompass) {
            const Pos n = p + d;
            if (!in_bounds(n) || dist[static_cast<size_t>(index_of(n))] >= 0) continue;
            if (!known_passable(m.at(n))) continue;
            dist[static_cast<size_t>(index_of(n))] = dp + 1;
            q.push_back(n);
        }
    }
    return dist;
}

std::optional<int> Tracker::steps_to(Pos from, Pos to) const {
    if (from == to) return 0;
    if (!in_bounds(to)) return std::nullopt;
    const int d = distance_map(from)[static_cast<size_t>(index_of(to))];
    if (d < 0) return std::nullopt;
    return d;
}

std::vector<KnownItem> Tracker::items_on_level() const {
    std::vector<KnownItem> out;
    for (const auto& [id, ki] : known_items_) {
        if (ki.depth == depth_) out.push_back(ki);
    }
    return out;
}

bool Tracker::is_frontier(Pos p) const {
    const LevelMemory& m = level();
    if (!known_passable(m.at(p))) return false;
    for (Dir d : kCompass) {
        const Pos n = p + d;
        if (in_bounds(n) && m.at(n) == TileKind::Unknown) return true;
    }
    return false;
}

std::vector<Pos> Tracker::frontier() const {
    std::vector<Pos> out;
    for (const Pos& p : level().seen) {
        if (is_frontier(p)) out.push_back(p);
    }
    return out;
}

bool Tracker::is_dead_end(Pos p) const {
    const LevelMemory& m = level();
    if (m.at(p) != TileKind::Corridor) return false;
    int exits = 0;
    for (Dir d : kCompass) {
        const TileKind k = m.at(p + d);
        if (known_passable(k) || is_door(k)) ++exits;
    }
    return exits <= 1;
}

const Structure* Tracker::structure_at(Pos p) const {
    for (const auto& s : level().structures) {
        if (s.tiles.count(p)) return &s;
    }
    return nullptr;
}

const Structure* Tracker::structure_by_id(int id) const {
    for (const auto& s : level().structures) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

bool Tracker::structure_explorable(const Structure& s) const {
    const LevelMemory& m = level();
    for (const Pos& p : s.tiles) {
        if (is_frontier(p) || m.at(p) == TileKind::DoorClosed) return true;
    }
    return false;
}

}  // namespace netplay
