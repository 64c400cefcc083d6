#include "netplay/describe.hpp"

#include <algorithm>
#include <sstream>

namespace netplay {

int estimate_tokens(std::string_view text) { return static_cast<int>((text.size() + 3) / 4); }

namespace {

struct Entry {
    int steps;  // large when unreachable
    Pos pos;
    std::string text;
};

constexpr int kUnreachable = 1 << 30;

std::string steps_text(int steps) {
    if (steps >= kUnreachable) return "unreachable";
    return std::to_string(steps) + (steps == 1 ? " step" : " steps");
}

std::string monster_label(const KnownMonster& m) {
    switch (m.attitude) {
        case Attitude::Pet: return "tame " + m.kind;
        case Attitude::Peaceful: return "peaceful " + m.kind;
        case Attitude::Hostile: return m.kind;
    }
    return m.kind;
}

}  // namespace

std::string describe_level(const Tracker& tracker, const PlayerState& player) {
    const LevelMemory& m = tracker.level();
    if (m.structures.empty()) return "You have not discovered any structures yet.";
    const std::vector<int> dist = tracker.distance_map(player.pos);
    // Doors and other blocking tiles count as reached from their nearest reachable neighbour.
    auto steps_at = [&](Pos p) {
        const int d = dist[static_cast<size_t>(index_of(p))];
        if (d >= 0) return d;
        if (is_passable(m.at(p))) return kUnreachable;
        int best = kUnreachable;
        for (Dir dir : kCompass) {
            const Pos n = p + dir;
            if (!in_bounds(n)) continue;
            const int dn = dist[static_cast<size_t>(index_of(n))];
            if (dn >= 0) best = std::min(best, dn + 1);
        }
        return best;
    };

    std::map<Pos, std::vector<std::string>> items_at;
    for (const auto& ki : tracker.items_on_level()) items_at[ki.pos].push_back(ki.name);

    std::ostringstream out;
    std::vector<std::string> explorable;
    for (const auto& s : m.structures) {
        int best = kUnreachable;
        std::vector<Entry> objects;
        for (const Pos& p : s.tiles) {
            best = std::min(best, steps_at(p));
            const TileKind k = m.at(p);
            if (auto it = m.features.find(p); it != m.features.end()) {
                objects.push_back({steps_at(p), p, std::string(tile_name(it->second))});
            } else if (k == TileKind::DoorClosed || k == TileKind::DoorLocked) {
                objects.push_back({steps_at(p), p, std::string(tile_name(k))});
            }
            if (auto it = items_at.find(p); it != items_at.end()) {
                for (const auto& name : it->second) objects.push_back({steps_at(p), p, name});
            }
        }
        std::stable_sort(objects.begin(), objects.end(), [](const Entry& a, const Entry& b) {
            if (a.steps != b.steps) return a.steps < b.steps;
            return a.pos < b.pos;
        });
        out << s.label() << " (" << steps_text(best) << ")";
        if (s.tiles.count(player.pos)) out << " [you are here]";
        if (objects.empty()) {
            out << ": nothing of note";
        } else {
            out << ": ";
            for (size_t i = 0; i < objects.size(); ++i) {
                if (i) out << "; ";
                out << objects[i].text << " at " << format_pos(objects[i].pos) << " (" << steps_text(objects[i].steps) << ")";
            }
        }
        out << "\n";
        if (tracker.structure_explorable(s)) explorable.push_back(s.label());
    }
    if (explorable.empty()) {
        out << "No structure can be explored further.";
    } else {
        out << "Structures that can be further explored: ";
        for (size_t i = 0; i < explorable.size(); ++i) out << (i ? ", " : "") << explorable[i];
    }
    std::vector<std::string> blockers;
    for (const Pos& p : m.seen) {
        const TileKind k = m.at(p);
        if (k == TileKind::DoorLocked || k == TileKind::Boulder) {
            blockers.push_back(std::string(tile_name(k)) + " at " + format_pos(p));
        }
    }
    if (!blockers.empty()) {
        out << "\nBlocking exploration: ";
        for (size_t i = 0; i < blockers.size(); ++i) out << (i ? "; " : "") << blockers[i];
    }
    return out.str();
}

std::string describe_monsters(const Tracker& tracker, const PlayerState& player, int close_steps) {
    const auto& mons = tracker.known_monsters();
    if (mons.empty()) return "No monsters in sight.";
    const std::vector<int> dist = tracker.distance_map(player.pos);
    std::vector<Entry> close, distant;
    for (const auto& [id, m] : mons) {
        const int d = dist[static_cast<size_t>(index_of(m.pos))];
        const int steps = d < 0 ? kUnreachable : d;
        const std::string base = monster_label(m) + " at " + format_pos(m.pos) + ", " + steps_text(steps);
        if (steps <= close_steps) {
            close.push_back({steps, m.pos, base + ", " + std::string(dir_name(compass_heading(player.pos, m.pos)))});
        } else {
            distant.push_back({steps, m.pos, base});
        }
    }
    auto by_steps = [](const Entry& a, const Entry& b) {
        if (a.steps != b.steps) return a.steps < b.steps;
        return a.pos < b.pos;
    };
    std::stable_sort(close.begin(), close.end(), by_steps);
    std::stable_sort(distant.begin(), distant.end(), by_steps);
    std::ostringstream out;
    out << "Close monsters:";
    if (close.empty()) out << " none";
    for (const auto& e : close) out << "\n" << e.text;
    out << "\nDistant monsters:";
    if (distant.empty()) out << " none";
    for (const auto& e : distant) out << "\n" << e.text;
    return out.str();
}

std::string describe_inventory(const PlayerState& player) {
    if (player.inventory.empty()) return "Your inventory is empty.";
    std::vector<const Item*> items;
    for (const auto& it : player.inventory) items.push_back(&it);
    std::sort(items.begin(), items.end(), [](const Item* a, const Item* b) { return a->letter < b->letter; });
    std::ostringstream out;
    for (size_t i = 0; i < items.size(); ++i) {
        const Item& it = *items[i];
        if (i) out << "\n";
        out << it.letter << " - " << it.display_name();
        if (player.wielded == it.letter) out << " (weapon in hand)";
        if (player.worn_ring == it.letter) out << " (being worn)";
        if (it.kind == ItemKind::Wand && it.identified) out << " (" << it.charges << " charges)";
        if (it.kind == ItemKind::BagOfHolding) {
            if (it.contents.empty()) {
                out << " (empty)";
            } else {
                out << " (containing ";
                for (size_t c = 0; c < it.contents.size(); ++c) out << (c ? ", " : "") << it.contents[c].display_name();
                out << ")";
            }
        }
    }
    return out.str();
}

std::string describe_stats(const GameState& state) {
    const PlayerState& p = state.player;
    std::ostringstream out;
    out << "Dungeon level " << p.depth << ", turn " << state.turn << ", position " << format_pos(p.pos) << ".\n";
    out << "HP " << p.hp << "/" << p.max_hp << ", experience level " << p.xp_level << " (" << p.xp_points
        << " points), hunger: " << hunger_name(p.hunger()) << ", gold " << p.gold;
    if (p.status.count(Status::Ill)) out << ", status: deathly ill";
    if (!p.form.empty()) out << ", polymorphed into a " << p.form;
    out << ".";
    const LevelMap& L = state.level();
    const TileKind here = L.apparent(p.pos);
    std::vector<std::string> under;
    if (here != TileKind::Floor && here != TileKind::Corridor) under.push_back(std::string(tile_name(here)));
    if (const auto* pile = L.pile(p.pos)) {
        for (const auto& it : *pile) under.push_back(it.display_name());
    }
    if (L.engravings.count(p.pos)) under.push_back("an engraving");
    if (!under.empty()) {
        out << "\nYou are standing on: ";
        for (size_t i = 0; i < under.size(); ++i) out << (i ? ", " : "") << under[i];
        out << ".";
    }
    return out.str();
}

std::string describe_menu(const std::optional<MenuState>& menu) {
    if (!menu) return "";
    std::ostringstream out;
    out << menu->prompt;
    switch (menu->kind) {
        case MenuKind::PickupMulti:
        case MenuKind::ContainerLoot:
            out << "\nPress an entry's letter to toggle it, ENTER to confirm, ESC to cancel.";
            for (const auto& e : menu->entries) out << "\n[" << (e.marked ? 'x' : ' ') << "] " << e.letter << " - " << e.label;
            break;
        case MenuKind::ConfirmPrompt: out << "\nAnswer with y or n, or ESC to cancel."; break;
        case MenuKind::DirectionPrompt:
            out << "\nAnswer with a direction key: k north, u northeast, l east, n southeast, j south, b southwest, "
                   "h west, y northwest, s yourself.";
            break;
        case MenuKind::TextEntry: out << "\nType the answer with type_text, or ESC to cancel."; break;
    }
    return out.str();
}

Observation describe_observation(const Tracker& tracker, const GameState& state, const DescribeOptions& options) {
    Observation obs;
    if (options.stats) obs.sections.emplace_back("Status", describe_stats(state));
    if (options.level) obs.sections.emplace_back("Map", describe_level(tracker, state.player));
    if (options.monsters) {
        obs.sections.emplace_back("Monsters", describe_monsters(tracker, state.player, options.close_monster_steps));
    }
    if (options.inventory) obs.sections.emplace_back("Inventory", describe_inventory(state.player));
    if (options.menu && state.open_menu) obs.sections.emplace_back("Open menu", describe_menu(state.open_menu));
    std::ostringstream out;
    for (size_t i = 0; i < obs.sections.size(); ++i) {
        if (i) out << "\n\n";
        out << obs.sections[i].first << ":\n" << obs.sections[i].second;
    }
    obs.rendered = out.str();
    obs.token_estimate = estimate_tokens(obs.rendered);
    return obs;
}

}  // namespace netplay
