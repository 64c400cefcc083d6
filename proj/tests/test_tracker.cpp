#include "support.hpp"

#include <doctest.h>

using namespace netplay;

namespace {

std::vector<Event::Kind> kinds(const std::vector<Event>& events) {
    std::vector<Event::Kind> out;
    for (const auto& e : events) out.push_back(e.kind);
    return out;
}

bool has(const std::vector<Event>& events, Event::Kind k) {
    return std::any_of(events.begin(), events.end(), [&](const Event& e) { return e.kind == k; });
}

KnownGrid blank() { return KnownGrid(kMapWidth * kMapHeight, TileKind::Wall); }

void fill(KnownGrid& g, int x0, int y0, int x1, int y1, TileKind k) {
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) g[static_cast<size_t>(index_of({x, y}))] = k;
    }
}

std::set<std::pair<bool, std::set<Pos>>> as_partition(const std::vector<Structure>& v) {
    std::set<std::pair<bool, std::set<Pos>>> out;
    for (const auto& s : v) out.insert({s.kind == Structure::Kind::Room, s.tiles});
    return out;
}

}  // namespace

TEST_CASE("update: first look at a small room reports everything") {
    const std::string map = "-----\n|...|\n|.{.|\n|...|\n-----\n";
    GameState s = fixture::game(map, "1 1", "LEGEND: '{'=fountain\nOBJECT: dagger AT 3 3");
    Tracker t;
    const auto ev = t.update(s, {});
    CHECK(has(ev, Event::Kind::NewStructure));
    CHECK(has(ev, Event::Kind::NewFeature));
    CHECK(has(ev, Event::Kind::NewItem));
    CHECK_FALSE(has(ev, Event::Kind::LowHealth));
    REQUIRE(t.level().structures.size() == 1);
    CHECK(t.level().structures.front().tiles.size() == 9);
    CHECK(t.level().features.at({2, 2}) == TileKind::Fountain);
}

TEST_CASE("update: low health fires on the downward crossing only") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    s.player.max_hp = 20;
    s.player.hp = 12;
    Tracker t;
    t.update(s, {});
    s.player.hp = 9;
    auto ev = t.update(s, {});
    const auto low = std::find_if(ev.begin(), ev.end(), [](const Event& e) { return e.kind == Event::Kind::LowHealth; });
    REQUIRE(low != ev.end());
    CHECK(low->old_value == 9);
    CHECK(low->new_value == 20);
    s.player.hp = 8;
    CHECK_FALSE(has(t.update(s, {}), Event::Kind::LowHealth));
    s.player.hp = 15;
    t.update(s, {});
    s.player.hp = 7;
    CHECK(has(t.update(s, {}), Event::Kind::LowHealth));
}

TEST_CASE("update: stat changes cover hp, hunger band, level and gold") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    Tracker t;
    t.update(s, {});
    s.player.gold = 7;
    s.player.xp_level = 2;
    s.player.nutrition = 100;
    const auto ev = t.update(s, {});
    std::set<std::string> names;
    for (const auto& e : ev) {
        if (e.kind == Event::Kind::StatChanged) names.insert(e.text);
    }
    CHECK(names == std::set<std::string>{"gold", "hunger", "xp_level"});
}

TEST_CASE("update: events come out in the fixed order") {
    static const std::vector<Event::Kind> order = {
        Event::Kind::NewMessage, Event::Kind::LevelChanged, Event::Kind::Teleported, Event::Kind::NewStructure,
        Event::Kind::NewMonster, Event::Kind::NewItem,      Event::Kind::NewFeature, Event::Kind::StatChanged,
        Event::Kind::LowHealth,  Event::Kind::MenuOpened,   Event::Kind::GameEnded};
    auto rank = [](Event::Kind k) { return std::find(order.begin(), order.end(), k) - order.begin(); };
    for (uint64_t seed = 0; seed < 20; ++seed) {
        GameState s = new_full_game(seed);
        Tracker t;
        Rng rng(seed);
        for (int i = 0; i < 300 && s.running(); ++i) {
            const StepResult r = step(s, Action::move(kCompass[rng_range(rng, 0, 7)]));
            const auto ks = kinds(t.update(s, r.messages));
            for (size_t j = 1; j < ks.size(); ++j) CHECK(rank(ks[j - 1]) <= rank(ks[j]));
        }
    }
}

TEST_CASE("occlusion: a pet carrying off a dagger") {
    // Kitten starts beside the dagger and grabs it on its first move.
    const std::string map =
        "---------\n"
        "|.......|\n"
        "|.......|\n"
        "|.......|\n"
        "---------\n";
    const std::string extra = "OBJECT: dagger AT 6 2\nMONSTER: kitten AT 7 2 pet";
    for (bool bug : {false, true}) {
        CAPTURE(bug);
        GameState s = fixture::game(map, "1 2", extra);
        TrackerConfig cfg;
        cfg.replicate_occlusion_bug = bug;
        Tracker t(cfg);
        auto ev = t.update(s, {});
        const int dagger = s.level().pile({6, 2})->front().id;
        REQUIRE(t.known_items().count(dagger));
        int new_item_events = 0;
        bool carried_off = false;
        for (int i = 0; i < 30; ++i) {
            const auto r = step(s, Action::simple(Action::Type::Search));
            ev = t.update(s, r.messages);
            for (const auto& e : ev) new_item_events += e.kind == Event::Kind::NewItem && e.id == dagger;
            const Monster& kitten = s.level().monsters.front();
            if (!kitten.inventory.empty() && kitten.pos != Pos{6, 2}) {
                carried_off = true;
                break;
            }
        }
        REQUIRE(carried_off);
        CHECK(new_item_events == 0);
        CHECK(s.level().pile({6, 2}) == nullptr);
        CHECK(t.known_items().count(dagger) == (bug ? 1u : 0u));
    }
}

TEST_CASE("segment: a single floor block is one room") {
    KnownGrid g = blank();
    fill(g, 10, 5, 13, 9, TileKind::Floor);
    const auto v = segment_structures(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Structure::Kind::Room);
    CHECK(v[0].tiles.size() == 20);
    CHECK(v[0].id == 1);
}

TEST_CASE("segment: two rooms and a corridor") {
    KnownGrid g = blank();
    fill(g, 2, 2, 5, 5, TileKind::Floor);
    fill(g, 14, 2, 17, 5, TileKind::Floor);
    g[static_cast<size_t>(index_of({6, 3}))] = TileKind::DoorOpen;
    g[static_cast<size_t>(index_of({13, 3}))] = TileKind::DoorClosed;
    fill(g, 7, 3, 12, 3, TileKind::Corridor);  // 6 tiles
    const auto v = segment_structures(g);
    REQUIRE(v.size() == 3);
    int rooms = 0, corridors = 0;
    for (const auto& s : v) {
        if (s.kind == Structure::Kind::Room) {
            ++rooms;
            CHECK(s.tiles.size() == 17);  // 16 floor + its door
        } else {
            ++corridors;
            CHECK(s.tiles.size() == 6);
        }
    }
    CHECK(rooms == 2);
    CHECK(corridors == 1);
    CHECK(v[0].label() == "room_1");
}

TEST_CASE("segment: matches a union-find oracle on 50 random maps") {
    Rng rng(2024);
    int mismatches = 0;
    for (int i = 0; i < 50; ++i) {
        const KnownGrid g = fixture::random_grid(rng);
        const auto v = segment_structures(g);
        if (as_partition(v) != fixture::components_oracle(g)) ++mismatches;
        for (size_t j = 0; j < v.size(); ++j) CHECK(v[j].id == static_cast<int>(j) + 1);
    }
    CHECK(mismatches == 0);
}

TEST_CASE("steps_to: basics") {
    KnownGrid g = blank();
    fill(g, 3, 3, 8, 6, TileKind::Floor);
    Tracker t;
    t.assume_known(g);
    CHECK(t.steps_to({4, 4}, {4, 4}) == 0);
    CHECK(t.steps_to({4, 4}, {5, 5}) == 1);
    CHECK(t.steps_to({3, 3}, {8, 6}) == 5);
    CHECK_FALSE(t.steps_to({3, 3}, {20, 10}).has_value());
}

TEST_CASE("steps_to: matches a Dijkstra oracle on 100 random maps") {
    Rng rng(77);
    int mismatches = 0, reachable = 0;
    for (int i = 0; i < 100; ++i) {
        const KnownGrid g = fixture::random_grid(rng);
        Tracker t;
        t.assume_known(g);
        for (int q = 0; q < 20; ++q) {
            const Pos a{rng_range(rng, 1, kMapWidth - 2), rng_range(rng, 1, kMapHeight - 2)};
            const Pos b{rng_range(rng, 1, kMapWidth - 2), rng_range(rng, 1, kMapHeight - 2)};
            const auto got = t.steps_to(a, b);
            const auto want = fixture::dijkstra_steps(g, a, b);
            if (got != want) ++mismatches;
            reachable += want.has_value();
        }
    }
    CHECK(mismatches == 0);
    CHECK(reachable > 100);  // the oracle saw real paths, not only misses
}

TEST_CASE("steps_to: triangle inequality") {
    Rng rng(8);
    const KnownGrid g = fixture::random_grid(rng);
    Tracker t;
    t.assume_known(g);
    std::vector<Pos> pass;
    for (int i = 0; i < kMapWidth * kMapHeight; ++i) {
        if (fixture::oracle_passable(g[static_cast<size_t>(i)])) pass.push_back(pos_of(i));
    }
    for (int n = 0; n < 2000; ++n) {
        const Pos a = pass[static_cast<size_t>(rng_range(rng, 0, int(pass.size()) - 1))];
        const Pos b = pass[static_cast<size_t>(rng_range(rng, 0, int(pass.size()) - 1))];
        const Pos c = pass[static_cast<size_t>(rng_range(rng, 0, int(pass.size()) - 1))];
        const auto ab = t.steps_to(a, b), bc = t.steps_to(b, c), ac = t.steps_to(a, c);
        if (ab && bc) {
            REQUIRE(ac.has_value());
            CHECK(*ac <= *ab + *bc);
        }
    }
}

TEST_CASE("property: tracker invariants along random walks") {
    for (uint64_t seed = 0; seed < 30; ++seed) {
        GameState s = new_full_game(seed + 100);
        Tracker t;
        t.update(s, {});
        Rng rng(seed);
        std::map<int, size_t> seen_size;
        std::map<int, std::map<Pos, int>> searched;
        std::set<Pos> ever_visible_here;
        for (int i = 0; i < 250 && s.running(); ++i) {
            Action a = rng_chance(rng, 1, 5) ? Action::simple(Action::Type::Search) : Action::move(kCompass[rng_range(rng, 0, 7)]);
            if (s.open_menu) a = Action::key("ESC");
            const StepResult r = step(s, a);
            if (a.type == Action::Type::Search) t.record_search(s.player.pos);
            const auto vis = visible_tiles(s);
            const auto ev = t.update(s, r.messages);

            // Idempotence.
            CHECK(t.update(s, {}).empty());

            // Monotone knowledge.
            const int d = s.player.depth;
            CHECK(t.level().seen.size() >= seen_size[d]);
            seen_size[d] = t.level().seen.size();
            for (const auto& [p, c] : searched[d]) CHECK(t.level().searched_count.at(p) >= c);
            searched[d] = t.level().searched_count;
            for (const Pos& p : vis) CHECK(t.level().seen.count(p));

            // New entities are on visible tiles.
            for (const auto& e : ev) {
                if (e.kind == Event::Kind::NewMonster) {
                    const Monster* m = s.level().monster_at(e.pos);
                    REQUIRE(m != nullptr);
                    CHECK(m->id == e.id);
                    CHECK(vis.count(e.pos));
                }
                if (e.kind == Event::Kind::NewItem) {
                    CHECK(vis.count(e.pos));
                    const auto* pile = s.level().pile(e.pos);
                    REQUIRE(pile != nullptr);
                    CHECK(std::any_of(pile->begin(), pile->end(), [&](const Item& it) { return it.id == e.id; }));
                }
            }
        }
    }
}

TEST_CASE("structures partition the known passable tiles") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        GameState s = new_full_game(seed);
        Tracker t;
        t.update(s, {});
        Rng rng(seed);
        for (int i = 0; i < 200 && s.running(); ++i) {
            const StepResult r = step(s, s.open_menu ? Action::key("ESC") : Action::move(kCompass[rng_range(rng, 0, 7)]));
            t.update(s, r.messages);
        }
        std::map<Pos, int> owner;
        std::set<int> ids;
        for (const auto& st : t.level().structures) {
            CHECK(ids.insert(st.id).second);
            for (const Pos& p : st.tiles) CHECK(owner.emplace(p, st.id).second);
        }
        for (const Pos& p : t.level().seen) {
            const TileKind k = t.level().at(p);
            if (is_passable(k) && k != TileKind::Unknown) CHECK(owner.count(p));
        }
    }
}
