#pragma once

// Fixture builders and independent oracles shared by the test suites.

#include "netplay/scenario.hpp"
#include "netplay/sim.hpp"
#include "netplay/tracker.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fixture {

using namespace netplay;

// Scenario text around a MAP block. `extra` holds LEGEND/OBJECT/MONSTER/... lines.
inline std::string scenario_text(const std::string& map, const std::string& start, const std::string& extra = "",
                                 const std::string& success = "true", int time = 200) {
    std::ostringstream out;
    out << "NAME: fixture\nMAP:\n" << map;
    if (!map.empty() && map.back() != '\n') out << "\n";
    out << "ENDMAP\n" << extra;
    if (!extra.empty() && extra.back() != '\n') out << "\n";
    out << "START: " << start << "\nTASK: \"fixture\"\nSUCCESS: " << success << "\nLIMITS: time=" << time << "\n";
    return out.str();
}

inline GameState game(const std::string& map, const std::string& start, const std::string& extra = "", uint64_t seed = 1) {
    return new_game(parse_scenario(scenario_text(map, start, extra)), seed);
}

inline const std::string kRoom5 =
    "-------\n"
    "|.....|\n"
    "|.....|\n"
    "|.....|\n"
    "-------\n";

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------- oracles

inline bool oracle_passable(TileKind k) {
    static const std::set<TileKind> walk = {TileKind::Floor,     TileKind::Corridor,   TileKind::DoorOpen,
                                            TileKind::StairsUp,  TileKind::StairsDown, TileKind::Fountain,
                                            TileKind::Altar,     TileKind::Statue};
    return walk.count(k) > 0;
}

// Dijkstra with unit weights over 8-connected passable tiles.
inline std::optional<int> dijkstra_steps(const KnownGrid& g, Pos from, Pos to) {
    if (from == to) return 0;
    const int n = kMapWidth * kMapHeight;
    std::vector<int> dist(n, INT32_MAX);
    using Node = std::pair<int, int>;
    std::priority_queue<Node, std::vector<Node>, std::greater<>> pq;
    dist[from.y * kMapWidth + from.x] = 0;
    pq.push({0, from.y * kMapWidth + from.x});
    while (!pq.empty()) {
        auto [d, i] = pq.top();
        pq.pop();
        if (d > dist[i]) continue;
        const int x = i % kMapWidth, y = i / kMapWidth;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (!dx && !dy) continue;
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= kMapWidth || ny >= kMapHeight) continue;
                const int j = ny * kMapWidth + nx;
                if (!oracle_passable(g[j])) continue;
                if (d + 1 < dist[j]) {
                    dist[j] = d + 1;
                    pq.push({d + 1, j});
                }
            }
        }
    }
    const int t = to.y * kMapWidth + to.x;
    if (dist[t] == INT32_MAX) return std::nullopt;
    return dist[t];
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Rooms: 8-connected room-floor tiles. Corridors: 8-connected corridor tiles.
// A door joins the 4-neighbour room tile with the lowest (y, x); failing that a corridor; else it stands alone.
// Result: set of (is_room, tiles) without ids.
inline std::set<std::pair<bool, std::set<Pos>>> components_oracle(const KnownGrid& g) {
    static const std::set<TileKind> roomish = {TileKind::Floor,    TileKind::StairsUp, TileKind::StairsDown,
                                               TileKind::Fountain, TileKind::Altar,    TileKind::Statue};
    const int n = kMapWidth * kMapHeight;
    auto cls = [&](int i) -> int {
        if (roomish.count(g[i])) return 1;
        if (g[i] == TileKind::Corridor) return 2;
        return 0;
    };
    UnionFind uf(n);
    for (int i = 0; i < n; ++i) {
        if (!cls(i)) continue;
        const int x = i % kMapWidth, y = i / kMapWidth;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= kMapWidth || ny >= kMapHeight) continue;
                const int j = ny * kMapWidth + nx;
                if (cls(j) == cls(i)) uf.unite(i, j);
            }
        }
    }
    std::map<int, std::pair<bool, std::set<Pos>>> groups;
    for (int i = 0; i < n; ++i) {
        if (cls(i)) {
            auto& grp = groups[uf.find(i)];
            grp.first = cls(i) == 1;
            grp.second.insert(Pos{i % kMapWidth, i / kMapWidth});
        }
    }
    int lone = -1;
    for (int i = 0; i < n; ++i) {
        const TileKind k = g[i];
        if (k != TileKind::DoorOpen && k != TileKind::DoorClosed && k != TileKind::DoorLocked) continue;
        const int x = i % kMapWidth, y = i / kMapWidth;
        int target = -1;
        for (int want : {1, 2}) {
            Pos best{1000, 1000};
            for (auto [dx, dy] : {std::pair{0, -1}, {-1, 0}, {1, 0}, {0, 1}}) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= kMapWidth || ny >= kMapHeight) continue;
                const int j = ny * kMapWidth + nx;
                if (cls(j) != want) continue;
                if (Pos{nx, ny} < best) {
                    best = {nx, ny};
                    target = uf.find(j);
                }
            }
            if (target >= 0) break;
        }
        if (target < 0) {
            target = lone--;
            groups[target].first = false;
        }
        groups[target].second.insert(Pos{x, y});
    }
    std::set<std::pair<bool, std::set<Pos>>> out;
    for (auto& [_, grp] : groups) out.insert(grp);
    return out;
}

// Random 79x21 map: a wall border and independent tile draws weighted toward floor/corridor.
inline KnownGrid random_grid(Rng& rng) {
    KnownGrid g(kMapWidth * kMapHeight, TileKind::Wall);
    for (int y = 1; y < kMapHeight - 1; ++y) {
        for (int x = 1; x < kMapWidth - 1; ++x) {
            const int r = rng_range(rng, 0, 99);
            TileKind k = TileKind::Wall;
            if (r < 40) k = TileKind::Floor;
            else if (r < 62) k = TileKind::Corridor;
            else if (r < 66) k = TileKind::DoorOpen;
            else if (r < 69) k = TileKind::DoorClosed;
            else if (r < 71) k = TileKind::DoorLocked;
            else if (r < 72) k = TileKind::Fountain;
            else if (r < 73) k = TileKind::Boulder;
            else if (r < 76) k = TileKind::Unknown;
            g[y * kMapWidth + x] = k;
        }
    }
    return g;
}

}  // namespace fixture
