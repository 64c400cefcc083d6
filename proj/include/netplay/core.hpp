#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace netplay {

constexpr int kMapWidth = 79;
constexpr int kMapHeight = 21;

struct Pos {
    int x = 0;
    int y = 0;

    bool operator==(const Pos&) const = default;
    // Row-major ordering: lowest (y, x) first.
    std::strong_ordering operator<=>(const Pos& o) const {
        if (auto c = y <=> o.y; c != 0) return c;
        return x <=> o.x;
    }
};

inline bool in_bounds(Pos p) { return p.x >= 0 && p.y >= 0 && p.x < kMapWidth && p.y < kMapHeight; }
inline bool on_boundary(Pos p) { return p.x == 0 || p.y == 0 || p.x == kMapWidth - 1 || p.y == kMapHeight - 1; }
inline int index_of(Pos p) { return p.y * kMapWidth + p.x; }
inline Pos pos_of(int idx) { return {idx % kMapWidth, idx / kMapWidth}; }
int chebyshev(Pos a, Pos b);

// Compass directions plus Self (zap/apply targets). Movement accepts the first eight only.
enum class Dir : uint8_t { N, NE, E, SE, S, SW, W, NW, Self };

constexpr Dir kCompass[8] = {Dir::N, Dir::NE, Dir::E, Dir::SE, Dir::S, Dir::SW, Dir::W, Dir::NW};

Pos delta(Dir d);
inline Pos operator+(Pos p, Dir d) {
    Pos q = delta(d);
    return {p.x + q.x, p.y + q.y};
}
std::optional<Dir> dir_between(Pos from, Pos to);   // adjacent (or equal) tiles only
std::string_view dir_name(Dir d);                    // "north", "northeast", ...
char dir_key(Dir d);                                 // vi-keys: k u l n j b h y, 's' for self
std::optional<Dir> dir_from_key(char key);           // accepts '.' as self too
std::optional<Dir> dir_from_name(std::string_view s); // "n", "ne", "north", "self", ...
// General compass heading from a to b by the signs of the deltas; Self when equal.
Dir compass_heading(Pos from, Pos to);

// Portable RNG helpers: std distributions are implementation-defined, these are not.
using Rng = std::mt19937_64;
int rng_range(Rng& rng, int lo, int hi);   // inclusive
bool rng_chance(Rng& rng, int num, int den);

std::string lowercase(std::string_view s);
bool icontains(std::string_view haystack, std::string_view needle);
std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);
std::string format_pos(Pos p);  // "(x,y)"

// FNV-1a 64-bit; used for state and request digests.
uint64_t fnv1a64(std::string_view data, uint64_t seed = 1469598103934665603ull);
std::string hex64(uint64_t v);

}  // namespace netplay
