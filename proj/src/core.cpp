#include "netplay/core.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace netplay {

int chebyshev(Pos a, Pos b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

Pos delta(Dir d) {
    switch (d) {
        case Dir::N: return {0, -1};
        case Dir::NE: return {1, -1};
        case Dir::E: return {1, 0};
        case Dir::SE: return {1, 1};
        case Dir::S: return {0, 1};
        case Dir::SW: return {-1, 1};
        case Dir::W: return {-1, 0};
        case Dir::NW: return {-1, -1};
        case Dir::Self: return {0, 0};
    }
    return {0, 0};
}

std::optional<Dir> dir_between(Pos from, Pos to) {
    const int dx = to.x - from.x;
    const int dy = to.y - from.y;
    if (std::abs(dx) > 1 || std::abs(dy) > 1) return std::nullopt;
    for (Dir d : kCompass) {
        if (delta(d).x == dx && delta(d).y == dy) return d;
    }
    return Dir::Self;
}

Dir compass_heading(Pos from, Pos to) {
    const int sx = (to.x > from.x) - (to.x < from.x);
    const int sy = (to.y > from.y) - (to.y < from.y);
    return *dir_between({0, 0}, {sx, sy});
}

std::string_view dir_name(Dir d) {
    switch (d) {
        case Dir::N: return "north";
        case Dir::NE: return "northeast";
        case Dir::E: return "east";
        case Dir::SE: return "southeast";
        case Dir::S: return "south";
        case Dir::SW: return "southwest";
        case Dir::W: return "west";
        case Dir::NW: return "northwest";
        case Dir::Self: return "self";
    }
    return "self";
}

char dir_key(Dir d) {
    switch (d) {
        case Dir::N: return 'k';
        case Dir::NE: return 'u';
        case Dir::E: return 'l';
        case Dir::SE: return 'n';
        case Dir::S: return 'j';
        case Dir::SW: return 'b';
        case Dir::W: return 'h';
        case Dir::NW: return 'y';
        case Dir::Self: return 's';
    }
    return 's';
}

std::optional<Dir> dir_from_key(char key) {
    switch (key) {
        case 'k': return Dir::N;
        case 'u': return Dir::NE;
        case 'l': return Dir::E;
        case 'n': return Dir::SE;
        case 'j': return Dir::S;
        case 'b': return Dir::SW;
        case 'h': return Dir::W;
        case 'y': return Dir::NW;
        case 's':
        case '.': return Dir::Self;
        default: return std::nullopt;
    }
}

std::optional<Dir> dir_from_name(std::string_view s) {
    const std::string v = lowercase(s);
    static const std::pair<const char*, Dir> names[] = {
        {"n", Dir::N},   {"north", Dir::N},     {"ne", Dir::NE}, {"northeast", Dir::NE},
        {"e", Dir::E},   {"east", Dir::E},      {"se", Dir::SE}, {"southeast", Dir::SE},
        {"s", Dir::S},   {"south", Dir::S},     {"sw", Dir::SW}, {"southwest", Dir::SW},
        {"w", Dir::W},   {"west", Dir::W},      {"nw", Dir::NW}, {"northwest", Dir::NW},
        {"self", Dir::Self}, {".", Dir::Self},
    };
    for (const auto& [name, d] : names) {
        if (v == name) return d;
    }
    return std::nullopt;
}

int rng_range(Rng& rng, int lo, int hi) {
    if (hi <= lo) return lo;
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng() % span);
}

bool rng_chance(Rng& rng, int num, int den) { return static_cast<int>(rng() % static_cast<uint64_t>(den)) < num; }

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool icontains(std::string_view haystack, std::string_view needle) {
    return lowercase(haystack).find(lowercase(needle)) != std::string::npos;
}

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.emplace_back(text.substr(start));
            break;
        }
        std::string line(text.substr(start, nl - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = nl + 1;
    }
    return lines;
}

std::string format_pos(Pos p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

uint64_t fnv1a64(std::string_view data, uint64_t seed) {
    uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace netplay
