#include "netplay/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace netplay {

std::string_view error_kind_name(ScenarioError::Kind k) {
    switch (k) {
        case ScenarioError::Kind::SyntaxError: return "SyntaxError";
        case ScenarioError::Kind::UnknownGlyph: return "UnknownGlyph";
        case ScenarioError::Kind::RaggedMap: return "RaggedMap";
        case ScenarioError::Kind::UnknownAtom: return "UnknownAtom";
    }
    return "SyntaxError";
}

ScenarioError::ScenarioError(Kind kind, int line, int col, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " +
                         std::string(error_kind_name(kind)) + ": " + message),
      kind_(kind),
      line_(line),
      col_(col),
      detail_(message) {}

namespace {

using Kind = ScenarioError::Kind;

enum class ArgType { Str, Int };

struct AtomSig {
    std::string_view name;
    std::vector<ArgType> args;
    bool history;  // answerable from the event history, usable inside then()
};

const std::vector<AtomSig>& atom_table() {
    using A = ArgType;
    static const std::vector<AtomSig> table = {
        {"has_item", {A::Str}, false},
        {"item_in_container", {A::Str, A::Str}, false},
        {"on_tile", {A::Str}, false},
        {"monster_dead", {A::Str}, true},
        {"door_open", {A::Int, A::Int}, false},
        {"reached_depth", {A::Int}, false},
        {"drank", {A::Str}, true},
        {"boulder_removed", {A::Int, A::Int}, false},
        {"escaped_region", {A::Str}, false},
        {"feature_destroyed", {A::Str}, true},
        {"items_in_region", {A::Str, A::Str, A::Int}, false},
        {"picked_up", {A::Str}, true},
        {"identified", {A::Str}, true},
        {"in_region", {A::Str}, false},
    };
    return table;
}

const AtomSig* find_atom(std::string_view name) {
    for (const auto& a : atom_table()) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

// Cursor over one line with 1-based column reporting.
class Cursor {
public:
    Cursor(std::string_view text, int line, int col0) : text_(text), line_(line), col0_(col0) {}

    int line() const { return line_; }
    int col() const { return col0_ + static_cast<int>(i_); }
    bool done() {
        skip_ws();
        return i_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return i_ < text_.size() ? text_[i_] : '\0';
    }
    void skip_ws() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    }
    [[noreturn]] void fail(Kind k, const std::string& m, std::optional<int> at = std::nullopt) const {
        throw ScenarioError(k, line_, at.value_or(col()), m);
    }
    void expect(char c) {
        if (peek() != c) fail(Kind::SyntaxError, std::string("expected '") + c + "'");
        ++i_;
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++i_;
        return true;
    }
    std::string ident() {
        skip_ws();
        const size_t b = i_;
        while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_')) ++i_;
        if (b == i_) fail(Kind::SyntaxError, "expected a name");
        return std::string(text_.substr(b, i_ - b));
    }
    std::optional<long long> integer() {
        skip_ws();
        size_t j = i_;
        if (j < text_.size() && text_[j] == '-') ++j;
        const size_t digits = j;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        if (j == digits) return std::nullopt;
        const long long v = std::stoll(std::string(text_.substr(i_, j - i_)));
        i_ = j;
        return v;
    }
    long long need_int(const char* what) {
        const int at = (skip_ws(), col());
        auto v = integer();
        if (!v) fail(Kind::SyntaxError, std::string("expected ") + what, at);
        return *v;
    }
    std::string string_lit() {
        if (peek() != '"') fail(Kind::SyntaxError, "expected a quoted string");
        ++i_;
        std::string out;
        while (i_ < text_.size() && text_[i_] != '"') {
            char c = text_[i_++];
            if (c == '\\' && i_ < text_.size()) {
                const char e = text_[i_++];
                c = e == 'n' ? '\n' : e;
            }
            out += c;
        }
        if (i_ >= text_.size()) fail(Kind::SyntaxError, "unterminated string");
        ++i_;
        return out;
    }
    std::string word() {
        skip_ws();
        const size_t b = i_;
        while (i_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        return std::string(text_.substr(b, i_ - b));
    }
    std::string rest() {
        skip_ws();
        std::string r(text_.substr(i_));
        i_ = text_.size();
        return trim(r);
    }
    void expect_end() {
        if (!done()) fail(Kind::SyntaxError, "unexpected trailing text");
    }

private:
    std::string_view text_;
    int line_;
    int col0_;
    size_t i_ = 0;
};

SuccessExpr parse_expr(Cursor& c) {
    const int at = (c.skip_ws(), c.col());
    const std::string name = lowercase(c.ident());
    SuccessExpr e;
    if (name == "true" || name == "false") {
        e.op = name == "true" ? SuccessExpr::Op::True : SuccessExpr::Op::False;
        if (c.accept('(')) c.expect(')');
        return e;
    }
    const bool combinator = name == "all" || name == "any" || name == "not" || name == "then";
    const AtomSig* sig = combinator ? nullptr : find_atom(name);
    if (!combinator && !sig) c.fail(Kind::UnknownAtom, "unknown atom '" + name + "'", at);
    c.expect('(');
    if (combinator) {
        e.op = name == "all"   ? SuccessExpr::Op::All
               : name == "any" ? SuccessExpr::Op::Any
               : name == "not" ? SuccessExpr::Op::Not
                               : SuccessExpr::Op::Then;
        if (!c.accept(')')) {
            do {
                const int child_at = (c.skip_ws(), c.col());
                e.children.push_back(parse_expr(c));
                if (e.op == SuccessExpr::Op::Then) {
                    const auto& ch = e.children.back();
                    const AtomSig* cs = ch.op == SuccessExpr::Op::Atom ? find_atom(ch.atom) : nullptr;
                    if (!cs || !cs->history) {
                        c.fail(Kind::SyntaxError, "then() accepts only history atoms (picked_up, drank, monster_dead, identified, feature_destroyed)", child_at);
                    }
                }
            } while (c.accept(','));
            c.expect(')');
        }
        if (e.op == SuccessExpr::Op::Not && e.children.size() != 1) c.fail(Kind::SyntaxError, "not() takes exactly one argument", at);
        if (e.op == SuccessExpr::Op::Then && e.children.empty()) c.fail(Kind::SyntaxError, "then() needs at least one step", at);
        return e;
    }
    e.op = SuccessExpr::Op::Atom;
    e.atom = name;
    if (!c.accept(')')) {
        do {
            const int arg_at = (c.skip_ws(), c.col());
            if (c.peek() == '"') {
                e.args.emplace_back(c.string_lit());
            } else if (auto v = c.integer()) {
                e.args.emplace_back(*v);
            } else {
                c.fail(Kind::SyntaxError, "expected a string or integer argument", arg_at);
            }
        } while (c.accept(','));
        c.expect(')');
    }
    if (e.args.size() != sig->args.size()) {
        c.fail(Kind::SyntaxError, name + "() takes " + std::to_string(sig->args.size()) + " argument(s)", at);
    }
    for (size_t i = 0; i < e.args.size(); ++i) {
        const bool is_int = std::holds_alternative<long long>(e.args[i]);
        if (is_int != (sig->args[i] == ArgType::Int)) {
            c.fail(Kind::SyntaxError, name + "() argument " + std::to_string(i + 1) + " must be " +
                                          (sig->args[i] == ArgType::Int ? "an integer" : "a string"),
                   at);
        }
    }
    if (e.atom == "on_tile" && !tile_from_name(std::get<std::string>(e.args[0]))) {
        c.fail(Kind::SyntaxError, "unknown tile kind '" + std::get<std::string>(e.args[0]) + "'", at);
    }
    return e;
}

std::string legend_name(TileKind k) {
    std::string n(tile_name(k));
    std::replace(n.begin(), n.end(), ' ', '_');
    return n;
}

bool is_base_glyph(char c) {
    return c == ' ' || c == '-' || c == '|' || c == '.' || c == '#' || c == '+' || c == '<' || c == '>';
}

struct PendingRegionRef {
    std::string region;
    int line;
    int col;
};

Placement parse_placement(Cursor& c, std::vector<PendingRegionRef>& refs) {
    Placement p;
    const int at = (c.skip_ws(), c.col());
    if (auto x = c.integer()) {
        p.mode = Placement::Mode::Fixed;
        p.pos.x = static_cast<int>(*x);
        p.pos.y = static_cast<int>(c.need_int("a y coordinate"));
        if (!in_bounds(p.pos)) c.fail(Kind::SyntaxError, "position " + format_pos(p.pos) + " is outside the map", at);
        return p;
    }
    const std::string w = c.word();
    if (lowercase(w) != "random") c.fail(Kind::SyntaxError, "expected 'x y' or 'random'", at);
    p.mode = Placement::Mode::Random;
    if (c.done()) return p;
    Cursor probe = c;
    const std::string kw = probe.word();
    if (kw == "IN" || kw == "in") {
        c = probe;
        const int rat = (c.skip_ws(), c.col());
        p.mode = Placement::Mode::RandomIn;
        p.region = c.ident();
        refs.push_back({p.region, c.line(), rat});
    }
    return p;
}

std::string print_placement(const Placement& p) {
    switch (p.mode) {
        case Placement::Mode::Fixed: return std::to_string(p.pos.x) + " " + std::to_string(p.pos.y);
        case Placement::Mode::Random: return "random";
        case Placement::Mode::RandomIn: return "random IN " + p.region;
    }
    return "random";
}

// Splits "name words AT placement" at the last standalone " AT ".
std::pair<std::string, size_t> split_at_keyword(std::string_view body) {
    size_t pos = std::string_view::npos;
    for (size_t i = 0; i + 4 <= body.size(); ++i) {
        if (body.substr(i, 4) == " AT ") pos = i;
    }
    if (pos == std::string_view::npos) return {std::string(), std::string_view::npos};
    return {trim(body.substr(0, pos)), pos + 4};
}

}  // namespace

SuccessExpr parse_success_expr(std::string_view text) {
    Cursor c(text, 1, 1);
    SuccessExpr e = parse_expr(c);
    c.expect_end();
    return e;
}

std::string print_success_expr(const SuccessExpr& e) {
    switch (e.op) {
        case SuccessExpr::Op::True: return "true";
        case SuccessExpr::Op::False: return "false";
        case SuccessExpr::Op::Atom: {
            std::string out = e.atom + "(";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                if (const auto* v = std::get_if<long long>(&e.args[i])) out += std::to_string(*v);
                else out += quote(std::get<std::string>(e.args[i]));
            }
            return out + ")";
        }
        default: break;
    }
    std::string out = e.op == SuccessExpr::Op::All   ? "all("
                      : e.op == SuccessExpr::Op::Any ? "any("
                      : e.op == SuccessExpr::Op::Not ? "not("
                                                     : "then(";
    for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += ", ";
        out += print_success_expr(e.children[i]);
    }
    return out + ")";
}

ScenarioSpec parse_scenario(std::string_view text) {
    const std::vector<std::string> lines = split_lines(text);
    ScenarioSpec spec;
    spec.name = "unnamed";
    int map_line = 0;
    std::vector<PendingRegionRef> region_refs;
    std::map<std::string, int> seen_once;
    bool have_start = false, have_task = false, have_success = false;

    for (size_t li = 0; li < lines.size(); ++li) {
        const int lineno = static_cast<int>(li) + 1;
        const std::string& raw = lines[li];
        const std::string t = trim(raw);
        if (t.empty() || t.starts_with("//")) continue;
        const size_t colon = raw.find(':');
        const size_t lead = raw.find_first_not_of(" \t");
        std::string key = colon == std::string::npos ? t : trim(std::string_view(raw).substr(lead, colon - lead));
        if (colon == std::string::npos || key.empty() ||
            !std::all_of(key.begin(), key.end(), [](char ch) { return std::isupper(static_cast<unsigned char>(ch)) || ch == '_'; })) {
            throw ScenarioError(Kind::SyntaxError, lineno, static_cast<int>(lead) + 1, "expected a 'SECTION:' line");
        }
        Cursor c(std::string_view(raw).substr(colon + 1), lineno, static_cast<int>(colon) + 2);
        auto once = [&](const std::string& k) {
            if (seen_once.count(k)) {
                throw ScenarioError(Kind::SyntaxError, lineno, static_cast<int>(lead) + 1,
                                    "duplicate " + k + " section (first on line " + std::to_string(seen_once[k]) + ")");
            }
            seen_once[k] = lineno;
        };

        if (key == "NAME") {
            once(key);
            spec.name = c.rest();
            if (spec.name.empty()) c.fail(Kind::SyntaxError, "empty NAME");
        } else if (key == "MAP") {
            once(key);
            c.expect_end();
            map_line = lineno + 1;
            size_t j = li + 1;
            for (; j < lines.size() && trim(lines[j]) != "ENDMAP"; ++j) spec.map.push_back(lines[j]);
            if (j >= lines.size()) throw ScenarioError(Kind::SyntaxError, lineno, 1, "MAP without ENDMAP");
            li = j;
            if (spec.map.empty()) throw ScenarioError(Kind::SyntaxError, lineno, 1, "empty MAP");
            const size_t width = spec.map.front().size();
            for (size_t r = 0; r < spec.map.size(); ++r) {
                if (spec.map[r].size() != width) {
                    throw ScenarioError(Kind::RaggedMap, map_line + static_cast<int>(r),
                                        static_cast<int>(std::min(width, spec.map[r].size())) + 1,
                                        "map row has " + std::to_string(spec.map[r].size()) + " columns, expected " +
                                            std::to_string(width));
                }
            }
            if (width > static_cast<size_t>(kMapWidth) || spec.map.size() > static_cast<size_t>(kMapHeight)) {
                throw ScenarioError(Kind::SyntaxError, map_line, 1, "map exceeds 79x21");
            }
        } else if (key == "LEGEND") {
            while (!c.done()) {
                const int at = c.col();
                c.expect('\'');
                const std::string g = c.word();
                if (g.size() < 4 || g[1] != '\'' || g[2] != '=') c.fail(Kind::SyntaxError, "expected 'c'=tile", at);
                const auto kind = tile_from_name(g.substr(3));
                if (!kind || *kind == TileKind::Unknown) c.fail(Kind::SyntaxError, "unknown tile kind '" + g.substr(3) + "'", at);
                if (is_base_glyph(g[0])) c.fail(Kind::SyntaxError, std::string("glyph '") + g[0] + "' is built in", at);
                spec.legend[g[0]] = *kind;
            }
        } else if (key == "REGION") {
            Region r;
            r.name = c.ident();
            r.lo.x = static_cast<int>(c.need_int("x1"));
            r.lo.y = static_cast<int>(c.need_int("y1"));
            r.hi.x = static_cast<int>(c.need_int("x2"));
            r.hi.y = static_cast<int>(c.need_int("y2"));
            c.expect_end();
            if (spec.find_region(r.name)) c.fail(Kind::SyntaxError, "duplicate region '" + r.name + "'");
            spec.regions.push_back(r);
        } else if (key == "OBJECT" || key == "MONSTER") {
            const std::string body = raw.substr(colon + 1);
            auto [name, after] = split_at_keyword(body);
            const int name_col = static_cast<int>(colon) + 2 + static_cast<int>(body.find_first_not_of(' '));
            if (after == std::string::npos || name.empty()) {
                throw ScenarioError(Kind::SyntaxError, lineno, name_col, "expected '<name> AT <placement>'");
            }
            Cursor pc(std::string_view(body).substr(after), lineno, static_cast<int>(colon + 2 + after));
            Placement where = parse_placement(pc, region_refs);
            if (key == "OBJECT") {
                if (!make_item(name)) throw ScenarioError(Kind::SyntaxError, lineno, name_col, "unknown item '" + name + "'");
                ObjectPlacement o{lowercase(name), where, false};
                if (!pc.done()) {
                    const int at = pc.col();
                    if (pc.word() != "UNIDENTIFIED") pc.fail(Kind::SyntaxError, "expected UNIDENTIFIED", at);
                    o.unidentified = true;
                }
                pc.expect_end();
                spec.objects.push_back(o);
            } else {
                if (!monster_stats(lowercase(name))) {
                    throw ScenarioError(Kind::SyntaxError, lineno, name_col, "unknown monster '" + name + "'");
                }
                MonsterPlacement m{lowercase(name), where, Attitude::Hostile};
                if (!pc.done()) {
                    const int at = pc.col();
                    const std::string a = lowercase(pc.word());
                    if (a == "hostile") m.attitude = Attitude::Hostile;
                    else if (a == "peaceful") m.attitude = Attitude::Peaceful;
                    else if (a == "pet") m.attitude = Attitude::Pet;
                    else pc.fail(Kind::SyntaxError, "expected hostile, peaceful or pet", at);
                }
                pc.expect_end();
                spec.monsters.push_back(m);
            }
        } else if (key == "INVENTORY") {
            std::string body = trim(raw.substr(colon + 1));
            InventoryEntry e;
            for (bool stripped = true; stripped;) {
                stripped = false;
                for (const char* flag : {" WIELDED", " WORN", " UNIDENTIFIED"}) {
                    if (body.ends_with(flag)) {
                        body = trim(body.substr(0, body.size() - std::string_view(flag).size()));
                        if (flag[1] == 'W' && flag[2] == 'I') e.wielded = true;
                        else if (flag[1] == 'W') e.worn = true;
                        else e.unidentified = true;
                        stripped = true;
                    }
                }
            }
            if (!make_item(body)) {
                throw ScenarioError(Kind::SyntaxError, lineno, static_cast<int>(colon) + 2, "unknown item '" + body + "'");
            }
            e.name = lowercase(body);
            spec.inventory.push_back(e);
        } else if (key == "START") {
            once(key);
            spec.start = parse_placement(c, region_refs);
            c.expect_end();
            have_start = true;
        } else if (key == "ENGRAVING") {
            Engraving e;
            e.pos.x = static_cast<int>(c.need_int("x"));
            e.pos.y = static_cast<int>(c.need_int("y"));
            e.text = c.string_lit();
            c.expect_end();
            spec.engravings.push_back(e);
        } else if (key == "BRITTLE") {
            Pos p;
            p.x = static_cast<int>(c.need_int("x"));
            p.y = static_cast<int>(c.need_int("y"));
            c.expect_end();
            spec.brittle_walls.push_back(p);
        } else if (key == "TASK") {
            once(key);
            spec.task = c.string_lit();
            c.expect_end();
            have_task = true;
        } else if (key == "GUIDE") {
            once(key);
            spec.guide = c.string_lit();
            c.expect_end();
        } else if (key == "SUCCESS") {
            once(key);
            spec.success = parse_expr(c);
            c.expect_end();
            have_success = true;
        } else if (key == "LIMITS") {
            once(key);
            while (!c.done()) {
                const int at = c.col();
                const std::string name = c.ident();
                c.expect('=');
                const long long v = c.need_int("a number");
                if (v <= 0) c.fail(Kind::SyntaxError, name + " must be positive", at);
                if (name == "time") spec.time_limit = static_cast<int>(v);
                else if (name == "llm_calls") spec.llm_call_limit = static_cast<int>(v);
                else c.fail(Kind::SyntaxError, "unknown limit '" + name + "'", at);
            }
        } else {
            throw ScenarioError(Kind::SyntaxError, lineno, static_cast<int>(lead) + 1, "unknown section '" + key + "'");
        }
    }

    const int end_line = static_cast<int>(lines.size()) + 1;
    if (!map_line) throw ScenarioError(Kind::SyntaxError, end_line, 1, "missing MAP section");
    if (!have_start) throw ScenarioError(Kind::SyntaxError, end_line, 1, "missing START section");
    if (!have_task) throw ScenarioError(Kind::SyntaxError, end_line, 1, "missing TASK section");
    if (!have_success) throw ScenarioError(Kind::SyntaxError, end_line, 1, "missing SUCCESS section");
    for (size_t r = 0; r < spec.map.size(); ++r) {
        for (size_t x = 0; x < spec.map[r].size(); ++x) {
            const char g = spec.map[r][x];
            if (!is_base_glyph(g) && !spec.legend.count(g)) {
                throw ScenarioError(Kind::UnknownGlyph, map_line + static_cast<int>(r), static_cast<int>(x) + 1,
                                    std::string("glyph '") + g + "' is not in the legend");
            }
        }
    }
    for (const auto& ref : region_refs) {
        if (!spec.find_region(ref.region)) {
            throw ScenarioError(Kind::SyntaxError, ref.line, ref.col, "unknown region '" + ref.region + "'");
        }
    }
    return spec;
}

std::string print_scenario(const ScenarioSpec& spec) {
    std::ostringstream out;
    out << "NAME: " << spec.name << "\n";
    out << "MAP:\n";
    for (const auto& row : spec.map) out << row << "\n";
    out << "ENDMAP\n";
    if (!spec.legend.empty()) {
        out << "LEGEND:";
        for (const auto& [g, k] : spec.legend) out << " '" << g << "'=" << legend_name(k);
        out << "\n";
    }
    for (const auto& r : spec.regions) {
        out << "REGION: " << r.name << " " << r.lo.x << " " << r.lo.y << " " << r.hi.x << " " << r.hi.y << "\n";
    }
    for (const auto& o : spec.objects) {
        out << "OBJECT: " << o.name << " AT " << print_placement(o.where) << (o.unidentified ? " UNIDENTIFIED" : "") << "\n";
    }
    for (const auto& m : spec.monsters) {
        const char* att = m.attitude == Attitude::Hostile ? "hostile" : m.attitude == Attitude::Peaceful ? "peaceful" : "pet";
        out << "MONSTER: " << m.kind << " AT " << print_placement(m.where) << " " << att << "\n";
    }
    for (const auto& e : spec.inventory) {
        out << "INVENTORY: " << e.name << (e.wielded ? " WIELDED" : "") << (e.worn ? " WORN" : "")
            << (e.unidentified ? " UNIDENTIFIED" : "") << "\n";
    }
    for (const auto& e : spec.engravings) out << "ENGRAVING: " << e.pos.x << " " << e.pos.y << " " << quote(e.text) << "\n";
    for (const auto& b : spec.brittle_walls) out << "BRITTLE: " << b.x << " " << b.y << "\n";
    out << "START: " << print_placement(spec.start) << "\n";
    out << "TASK: " << quote(spec.task) << "\n";
    if (spec.guide) out << "GUIDE: " << quote(*spec.guide) << "\n";
    out << "SUCCESS: " << print_success_expr(spec.success) << "\n";
    out << "LIMITS: time=" << spec.time_limit << " llm_calls=" << spec.llm_call_limit << "\n";
    return out.str();
}

// ---------------------------------------------------------------- evaluation

namespace {

const std::string& str_arg(const SuccessExpr& e, size_t i) { return std::get<std::string>(e.args[i]); }
int int_arg(const SuccessExpr& e, size_t i) { return static_cast<int>(std::get<long long>(e.args[i])); }

bool item_matches(const Item& it, const std::string& needle) {
    return icontains(it.name, needle) || icontains(it.display_name(), needle);
}

bool history_matches(const SuccessExpr& e, const HistoryEntry& h) {
    const std::string& needle = str_arg(e, 0);
    if (e.atom == "picked_up") return h.verb == "pickup" && icontains(h.subject, needle);
    if (e.atom == "drank") return h.verb == "drink" && icontains(h.subject, needle);
    if (e.atom == "monster_dead") return (h.verb == "kill" || h.verb == "death") && icontains(h.subject, needle);
    if (e.atom == "identified") return h.verb == "identify" && icontains(h.subject, needle);
    if (e.atom == "feature_destroyed") return h.verb == "destroy" && icontains(h.subject, needle);
    return false;
}

const Region* state_region(const GameState& s, const std::string& name) {
    for (const auto& r : s.regions) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

bool eval_atom(const SuccessExpr& e, const GameState& s) {
    const PlayerState& p = s.player;
    const AtomSig* sig = find_atom(e.atom);
    if (sig && sig->history) {
        return std::any_of(s.history.begin(), s.history.end(), [&](const HistoryEntry& h) { return history_matches(e, h); });
    }
    if (e.atom == "has_item") {
        if (icontains("gold", str_arg(e, 0)) && p.gold > 0) return true;
        return std::any_of(p.inventory.begin(), p.inventory.end(), [&](const Item& i) { return item_matches(i, str_arg(e, 0)); });
    }
    if (e.atom == "item_in_container") {
        auto in_bag = [&](const Item& bag) {
            return icontains(bag.name, str_arg(e, 1)) &&
                   std::any_of(bag.contents.begin(), bag.contents.end(), [&](const Item& i) { return item_matches(i, str_arg(e, 0)); });
        };
        if (std::any_of(p.inventory.begin(), p.inventory.end(), in_bag)) return true;
        for (const auto& [pos, pile] : s.level().piles) {
            if (std::any_of(pile.begin(), pile.end(), in_bag)) return true;
        }
        return false;
    }
    if (e.atom == "on_tile") return s.level().at(p.pos) == tile_from_name(str_arg(e, 0));
    if (e.atom == "door_open") return s.level().at({int_arg(e, 0), int_arg(e, 1)}) == TileKind::DoorOpen;
    if (e.atom == "reached_depth") return p.max_depth >= int_arg(e, 0);
    if (e.atom == "boulder_removed") return s.level().at({int_arg(e, 0), int_arg(e, 1)}) != TileKind::Boulder;
    if (e.atom == "escaped_region") {
        const Region* r = state_region(s, str_arg(e, 0));
        return r && !r->contains(p.pos);
    }
    if (e.atom == "in_region") {
        const Region* r = state_region(s, str_arg(e, 0));
        return r && r->contains(p.pos);
    }
    if (e.atom == "items_in_region") {
        const Region* r = state_region(s, str_arg(e, 1));
        if (!r) return false;
        int count = 0;
        for (const auto& [pos, pile] : s.level().piles) {
            if (!r->contains(pos)) continue;
            for (const auto& it : pile) count += item_matches(it, str_arg(e, 0)) ? 1 : 0;
        }
        return count >= int_arg(e, 2);
    }
    return false;
}

}  // namespace

bool evaluate_success(const SuccessExpr& e, const GameState& s) {
    switch (e.op) {
        case SuccessExpr::Op::True: return true;
        case SuccessExpr::Op::False: return false;
        case SuccessExpr::Op::Atom: return eval_atom(e, s);
        case SuccessExpr::Op::All:
            return std::all_of(e.children.begin(), e.children.end(), [&](const SuccessExpr& c) { return evaluate_success(c, s); });
        case SuccessExpr::Op::Any:
            return std::any_of(e.children.begin(), e.children.end(), [&](const SuccessExpr& c) { return evaluate_success(c, s); });
        case SuccessExpr::Op::Not: return !evaluate_success(e.children.front(), s);
        case SuccessExpr::Op::Then: {
            // Greedy subsequence match over the history: earliest match for each step is optimal.
            size_t next = 0;
            for (const auto& h : s.history) {
                if (next < e.children.size() && history_matches(e.children[next], h)) ++next;
            }
            return next == e.children.size();
        }
    }
    return false;
}

}  // namespace netplay
