#include "netplay/skills.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace netplay {

std::string_view skill_kind_name(SkillKind k) {
    switch (k) {
        case SkillKind::Special: return "special";
        case SkillKind::Basic: return "basic";
        case SkillKind::Position: return "position";
        case SkillKind::Inventory: return "inventory";
        case SkillKind::Direction: return "direction";
    }
    return "?";
}

std::string_view param_type_name(ParamType t) {
    switch (t) {
        case ParamType::Int: return "int";
        case ParamType::String: return "str";
        case ParamType::Bool: return "bool";
    }
    return "?";
}

std::string SkillSpec::render() const {
    std::ostringstream out;
    out << name << "(";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out << ", ";
        const auto& p = params[i];
        if (p.optional) out << "[";
        out << p.name << ": " << param_type_name(p.type);
        if (p.optional) out << "]";
    }
    out << ") - " << description;
    return out.str();
}

namespace {

using PT = ParamType;
const ParamSpec kX{"x", PT::Int, false};
const ParamSpec kY{"y", PT::Int, false};
const ParamSpec kOptX{"x", PT::Int, true};
const ParamSpec kOptY{"y", PT::Int, true};
const ParamSpec kLetter{"letter", PT::String, false};
const ParamSpec kOptLetter{"letter", PT::String, true};

std::vector<SkillSpec> build_registry() {
    using K = SkillKind;
    return {
        {"explore_level", K::Special, {},
         "Walk to unexplored parts of the level, open closed doors and search dead ends for hidden passages."},
        {"set_avoid_monster_flag", K::Special, {{"value", PT::Bool, false}},
         "When true, movement prefers routes that keep away from hostile monsters."},
        {"press_key", K::Special, {{"key", PT::String, false}},
         "Press one key in an open menu or prompt: a letter, ESC, SPACE or ENTER."},
        {"type_text", K::Special, {{"text", PT::String, false}}, "Type text into an open text prompt."},
        {"finish_task", K::Special, {}, "Declare the current task done and stop."},
        {"move_to", K::Special, {kX, kY}, "Walk to the given map position, attacking hostile monsters in the way."},
        {"go_to", K::Special, {{"structure_id", PT::Int, false}},
         "Walk to the closest tile of a room or corridor, given the number in its name (room_3 -> 3)."},
        {"pickup", K::Position, {kOptX, kOptY}, "Pick up items here, or at (x, y) after walking there."},
        {"up", K::Position, {kOptX, kOptY}, "Climb the up staircase here, or at (x, y) after walking there."},
        {"down", K::Position, {kOptX, kOptY}, "Descend the down staircase here, or at (x, y) after walking there."},
        {"drop", K::Inventory, {kLetter}, "Drop the inventory item with this letter."},
        {"wield", K::Inventory, {kLetter}, "Wield the inventory item with this letter as a weapon."},
        {"eat", K::Inventory, {kOptLetter}, "Eat the inventory item with this letter, or a corpse on the floor without one."},
        {"quaff", K::Inventory, {kOptLetter}, "Drink the potion with this letter, or from a fountain here without one."},
        {"zap", K::Inventory, {kLetter}, "Zap the wand with this letter. The game then asks for a direction."},
        {"put_in", K::Inventory, {kLetter}, "Put the inventory item with this letter into your bag."},
        {"read", K::Inventory, {kLetter}, "Read the scroll with this letter."},
        {"put_on", K::Inventory, {kLetter}, "Put on the ring with this letter."},
        {"kick", K::Direction, {kX, kY}, "Walk next to (x, y) and kick toward it."},
        {"apply", K::Direction, {kLetter, kOptX, kOptY},
         "Use the tool with this letter, toward (x, y) when given (after walking next to it)."},
        {"cast", K::Basic, {}, "Cast a spell."},
        {"pay", K::Basic, {}, "Pay a shopkeeper."},
        {"pray", K::Basic, {}, "Pray to your god. Helps when in trouble, but not too often."},
        {"search", K::Basic, {}, "Search the adjacent tiles once for hidden passages."},
        {"open", K::Basic, {}, "Open a door. The game then asks for a direction."},
        {"close", K::Basic, {}, "Close a door. The game then asks for a direction."},
        {"engrave", K::Basic, {{"text", PT::String, false}}, "Write text in the dust here."},
        {"read_floor", K::Basic, {}, "Read what is engraved on the floor here."},
        {"wait", K::Basic, {}, "Do nothing for one turn."},
    };
}

bool known_walkable(const Tracker& t, Pos p) {
    const TileKind k = t.level().at(p);
    return k != TileKind::Unknown && is_passable(k);
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace

const std::vector<SkillSpec>& skill_registry() {
    static const std::vector<SkillSpec> registry = build_registry();
    return registry;
}

const SkillSpec* find_skill(std::string_view name) {
    for (const auto& s : skill_registry()) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

std::string format_call(const SkillCall& call) {
    std::ostringstream out;
    out << call.skill << "(";
    bool first = true;
    auto emit = [&](const std::string& name, const ParamValue& v) {
        if (!first) out << ", ";
        first = false;
        out << name << "=";
        if (const auto* i = std::get_if<int64_t>(&v)) out << *i;
        else if (const auto* b = std::get_if<bool>(&v)) out << (*b ? "true" : "false");
        else out << quote(std::get<std::string>(v));
    };
    std::set<std::string> done;
    if (const SkillSpec* spec = find_skill(call.skill)) {
        for (const auto& p : spec->params) {
            if (auto it = call.params.find(p.name); it != call.params.end()) {
                emit(p.name, it->second);
                done.insert(p.name);
            }
        }
    }
    for (const auto& [name, v] : call.params) {
        if (!done.count(name)) emit(name, v);
    }
    out << ")";
    return out.str();
}

std::optional<std::string> validate_call(const SkillCall& call) {
    const SkillSpec* spec = find_skill(call.skill);
    if (!spec) return "unknown skill '" + call.skill + "'";
    for (const auto& [name, value] : call.params) {
        auto it = std::find_if(spec->params.begin(), spec->params.end(), [&](const ParamSpec& p) { return p.name == name; });
        if (it == spec->params.end()) return "unknown parameter '" + name + "' for skill '" + call.skill + "'";
        const bool ok = (it->type == ParamType::Int && std::holds_alternative<int64_t>(value)) ||
                        (it->type == ParamType::Bool && std::holds_alternative<bool>(value)) ||
                        (it->type == ParamType::String && std::holds_alternative<std::string>(value));
        if (!ok) {
            return "parameter '" + name + "' of skill '" + call.skill + "' must be of type " +
                   std::string(param_type_name(it->type));
        }
        if (name == "letter") {
            const auto& s = std::get<std::string>(value);
            if (s.size() != 1 || !std::isalpha(static_cast<unsigned char>(s[0]))) {
                return "parameter 'letter' must be a single inventory letter";
            }
        }
    }
    for (const auto& p : spec->params) {
        if (!p.optional && !call.params.count(p.name)) {
            return "missing parameter '" + p.name + "' for skill '" + call.skill + "'";
        }
    }
    if (call.params.count("x") != call.params.count("y")) return "parameters 'x' and 'y' must be given together";
    return std::nullopt;
}

std::string_view outcome_kind_name(SkillOutcome::Kind k) {
    switch (k) {
        case SkillOutcome::Kind::Completed: return "completed";
        case SkillOutcome::Kind::Failed: return "failed";
        case SkillOutcome::Kind::Interrupted: return "interrupted";
        case SkillOutcome::Kind::TaskFinished: return "task_finished";
    }
    return "?";
}

std::string SkillOutcome::summary() const {
    switch (kind) {
        case Kind::Completed: {
            std::string s = "Skill completed.";
            for (const auto& f : feedback) s += " " + f;
            return s;
        }
        case Kind::Failed: return "Skill failed: " + reason;
        case Kind::Interrupted: {
            std::string s = "Skill interrupted";
            if (!interrupts.empty()) {
                s += " by:";
                for (const auto& e : interrupts) s += " " + e.describe();
            } else {
                s += ".";
            }
            for (const auto& f : feedback) s += " " + f;
            return s;
        }
        case Kind::TaskFinished: return "Task finished.";
    }
    return "";
}

const std::set<Event::Kind>& default_interrupt_set() {
    static const std::set<Event::Kind> set = {
        Event::Kind::LevelChanged, Event::Kind::Teleported, Event::Kind::NewStructure, Event::Kind::NewMonster,
        Event::Kind::NewItem,      Event::Kind::NewFeature, Event::Kind::LowHealth,    Event::Kind::GameEnded,
    };
    return set;
}

std::optional<std::vector<Pos>> plan_path(const Tracker& tracker, Pos from, Pos to, const std::set<Pos>& avoid) {
    if (!in_bounds(to) || !known_walkable(tracker, to)) return std::nullopt;
    if (from == to) return std::vector<Pos>{};
    std::vector<int> parent(static_cast<size_t>(kMapWidth * kMapHeight), -2);
    std::deque<Pos> q{from};
    parent[static_cast<size_t>(index_of(from))] = -1;
    while (!q.empty()) {
        const Pos p = q.front();
        q.pop_front();
        for (Dir d : kCompass) {
            const Pos n = p + d;
            if (!in_bounds(n) || parent[static_cast<size_t>(index_of(n))] != -2) continue;
            if (!known_walkable(tracker, n)) continue;
            if (n != to && avoid.count(n)) continue;
            parent[static_cast<size_t>(index_of(n))] = index_of(p);
            if (n == to) {
                std::vector<Pos> path;
                for (Pos c = to; c != from;) {
                    path.push_back(c);
                    const int pi = parent[static_cast<size_t>(index_of(c))];
                    c = Pos{pi % kMapWidth, pi / kMapWidth};
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            q.push_back(n);
        }
    }
    return std::nullopt;
}

std::optional<Pos> approach_tile(const Tracker& tracker, Pos from, Pos target) {
    if (chebyshev(from, target) == 1) return from;
    const std::vector<int> dist = tracker.distance_map(from);
    std::optional<Pos> best;
    int best_d = 0;
    for (Dir d : kCompass) {
        const Pos n = target + d;
        if (!in_bounds(n)) continue;
        const int dn = dist[static_cast<size_t>(index_of(n))];
        if (dn < 0) continue;
        if (!best || dn < best_d || (dn == best_d && n < *best)) {
            best = n;
            best_d = dn;
        }
    }
    return best;
}

namespace {

constexpr int kSearchCap = 10;
constexpr int kOpenAttempts = 3;

}  // namespace

std::optional<ExploreTarget> next_explore_target(const Tracker& t, Pos from, const std::map<Pos, int>& open_attempts) {
    const std::vector<int> dist = t.distance_map(from);
    auto better = [&](std::optional<Pos>& best, int& best_d, Pos p, int d) {
        if (d < 0) return;
        if (!best || d < best_d || (d == best_d && p < *best)) {
            best = p;
            best_d = d;
        }
    };
    std::optional<Pos> frontier;
    int frontier_d = 0;
    for (const Pos& p : t.frontier()) {
        const int d = dist[static_cast<size_t>(index_of(p))];
        if (d > 0) better(frontier, frontier_d, p, d);
    }
    if (frontier) return ExploreTarget{ExploreTarget::Kind::Frontier, *frontier};

    std::optional<Pos> door, dead_end;
    int door_d = 0, dead_d = 0;
    for (const Pos& p : t.level().seen) {
        const TileKind k = t.level().at(p);
        if (k == TileKind::DoorClosed) {
            auto it = open_attempts.find(p);
            if (it != open_attempts.end() && it->second >= kOpenAttempts) continue;
            if (auto tile = approach_tile(t, from, p)) better(door, door_d, p, dist[static_cast<size_t>(index_of(*tile))]);
        } else if (t.is_dead_end(p)) {
            auto it = t.level().searched_count.find(p);
            if (it == t.level().searched_count.end() || it->second < kSearchCap) {
                better(dead_end, dead_d, p, dist[static_cast<size_t>(index_of(p))]);
            }
        }
    }
    if (door) return ExploreTarget{ExploreTarget::Kind::Door, *door};
    if (dead_end) return ExploreTarget{ExploreTarget::Kind::DeadEnd, *dead_end};
    return std::nullopt;
}

std::vector<std::string> exploration_blockers(const Tracker& t) {
    std::vector<std::string> out;
    for (const Pos& p : t.level().seen) {
        const TileKind k = t.level().at(p);
        if (k == TileKind::DoorLocked || k == TileKind::Boulder) out.push_back(std::string(tile_name(k)) + " at " + format_pos(p));
    }
    return out;
}

namespace {


class Runner {
public:
    Runner(SkillContext& ctx, bool menu_ok) : ctx_(ctx), menu_ok_(menu_ok), start_turn_(ctx.state.turn) {}

    GameState& st() { return ctx_.state; }
    Pos me() const { return ctx_.state.player.pos; }

    // Issues one action. False means execution must stop and the outcome is final.
    bool act(const Action& a, StepResult* result = nullptr) {
        if (!st().running()) return stop_interrupted({});
        if (ctx_.turn_limit && st().turn >= *ctx_.turn_limit) return stop_failed("time limit reached");
        if (actions_ >= ctx_.max_actions) return stop_failed("gave up after " + std::to_string(actions_) + " actions");
        StepResult r = step(st(), a);
        ++actions_;
        std::vector<Event> evs = ctx_.tracker.update(st(), r.messages);
        TraceStep ts{a, {}, false};
        std::vector<Event> interrupting;
        for (const auto& e : evs) {
            ts.events.push_back(e.kind);
            const bool hit = ctx_.interrupt_set.count(e.kind) || e.kind == Event::Kind::GameEnded ||
                             (e.kind == Event::Kind::MenuOpened && !menu_ok_);
            if (hit) interrupting.push_back(e);
        }
        out_.events.insert(out_.events.end(), evs.begin(), evs.end());
        ts.interrupted = !interrupting.empty();
        out_.trace.push_back(ts);
        if (ctx_.on_step) ctx_.on_step(ts);
        if (!interrupting.empty()) return stop_interrupted(std::move(interrupting));
        if (r.invalid) {
            std::string why;
            for (const auto& m : r.messages) why += (why.empty() ? "" : " ") + m;
            return stop_failed(why.empty() ? "the action had no effect" : why);
        }
        if (ctx_.stop_requested && ctx_.stop_requested()) {
            out_.feedback.push_back("Stopped early.");
            return stop_interrupted({});
        }
        if (result) *result = std::move(r);
        return true;
    }

    bool stop_failed(std::string reason) {
        out_.kind = SkillOutcome::Kind::Failed;
        out_.reason = std::move(reason);
        return false;
    }
    bool stop_interrupted(std::vector<Event> evs) {
        out_.kind = SkillOutcome::Kind::Interrupted;
        out_.interrupts = std::move(evs);
        return false;
    }
    void note(std::string s) { out_.feedback.push_back(std::move(s)); }

    // Hostiles that drop out of view keep their last seen position until the skill ends,
    // otherwise stepping behind a wall flips the route back through them.
    std::set<Pos> hostile_zone() {
        for (const auto& [id, m] : ctx_.tracker.known_monsters()) {
            if (m.attitude == Attitude::Hostile) {
                hostiles_[id] = m.pos;
            } else {
                hostiles_.erase(id);
            }
        }
        const std::set<Pos> view = visible_tiles(ctx_.state);
        std::set<Pos> zone;
        for (const auto& [id, pos] : hostiles_) {
            if (view.count(pos) && !ctx_.tracker.known_monsters().count(id)) continue;  // seen to be gone
            zone.insert(pos);
            for (Dir d : kCompass) zone.insert(pos + d);
        }
        zone.erase(me());
        return zone;
    }

    std::optional<std::vector<Pos>> route(Pos target) {
        if (ctx_.avoid_monsters) {
            if (auto p = plan_path(ctx_.tracker, me(), target, hostile_zone())) return p;
            auto p = plan_path(ctx_.tracker, me(), target);
            if (p && !warned_) {
                note("Could not avoid monsters on the way.");
                warned_ = true;
            }
            return p;
        }
        return plan_path(ctx_.tracker, me(), target);
    }

    bool step_toward(Pos target) {
        auto path = route(target);
        if (!path || path->empty()) return stop_failed("path blocked: no known route to " + format_pos(target));
        return act(Action::move(compass_heading(me(), path->front())));
    }

    bool walk_to(Pos target) {
        while (me() != target) {
            if (!step_toward(target)) return false;
        }
        return true;
    }

    bool approach(Pos target) {
        auto tile = approach_tile(ctx_.tracker, me(), target);
        if (!tile) return stop_failed("not adjacent to " + format_pos(target) + " and cannot approach it");
        return walk_to(*tile);
    }

    SkillOutcome finish() {
        out_.turns = st().turn - start_turn_;
        return std::move(out_);
    }

    SkillOutcome& out() { return out_; }
    SkillContext& ctx() { return ctx_; }

private:
    SkillContext& ctx_;
    bool menu_ok_;
    int start_turn_;
    int actions_ = 0;
    bool warned_ = false;
    std::map<int, Pos> hostiles_;
    SkillOutcome out_;
};

int64_t int_param(const SkillCall& c, const std::string& name) { return std::get<int64_t>(c.params.at(name)); }
std::string str_param(const SkillCall& c, const std::string& name) { return std::get<std::string>(c.params.at(name)); }
std::optional<Pos> pos_param(const SkillCall& c) {
    if (!c.params.count("x")) return std::nullopt;
    return Pos{static_cast<int>(int_param(c, "x")), static_cast<int>(int_param(c, "y"))};
}
char letter_param(const SkillCall& c) {
    auto it = c.params.find("letter");
    return it == c.params.end() ? 0 : std::get<std::string>(it->second)[0];
}

template <class Skip>
std::optional<Pos> nearest(const std::vector<int>& dist, const std::vector<Pos>& candidates, Skip skip) {
    std::optional<Pos> best;
    int best_d = 0;
    for (const Pos& p : candidates) {
        const int d = dist[static_cast<size_t>(index_of(p))];
        if (d < 0 || skip(p, d)) continue;
        if (!best || d < best_d || (d == best_d && p < *best)) {
            best = p;
            best_d = d;
        }
    }
    return best;
}

void explore(Runner& r) {
    Tracker& t = r.ctx().tracker;
    std::map<Pos, int> open_attempts;
    while (true) {
        const auto target = next_explore_target(t, r.me(), open_attempts);
        if (!target) break;
        if (target->kind == ExploreTarget::Kind::Frontier) {
            if (!r.step_toward(target->pos)) return;
        } else if (target->kind == ExploreTarget::Kind::Door) {
            ++open_attempts[target->pos];
            if (!r.approach(target->pos)) return;
            Action open = Action::simple(Action::Type::Open);
            open.dir = compass_heading(r.me(), target->pos);
            if (!r.act(open)) {
                // A door that will not open is not fatal to exploration.
                if (r.out().kind != SkillOutcome::Kind::Failed) return;
                r.out().kind = SkillOutcome::Kind::Completed;
                r.out().reason.clear();
            }
        } else {
            if (!r.walk_to(target->pos)) return;
            if (!r.act(Action::simple(Action::Type::Search))) return;
            t.record_search(r.me());
        }
    }
    r.note("Level fully explored.");
    const auto blockers = exploration_blockers(t);
    if (!blockers.empty()) {
        std::string s = "Exploration is blocked by:";
        for (size_t i = 0; i < blockers.size(); ++i) s += (i ? "; " : " ") + blockers[i];
        r.note(s + ".");
    }
}

// Loot menu walk: apply bag, choose put-in, mark the letter, confirm.
void put_in(Runner& r, char letter) {
    PlayerState& pl = r.st().player;
    char bag = 0;
    for (const auto& it : pl.inventory) {
        if (it.kind == ItemKind::BagOfHolding && !bag) bag = it.letter;
    }
    if (!bag) {
        r.stop_failed("you have no bag to put things into");
        return;
    }
    if (letter == bag) {
        r.stop_failed("cannot put the bag into itself");
        return;
    }
    if (!r.act(Action::apply(bag))) return;
    if (!r.act(Action::key("i")) || !r.act(Action::key("ENTER"))) return;
    const auto& menu = r.st().open_menu;
    if (!menu || menu->purpose != MenuPurpose::PutIn) {
        r.stop_failed("the bag did not offer to put anything in");
        return;
    }
    const bool listed = std::any_of(menu->entries.begin(), menu->entries.end(), [&](const MenuEntry& e) { return e.letter == letter; });
    if (!listed) {
        r.act(Action::key("ESC"));
        if (r.out().kind == SkillOutcome::Kind::Completed) r.stop_failed(std::string("no such item letter: ") + letter);
        return;
    }
    if (!r.act(Action::key(std::string(1, letter))) || !r.act(Action::key("ENTER"))) return;
    r.note(std::string("Put item ") + letter + " into the bag.");
}

}  // namespace

SkillOutcome execute_skill(const SkillCall& call, SkillContext& ctx) {
    if (auto err = validate_call(call)) {
        SkillOutcome o;
        o.kind = SkillOutcome::Kind::Failed;
        o.reason = *err;
        return o;
    }
    const std::string& name = call.skill;
    const bool menu_skill = name == "press_key" || name == "type_text" || name == "finish_task";
    if (ctx.state.open_menu && !menu_skill) {
        SkillOutcome o;
        o.kind = SkillOutcome::Kind::Failed;
        o.reason = "menu open";
        return o;
    }
    if (name == "finish_task") {
        SkillOutcome o;
        o.kind = SkillOutcome::Kind::TaskFinished;
        return o;
    }
    if (name == "set_avoid_monster_flag") {
        ctx.avoid_monsters = std::get<bool>(call.params.at("value"));
        SkillOutcome o;
        o.feedback.push_back(std::string("Avoid-monster flag set to ") + (ctx.avoid_monsters ? "true." : "false."));
        return o;
    }

    Runner r(ctx, menu_skill || name == "put_in");
    const SkillSpec* spec = find_skill(name);
    const char letter = letter_param(call);
    if (letter && spec->kind == SkillKind::Inventory && !ctx.state.player.item(letter)) {
        r.stop_failed(std::string("no such item letter '") + letter + "'");
        return r.finish();
    }
    if (letter && name == "apply" && !ctx.state.player.item(letter)) {
        r.stop_failed(std::string("no such item letter '") + letter + "'");
        return r.finish();
    }
    const std::optional<Pos> at = pos_param(call);
    if (at && !in_bounds(*at)) {
        r.stop_failed(format_pos(*at) + " is outside the map");
        return r.finish();
    }

    using T = Action::Type;
    if (name == "explore_level") {
        explore(r);
    } else if (name == "press_key") {
        if (r.act(Action::key(str_param(call, "key")))) r.note("Pressed " + str_param(call, "key") + ".");
    } else if (name == "type_text") {
        r.act(Action::type_text(str_param(call, "text")));
    } else if (name == "move_to") {
        const Pos target{static_cast<int>(int_param(call, "x")), static_cast<int>(int_param(call, "y"))};
        if (!known_walkable(ctx.tracker, target)) {
            r.stop_failed(format_pos(target) + " is not a known walkable tile");
        } else if (r.walk_to(target)) {
            r.note("Reached " + format_pos(target) + ".");
        }
    } else if (name == "go_to") {
        const Structure* s = ctx.tracker.structure_by_id(static_cast<int>(int_param(call, "structure_id")));
        if (!s) {
            r.stop_failed("no structure with id " + std::to_string(int_param(call, "structure_id")));
        } else if (s->tiles.count(r.me())) {
            r.note("Already in " + s->label() + ".");
        } else {
            const std::vector<int> dist = ctx.tracker.distance_map(r.me());
            std::vector<Pos> tiles(s->tiles.begin(), s->tiles.end());
            auto target = nearest(dist, tiles, [](Pos, int) { return false; });
            const std::string label = s->label();
            if (!target) {
                r.stop_failed("path blocked: no known route to " + label);
            } else if (r.walk_to(*target)) {
                r.note("Arrived in " + label + ".");
            }
        }
    } else if (spec->kind == SkillKind::Position) {
        if (!at || r.walk_to(*at)) {
            const T type = name == "pickup" ? T::Pickup : name == "up" ? T::GoUp : T::GoDown;
            r.act(Action::simple(type));
        }
    } else if (name == "put_in") {
        put_in(r, letter);
    } else if (spec->kind == SkillKind::Inventory) {
        const T type = name == "drop"    ? T::Drop
                       : name == "wield" ? T::Wield
                       : name == "eat"   ? T::Eat
                       : name == "quaff" ? T::Quaff
                       : name == "zap"   ? T::Zap
                       : name == "read"  ? T::Read
                                         : T::PutOn;
        r.act(Action::with_letter(type, letter));
    } else if (name == "kick") {
        const Pos target = *at;
        if (r.approach(target) && r.act(Action::kick(compass_heading(r.me(), target)))) {
            r.note("Kicked toward " + format_pos(target) + ".");
        }
    } else if (name == "apply") {
        if (!at) {
            r.act(Action::apply(letter));
        } else if (r.approach(*at)) {
            r.act(Action::apply(letter, compass_heading(r.me(), *at)));
        }
    } else if (name == "engrave") {
        Action a = Action::simple(T::Engrave);
        a.text = str_param(call, "text");
        r.act(a);
    } else if (name == "search") {
        if (r.act(Action::simple(T::Search))) ctx.tracker.record_search(r.me());
    } else {
        static const std::map<std::string, T> basic = {
            {"cast", T::Cast}, {"pay", T::Pay},     {"pray", T::Pray},          {"open", T::Open},
            {"close", T::Close}, {"read_floor", T::ReadFloor}, {"wait", T::Wait},
        };
        r.act(Action::simple(basic.at(name)));
    }
    return r.finish();
}

}  // namespace netplay
