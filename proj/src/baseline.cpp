#include "netplay/baseline.hpp"

#include <json.hpp>

namespace netplay {

namespace {

SkillCall make_call(std::string skill, std::map<std::string, ParamValue> params = {}) {
    return SkillCall{"", std::move(skill), std::move(params)};
}

SkillCall at_call(std::string skill, Pos p) {
    return make_call(std::move(skill), {{"x", int64_t{p.x}}, {"y", int64_t{p.y}}});
}

int steps(const std::vector<int>& dist, Pos p) { return in_bounds(p) ? dist[static_cast<size_t>(index_of(p))] : -1; }

const KnownMonster* nearest_hostile(const Tracker& t, const std::vector<int>& dist, int limit) {
    const KnownMonster* best = nullptr;
    int best_d = 0;
    for (const auto& [id, m] : t.known_monsters()) {
        if (m.attitude != Attitude::Hostile) continue;
        const int d = steps(dist, m.pos);
        if (d < 0 || d > limit) continue;
        if (!best || d < best_d) {  // map order already breaks ties by lowest id
            best = &m;
            best_d = d;
        }
    }
    return best;
}

const Item* healing_potion(const PlayerState& p) {
    for (const auto& it : p.inventory) {
        if (it.kind == ItemKind::Potion && it.identified &&
            (it.name == "potion of healing" || it.name == "potion of extra healing")) {
            return &it;
        }
    }
    return nullptr;
}

const Item* food(const PlayerState& p) {
    for (const auto& it : p.inventory) {
        if (it.kind == ItemKind::FoodRation) return &it;
    }
    return nullptr;
}

std::optional<KnownItem> wanted_item(const Tracker& t, const std::vector<int>& dist, const std::map<int, int>& tries,
                                     int max_tries) {
    std::optional<KnownItem> best;
    int best_d = 0;
    for (const auto& ki : t.items_on_level()) {
        if (ki.kind != ItemKind::Potion && ki.kind != ItemKind::FoodRation) continue;
        if (auto it = tries.find(ki.id); it != tries.end() && it->second >= max_tries) continue;
        const int d = steps(dist, ki.pos);
        if (d < 0) continue;
        if (!best || d < best_d || (d == best_d && ki.id < best->id)) {
            best = ki;
            best_d = d;
        }
    }
    return best;
}

std::optional<Pos> reachable_stairs_down(const Tracker& t, const std::vector<int>& dist) {
    std::optional<Pos> best;
    for (const auto& [p, k] : t.level().features) {
        if (k == TileKind::StairsDown && steps(dist, p) >= 0 && !best) best = p;
    }
    return best;
}

std::optional<Pos> kickable_door(const Tracker& t, Pos from) {
    const std::vector<int> dist = t.distance_map(from);
    std::optional<Pos> best;
    int best_d = 0;
    for (const Pos& p : t.level().seen) {
        if (t.level().at(p) != TileKind::DoorLocked) continue;
        const auto tile = approach_tile(t, from, p);
        if (!tile) continue;
        const int d = steps(dist, *tile);
        if (d < 0) continue;
        if (!best || d < best_d || (d == best_d && p < *best)) {
            best = p;
            best_d = d;
        }
    }
    return best;
}

bool low_health(const PlayerState& p, double frac) { return p.hp < frac * p.max_hp; }

}  // namespace

std::array<bool, 7> rule_conditions(const Tracker& tracker, const GameState& state, const BaselineConfig& config,
                                    const std::map<int, int>& pickup_tries) {
    const PlayerState& p = state.player;
    const std::vector<int> dist = tracker.distance_map(p.pos);
    std::array<bool, 7> c{};
    c[0] = state.open_menu.has_value();
    c[1] = nearest_hostile(tracker, dist, config.close_monster_steps) != nullptr;
    c[2] = low_health(p, config.heal_below) && (healing_potion(p) || p.prayer_cooldown == 0);
    c[3] = p.hunger() >= Hunger::Hungry && food(p);
    c[4] = wanted_item(tracker, dist, pickup_tries, config.pickup_attempts).has_value();
    c[5] = !next_explore_target(tracker, p.pos) && reachable_stairs_down(tracker, dist).has_value();
    c[6] = true;
    return c;
}

BaselineDecision BaselineAgent::select_skill(const Tracker& tracker, const GameState& state) const {
    const PlayerState& p = state.player;
    const std::vector<int> dist = tracker.distance_map(p.pos);
    if (state.open_menu) return {1, make_call("press_key", {{"key", std::string("ESC")}})};
    if (const KnownMonster* m = nearest_hostile(tracker, dist, config_.close_monster_steps)) {
        return {2, at_call("move_to", m->pos)};
    }
    if (low_health(p, config_.heal_below)) {
        if (const Item* potion = healing_potion(p)) return {3, make_call("quaff", {{"letter", std::string(1, potion->letter)}})};
        if (p.prayer_cooldown == 0) return {3, make_call("pray")};
    }
    if (p.hunger() >= Hunger::Hungry) {
        if (const Item* f = food(p)) return {4, make_call("eat", {{"letter", std::string(1, f->letter)}})};
    }
    if (auto item = wanted_item(tracker, dist, pickup_tries_, config_.pickup_attempts)) {
        BaselineDecision d{5, at_call("pickup", item->pos)};
        d.item_id = item->id;
        return d;
    }
    if (!next_explore_target(tracker, p.pos)) {
        if (auto stairs = reachable_stairs_down(tracker, dist)) {
            return {6, *stairs == p.pos ? make_call("down") : at_call("down", *stairs)};
        }
        if (auto door = kickable_door(tracker, p.pos)) return {7, at_call("kick", *door)};
        return {7, make_call("wait")};
    }
    return {7, make_call("explore_level")};
}

void BaselineAgent::observe(const BaselineDecision& decision, const SkillOutcome&) {
    if (decision.rule == 5 && decision.item_id) ++pickup_tries_[decision.item_id];
}

RunRecord run_baseline(GameState& state, Tracker& tracker, const BaselineConfig& config, const RunHooks& hooks) {
    RunRecord record;
    BaselineAgent agent(config);
    SkillContext ctx{state, tracker};
    ctx.turn_limit = config.turn_limit;
    ctx.on_step = hooks.on_step;
    if (hooks.goal) ctx.stop_requested = [&] { return hooks.goal(state); };
    int idle = 0;
    auto finish = [&](RunOutcome o) {
        record.outcome = o;
        summarize_state(record, state);
        return record;
    };
    while (true) {
        if (!state.running()) return finish(RunOutcome::GameEnded);
        if (hooks.goal && hooks.goal(state)) return finish(RunOutcome::GoalReached);
        if (config.turn_limit && state.turn >= *config.turn_limit) return finish(RunOutcome::TimeLimit);
        if (hooks.cancel && hooks.cancel->load()) {
            record.diagnostic = "cancelled";
            return finish(RunOutcome::BackendUnavailable);
        }
        BaselineDecision d = agent.select_skill(tracker, state);
        if (idle >= config.idle_limit && !state.open_menu) {
            d = {7, make_call("wait")};
            idle = 0;
        }
        const int before = state.turn;
        const SkillOutcome out = execute_skill(d.call, ctx);
        agent.observe(d, out);
        idle = state.turn == before ? idle + 1 : 0;

        CallRecord c;
        c.turn = before;
        c.skill = d.call.skill;
        c.thoughts = "rule " + std::to_string(d.rule);
        nlohmann::json params = nlohmann::json::object();
        for (const auto& [k, v] : d.call.params) std::visit([&](const auto& x) { params[k] = x; }, v);
        c.params_json = params.dump();
        c.outcome = std::string(outcome_kind_name(out.kind));
        for (const auto& e : out.events) c.events.push_back(e.describe());
        record.calls.push_back(std::move(c));
    }
}

}  // namespace netplay
