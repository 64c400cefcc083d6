#include "netplay/agent.hpp"

#include <json.hpp>

#include <sstream>

namespace netplay {

using nlohmann::json;

std::string_view category_role(MessageCategory c) {
    switch (c) {
        case MessageCategory::System: return "system";
        case MessageCategory::Assistant: return "assistant";
        case MessageCategory::Human: return "user";
    }
    return "system";
}

AgentMemory::AgentMemory(int cap, TokenCounter counter) : cap_(cap), counter_(std::move(counter)) {
    if (cap_ < 0) throw std::invalid_argument("memory cap must be non-negative");
}

int AgentMemory::total_tokens() const {
    int sum = 0;
    for (const auto& m : messages_) sum += m.token_cost;
    return sum;
}

void AgentMemory::push(MessageCategory category, std::string text, int turn) {
    int cost = counter_(text);
    if (cost > cap_) {
        // Keep the longest tail that fits behind the marker.
        const std::string marker = "...";
        size_t lo = 0, hi = text.size();
        while (lo < hi) {
            const size_t mid = (lo + hi + 1) / 2;
            if (counter_(marker + text.substr(text.size() - mid)) <= cap_) lo = mid;
            else hi = mid - 1;
        }
        text = counter_(marker) <= cap_ ? marker + text.substr(text.size() - lo) : std::string();
        cost = counter_(text);
    }
    messages_.push_back({category, std::move(text), cost, turn});
    arrivals_.push_back(next_arrival_++);
    int total = total_tokens();
    size_t drop = 0;
    while (total > cap_ && drop < messages_.size()) total -= messages_[drop++].token_cost;
    messages_.erase(messages_.begin(), messages_.begin() + static_cast<std::ptrdiff_t>(drop));
    arrivals_.erase(arrivals_.begin(), arrivals_.begin() + static_cast<std::ptrdiff_t>(drop));
}

std::string task_description(const std::string& task, const AgentConfig& config) {
    std::ostringstream out;
    out << "You are an agent playing " << (config.censor_game_name ? "a roguelike dungeon game" : "NetHack")
        << ". You act by choosing one skill at a time. Skills:\n";
    for (const auto& s : skill_registry()) {
        if (s.name == "finish_task" && !config.finish_task_enabled) continue;
        out << s.render() << "\n";
    }
    out << "\nWhile a menu or prompt is open, only press_key, type_text"
        << (config.finish_task_enabled ? " and finish_task" : "") << " can be used.\n";
    out << "\nTask: " << task << "\n";
    if (!config.guide.empty()) out << "\nAdvice: " << config.guide << "\n";
    out << "\nThink step by step before choosing a skill. Answer with a single JSON object and nothing else:\n"
        << R"({"thoughts": "<your reasoning>", "skill": "<skill name>", "params": {"<name>": <value>}})";
    return out.str();
}

std::vector<ChatMessage> build_prompt(const AgentMemory& memory, const std::string& observation,
                                      const std::string& task_text) {
    std::vector<ChatMessage> out;
    for (const auto& m : memory.messages()) out.push_back({std::string(category_role(m.category)), m.text});
    out.push_back({"system", "Current observation:\n" + observation});
    out.push_back({"user", task_text});
    return out;
}

std::variant<SkillCall, ParseError> parse_response(std::string_view text, bool finish_task_enabled) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception&) {
        return ParseError{"malformed structured output"};
    }
    if (!j.is_object()) return ParseError{"the response must be a JSON object"};
    SkillCall call;
    if (j.contains("thoughts")) {
        if (!j["thoughts"].is_string()) return ParseError{"'thoughts' must be a string"};
        call.thoughts = j["thoughts"].get<std::string>();
    }
    if (!j.contains("skill") || !j["skill"].is_string()) return ParseError{"missing string field 'skill'"};
    call.skill = j["skill"].get<std::string>();
    if (!find_skill(call.skill) || (call.skill == "finish_task" && !finish_task_enabled)) {
        return ParseError{"unknown skill '" + call.skill + "'"};
    }
    if (j.contains("params") && !j["params"].is_null()) {
        if (!j["params"].is_object()) return ParseError{"'params' must be an object"};
        for (const auto& [name, v] : j["params"].items()) {
            if (v.is_boolean()) call.params[name] = v.get<bool>();
            else if (v.is_number_integer()) call.params[name] = v.get<int64_t>();
            else if (v.is_string()) call.params[name] = v.get<std::string>();
            else return ParseError{"parameter '" + name + "' has an unsupported type"};
        }
    }
    if (auto err = validate_call(call)) return ParseError{*err};
    return call;
}

std::string_view run_outcome_name(RunOutcome o) {
    switch (o) {
        case RunOutcome::TaskFinished: return "task_finished";
        case RunOutcome::GameEnded: return "game_ended";
        case RunOutcome::TimeLimit: return "time_limit";
        case RunOutcome::CallLimit: return "call_limit";
        case RunOutcome::Timeout: return "timeout";
        case RunOutcome::GoalReached: return "goal_reached";
        case RunOutcome::BackendUnavailable: return "backend_unavailable";
    }
    return "?";
}

namespace {

json params_to_json(const SkillCall& call) {
    json p = json::object();
    for (const auto& [k, v] : call.params) {
        std::visit([&](const auto& x) { p[k] = x; }, v);
    }
    return p;
}

}  // namespace

std::string RunRecord::to_jsonl() const {
    std::string out;
    for (const auto& c : calls) {
        json j;
        j["turn"] = c.turn;
        j["prompt_digest"] = c.prompt_digest;
        j["response"] = c.response;
        j["thoughts"] = c.thoughts;
        j["skill"] = c.skill;
        j["params"] = c.params_json.empty() ? json::object() : json::parse(c.params_json);
        j["outcome"] = c.outcome;
        j["events"] = c.events;
        j["messages"] = c.messages;
        out += j.dump() + "\n";
    }
    json s;
    s["summary"] = true;
    s["outcome"] = run_outcome_name(outcome);
    s["score"] = score;
    s["depth"] = depth;
    s["max_depth"] = max_depth;
    s["xp_level"] = xp_level;
    s["turns"] = turns;
    s["llm_calls"] = llm_calls;
    if (death_cause) s["death_cause"] = *death_cause;
    if (!diagnostic.empty()) s["diagnostic"] = diagnostic;
    out += s.dump() + "\n";
    return out;
}

void summarize_state(RunRecord& record, const GameState& state) {
    record.score = compute_score(state);
    record.depth = state.player.depth;
    record.max_depth = state.player.max_depth;
    record.xp_level = state.player.xp_level;
    record.turns = state.turn;
    if (state.done.status == RunStatus::Dead) record.death_cause = state.done.cause;
}

RunRecord run_task(GameState& state, Tracker& tracker, Backend& backend, const std::string& task,
                   const AgentConfig& config, const RunHooks& hooks) {
    RunRecord record;
    AgentMemory memory(config.memory_cap, config.token_counter);
    const std::string task_text = task_description(task, config);
    const CompletionOptions options{config.temperature, true, config.max_tokens};
    DescribeOptions describe;
    describe.close_monster_steps = config.close_monster_steps;

    SkillContext ctx{state, tracker};
    ctx.interrupt_set = config.interrupt_set;
    ctx.turn_limit = config.turn_limit;
    ctx.on_step = hooks.on_step;
    if (hooks.goal) ctx.stop_requested = [&] { return hooks.goal(state); };

    int stall = 0;
    auto finish = [&](RunOutcome o) {
        record.outcome = o;
        summarize_state(record, state);
        return record;
    };
    while (true) {
        if (!state.running()) return finish(RunOutcome::GameEnded);
        if (hooks.goal && hooks.goal(state)) return finish(RunOutcome::GoalReached);
        if (config.turn_limit && state.turn >= *config.turn_limit) return finish(RunOutcome::TimeLimit);
        if (config.llm_call_limit && record.llm_calls >= *config.llm_call_limit) return finish(RunOutcome::CallLimit);
        if (hooks.cancel && hooks.cancel->load()) {
            record.diagnostic = "cancelled";
            return finish(RunOutcome::BackendUnavailable);
        }

        const Observation obs = describe_observation(tracker, state, describe);
        const std::vector<ChatMessage> prompt = build_prompt(memory, obs.rendered, task_text);
        CallRecord call;
        call.turn = state.turn;
        call.prompt_digest = request_digest(prompt);
        try {
            call.response = backend.complete(prompt, options);
        } catch (const BackendError& e) {
            record.diagnostic = e.what();
            return finish(RunOutcome::BackendUnavailable);
        }
        ++record.llm_calls;
        const int turn_before = state.turn;

        auto remember = [&](MessageCategory cat, std::string text) {
            call.messages.push_back(text);
            memory.push(cat, std::move(text), state.turn);
        };
        auto parsed = parse_response(call.response, config.finish_task_enabled);
        bool finished = false;
        if (auto* err = std::get_if<ParseError>(&parsed)) {
            call.outcome = "parse_error";
            remember(MessageCategory::System, "Your last answer could not be used: " + err->reason + ".");
        } else {
            const SkillCall& sc = std::get<SkillCall>(parsed);
            call.thoughts = sc.thoughts;
            call.skill = sc.skill;
            call.params_json = params_to_json(sc).dump();
            const SkillOutcome out = execute_skill(sc, ctx);
            call.outcome = std::string(outcome_kind_name(out.kind));
            remember(MessageCategory::Assistant, sc.thoughts + "\nChosen skill: " + format_call(sc));
            for (const auto& e : out.events) {
                call.events.push_back(e.describe());
                remember(MessageCategory::System, e.describe());
            }
            remember(MessageCategory::System, out.summary());
            finished = out.kind == SkillOutcome::Kind::TaskFinished;
        }
        record.calls.push_back(std::move(call));
        if (finished) return finish(RunOutcome::TaskFinished);
        stall = state.turn == turn_before ? stall + 1 : 0;
        if (stall >= config.llm_stall_limit) return finish(RunOutcome::Timeout);
    }
}

}  // namespace netplay
