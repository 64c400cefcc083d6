#pragma once

// The LLM agent loop: token-capped memory, prompt assembly, response parsing, skill dispatch.

#include "netplay/backends.hpp"
#include "netplay/describe.hpp"
#include "netplay/skills.hpp"

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace netplay {

enum class MessageCategory : uint8_t { System, Assistant, Human };
std::string_view category_role(MessageCategory c);  // system | assistant | user

struct Message {
    MessageCategory category = MessageCategory::System;
    std::string text;
    int token_cost = 0;
    int turn = 0;
};

class AgentMemory {
public:
    explicit AgentMemory(int cap = 500, TokenCounter counter = estimate_tokens);

    // Appends, then evicts oldest messages until the total fits. A message larger than the
    // cap on its own keeps only its tail behind a "..." marker.
    void push(MessageCategory category, std::string text, int turn);
    const std::vector<Message>& messages() const { return messages_; }
    int total_tokens() const;
    int cap() const { return cap_; }
    // Arrival index of every message still held; strictly increasing.
    const std::vector<uint64_t>& arrival_ids() const { return arrivals_; }

private:
    int cap_;
    TokenCounter counter_;
    std::vector<Message> messages_;
    std::vector<uint64_t> arrivals_;
    uint64_t next_arrival_ = 0;
};

struct AgentConfig {
    int memory_cap = 500;
    int llm_stall_limit = 10;
    double temperature = 0.0;
    int max_tokens = 512;
    std::set<Event::Kind> interrupt_set = default_interrupt_set();
    int close_monster_steps = 8;
    double low_health = 0.5;  // handed to the tracker by whoever builds it
    bool finish_task_enabled = true;
    bool censor_game_name = false;
    std::optional<int> turn_limit;
    std::optional<int> llm_call_limit;
    std::string guide;  // strategy advice for the guided variant
    TokenCounter token_counter = estimate_tokens;
};

// Task description part of the prompt (skill list, task, guide, output format).
std::string task_description(const std::string& task, const AgentConfig& config);

std::vector<ChatMessage> build_prompt(const AgentMemory& memory, const std::string& observation,
                                      const std::string& task_text);

struct ParseError {
    std::string reason;
};

// Strict parse of {"thoughts": str, "skill": str, "params": {..}} against the advertised skills.
std::variant<SkillCall, ParseError> parse_response(std::string_view text, bool finish_task_enabled = true);

struct CallRecord {
    int turn = 0;
    std::string prompt_digest;
    std::string response;
    std::string thoughts;
    std::string skill;  // empty on a parse error
    std::string params_json;
    std::string outcome;  // skill outcome kind, or "parse_error"
    std::vector<std::string> events;
    std::vector<std::string> messages;  // texts pushed to memory for this call
};

enum class RunOutcome : uint8_t { TaskFinished, GameEnded, TimeLimit, CallLimit, Timeout, GoalReached, BackendUnavailable };
std::string_view run_outcome_name(RunOutcome o);

struct RunRecord {
    std::vector<CallRecord> calls;
    RunOutcome outcome = RunOutcome::TaskFinished;
    int score = 0;
    int depth = 1;
    int max_depth = 1;
    int xp_level = 1;
    int turns = 0;
    int llm_calls = 0;
    std::optional<std::string> death_cause;
    std::string diagnostic;

    std::string to_jsonl() const;  // one line per call, then a summary line
    bool operator==(const RunRecord& other) const { return to_jsonl() == other.to_jsonl(); }
};

struct RunHooks {
    std::function<bool(const GameState&)> goal;  // stop as soon as this holds
    std::function<void(const TraceStep&)> on_step;
    const std::atomic<bool>* cancel = nullptr;  // checked between backend calls
};

RunRecord run_task(GameState& state, Tracker& tracker, Backend& backend, const std::string& task,
                   const AgentConfig& config, const RunHooks& hooks = {});

// Fills score/depth/... from the final state.
void summarize_state(RunRecord& record, const GameState& state);

}  // namespace netplay
