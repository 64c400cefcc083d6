#pragma once

#include "netplay/scenario_spec.hpp"
#include "netplay/sim.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace netplay {

class ScenarioError : public std::runtime_error {
public:
    enum class Kind { SyntaxError, UnknownGlyph, RaggedMap, UnknownAtom };

    ScenarioError(Kind kind, int line, int col, const std::string& message);

    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int col() const { return col_; }
    const std::string& detail() const { return detail_; }

private:
    Kind kind_;
    int line_;
    int col_;
    std::string detail_;
};

std::string_view error_kind_name(ScenarioError::Kind k);

// Scenario text format (.scen). Throws ScenarioError with 1-based line/col.
ScenarioSpec parse_scenario(std::string_view text);
std::string print_scenario(const ScenarioSpec& spec);

SuccessExpr parse_success_expr(std::string_view text);
std::string print_success_expr(const SuccessExpr& expr);

bool evaluate_success(const SuccessExpr& expr, const GameState& state);

struct BuiltinScenario {
    std::string name;
    std::string source;
    // Hand-authored solution in the scripted-backend rule format.
    std::string solution;
};

const std::vector<BuiltinScenario>& builtin_scenario_sources();
std::vector<ScenarioSpec> builtin_scenarios();
const BuiltinScenario* find_builtin(std::string_view name);

}  // namespace netplay
