#ifndef SBM_MODELFILE_HPP
#define SBM_MODELFILE_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbm/events.hpp"

namespace sbm {

class ParseError : public ModelError {
public:
    ParseError(int line, int col, const std::string& what)
        : ModelError("line " + std::to_string(line) + ", col " + std::to_string(col) +
                     ": " + what),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

// Boolean expression over the components v0..vk of a value tuple:
// comparisons combined with && and ||.
struct Pred;
using PredPtr = std::shared_ptr<const Pred>;

struct Pred {
    enum class Kind { And, Or, Cmp, Const };
    enum class Op { Lt, Le, Gt, Ge, Eq, Ne };
    struct Term {
        bool is_var = false;
        std::size_t index = 0; // var index
        Value literal = 0.0;
    };

    Kind kind = Kind::Const;
    PredPtr lhs, rhs; // And / Or
    Op op = Op::Lt;   // Cmp
    Term a, b;        // Cmp
    bool value = true; // Const
};

bool eval_pred(const Pred& p, std::span<const Value> values);
std::string pred_text(const Pred& p);
std::size_t pred_var_count(const Pred& p); // 1 + highest var index, 0 if none
ValuePredicate compile_pred(PredPtr p);

// --- document ---

struct EventDecl {
    std::string label;
    std::size_t arity = 0;
};

struct TransitionDecl {
    std::string label;
    std::optional<std::vector<Value>> values; // exact-match form
    PredPtr pred;                             // predicate form
    std::string target;
};

struct StateDecl {
    std::string name;
    bool initial = false;
    std::vector<Event> requests;
    std::vector<std::string> blocks;
    std::vector<TransitionDecl> transitions;
};

struct ScenarioDecl {
    std::string name;
    std::vector<StateDecl> states;
};

struct ControllerDecl {
    std::string weights_path;
    std::string input_label;
    std::vector<std::string> outputs;
};

struct SensorDecl {
    std::string input_label;
    bool from_file = false;
    std::string path;
    std::vector<std::vector<Value>> inline_inputs;
};

struct GuardDecl {
    enum class Kind { Rule, Liveness, ProbLiveness, JobExists, Steady };
    Kind kind = Kind::Rule;
    PredPtr input_pred;  // rule
    PredPtr output_pred; // rule
    std::string action;  // rule
    std::string target;  // liveness / prob-liveness
    int n = 0;           // liveness / steady
    double probability = 0.0;
    int slots = 0;       // job-exists
};

struct ModelDocument {
    std::vector<EventDecl> events;
    std::vector<ScenarioDecl> scenarios;
    std::optional<ControllerDecl> controller;
    std::optional<SensorDecl> sensor;
    std::vector<GuardDecl> guards;
};

// Parses and fully validates a model file; throws ParseError at the first
// offending token.
ModelDocument parse_model(const std::string& text);

// Canonical text form: sorted declarations, normalized whitespace; reparses to
// a structurally equal document.
std::string serialize_model(const ModelDocument& doc);

// Structural equality modulo declaration order.
bool documents_equal(const ModelDocument& a, const ModelDocument& b);

// One tuple per line, comma separated, `#` comments (alphabet and sensor
// input files).
std::vector<std::vector<Value>> parse_value_tuples(const std::string& text);

} // namespace sbm

#endif
