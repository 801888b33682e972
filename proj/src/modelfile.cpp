#include "sbm/modelfile.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace sbm {

// --- predicates ---

namespace {

double term_value(const Pred::Term& t, std::span<const Value> values)
{
    if (!t.is_var)
        return value_number(t.literal);
    if (t.index >= values.size())
        throw ModelError("predicate refers to v" + std::to_string(t.index) +
                         " but the tuple has " + std::to_string(values.size()) +
                         " values");
    return value_number(values[t.index]);
}

// Shortest representation that parses back to the same double.
std::string render_double(double v)
{
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::stod(buf) == v)
            return buf;
    }
    return buf;
}

std::string render_value(const Value& v)
{
    if (std::holds_alternative<bool>(v))
        return std::get<bool>(v) ? "true" : "false";
    return render_double(std::get<double>(v));
}

std::string term_text(const Pred::Term& t)
{
    if (t.is_var)
        return "v" + std::to_string(t.index);
    return render_value(t.literal);
}

const char* op_text(Pred::Op op)
{
    switch (op) {
    case Pred::Op::Lt: return "<";
    case Pred::Op::Le: return "<=";
    case Pred::Op::Gt: return ">";
    case Pred::Op::Ge: return ">=";
    case Pred::Op::Eq: return "==";
    case Pred::Op::Ne: return "!=";
    }
    return "?";
}

} // namespace

bool eval_pred(const Pred& p, std::span<const Value> values)
{
    switch (p.kind) {
    case Pred::Kind::Const:
        return p.value;
    case Pred::Kind::And:
        return eval_pred(*p.lhs, values) && eval_pred(*p.rhs, values);
    case Pred::Kind::Or:
        return eval_pred(*p.lhs, values) || eval_pred(*p.rhs, values);
    case Pred::Kind::Cmp: {
        double a = term_value(p.a, values);
        double b = term_value(p.b, values);
        switch (p.op) {
        case Pred::Op::Lt: return a < b;
        case Pred::Op::Le: return a <= b;
        case Pred::Op::Gt: return a > b;
        case Pred::Op::Ge: return a >= b;
        case Pred::Op::Eq: return a == b;
        case Pred::Op::Ne: return a != b;
        }
    }
    }
    return false;
}

std::string pred_text(const Pred& p)
{
    switch (p.kind) {
    case Pred::Kind::Const:
        return p.value ? "true" : "false";
    case Pred::Kind::Cmp:
        return term_text(p.a) + " " + op_text(p.op) + " " + term_text(p.b);
    case Pred::Kind::And: {
        auto side = [](const Pred& q) {
            std::string s = pred_text(q);
            return q.kind == Pred::Kind::Or ? "(" + s + ")" : s;
        };
        return side(*p.lhs) + " && " + side(*p.rhs);
    }
    case Pred::Kind::Or:
        return pred_text(*p.lhs) + " || " + pred_text(*p.rhs);
    }
    return "?";
}

std::size_t pred_var_count(const Pred& p)
{
    switch (p.kind) {
    case Pred::Kind::Const:
        return 0;
    case Pred::Kind::Cmp: {
        std::size_t n = 0;
        if (p.a.is_var)
            n = std::max(n, p.a.index + 1);
        if (p.b.is_var)
            n = std::max(n, p.b.index + 1);
        return n;
    }
    case Pred::Kind::And:
    case Pred::Kind::Or:
        return std::max(pred_var_count(*p.lhs), pred_var_count(*p.rhs));
    }
    return 0;
}

ValuePredicate compile_pred(PredPtr p)
{
    if (!p)
        throw ModelError("compile_pred: null predicate");
    return [p](std::span<const Value> values) { return eval_pred(*p, values); };
}

// --- lexer ---

namespace {

struct Token {
    enum class Kind { Ident, Number, String, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    double num = 0.0;
    int line = 0;
    int col = 0;
};

[[noreturn]] void fail(const Token& t, const std::string& msg)
{
    throw ParseError(t.line, t.col, msg);
}

std::vector<Token> lex_line(const std::string& line, int lineno)
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto peek = [&](std::size_t k = 0) -> char {
        return i + k < line.size() ? line[i + k] : '\0';
    };
    while (i < line.size()) {
        char c = line[i];
        if (c == '#')
            break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.line = lineno;
        t.col = static_cast<int>(i) + 1;
        if (c == '"') {
            t.kind = Token::Kind::String;
            ++i;
            while (i < line.size() && line[i] != '"')
                t.text += line[i++];
            if (i >= line.size())
                fail(t, "unterminated string");
            ++i;
        } else if (c == '-' && peek(1) == '>') {
            t.kind = Token::Kind::Punct;
            t.text = "->";
            i += 2;
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   ((c == '-' || c == '+' || c == '.') &&
                    (std::isdigit(static_cast<unsigned char>(peek(1))) || peek(1) == '.'))) {
            std::size_t used = 0;
            t.kind = Token::Kind::Number;
            try {
                t.num = std::stod(line.substr(i), &used);
            } catch (const std::exception&) {
                fail(t, "malformed number");
            }
            t.text = line.substr(i, used);
            i += used;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Token::Kind::Ident;
            while (i < line.size() &&
                   (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_'))
                t.text += line[i++];
        } else {
            t.kind = Token::Kind::Punct;
            static const char* two[] = {"<=", ">=", "==", "!=", "&&", "||"};
            std::string pair = line.substr(i, 2);
            bool matched = false;
            for (const char* p : two)
                if (pair == p) {
                    t.text = p;
                    i += 2;
                    matched = true;
                    break;
                }
            if (!matched) {
                if (std::string("(),<>-").find(c) == std::string::npos)
                    fail(t, std::string("unexpected character '") + c + "'");
                t.text = std::string(1, c);
                ++i;
            }
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = lineno;
    end.col = static_cast<int>(line.size()) + 1;
    out.push_back(end);
    return out;
}

// --- token cursor + predicate parser ---

struct Cursor {
    std::vector<Token> toks;
    std::size_t pos = 0;

    const Token& cur() const { return toks[pos]; }
    const Token& take() { return toks[pos++]; }
    bool at_end() const { return cur().kind == Token::Kind::End; }
    bool is_punct(const char* p) const
    {
        return cur().kind == Token::Kind::Punct && cur().text == p;
    }
    bool is_ident(const char* w) const
    {
        return cur().kind == Token::Kind::Ident && cur().text == w;
    }
    const Token& expect_ident(const char* what)
    {
        if (cur().kind != Token::Kind::Ident)
            fail(cur(), std::string("expected ") + what);
        return take();
    }
    void expect_punct(const char* p)
    {
        if (!is_punct(p))
            fail(cur(), std::string("expected '") + p + "'");
        take();
    }
    void expect_end()
    {
        if (!at_end())
            fail(cur(), "trailing content");
    }
};

PredPtr parse_or(Cursor& c);

bool is_var_token(const Token& t, std::size_t& index)
{
    if (t.kind != Token::Kind::Ident || t.text.size() < 2 || t.text[0] != 'v')
        return false;
    for (std::size_t i = 1; i < t.text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t.text[i])))
            return false;
    index = std::stoul(t.text.substr(1));
    return true;
}

bool parse_term(Cursor& c, Pred::Term& out)
{
    std::size_t idx;
    if (c.cur().kind == Token::Kind::Number) {
        out.is_var = false;
        out.literal = c.take().num;
        return true;
    }
    if (c.cur().kind == Token::Kind::Ident) {
        if (is_var_token(c.cur(), idx)) {
            out.is_var = true;
            out.index = idx;
            c.take();
            return true;
        }
        if (c.is_ident("true") || c.is_ident("false")) {
            out.is_var = false;
            out.literal = c.take().text == "true";
            return true;
        }
    }
    return false;
}

std::optional<Pred::Op> cmp_op(const Token& t)
{
    if (t.kind != Token::Kind::Punct)
        return std::nullopt;
    if (t.text == "<") return Pred::Op::Lt;
    if (t.text == "<=") return Pred::Op::Le;
    if (t.text == ">") return Pred::Op::Gt;
    if (t.text == ">=") return Pred::Op::Ge;
    if (t.text == "==") return Pred::Op::Eq;
    if (t.text == "!=") return Pred::Op::Ne;
    return std::nullopt;
}

PredPtr parse_atom(Cursor& c)
{
    if (c.is_punct("(")) {
        c.take();
        PredPtr inner = parse_or(c);
        c.expect_punct(")");
        return inner;
    }
    const Token& start = c.cur();
    bool was_bool = c.is_ident("true") || c.is_ident("false");
    Pred::Term a;
    if (!parse_term(c, a))
        fail(c.cur(), "expected comparison, 'true', 'false' or '('");
    if (auto op = cmp_op(c.cur())) {
        c.take();
        Pred::Term b;
        if (!parse_term(c, b))
            fail(c.cur(), "expected comparison operand");
        auto p = std::make_shared<Pred>();
        p->kind = Pred::Kind::Cmp;
        p->op = *op;
        p->a = a;
        p->b = b;
        return p;
    }
    if (was_bool) {
        auto p = std::make_shared<Pred>();
        p->kind = Pred::Kind::Const;
        p->value = std::get<bool>(a.literal);
        return p;
    }
    fail(start, "expected comparison operator");
}

PredPtr parse_and(Cursor& c)
{
    PredPtr lhs = parse_atom(c);
    while (c.is_punct("&&") || c.is_ident("and")) {
        c.take();
        PredPtr rhs = parse_atom(c);
        auto p = std::make_shared<Pred>();
        p->kind = Pred::Kind::And;
        p->lhs = lhs;
        p->rhs = rhs;
        lhs = p;
    }
    return lhs;
}

PredPtr parse_or(Cursor& c)
{
    PredPtr lhs = parse_and(c);
    while (c.is_punct("||") || c.is_ident("or")) {
        c.take();
        PredPtr rhs = parse_and(c);
        auto p = std::make_shared<Pred>();
        p->kind = Pred::Kind::Or;
        p->lhs = lhs;
        p->rhs = rhs;
        lhs = p;
    }
    return lhs;
}

PredPtr parse_pred_string(const Token& strtok)
{
    Cursor c;
    c.toks = lex_line(strtok.text, strtok.line);
    for (Token& t : c.toks)
        t.col = strtok.col; // point at the enclosing string
    PredPtr p = parse_or(c);
    c.expect_end();
    return p;
}

std::vector<Value> parse_value_list(Cursor& c)
{
    std::vector<Value> values;
    c.expect_punct("(");
    if (!c.is_punct(")")) {
        while (true) {
            if (c.cur().kind == Token::Kind::Number)
                values.push_back(c.take().num);
            else if (c.is_ident("true") || c.is_ident("false"))
                values.push_back(c.take().text == "true");
            else
                fail(c.cur(), "expected value");
            if (c.is_punct(","))
                c.take();
            else
                break;
        }
    }
    c.expect_punct(")");
    return values;
}

// --- document parser ---

struct DocParser {
    ModelDocument doc;
    std::map<std::string, std::size_t> event_arity;
    ScenarioDecl* scenario = nullptr;
    StateDecl* state = nullptr;
    bool in_assembly = false;

    struct TargetRef {
        std::size_t state_idx, trans_idx;
        Token tok;
    };
    std::vector<TargetRef> pending_targets;
    Token scenario_tok;

    std::size_t declared_arity(const Token& label)
    {
        auto it = event_arity.find(label.text);
        if (it == event_arity.end())
            fail(label, "undeclared event '" + label.text + "'");
        return it->second;
    }

    void close_scenario()
    {
        if (!scenario)
            return;
        ScenarioDecl& sc = *scenario;
        std::map<std::string, std::size_t> state_index;
        int initials = 0;
        for (std::size_t i = 0; i < sc.states.size(); ++i) {
            state_index[sc.states[i].name] = i;
            if (sc.states[i].initial)
                ++initials;
        }
        if (initials != 1)
            fail(scenario_tok, "scenario '" + sc.name + "' needs exactly one initial state");
        for (const TargetRef& ref : pending_targets) {
            const std::string& target = sc.states[ref.state_idx].transitions[ref.trans_idx].target;
            if (!state_index.count(target))
                fail(ref.tok, "unknown state '" + target + "'");
        }
        for (const StateDecl& st : sc.states) {
            // Static determinism at each state.
            for (std::size_t i = 0; i < st.transitions.size(); ++i)
                for (std::size_t j = i + 1; j < st.transitions.size(); ++j) {
                    const TransitionDecl& a = st.transitions[i];
                    const TransitionDecl& b = st.transitions[j];
                    if (a.label != b.label || a.pred || b.pred)
                        continue;
                    bool overlap = (!a.values && !b.values) ||
                                   (a.values && b.values && *a.values == *b.values) ||
                                   (!a.values != !b.values);
                    if (overlap)
                        fail(scenario_tok, "state '" + st.name +
                                               "' has nondeterministic transitions on " + a.label);
                }
            // A requester must react to its own request.
            for (const Event& req : st.requests) {
                bool covered = false;
                for (const TransitionDecl& t : st.transitions) {
                    if (t.label != req.label())
                        continue;
                    if (t.values && *t.values != req.values())
                        continue;
                    if (t.pred && !eval_pred(*t.pred, req.values()))
                        continue;
                    covered = true;
                    break;
                }
                if (!covered)
                    fail(scenario_tok, "state '" + st.name + "' requests " + req.text() +
                                           " without a matching transition");
            }
            for (const std::string& b : st.blocks)
                for (const Event& req : st.requests)
                    if (req.label() == b)
                        fail(scenario_tok,
                             "state '" + st.name + "' requests and blocks " + b);
        }
        scenario = nullptr;
        state = nullptr;
        pending_targets.clear();
    }

    void parse_line(Cursor& c)
    {
        if (c.at_end())
            return;
        const Token head = c.take();
        if (head.kind != Token::Kind::Ident)
            fail(head, "expected a directive");
        const std::string& kw = head.text;

        if (kw == "event") {
            close_scenario();
            const Token& label = c.expect_ident("event label");
            if (event_arity.count(label.text))
                fail(label, "duplicate event '" + label.text + "'");
            EventDecl ed{label.text, 0};
            if (c.is_ident("arity")) {
                c.take();
                if (c.cur().kind != Token::Kind::Number || c.cur().num < 0 ||
                    c.cur().num != static_cast<double>(static_cast<long>(c.cur().num)))
                    fail(c.cur(), "expected nonnegative integer arity");
                ed.arity = static_cast<std::size_t>(c.take().num);
            }
            c.expect_end();
            event_arity[ed.label] = ed.arity;
            doc.events.push_back(std::move(ed));
        } else if (kw == "scenario") {
            close_scenario();
            if (in_assembly)
                fail(head, "scenarios must come before the assembly section");
            const Token& name = c.expect_ident("scenario name");
            for (const ScenarioDecl& sc : doc.scenarios)
                if (sc.name == name.text)
                    fail(name, "duplicate scenario '" + name.text + "'");
            c.expect_end();
            doc.scenarios.push_back({name.text, {}});
            scenario = &doc.scenarios.back();
            scenario_tok = name;
            state = nullptr;
        } else if (kw == "state") {
            if (!scenario)
                fail(head, "'state' outside a scenario");
            const Token& name = c.expect_ident("state name");
            for (const StateDecl& st : scenario->states)
                if (st.name == name.text)
                    fail(name, "duplicate state '" + name.text + "'");
            StateDecl st;
            st.name = name.text;
            if (c.is_ident("initial")) {
                c.take();
                st.initial = true;
            }
            c.expect_end();
            scenario->states.push_back(std::move(st));
            state = &scenario->states.back();
        } else if (kw == "request") {
            if (!state)
                fail(head, "'request' outside a state");
            do {
                const Token& label = c.expect_ident("event label");
                std::size_t arity = declared_arity(label);
                std::vector<Value> values;
                if (c.is_punct("("))
                    values = parse_value_list(c);
                if (values.size() != arity)
                    fail(label, "event '" + label.text + "' has arity " +
                                    std::to_string(arity) + ", got " +
                                    std::to_string(values.size()) + " values");
                state->requests.push_back(Event(label.text, std::move(values)));
            } while (!c.at_end());
        } else if (kw == "block") {
            if (!state)
                fail(head, "'block' outside a state");
            do {
                const Token& label = c.expect_ident("event label");
                declared_arity(label);
                state->blocks.push_back(label.text);
            } while (!c.at_end());
        } else if (kw == "on") {
            if (!state)
                fail(head, "'on' outside a state");
            const Token& label = c.expect_ident("event label");
            std::size_t arity = declared_arity(label);
            TransitionDecl t;
            t.label = label.text;
            if (c.is_punct("(")) {
                t.values = parse_value_list(c);
                if (t.values->size() != arity)
                    fail(label, "event '" + label.text + "' has arity " +
                                    std::to_string(arity));
            }
            if (c.is_ident("if")) {
                c.take();
                // Predicate tokens run until '->'.
                Cursor sub;
                while (!c.at_end() && !c.is_punct("->"))
                    sub.toks.push_back(c.take());
                Token end;
                end.kind = Token::Kind::End;
                end.line = head.line;
                end.col = c.cur().col;
                sub.toks.push_back(end);
                t.pred = parse_or(sub);
                sub.expect_end();
                if (pred_var_count(*t.pred) > arity)
                    fail(label, "predicate refers past the arity of '" + label.text + "'");
            }
            c.expect_punct("->");
            const Token& target = c.expect_ident("target state");
            t.target = target.text;
            c.expect_end();
            state->transitions.push_back(std::move(t));
            pending_targets.push_back(
                {scenario->states.size() - 1, state->transitions.size() - 1, target});
        } else if (kw == "assembly") {
            close_scenario();
            if (in_assembly)
                fail(head, "duplicate assembly section");
            in_assembly = true;
            c.expect_end();
        } else if (kw == "controller") {
            if (!in_assembly)
                fail(head, "'controller' outside the assembly section");
            if (doc.controller)
                fail(head, "duplicate controller");
            ControllerDecl cd;
            if (c.cur().kind == Token::Kind::String || c.cur().kind == Token::Kind::Ident)
                cd.weights_path = c.take().text;
            else
                fail(c.cur(), "expected weight-file path");
            if (!c.is_ident("input"))
                fail(c.cur(), "expected 'input'");
            c.take();
            const Token& input = c.expect_ident("input event label");
            declared_arity(input);
            cd.input_label = input.text;
            if (!c.is_ident("outputs"))
                fail(c.cur(), "expected 'outputs'");
            c.take();
            while (!c.at_end()) {
                const Token& out = c.expect_ident("output event label");
                if (declared_arity(out) != 0)
                    fail(out, "output events must have arity 0");
                cd.outputs.push_back(out.text);
            }
            if (cd.outputs.empty())
                fail(c.cur(), "controller needs at least one output");
            doc.controller = std::move(cd);
        } else if (kw == "sensor") {
            if (!in_assembly)
                fail(head, "'sensor' outside the assembly section");
            if (doc.sensor)
                fail(head, "duplicate sensor");
            if (!doc.controller)
                fail(head, "sensor requires a controller");
            if (!c.is_ident("input"))
                fail(c.cur(), "expected 'input'");
            c.take();
            const Token& input = c.expect_ident("input event label");
            if (input.text != doc.controller->input_label)
                fail(input, "sensor input must be the controller input event");
            std::size_t arity = declared_arity(input);
            SensorDecl sd;
            sd.input_label = input.text;
            if (!c.is_ident("from"))
                fail(c.cur(), "expected 'from'");
            c.take();
            if (c.is_ident("file")) {
                c.take();
                sd.from_file = true;
                if (c.cur().kind != Token::Kind::String && c.cur().kind != Token::Kind::Ident)
                    fail(c.cur(), "expected input-file path");
                sd.path = c.take().text;
                c.expect_end();
            } else if (c.is_ident("inline")) {
                c.take();
                while (c.is_punct("(")) {
                    std::vector<Value> tuple = parse_value_list(c);
                    if (tuple.size() != arity)
                        fail(input, "sensor tuple arity mismatch");
                    sd.inline_inputs.push_back(std::move(tuple));
                }
                c.expect_end();
            } else {
                fail(c.cur(), "expected 'file' or 'inline'");
            }
            doc.sensor = std::move(sd);
        } else if (kw == "guard") {
            if (!in_assembly)
                fail(head, "'guard' outside the assembly section");
            if (!doc.controller)
                fail(head, "guards require a controller");
            const ControllerDecl& cd = *doc.controller;
            auto is_output = [&](const std::string& l) {
                return std::find(cd.outputs.begin(), cd.outputs.end(), l) != cd.outputs.end();
            };
            const Token& kind = c.expect_ident("guard kind");
            std::string kind_name = kind.text;
            while (c.is_punct("-")) { // hyphenated kinds: prob-liveness, job-exists
                c.take();
                kind_name += "-" + c.expect_ident("guard kind").text;
            }
            GuardDecl gd;
            if (kind_name == "rule") {
                gd.kind = GuardDecl::Kind::Rule;
                if (c.cur().kind != Token::Kind::String)
                    fail(c.cur(), "expected quoted input predicate");
                Token ptok = c.take();
                gd.input_pred = parse_pred_string(ptok);
                if (pred_var_count(*gd.input_pred) > event_arity.at(cd.input_label))
                    fail(ptok, "input predicate refers past the input arity");
                if (c.cur().kind != Token::Kind::String)
                    fail(c.cur(), "expected quoted output predicate");
                Token qtok = c.take();
                gd.output_pred = parse_pred_string(qtok);
                if (pred_var_count(*gd.output_pred) > cd.outputs.size())
                    fail(qtok, "output predicate refers past the output count");
                const Token& action = c.expect_ident("override action label");
                if (!is_output(action.text))
                    fail(action, "action must be a controller output");
                gd.action = action.text;
            } else if (kind_name == "liveness") {
                gd.kind = GuardDecl::Kind::Liveness;
                const Token& target = c.expect_ident("target output label");
                if (!is_output(target.text))
                    fail(target, "target must be a controller output");
                gd.target = target.text;
                if (c.cur().kind != Token::Kind::Number || c.cur().num < 1)
                    fail(c.cur(), "expected threshold >= 1");
                gd.n = static_cast<int>(c.take().num);
            } else if (kind_name == "prob-liveness") {
                gd.kind = GuardDecl::Kind::ProbLiveness;
                const Token& target = c.expect_ident("target output label");
                if (!is_output(target.text))
                    fail(target, "target must be a controller output");
                gd.target = target.text;
                if (c.cur().kind != Token::Kind::Number || !(c.cur().num > 0.0) ||
                    c.cur().num > 1.0)
                    fail(c.cur(), "expected probability in (0,1]");
                gd.probability = c.take().num;
            } else if (kind_name == "job-exists") {
                gd.kind = GuardDecl::Kind::JobExists;
                if (c.cur().kind != Token::Kind::Number || c.cur().num < 1)
                    fail(c.cur(), "expected slot count >= 1");
                gd.slots = static_cast<int>(c.take().num);
                if (cd.outputs.size() != static_cast<std::size_t>(gd.slots) + 1)
                    fail(kind, "job-exists needs one pass output plus one per slot");
            } else if (kind_name == "steady") {
                gd.kind = GuardDecl::Kind::Steady;
                if (c.cur().kind != Token::Kind::Number || c.cur().num < 2)
                    fail(c.cur(), "expected n >= 2");
                gd.n = static_cast<int>(c.take().num);
            } else {
                fail(kind, "unknown guard kind '" + kind_name + "'");
            }
            c.expect_end();
            doc.guards.push_back(std::move(gd));
        } else {
            fail(head, "unknown directive '" + kw + "'");
        }
    }
};

} // namespace

ModelDocument parse_model(const std::string& text)
{
    DocParser parser;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        Cursor c;
        c.toks = lex_line(line, lineno);
        parser.parse_line(c);
    }
    parser.close_scenario();
    return parser.doc;
}

namespace {

std::string event_ref_text(const Event& e)
{
    if (e.values().empty())
        return e.label();
    std::string out = e.label() + "(";
    for (std::size_t i = 0; i < e.values().size(); ++i) {
        if (i)
            out += ",";
        out += render_value(e.values()[i]);
    }
    out += ")";
    return out;
}

std::string transition_text(const TransitionDecl& t)
{
    std::string out = "on " + t.label;
    if (t.values) {
        out += "(";
        for (std::size_t i = 0; i < t.values->size(); ++i) {
            if (i)
                out += ",";
            out += render_value((*t.values)[i]);
        }
        out += ")";
    }
    if (t.pred)
        out += " if " + pred_text(*t.pred);
    out += " -> " + t.target;
    return out;
}

std::string guard_text(const GuardDecl& g)
{
    switch (g.kind) {
    case GuardDecl::Kind::Rule:
        return "guard rule \"" + pred_text(*g.input_pred) + "\" \"" +
               pred_text(*g.output_pred) + "\" " + g.action;
    case GuardDecl::Kind::Liveness:
        return "guard liveness " + g.target + " " + std::to_string(g.n);
    case GuardDecl::Kind::ProbLiveness:
        return "guard prob-liveness " + g.target + " " + render_double(g.probability);
    case GuardDecl::Kind::JobExists:
        return "guard job-exists " + std::to_string(g.slots);
    case GuardDecl::Kind::Steady:
        return "guard steady " + std::to_string(g.n);
    }
    return "";
}

} // namespace

std::string serialize_model(const ModelDocument& doc)
{
    std::string out;

    std::vector<EventDecl> events = doc.events;
    std::sort(events.begin(), events.end(),
              [](const EventDecl& a, const EventDecl& b) { return a.label < b.label; });
    for (const EventDecl& e : events) {
        out += "event " + e.label;
        if (e.arity)
            out += " arity " + std::to_string(e.arity);
        out += "\n";
    }

    std::vector<ScenarioDecl> scenarios = doc.scenarios;
    std::sort(scenarios.begin(), scenarios.end(),
              [](const ScenarioDecl& a, const ScenarioDecl& b) { return a.name < b.name; });
    for (const ScenarioDecl& sc : scenarios) {
        out += "\nscenario " + sc.name + "\n";
        std::vector<StateDecl> states = sc.states;
        std::sort(states.begin(), states.end(),
                  [](const StateDecl& a, const StateDecl& b) { return a.name < b.name; });
        for (const StateDecl& st : states) {
            out += "  state " + st.name + (st.initial ? " initial" : "") + "\n";
            std::vector<Event> reqs = st.requests;
            std::sort(reqs.begin(), reqs.end());
            for (const Event& e : reqs)
                out += "    request " + event_ref_text(e) + "\n";
            std::vector<std::string> blocks = st.blocks;
            std::sort(blocks.begin(), blocks.end());
            for (const std::string& b : blocks)
                out += "    block " + b + "\n";
            std::vector<std::string> trans;
            for (const TransitionDecl& t : st.transitions)
                trans.push_back(transition_text(t));
            std::sort(trans.begin(), trans.end());
            for (const std::string& t : trans)
                out += "    " + t + "\n";
        }
    }

    if (doc.controller || doc.sensor || !doc.guards.empty()) {
        out += "\nassembly\n";
        if (doc.controller) {
            out += "  controller \"" + doc.controller->weights_path + "\" input " +
                   doc.controller->input_label + " outputs";
            for (const std::string& o : doc.controller->outputs)
                out += " " + o;
            out += "\n";
        }
        if (doc.sensor) {
            out += "  sensor input " + doc.sensor->input_label + " from ";
            if (doc.sensor->from_file) {
                out += "file \"" + doc.sensor->path + "\"\n";
            } else {
                out += "inline";
                for (const auto& tuple : doc.sensor->inline_inputs) {
                    out += " (";
                    for (std::size_t i = 0; i < tuple.size(); ++i) {
                        if (i)
                            out += ",";
                        out += render_value(tuple[i]);
                    }
                    out += ")";
                }
                out += "\n";
            }
        }
        std::vector<std::string> guards;
        for (const GuardDecl& g : doc.guards)
            guards.push_back(guard_text(g));
        std::sort(guards.begin(), guards.end());
        for (const std::string& g : guards)
            out += "  " + g + "\n";
    }
    return out;
}

bool documents_equal(const ModelDocument& a, const ModelDocument& b)
{
    return serialize_model(a) == serialize_model(b);
}

std::vector<std::vector<Value>> parse_value_tuples(const std::string& text)
{
    std::vector<std::vector<Value>> tuples;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos)
            line.erase(pos);
        // Split on commas, trimming whitespace.
        std::vector<Value> tuple;
        std::string item;
        std::istringstream ls(line);
        bool any = false;
        while (std::getline(ls, item, ',')) {
            auto begin = item.find_first_not_of(" \t\r");
            if (begin == std::string::npos) {
                if (any)
                    throw ParseError(lineno, 1, "empty tuple component");
                continue;
            }
            any = true;
            auto end = item.find_last_not_of(" \t\r");
            std::string tok = item.substr(begin, end - begin + 1);
            if (tok == "true")
                tuple.push_back(true);
            else if (tok == "false")
                tuple.push_back(false);
            else {
                std::size_t used = 0;
                double v = 0;
                try {
                    v = std::stod(tok, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != tok.size())
                    throw ParseError(lineno, 1, "malformed value '" + tok + "'");
                tuple.push_back(v);
            }
        }
        if (any)
            tuples.push_back(std::move(tuple));
    }
    return tuples;
}

} // namespace sbm
