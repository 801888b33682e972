#include "sbm/verify.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "sbm/guard.hpp"

namespace sbm {

namespace {

struct Config {
    std::vector<StateId> states;
    std::vector<std::vector<Event>> memory;
    std::optional<Event> last_input;

    std::string key() const
    {
        std::string k;
        for (StateId q : states) {
            k += std::to_string(q);
            k += ';';
        }
        for (const auto& mem : memory) {
            k += '[';
            for (const Event& e : mem) {
                k += e.text();
                k += ',';
            }
            k += ']';
        }
        if (last_input) {
            k += '!';
            k += last_input->text();
        }
        return k;
    }
};

struct Node {
    Config config;
    int parent = -1;
    Event event; // event that led here (unset for the root)
    int depth = 0;
};

struct Search {
    Verdict verdict;
    ExplorationStats stats;
};

Search traverse(const Model& input_model, const InputAlphabet& alphabet,
                VerifyMode mode, int depth, bool stop_on_deadlock)
{
    if (depth < (stop_on_deadlock ? 1 : 0))
        throw ModelError("verification depth must be >= 1");

    // Sensors are replaced by the alphabet.
    Model model;
    model.controller = input_model.controller;
    for (const ModelObject& mo : input_model.objects)
        if (mo.kind != ObjectKind::Sensor)
            model.objects.push_back(mo);

    std::vector<Event> alphabet_events;
    if (model.controller) {
        if (alphabet.entries.empty())
            throw ModelError("verification of a controller model needs a nonempty alphabet");
        for (const auto& entry : alphabet.entries) {
            if (static_cast<int>(entry.size()) != model.controller->network.input_size())
                throw ModelError("alphabet entry arity does not match the controller input");
            alphabet_events.push_back(Event(model.controller->input_label, entry));
        }
    }

    const std::size_t n = model.objects.size();
    auto draw_zero = [] { return 0.0; };

    auto contexts = [&](const Config& cfg, const std::optional<Evaluation>& eval,
                        std::size_t i) {
        SyncContext ctx;
        ctx.last_input = cfg.last_input ? &*cfg.last_input : nullptr;
        ctx.last_eval = eval ? &*eval : nullptr;
        ctx.memory = std::span<const Event>(cfg.memory[i]);
        ctx.draw = draw_zero;
        return ctx;
    };

    auto evaluation_for = [&](const Config& cfg) -> std::optional<Evaluation> {
        if (mode != VerifyMode::Concrete || !model.controller || !cfg.last_input)
            return std::nullopt;
        std::vector<double> in;
        for (const Value& v : cfg.last_input->values())
            in.push_back(value_number(v));
        return evaluate(model.controller->network, in);
    };

    Config root;
    root.states.reserve(n);
    for (const ModelObject& mo : model.objects)
        root.states.push_back(mo.object->initial());
    root.memory.resize(n);

    std::vector<Node> nodes;
    nodes.push_back({root, -1, Event("#root"), 0});
    std::map<std::string, int> visited{{root.key(), 0}};

    Search out;
    out.verdict.depth = depth;
    out.stats.states_visited = 1;
    out.stats.frontier_max = 1;

    std::deque<int> queue{0};
    bool found = false;

    while (!queue.empty()) {
        std::size_t level_size = queue.size();
        out.stats.frontier_max = std::max(out.stats.frontier_max, level_size);
        for (std::size_t li = 0; li < level_size; ++li) {
            int ni = queue.front();
            queue.pop_front();
            Config cfg = nodes[static_cast<std::size_t>(ni)].config;
            int d = nodes[static_cast<std::size_t>(ni)].depth;
            out.stats.depth_reached = std::max(out.stats.depth_reached, d);

            std::optional<Evaluation> eval = evaluation_for(cfg);

            // Virtual sensor first, so inputs are explored in alphabet order.
            std::vector<SyncDeclaration> decls;
            if (!alphabet_events.empty()) {
                SyncDeclaration sensor;
                sensor.requested = alphabet_events;
                decls.push_back(std::move(sensor));
            }
            for (std::size_t i = 0; i < n; ++i)
                decls.push_back(model.objects[i].object->declaration_at(
                    cfg.states[i], contexts(cfg, eval, i)));

            bool any_requested = false;
            for (const SyncDeclaration& dcl : decls)
                if (!dcl.requested.empty()) { any_requested = true; break; }
            if (!any_requested)
                continue;

            std::vector<Event> enabled = enabled_events(decls);
            if (enabled.empty()) {
                if (!found) {
                    found = true;
                    out.verdict.safe = false;
                    out.verdict.deadlock_step = d + 1;
                    // Reconstruct the path.
                    std::vector<Event> path;
                    for (int cur = ni; cur > 0;
                         cur = nodes[static_cast<std::size_t>(cur)].parent)
                        path.push_back(nodes[static_cast<std::size_t>(cur)].event);
                    std::reverse(path.begin(), path.end());
                    out.verdict.trace = path;
                    for (const Event& e : path)
                        if (model.controller && e.label() == model.controller->input_label)
                            out.verdict.inputs.push_back(e);
                    if (stop_on_deadlock)
                        return out;
                }
                continue;
            }

            if (d == depth)
                continue;

            // In concrete mode the engine resolves a pending evaluation
            // deterministically: only the selected output can fire.
            if (eval) {
                std::vector<Event> ranked;
                for (int idx : eval->ranking)
                    ranked.push_back(
                        Event(model.controller->output_labels[static_cast<std::size_t>(idx)]));
                for (const Event& r : ranked) {
                    if (std::find(enabled.begin(), enabled.end(), r) != enabled.end()) {
                        enabled = {r};
                        break;
                    }
                }
            }

            for (const Event& e : enabled) {
                Config succ;
                succ.states.resize(n);
                succ.memory = cfg.memory;
                for (std::size_t i = 0; i < n; ++i)
                    succ.states[i] = model.objects[i].object->step(
                        cfg.states[i], e, contexts(cfg, eval, i), succ.memory[i]);
                succ.last_input = cfg.last_input;
                if (model.controller) {
                    if (e.label() == model.controller->input_label)
                        succ.last_input = e;
                    else if (model.controller->is_output(e.label()))
                        succ.last_input.reset();
                }
                std::string key = succ.key();
                if (visited.count(key))
                    continue;
                int id = static_cast<int>(nodes.size());
                visited.emplace(std::move(key), id);
                nodes.push_back({std::move(succ), ni, e, d + 1});
                queue.push_back(id);
                ++out.stats.states_visited;
            }
        }
    }
    return out;
}

} // namespace

Verdict check_deadlock_freedom(const Model& model, const InputAlphabet& alphabet,
                               VerifyMode mode, int depth)
{
    return traverse(model, alphabet, mode, depth, /*stop_on_deadlock=*/true).verdict;
}

ExplorationStats explore(const Model& model, const InputAlphabet& alphabet,
                         VerifyMode mode, int depth)
{
    return traverse(model, alphabet, mode, depth, /*stop_on_deadlock=*/false).stats;
}

ReplayResult replay(const Model& model, const std::vector<std::vector<Value>>& inputs)
{
    if (inputs.empty())
        throw ModelError("replay: empty input sequence");
    if (!model.controller)
        throw ModelError("replay: model has no controller");

    Model driven;
    driven.controller = model.controller;
    for (const ModelObject& mo : model.objects)
        if (mo.kind != ObjectKind::Sensor)
            driven.objects.push_back(mo);
    auto source = std::make_shared<ListSource>(inputs);
    driven.objects.push_back(
        {std::make_shared<ScenarioObject>(
             sensor_scenario(model.controller->input_label, source)),
         ObjectKind::Sensor});

    ModelInstance instance(std::move(driven));
    int budget = static_cast<int>(inputs.size()) * 2 + 4;
    RunReason reason = run(instance, budget);

    ReplayResult result;
    result.trace = instance.trace;
    result.reason = reason;
    if (reason == RunReason::Deadlock)
        result.deadlock_step = static_cast<int>(instance.trace.size()) + 1;
    return result;
}

std::string render_counterexample(const Verdict& verdict)
{
    std::string out;
    for (const Event& e : verdict.inputs) {
        for (std::size_t i = 0; i < e.values().size(); ++i) {
            if (i)
                out += ',';
            out += value_text(e.values()[i]);
        }
        out += '\n';
    }
    for (const Event& e : verdict.trace) {
        out += e.text();
        out += '\n';
    }
    out += "#deadlock at step " + std::to_string(verdict.deadlock_step) + '\n';
    return out;
}

} // namespace sbm
