#include "sbm/builder.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "sbm/guard.hpp"

namespace sbm {

namespace {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ModelError("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

ScenarioObject build_scenario(const ScenarioDecl& decl)
{
    std::map<std::string, StateId> index;
    for (std::size_t i = 0; i < decl.states.size(); ++i)
        index[decl.states[i].name] = static_cast<StateId>(i);

    StateId initial = 0;
    std::vector<State> states;
    for (std::size_t i = 0; i < decl.states.size(); ++i) {
        const StateDecl& sd = decl.states[i];
        if (sd.initial)
            initial = static_cast<StateId>(i);
        State st;
        st.name = sd.name;
        st.requested = sd.requests;
        st.blocked = sd.blocks;
        for (const TransitionDecl& td : sd.transitions) {
            Transition t;
            if (td.values)
                t.pattern = EventPattern::exact(Event(td.label, *td.values));
            else if (td.pred)
                t.pattern = EventPattern::predicate(td.label, compile_pred(td.pred),
                                                    pred_text(*td.pred));
            else
                t.pattern = EventPattern::any(td.label);
            t.target = index.at(td.target);
            st.transitions.push_back(std::move(t));
        }
        states.push_back(std::move(st));
    }
    return ScenarioObject(decl.name, std::move(states), initial);
}

Model build_model(const ModelDocument& doc, const std::string& base_dir)
{
    const std::filesystem::path base(base_dir);
    Model model;

    for (const ScenarioDecl& sc : doc.scenarios)
        model.objects.push_back(
            {std::make_shared<ScenarioObject>(build_scenario(sc)), ObjectKind::Ordinary});

    if (!doc.controller) {
        if (doc.sensor || !doc.guards.empty())
            throw ModelError("sensor and guards require a controller");
        return model;
    }

    const ControllerDecl& cd = *doc.controller;
    Network net = load_network(read_file(base / cd.weights_path));
    ControllerBinding binding(std::move(net), cd.input_label, cd.outputs);

    std::size_t input_arity = 0;
    for (const EventDecl& e : doc.events)
        if (e.label == cd.input_label)
            input_arity = e.arity;
    if (static_cast<int>(input_arity) != binding.network.input_size())
        throw ModelError("input event arity does not match the network input size");

    model.objects.push_back({std::make_shared<ScenarioObject>(controller_scenario(binding)),
                             ObjectKind::Controller});

    for (const GuardDecl& gd : doc.guards) {
        ScenarioObject guard = [&] {
            switch (gd.kind) {
            case GuardDecl::Kind::Rule: {
                OverrideRule rule;
                rule.input_pred = compile_pred(gd.input_pred);
                rule.name = "override(" + pred_text(*gd.input_pred) + ")";
                rule.action = gd.action;
                if (gd.output_pred->kind == Pred::Kind::Const && gd.output_pred->value) {
                    rule.output_pred_trivial = true;
                } else {
                    rule.output_pred_trivial = false;
                    PredPtr q = gd.output_pred;
                    rule.output_pred = [q](std::span<const double> scores) {
                        std::vector<Value> vals(scores.begin(), scores.end());
                        return eval_pred(*q, vals);
                    };
                }
                return compile_override_rule(rule, binding);
            }
            case GuardDecl::Kind::Liveness: {
                LivenessSpec spec;
                spec.target = gd.target;
                spec.consecutive = gd.n;
                return liveness_guard(spec, binding);
            }
            case GuardDecl::Kind::ProbLiveness: {
                LivenessSpec spec;
                spec.target = gd.target;
                spec.probabilistic = true;
                spec.probability = gd.probability;
                return probabilistic_liveness_guard(spec);
            }
            case GuardDecl::Kind::JobExists:
                return job_exists_guard(gd.slots, binding);
            case GuardDecl::Kind::Steady:
                return steady_state_guard(gd.n, binding);
            }
            throw ModelError("unknown guard kind");
        }();
        model.objects.push_back(
            {std::make_shared<ScenarioObject>(std::move(guard)), ObjectKind::Ordinary});
    }

    if (doc.sensor) {
        std::vector<std::vector<Value>> inputs;
        if (doc.sensor->from_file)
            inputs = parse_value_tuples(read_file(base / doc.sensor->path));
        else
            inputs = doc.sensor->inline_inputs;
        for (const auto& tuple : inputs)
            if (tuple.size() != input_arity)
                throw ModelError("sensor tuple arity does not match the input event");
        auto source = std::make_shared<ListSource>(std::move(inputs));
        model.objects.push_back(
            {std::make_shared<ScenarioObject>(sensor_scenario(cd.input_label, source)),
             ObjectKind::Sensor});
    }

    model.controller = std::move(binding);
    return model;
}

} // namespace sbm
