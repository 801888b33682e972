#ifndef SBM_TEST_FIXTURES_HPP
#define SBM_TEST_FIXTURES_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include "sbm/engine.hpp"
#include "sbm/guard.hpp"

namespace fx {

// The 2-3-2 relu network used throughout: h1 = x1 - x2, h2 = -2 x1, h3 = 3 x2;
// y1 = h1 - 2 h2, y2 = h2 + h3.
inline sbm::Network running_example_network()
{
    sbm::Layer hidden;
    hidden.in = 2;
    hidden.out = 3;
    hidden.activation = sbm::Activation::Relu;
    hidden.weights = {1, -1, -2, 0, 0, 3};
    hidden.bias = {0, 0, 0};
    sbm::Layer out;
    out.in = 3;
    out.out = 2;
    out.activation = sbm::Activation::Linear;
    out.weights = {1, -2, 0, 0, 1, 1};
    out.bias = {0, 0};
    return sbm::Network({hidden, out});
}

inline sbm::ControllerBinding running_example_binding()
{
    return sbm::ControllerBinding(running_example_network(), "x", {"y1", "y2"});
}

// The Fig. 4 override rule: force y2 whenever v0 > 0 and v1 < v0.
inline sbm::OverrideRule force_y2_rule()
{
    sbm::OverrideRule rule;
    rule.input_pred = [](std::span<const sbm::Value> v) {
        return v.size() == 2 && sbm::value_number(v[0]) > 0 &&
               sbm::value_number(v[1]) < sbm::value_number(v[0]);
    };
    rule.action = "y2";
    return rule;
}

// --- random static models (plain labels, no values, no hooks) ---

inline sbm::ScenarioObject random_static_object(std::mt19937_64& rng, int index,
                                                const std::vector<std::string>& labels)
{
    std::uniform_int_distribution<int> state_count_dist(1, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int nstates = state_count_dist(rng);
    std::uniform_int_distribution<int> target_dist(0, nstates - 1);

    std::vector<sbm::State> states;
    for (int s = 0; s < nstates; ++s) {
        sbm::State st;
        st.name = "s" + std::to_string(s);
        for (const std::string& label : labels) {
            double roll = u(rng);
            bool requested = roll < 0.30;
            bool blocked = !requested && roll < 0.45;
            bool reacts = requested || u(rng) < 0.35;
            if (requested)
                st.requested.push_back(sbm::Event(label));
            if (blocked)
                st.blocked.push_back(label);
            if (reacts)
                st.transitions.push_back(
                    {sbm::EventPattern::any(label), target_dist(rng), {}, {}});
        }
        states.push_back(std::move(st));
    }
    return sbm::ScenarioObject("r" + std::to_string(index), std::move(states), 0);
}

inline std::vector<sbm::ScenarioObject> random_static_objects(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> nobj_dist(1, 3);
    std::uniform_int_distribution<int> nlabel_dist(1, 4);
    const int nlabels = nlabel_dist(rng);
    std::vector<std::string> labels;
    for (int i = 0; i < nlabels; ++i)
        labels.push_back(std::string(1, static_cast<char>('a' + i)));
    std::vector<sbm::ScenarioObject> objects;
    const int nobj = nobj_dist(rng);
    for (int i = 0; i < nobj; ++i)
        objects.push_back(random_static_object(rng, i, labels));
    return objects;
}

inline sbm::Model model_of(const std::vector<sbm::ScenarioObject>& objects)
{
    sbm::Model model;
    for (const sbm::ScenarioObject& o : objects)
        model.objects.push_back(
            {std::make_shared<sbm::ScenarioObject>(o), sbm::ObjectKind::Ordinary});
    return model;
}

// --- trace sets ---

inline void engine_walk(const sbm::ModelInstance& instance, int depth,
                        const std::string& prefix, std::set<std::string>& out)
{
    out.insert(prefix);
    if (depth == 0)
        return;
    sbm::ModelInstance probe = instance;
    std::vector<sbm::SyncDeclaration> decls = sbm::gather_declarations(probe);
    for (const sbm::Event& e : sbm::enabled_events(decls)) {
        sbm::ModelInstance next = instance;
        sbm::apply_event(next, e);
        engine_walk(next, depth - 1, prefix + e.text() + ";", out);
    }
}

// All event sequences of length <= depth the engine could produce under any
// selection strategy.
inline std::set<std::string> engine_trace_set(const sbm::Model& model, int depth)
{
    std::set<std::string> out;
    engine_walk(sbm::ModelInstance(model), depth, "", out);
    return out;
}

inline void composite_walk(const sbm::ScenarioObject& o, sbm::StateId q, int depth,
                           const std::string& prefix, std::set<std::string>& out)
{
    out.insert(prefix);
    if (depth == 0)
        return;
    sbm::SyncDeclaration d = o.declaration_at(q);
    std::set<sbm::Event> seen;
    for (const sbm::Event& e : d.requested) {
        if (!seen.insert(e).second)
            continue;
        bool blocked = false;
        for (const std::string& b : d.blocked)
            if (b == e.label()) { blocked = true; break; }
        if (blocked)
            continue;
        composite_walk(o, o.step(q, e), depth - 1, prefix + e.text() + ";", out);
    }
}

inline std::set<std::string> composite_trace_set(const sbm::ScenarioObject& o, int depth)
{
    std::set<std::string> out;
    composite_walk(o, o.initial(), depth, "", out);
    return out;
}

} // namespace fx

#endif
