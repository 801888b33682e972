#include "sbm/guard.hpp"

#include <algorithm>

namespace sbm {

ScenarioObject controller_scenario(const ControllerBinding& binding)
{
    const std::string input = binding.input_label;
    const std::vector<std::string> outputs = binding.output_labels;

    State listen;
    listen.name = "listen";
    listen.transitions.push_back({EventPattern::any(input), 1, {}, {}});

    State act;
    act.name = "act";
    act.block_others = true;
    act.dynamic = [outputs](const SyncContext& ctx, SyncDeclaration& decl) {
        decl.requested.clear();
        if (ctx.last_eval) {
            for (int idx : ctx.last_eval->ranking)
                decl.requested.push_back(Event(outputs[static_cast<std::size_t>(idx)]));
        } else {
            // No evaluation available: the black-box view, all outputs possible.
            for (const std::string& label : outputs)
                decl.requested.push_back(Event(label));
        }
    };
    for (const std::string& label : outputs)
        act.transitions.push_back({EventPattern::any(label), 0, {}, {}});

    return ScenarioObject("controller", {std::move(listen), std::move(act)}, 0);
}

ScenarioObject sensor_scenario(const std::string& input_label,
                               std::shared_ptr<SensorSource> source)
{
    if (!source)
        throw ModelError("sensor_scenario: null source");
    State feed;
    feed.name = "feed";
    feed.dynamic = [input_label, source](const SyncContext&, SyncDeclaration& decl) {
        if (const std::vector<Value>* next = source->peek())
            decl.requested.push_back(Event(input_label, *next));
    };
    Transition consume;
    consume.pattern = EventPattern::any(input_label);
    consume.target = 0;
    consume.update = [source](const Event&, std::vector<Event>&) { source->pop(); };
    feed.transitions.push_back(std::move(consume));
    return ScenarioObject("sensor", {std::move(feed)}, 0);
}

ScenarioObject compile_override_rule(const OverrideRule& rule,
                                     const ControllerBinding& binding)
{
    if (!rule.input_pred)
        throw ModelError("override rule needs an input predicate");
    if (!binding.is_output(rule.action))
        throw ModelError("override action " + rule.action + " is not a controller output");

    const std::vector<std::string> outputs = binding.output_labels;
    const std::string action = rule.action;
    auto output_pred = rule.output_pred;
    const bool trivial = rule.output_pred_trivial || !output_pred;

    State watch;
    watch.name = "watch";
    watch.transitions.push_back(
        {EventPattern::predicate(binding.input_label, rule.input_pred), 1, {}, {}});

    State armed;
    armed.name = "armed";
    armed.dynamic = [outputs, action, output_pred, trivial](const SyncContext& ctx,
                                                            SyncDeclaration& decl) {
        // The output predicate is evaluated on raw scores; without an
        // evaluation (black-box exploration) a non-trivial Q is taken as true.
        bool hold = true;
        if (!trivial && ctx.last_eval)
            hold = output_pred(std::span<const double>(ctx.last_eval->raw_outputs));
        if (!hold)
            return;
        for (const std::string& label : outputs)
            if (label != action)
                decl.blocked.push_back(label);
    };
    for (const std::string& label : outputs)
        armed.transitions.push_back({EventPattern::any(label), 0, {}, {}});

    return ScenarioObject(rule.name, {std::move(watch), std::move(armed)}, 0);
}

ScenarioObject liveness_guard(const LivenessSpec& spec, const ControllerBinding& binding)
{
    if (spec.probabilistic)
        throw ModelError("liveness_guard: spec is probabilistic");
    if (spec.consecutive < 1)
        throw ModelError("liveness_guard: threshold must be >= 1");
    if (!binding.is_output(spec.target))
        throw ModelError("liveness target " + spec.target + " is not a controller output");

    const int n = spec.consecutive;
    std::vector<State> states(static_cast<std::size_t>(n) + 1);
    for (int c = 0; c <= n; ++c) {
        State& st = states[static_cast<std::size_t>(c)];
        st.name = "seen" + std::to_string(c);
        if (c < n) {
            for (const std::string& label : binding.output_labels) {
                StateId target = label == spec.target ? c + 1 : 0;
                st.transitions.push_back({EventPattern::any(label), target, {}, {}});
            }
        } else {
            st.blocked.push_back(spec.target);
            for (const std::string& label : binding.output_labels)
                if (label != spec.target)
                    st.transitions.push_back({EventPattern::any(label), 0, {}, {}});
        }
    }
    return ScenarioObject("liveness(" + spec.target + "," + std::to_string(n) + ")",
                          std::move(states), 0);
}

ScenarioObject probabilistic_liveness_guard(const LivenessSpec& spec)
{
    if (!spec.probabilistic)
        throw ModelError("probabilistic_liveness_guard: spec is deterministic");
    if (!(spec.probability > 0.0) || spec.probability > 1.0)
        throw ModelError("probabilistic_liveness_guard: probability must be in (0,1]");

    const std::string target = spec.target;
    const double p = spec.probability;
    State st;
    st.name = "roll";
    st.dynamic = [target, p](const SyncContext& ctx, SyncDeclaration& decl) {
        if (!ctx.last_eval)
            return; // only output phases count as rounds
        double u = ctx.draw ? ctx.draw() : 0.0;
        if (u < p)
            decl.blocked.push_back(target);
    };
    return ScenarioObject("prob-liveness(" + target + ")", {std::move(st)}, 0);
}

ScenarioObject job_exists_guard(int slots, const ControllerBinding& binding)
{
    if (slots < 1)
        throw ModelError("job_exists_guard: need at least one slot");
    if (static_cast<int>(binding.output_labels.size()) != slots + 1)
        throw ModelError("job_exists_guard: binding needs outputs y0..y" +
                         std::to_string(slots));

    const std::vector<std::string> outputs = binding.output_labels;

    State wait;
    wait.name = "wait";
    wait.transitions.push_back({EventPattern::any(binding.input_label), 1, {}, {}});

    State check;
    check.name = "check";
    check.dynamic = [outputs, slots](const SyncContext& ctx, SyncDeclaration& decl) {
        if (!ctx.last_input)
            return;
        const std::vector<Value>& vals = ctx.last_input->values();
        if (static_cast<int>(vals.size()) < slots + 1)
            throw ModelError("job_exists_guard: input event lacks slot booleans");
        for (int i = 1; i <= slots; ++i)
            if (!value_truthy(vals[static_cast<std::size_t>(i)]))
                decl.blocked.push_back(outputs[static_cast<std::size_t>(i)]);
    };
    for (const std::string& label : outputs)
        check.transitions.push_back({EventPattern::any(label), 0, {}, {}});

    return ScenarioObject("job-exists", {std::move(wait), std::move(check)}, 0);
}

ScenarioObject steady_state_guard(int n, const ControllerBinding& binding)
{
    if (n < 2)
        throw ModelError("steady_state_guard: n must be >= 2");

    const std::string input = binding.input_label;
    const std::vector<std::string> outputs = binding.output_labels;

    auto same_as_memory = [](std::size_t slot) {
        return [slot](const Event& e, const SyncContext& ctx) {
            return slot < ctx.memory.size() && ctx.memory[slot] == e;
        };
    };
    auto differs_from_memory = [](std::size_t slot) {
        return [slot](const Event& e, const SyncContext& ctx) {
            return !(slot < ctx.memory.size() && ctx.memory[slot] == e);
        };
    };
    auto store = [](std::size_t slot) {
        return [slot](const Event& e, std::vector<Event>& memory) {
            if (memory.size() <= slot)
                memory.resize(slot + 1, e);
            memory[slot] = e;
        };
    };
    auto clear = [](const Event&, std::vector<Event>& memory) { memory.clear(); };

    // State layout: obs_in_k / obs_out_k for k = 1..n, then bad_out (discard
    // the output of a falsified round), force_in and force_out.
    std::vector<State> states;
    auto id_obs_in = [](int k) { return (k - 1) * 2; };
    auto id_obs_out = [](int k) { return (k - 1) * 2 + 1; };
    const int id_bad_out = 2 * n;
    const int id_force_in = 2 * n + 1;
    const int id_force_out = 2 * n + 2;

    for (int k = 1; k <= n; ++k) {
        State in;
        in.name = "obs_in_" + std::to_string(k);
        if (k == 1) {
            in.transitions.push_back({EventPattern::any(input), id_obs_out(1), {}, store(0)});
        } else {
            in.transitions.push_back(
                {EventPattern::any(input), id_obs_out(k), same_as_memory(0), {}});
            in.transitions.push_back(
                {EventPattern::any(input), id_bad_out, differs_from_memory(0), {}});
        }
        states.push_back(std::move(in));

        State out;
        out.name = "obs_out_" + std::to_string(k);
        for (const std::string& label : outputs) {
            if (k == 1) {
                out.transitions.push_back(
                    {EventPattern::any(label), id_obs_in(2), {}, store(1)});
            } else {
                StateId onward = k < n ? id_obs_in(k + 1) : id_force_in;
                out.transitions.push_back(
                    {EventPattern::any(label), onward, same_as_memory(1), {}});
                out.transitions.push_back(
                    {EventPattern::any(label), id_obs_in(1), differs_from_memory(1), clear});
            }
        }
        states.push_back(std::move(out));
    }

    State bad_out;
    bad_out.name = "bad_out";
    for (const std::string& label : outputs)
        bad_out.transitions.push_back({EventPattern::any(label), id_obs_in(1), {}, clear});
    states.push_back(std::move(bad_out));

    State force_in;
    force_in.name = "force_in";
    force_in.transitions.push_back({EventPattern::any(input), id_force_out, {}, {}});
    states.push_back(std::move(force_in));

    State force_out;
    force_out.name = "force_out";
    force_out.dynamic = [](const SyncContext& ctx, SyncDeclaration& decl) {
        if (ctx.memory.size() > 1)
            decl.blocked.push_back(ctx.memory[1].label());
    };
    for (const std::string& label : outputs)
        force_out.transitions.push_back({EventPattern::any(label), id_obs_in(1), {}, clear});
    states.push_back(std::move(force_out));

    return ScenarioObject("steady-state(" + std::to_string(n) + ")", std::move(states), 0);
}

} // namespace sbm
