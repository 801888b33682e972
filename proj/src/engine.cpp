#include "sbm/engine.hpp"

#include <algorithm>

namespace sbm {

ControllerBinding::ControllerBinding(Network net, std::string input,
                                     std::vector<std::string> outputs)
    : network(std::move(net)), input_label(std::move(input)),
      output_labels(std::move(outputs))
{
    if (input_label.empty())
        throw ModelError("controller input label must be nonempty");
    if (static_cast<int>(output_labels.size()) != network.output_size())
        throw ModelError("controller needs one output label per output neuron");
    for (std::size_t i = 0; i < output_labels.size(); ++i) {
        if (output_labels[i].empty() || output_labels[i] == input_label)
            throw ModelError("bad controller output label");
        for (std::size_t j = i + 1; j < output_labels.size(); ++j)
            if (output_labels[i] == output_labels[j])
                throw ModelError("duplicate controller output label " + output_labels[i]);
    }
}

bool ControllerBinding::is_output(const std::string& label) const
{
    return std::find(output_labels.begin(), output_labels.end(), label) !=
           output_labels.end();
}

namespace {

// Static convention checks: guards may wait for but never block the input
// event, and only the controller scenario requests output events.
void validate_conventions(const Model& model)
{
    if (!model.controller)
        return;
    const ControllerBinding& cb = *model.controller;
    for (const ModelObject& mo : model.objects) {
        if (!mo.object)
            throw ModelError("model contains a null scenario object");
        if (mo.kind == ObjectKind::Controller)
            continue;
        const ScenarioObject& obj = *mo.object;
        for (StateId q = 0; q < static_cast<StateId>(obj.state_count()); ++q) {
            const State& st = obj.state(q);
            for (const std::string& b : st.blocked)
                if (b == cb.input_label)
                    throw ModelError(obj.name() + ": scenario objects may not block the input event");
            for (const Event& e : st.requested) {
                if (cb.is_output(e.label()))
                    throw ModelError(obj.name() + ": only the controller may request output events");
                if (e.label() == cb.input_label && mo.kind != ObjectKind::Sensor)
                    throw ModelError(obj.name() + ": only the sensor may request input events");
            }
        }
    }
}

} // namespace

ModelInstance::ModelInstance(Model m, std::uint64_t seed, Strategy strat)
    : model(std::move(m)), strategy(strat), rng(seed)
{
    validate_conventions(model);
    current.reserve(model.objects.size());
    for (const ModelObject& mo : model.objects)
        current.push_back(mo.object->initial());
    memory.resize(model.objects.size());
}

namespace {

SyncContext make_context(ModelInstance& instance, std::size_t i, bool allow_draw)
{
    SyncContext ctx;
    ctx.last_input = instance.last_input ? &*instance.last_input : nullptr;
    ctx.last_eval = instance.last_eval ? &*instance.last_eval : nullptr;
    ctx.memory = std::span<const Event>(instance.memory[i]);
    if (allow_draw) {
        ModelInstance* inst = &instance;
        ctx.draw = [inst] {
            return std::uniform_real_distribution<double>(0.0, 1.0)(inst->rng);
        };
    }
    return ctx;
}

} // namespace

std::vector<SyncDeclaration> gather_declarations(ModelInstance& instance)
{
    std::vector<SyncDeclaration> decls;
    decls.reserve(instance.model.objects.size());
    for (std::size_t i = 0; i < instance.model.objects.size(); ++i) {
        SyncContext ctx = make_context(instance, i, /*allow_draw=*/true);
        decls.push_back(
            instance.model.objects[i].object->declaration_at(instance.current[i], ctx));
    }
    return decls;
}

std::vector<Event> enabled_events(const std::vector<SyncDeclaration>& declarations)
{
    std::vector<Event> enabled;
    for (const SyncDeclaration& d : declarations) {
        for (const Event& e : d.requested) {
            if (std::find(enabled.begin(), enabled.end(), e) != enabled.end())
                continue;
            bool blocked = false;
            for (const SyncDeclaration& other : declarations) {
                if (std::find(other.blocked.begin(), other.blocked.end(), e.label()) !=
                    other.blocked.end()) {
                    blocked = true;
                    break;
                }
                if (other.block_others &&
                    std::find(other.requested.begin(), other.requested.end(), e) ==
                        other.requested.end()) {
                    blocked = true;
                    break;
                }
            }
            if (!blocked)
                enabled.push_back(e);
        }
    }
    return enabled;
}

std::optional<std::vector<Event>> current_ranking(const ModelInstance& instance)
{
    if (!instance.model.controller || !instance.last_eval)
        return std::nullopt;
    const ControllerBinding& cb = *instance.model.controller;
    std::vector<Event> ranked;
    ranked.reserve(cb.output_labels.size());
    for (int idx : instance.last_eval->ranking)
        ranked.push_back(Event(cb.output_labels[static_cast<std::size_t>(idx)]));
    return ranked;
}

std::optional<Event> select_event(const std::vector<Event>& enabled,
                                  const std::optional<std::vector<Event>>& ranking,
                                  Strategy strategy, std::mt19937_64& rng)
{
    if (enabled.empty())
        return std::nullopt;
    if (ranking) {
        for (const Event& r : *ranking)
            if (std::find(enabled.begin(), enabled.end(), r) != enabled.end())
                return r;
    }
    std::vector<Event> sorted = enabled;
    std::sort(sorted.begin(), sorted.end());
    if (strategy == Strategy::Lexicographic)
        return sorted.front();
    std::uniform_int_distribution<std::size_t> pick(0, sorted.size() - 1);
    return sorted[pick(rng)];
}

void apply_event(ModelInstance& instance, const Event& event)
{
    for (std::size_t i = 0; i < instance.model.objects.size(); ++i) {
        SyncContext ctx = make_context(instance, i, /*allow_draw=*/false);
        instance.current[i] = instance.model.objects[i].object->step(
            instance.current[i], event, ctx, instance.memory[i]);
    }
    if (instance.model.controller) {
        const ControllerBinding& cb = *instance.model.controller;
        if (event.label() == cb.input_label) {
            instance.last_input = event;
            std::vector<double> in;
            in.reserve(event.values().size());
            for (const Value& v : event.values())
                in.push_back(value_number(v));
            instance.last_eval = evaluate(cb.network, in);
        } else if (cb.is_output(event.label())) {
            instance.last_input.reset();
            instance.last_eval.reset();
        }
    }
    instance.trace.push_back(event);
}

StepResult run_step(ModelInstance& instance)
{
    std::vector<SyncDeclaration> decls = gather_declarations(instance);

    bool any_requested = false;
    for (const SyncDeclaration& d : decls)
        if (!d.requested.empty()) { any_requested = true; break; }

    StepResult result;
    if (!any_requested) {
        result.kind = StepResult::Kind::Quiescent;
        return result; // nothing to report to the observer
    }

    std::vector<Event> enabled = enabled_events(decls);
    std::optional<Event> chosen = select_event(enabled, current_ranking(instance),
                                               instance.strategy, instance.rng);
    if (!chosen) {
        result.kind = StepResult::Kind::Deadlock;
        if (instance.observer)
            instance.observer(decls, result);
        return result;
    }
    apply_event(instance, *chosen);
    result.kind = StepResult::Kind::Triggered;
    result.event = *chosen;
    if (instance.observer)
        instance.observer(decls, result);
    return result;
}

RunReason run(ModelInstance& instance, int max_steps)
{
    if (max_steps < 0)
        throw ModelError("run: negative step budget");
    for (int i = 0; i < max_steps; ++i) {
        StepResult r = run_step(instance);
        if (r.kind == StepResult::Kind::Deadlock)
            return RunReason::Deadlock;
        if (r.kind == StepResult::Kind::Quiescent)
            return RunReason::Quiescent;
    }
    // A zero budget still reports quiescence when nothing is requested.
    if (max_steps == 0) {
        std::vector<SyncDeclaration> decls = gather_declarations(instance);
        bool any = false;
        for (const SyncDeclaration& d : decls)
            if (!d.requested.empty()) { any = true; break; }
        if (!any)
            return RunReason::Quiescent;
    }
    return RunReason::Budget;
}

const char* reason_name(RunReason reason)
{
    switch (reason) {
    case RunReason::Deadlock: return "deadlock";
    case RunReason::Quiescent: return "quiescent";
    case RunReason::Budget: return "budget";
    }
    return "?";
}

std::string render_trace(const std::vector<Event>& trace, RunReason reason)
{
    std::string out;
    for (const Event& e : trace) {
        out += e.text();
        out += '\n';
    }
    out += "#end: ";
    out += reason_name(reason);
    out += '\n';
    return out;
}

} // namespace sbm
