#include "sbm/scenario.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <utility>

namespace sbm {

ScenarioObject::ScenarioObject(std::string name, std::vector<State> states, StateId initial)
    : name_(std::move(name)), states_(std::move(states)), initial_(initial)
{
    validate();
}

const State& ScenarioObject::state(StateId q) const
{
    if (q < 0 || static_cast<std::size_t>(q) >= states_.size())
        throw ModelError(name_ + ": unknown state id " + std::to_string(q));
    return states_[static_cast<std::size_t>(q)];
}

void ScenarioObject::validate() const
{
    if (states_.empty())
        throw ModelError(name_ + ": scenario object needs at least one state");
    if (initial_ < 0 || static_cast<std::size_t>(initial_) >= states_.size())
        throw ModelError(name_ + ": initial state out of range");

    for (std::size_t qi = 0; qi < states_.size(); ++qi) {
        const State& st = states_[qi];
        for (const Transition& t : st.transitions) {
            if (t.target < 0 || static_cast<std::size_t>(t.target) >= states_.size())
                throw ModelError(name_ + "/" + st.name + ": transition target out of range");
        }
        // A requester must react to its own request.
        for (const Event& e : st.requested) {
            bool covered = false;
            for (const Transition& t : st.transitions)
                if (t.pattern.matches(e)) { covered = true; break; }
            if (!covered)
                throw ModelError(name_ + "/" + st.name + ": requested event " + e.text() +
                                 " has no matching transition");
        }
        // Note: a state may request and block the same label (a composite
        // inherits that from its components); the event is simply never enabled.
        // Static determinism: two unconditional transitions must not overlap.
        for (std::size_t i = 0; i < st.transitions.size(); ++i) {
            for (std::size_t j = i + 1; j < st.transitions.size(); ++j) {
                const Transition& a = st.transitions[i];
                const Transition& b = st.transitions[j];
                if (a.when || b.when)
                    continue; // runtime-checked
                if (a.pattern.label() != b.pattern.label())
                    continue;
                const bool overlap =
                    a.pattern.kind() == EventPattern::Kind::Any ||
                    b.pattern.kind() == EventPattern::Kind::Any ||
                    (a.pattern.kind() == EventPattern::Kind::Exact &&
                     b.pattern.kind() == EventPattern::Kind::Exact &&
                     a.pattern.exact_values() == b.pattern.exact_values());
                if (overlap)
                    throw ModelError(name_ + "/" + st.name +
                                     ": nondeterministic transitions on " + a.pattern.label());
            }
        }
    }
}

SyncDeclaration ScenarioObject::declaration_at(StateId q, const SyncContext& ctx) const
{
    const State& st = state(q);
    SyncDeclaration decl;
    decl.requested = st.requested;
    decl.blocked = st.blocked;
    decl.block_others = st.block_others;
    if (st.dynamic)
        st.dynamic(ctx, decl);
    for (const Transition& t : st.transitions) {
        bool covers_request = false;
        for (const Event& e : decl.requested)
            if (t.pattern.matches(e)) { covers_request = true; break; }
        if (!covers_request)
            decl.waited.push_back(t.pattern);
    }
    return decl;
}

StateId ScenarioObject::step(StateId q, const Event& e, const SyncContext& ctx) const
{
    std::vector<Event> scratch(ctx.memory.begin(), ctx.memory.end());
    return step(q, e, ctx, scratch);
}

StateId ScenarioObject::step(StateId q, const Event& e, const SyncContext& ctx,
                             std::vector<Event>& memory) const
{
    const State& st = state(q);
    const Transition* hit = nullptr;
    for (const Transition& t : st.transitions) {
        if (!t.pattern.matches(e))
            continue;
        if (t.when && !t.when(e, ctx))
            continue;
        if (hit)
            throw ModelError(name_ + "/" + st.name + ": two transitions match " + e.text());
        hit = &t;
    }
    if (!hit)
        return q; // implicit self-loop
    if (hit->update)
        hit->update(e, memory);
    return hit->target;
}

bool ScenarioObject::is_static() const
{
    for (const State& st : states_) {
        if (st.dynamic)
            return false;
        for (const Transition& t : st.transitions)
            if (t.when || t.update || t.pattern.kind() == EventPattern::Kind::Predicate)
                return false;
    }
    return true;
}

std::vector<Event> concrete_alphabet(const ScenarioObject& object)
{
    std::vector<Event> alphabet;
    auto add = [&](const Event& e) {
        if (std::find(alphabet.begin(), alphabet.end(), e) == alphabet.end())
            alphabet.push_back(e);
    };
    for (StateId q = 0; q < static_cast<StateId>(object.state_count()); ++q) {
        const State& st = object.state(q);
        for (const Event& e : st.requested)
            add(e);
        for (const Transition& t : st.transitions) {
            if (t.pattern.kind() == EventPattern::Kind::Exact)
                add(Event(t.pattern.label(), t.pattern.exact_values()));
            else
                add(Event(t.pattern.label()));
        }
    }
    return alphabet;
}

ScenarioObject compose(const ScenarioObject& a, const ScenarioObject& b)
{
    if (!a.is_static() || !b.is_static())
        throw ModelError("compose: both objects must be static transition systems");

    std::vector<Event> alphabet = concrete_alphabet(a);
    for (const Event& e : concrete_alphabet(b))
        if (std::find(alphabet.begin(), alphabet.end(), e) == alphabet.end())
            alphabet.push_back(e);

    std::map<std::pair<StateId, StateId>, StateId> index;
    std::vector<std::pair<StateId, StateId>> order;

    auto intern = [&](std::pair<StateId, StateId> pq) {
        auto it = index.find(pq);
        if (it != index.end())
            return it->second;
        StateId id = static_cast<StateId>(order.size());
        index.emplace(pq, id);
        order.push_back(pq);
        return id;
    };

    intern({a.initial(), b.initial()});
    // First pass: discover reachable product states over the full alphabet.
    for (std::size_t done = 0; done < order.size(); ++done) {
        auto [qa, qb] = order[done];
        for (const Event& e : alphabet) {
            StateId ta = a.step(qa, e);
            StateId tb = b.step(qb, e);
            intern({ta, tb});
        }
    }

    std::vector<State> states(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto [qa, qb] = order[i];
        const State& sa = a.state(qa);
        const State& sb = b.state(qb);
        State st;
        st.name = "<" + sa.name + "|" + sb.name + ">";
        st.requested = sa.requested;
        for (const Event& e : sb.requested)
            if (std::find(st.requested.begin(), st.requested.end(), e) == st.requested.end())
                st.requested.push_back(e);
        st.blocked = sa.blocked;
        for (const std::string& l : sb.blocked)
            if (std::find(st.blocked.begin(), st.blocked.end(), l) == st.blocked.end())
                st.blocked.push_back(l);
        for (const Event& e : alphabet) {
            StateId ta = a.step(qa, e);
            StateId tb = b.step(qb, e);
            bool moved = (ta != qa) || (tb != qb);
            bool requested = std::find(st.requested.begin(), st.requested.end(), e) !=
                             st.requested.end();
            if (!moved && !requested)
                continue; // implicit self-loop
            Transition t;
            t.pattern = EventPattern::exact(e);
            t.target = index.at({ta, tb});
            st.transitions.push_back(std::move(t));
        }
        states[i] = std::move(st);
    }
    return ScenarioObject(a.name() + "*" + b.name(), std::move(states), 0);
}

ScenarioObject compose_all(std::span<const ScenarioObject> objects)
{
    if (objects.empty())
        throw ModelError("compose_all: empty object list");
    ScenarioObject acc = objects[0];
    for (std::size_t i = 1; i < objects.size(); ++i)
        acc = compose(acc, objects[i]);
    return acc;
}

std::set<StateId> reachable_states(const ScenarioObject& object, int depth)
{
    if (depth < 0)
        throw ModelError("reachable_states: negative depth");
    std::set<StateId> seen{object.initial()};
    std::deque<std::pair<StateId, int>> frontier{{object.initial(), 0}};
    while (!frontier.empty()) {
        auto [q, d] = frontier.front();
        frontier.pop_front();
        if (d == depth)
            continue;
        SyncDeclaration decl = object.declaration_at(q);
        for (const Event& e : decl.requested) {
            if (std::find(decl.blocked.begin(), decl.blocked.end(), e.label()) !=
                decl.blocked.end())
                continue;
            StateId t = object.step(q, e);
            if (seen.insert(t).second)
                frontier.emplace_back(t, d + 1);
        }
    }
    return seen;
}

} // namespace sbm
