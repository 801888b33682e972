#ifndef SBM_SCENARIO_HPP
#define SBM_SCENARIO_HPP

#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sbm/events.hpp"

namespace sbm {

struct Evaluation; // dnn.hpp

using StateId = int;

// What the engine hands a scenario object at a synchronization point.
// Guard scenarios read the current round's controller input and raw network
// outputs from here; `memory` is the object's own stored events and `draw`
// yields a fresh U[0,1) sample from the run's seeded stream.
struct SyncContext {
    const Event* last_input = nullptr;
    const Evaluation* last_eval = nullptr;
    std::span<const Event> memory;
    std::function<double()> draw;
};

// The requested / waited-for / blocked declaration of one object at one
// synchronization point. `block_others` blocks every event whose label is not
// among this declaration's own requests.
struct SyncDeclaration {
    std::vector<Event> requested;       // ordered; order matters for ranking
    std::vector<EventPattern> waited;   // transition patterns not covered by requests
    std::vector<std::string> blocked;   // labels
    bool block_others = false;
};

struct Transition {
    EventPattern pattern;
    StateId target = 0;
    // Extra condition consulted after the pattern matches (may read memory).
    std::function<bool(const Event&, const SyncContext&)> when;
    // Memory update applied when this transition fires.
    std::function<void(const Event&, std::vector<Event>&)> update;
};

struct State {
    std::string name;
    std::vector<Event> requested;
    std::vector<std::string> blocked;
    bool block_others = false;
    std::vector<Transition> transitions;
    // Optional hook that rewrites the declaration from the sync context.
    std::function<void(const SyncContext&, SyncDeclaration&)> dynamic;
};

// A scenario object: states with per-state sync declarations and a
// deterministic, self-loop-completed transition relation. Immutable after
// construction; all run-time mutation (current state, memory) lives in the
// engine.
class ScenarioObject {
public:
    ScenarioObject(std::string name, std::vector<State> states, StateId initial = 0);

    const std::string& name() const { return name_; }
    StateId initial() const { return initial_; }
    std::size_t state_count() const { return states_.size(); }
    const State& state(StateId q) const;

    SyncDeclaration declaration_at(StateId q, const SyncContext& ctx = {}) const;

    // Target state for `e` at `q`; missing entries self-loop. Throws if two
    // transitions match the same concrete event.
    StateId step(StateId q, const Event& e, const SyncContext& ctx = {}) const;
    StateId step(StateId q, const Event& e, const SyncContext& ctx,
                 std::vector<Event>& memory) const;

    // True when the object has no hooks, guards or memory updates, i.e. it is
    // a plain finite transition system usable by compose().
    bool is_static() const;

private:
    void validate() const;

    std::string name_;
    std::vector<State> states_;
    StateId initial_ = 0;
};

using ScenarioObjectPtr = std::shared_ptr<const ScenarioObject>;

// Product composition of two static objects: product states, componentwise
// transitions over the shared concrete alphabet, unioned request/block sets.
ScenarioObject compose(const ScenarioObject& a, const ScenarioObject& b);

// Left fold of compose over a nonempty list.
ScenarioObject compose_all(std::span<const ScenarioObject> objects);

// States reachable from the initial state within `depth` steps, following
// every requested-and-unblocked event.
std::set<StateId> reachable_states(const ScenarioObject& object, int depth);

// Concrete event alphabet of a static object: every requested event plus a
// plain event per transition-pattern label not otherwise covered.
std::vector<Event> concrete_alphabet(const ScenarioObject& object);

} // namespace sbm

#endif
