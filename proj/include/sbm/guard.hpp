#ifndef SBM_GUARD_HPP
#define SBM_GUARD_HPP

#include <memory>
#include <string>

#include "sbm/engine.hpp"
#include "sbm/events.hpp"
#include "sbm/scenario.hpp"

namespace sbm {

// An override rule: force `action` whenever the input predicate holds for the
// round's input values and the output predicate holds for the raw network
// scores.
struct OverrideRule {
    ValuePredicate input_pred;
    std::function<bool(std::span<const double>)> output_pred; // over raw outputs
    bool output_pred_trivial = true; // true when output_pred is constant-true
    std::string action;
    std::string name = "override";
};

struct LivenessSpec {
    std::string target;
    int consecutive = 1;      // deterministic mode: block after this many rounds
    double probability = 0.0; // probabilistic mode: per-round block probability
    bool probabilistic = false;
};

// The two-state controller wrapper: wait for the input event, then request
// every output event (ranked by the engine's last evaluation) while blocking
// everything else.
ScenarioObject controller_scenario(const ControllerBinding& binding);

// The single scenario allowed to request input events; requests the source's
// next tuple until it is exhausted.
ScenarioObject sensor_scenario(const std::string& input_label,
                               std::shared_ptr<SensorSource> source);

// Compiles an override rule into a guard scenario: when the input predicate
// holds at the input phase and the output predicate holds on the raw scores at
// the output phase, every output label except the rule's action is blocked for
// that round.
ScenarioObject compile_override_rule(const OverrideRule& rule,
                                     const ControllerBinding& binding);

// Blocks the target output for one round after `consecutive` rounds in a row
// selected it; the counter resets on any other output and after the forced
// round.
ScenarioObject liveness_guard(const LivenessSpec& spec, const ControllerBinding& binding);

// Each round, independently with the spec's probability, blocks the target
// output for that round.
ScenarioObject probabilistic_liveness_guard(const LivenessSpec& spec);

// Blocks output i (1-based) whenever the round's input marks queue slot i
// empty; never blocks output 0, the pass action.
ScenarioObject job_exists_guard(int slots, const ControllerBinding& binding);

// After n rounds with identical input events and identical output events,
// blocks that output for the next round, then restarts tracking.
ScenarioObject steady_state_guard(int n, const ControllerBinding& binding);

} // namespace sbm

#endif
