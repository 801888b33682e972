#ifndef SBM_VERIFY_HPP
#define SBM_VERIFY_HPP

#include <string>
#include <vector>

#include "sbm/engine.hpp"

namespace sbm {

// The finite set of controller input valuations verification ranges over.
struct InputAlphabet {
    std::vector<std::vector<Value>> entries;
};

enum class VerifyMode { Concrete, Blackbox };

struct Verdict {
    bool safe = true;
    int depth = 0;                // the bound a safe verdict holds for
    std::vector<Event> inputs;    // counterexample input sequence
    std::vector<Event> trace;     // events leading to the deadlock
    int deadlock_step = 0;        // 1-based step at which the deadlock occurs
};

struct ExplorationStats {
    std::size_t states_visited = 0;
    std::size_t frontier_max = 0;
    int depth_reached = 0;
};

// Breadth-first search over product configurations (all objects' states,
// their event memory, and the pending controller input). Concrete mode
// resolves the controller by the actual network ranking; blackbox mode treats
// every unblocked output as possible. Returns the shortest counterexample in
// BFS order, ties broken by alphabet order.
Verdict check_deadlock_freedom(const Model& model, const InputAlphabet& alphabet,
                               VerifyMode mode, int depth);

ExplorationStats explore(const Model& model, const InputAlphabet& alphabet,
                         VerifyMode mode, int depth);

struct ReplayResult {
    std::vector<Event> trace;
    RunReason reason = RunReason::Quiescent;
    int deadlock_step = 0;
};

// Drives the model with a sensor built from `inputs` (replacing any sensor the
// model already has) and runs it to completion.
ReplayResult replay(const Model& model, const std::vector<std::vector<Value>>& inputs);

// One input tuple per line, then the replayed trace, then `#deadlock at step <k>`.
std::string render_counterexample(const Verdict& verdict);

} // namespace sbm

#endif
