#ifndef SBM_DEMOS_HPP
#define SBM_DEMOS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sbm/engine.hpp"

namespace sbm {

// The three-scenario water-tap model: one environment object requesting
// WaterLow, two three-shot fill scenarios and the hot/cold interleaver.
Model watertap_model();

// Runs the water-tap model lexicographically for `steps` events and renders
// the trace.
std::string demo_watertap_trace(int steps);

struct SchedulerReport {
    int rounds = 0;
    int invalid_unguarded = 0; // picks of a slot action while the slot is empty
    int invalid_guarded = 0;
    bool deadlock_unguarded = false;
    bool deadlock_guarded = false;
};

// A five-slot job scheduler driven by a controller whose network prefers slot
// five unconditionally; compares the raw controller against the same
// controller wrapped with a slot-occupancy guard. Arrivals are drawn from a
// separate stream seeded with `seed`.
SchedulerReport demo_scheduler(std::uint64_t seed, int rounds);

struct CongestionReport {
    std::vector<std::string> picks; // chosen output per round
    int first_forced_round = 0;     // 1-based round of the first non-default pick
};

// A rate controller that always keeps the current rate; a steady-state guard
// with window `n` forces a change after n identical rounds.
CongestionReport demo_congestion(int n, int rounds);

} // namespace sbm

#endif
