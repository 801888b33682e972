#ifndef SBM_ENGINE_HPP
#define SBM_ENGINE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "sbm/dnn.hpp"
#include "sbm/events.hpp"
#include "sbm/scenario.hpp"

namespace sbm {

// Ties a network to the event vocabulary: one input label whose values feed
// the network, and one output label per output neuron.
struct ControllerBinding {
    Network network;
    std::string input_label;
    std::vector<std::string> output_labels;

    ControllerBinding(Network net, std::string input, std::vector<std::string> outputs);
    bool is_output(const std::string& label) const;
};

enum class ObjectKind { Ordinary, Sensor, Controller };

struct ModelObject {
    ScenarioObjectPtr object;
    ObjectKind kind = ObjectKind::Ordinary;
};

struct Model {
    std::vector<ModelObject> objects;
    std::optional<ControllerBinding> controller;
};

enum class Strategy { Lexicographic, SeededRandom };

struct StepResult {
    enum class Kind { Triggered, Deadlock, Quiescent };
    Kind kind = Kind::Quiescent;
    std::optional<Event> event;
};

enum class RunReason { Deadlock, Quiescent, Budget };

// One executable instance of a model: current state ids, per-object event
// memory, the trace, and the seeded random stream. Single-threaded during a
// run; the shared objects and network stay read-only.
struct ModelInstance {
    Model model;
    Strategy strategy = Strategy::Lexicographic;
    std::mt19937_64 rng;

    std::vector<StateId> current;
    std::vector<std::vector<Event>> memory;
    std::vector<Event> trace;
    std::optional<Event> last_input;
    std::optional<Evaluation> last_eval;

    // Called once per triggered/deadlocked step with the gathered declarations.
    std::function<void(const std::vector<SyncDeclaration>&, const StepResult&)> observer;

    explicit ModelInstance(Model m, std::uint64_t seed = 0,
                           Strategy strat = Strategy::Lexicographic);
};

// Declarations of all objects at the current synchronization point. Consumes
// random draws for probabilistic guards, so call at most once per step;
// run_step does its own gathering.
std::vector<SyncDeclaration> gather_declarations(ModelInstance& instance);

// Requested events that no declaration blocks.
std::vector<Event> enabled_events(const std::vector<SyncDeclaration>& declarations);

// Controller ranking for the current step, when an evaluation is pending:
// output events ordered by descending score.
std::optional<std::vector<Event>> current_ranking(const ModelInstance& instance);

// Picks the highest-ranked enabled event when a ranking applies, otherwise
// applies the strategy; nullopt iff `enabled` is empty.
std::optional<Event> select_event(const std::vector<Event>& enabled,
                                  const std::optional<std::vector<Event>>& ranking,
                                  Strategy strategy, std::mt19937_64& rng);

// Advances every object on `event` and updates the controller round state.
void apply_event(ModelInstance& instance, const Event& event);

StepResult run_step(ModelInstance& instance);

RunReason run(ModelInstance& instance, int max_steps);

// Trace text: one event per line plus a final `#end:` line.
std::string render_trace(const std::vector<Event>& trace, RunReason reason);

const char* reason_name(RunReason reason);

// A mutable input feed for sensor scenarios. The sensor requests peek() until
// the input event actually fires, then pop()s it.
class SensorSource {
public:
    virtual ~SensorSource() = default;
    virtual const std::vector<Value>* peek() = 0;
    virtual void pop() = 0;
};

class ListSource : public SensorSource {
public:
    explicit ListSource(std::vector<std::vector<Value>> inputs)
        : inputs_(std::move(inputs)) {}
    const std::vector<Value>* peek() override
    {
        return pos_ < inputs_.size() ? &inputs_[pos_] : nullptr;
    }
    void pop() override { ++pos_; }

private:
    std::vector<std::vector<Value>> inputs_;
    std::size_t pos_ = 0;
};

} // namespace sbm

#endif
