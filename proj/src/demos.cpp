#include "sbm/demos.hpp"

#include <random>

#include "sbm/guard.hpp"

namespace sbm {

namespace {

ScenarioObject three_shot(const std::string& name, const std::string& action)
{
    State wait;
    wait.name = "wait";
    wait.transitions.push_back({EventPattern::any("WaterLow"), 1, {}, {}});
    std::vector<State> states{std::move(wait)};
    for (int k = 1; k <= 3; ++k) {
        State st;
        st.name = "shot" + std::to_string(k);
        st.requested.push_back(Event(action));
        st.transitions.push_back({EventPattern::any(action), k < 3 ? k + 1 : 0, {}, {}});
        states.push_back(std::move(st));
    }
    return ScenarioObject(name, std::move(states), 0);
}

ScenarioObject interleaver()
{
    State hot_turn;
    hot_turn.name = "hot_turn";
    hot_turn.blocked.push_back("AddCold");
    hot_turn.transitions.push_back({EventPattern::any("AddHot"), 1, {}, {}});
    State cold_turn;
    cold_turn.name = "cold_turn";
    cold_turn.blocked.push_back("AddHot");
    cold_turn.transitions.push_back({EventPattern::any("AddCold"), 0, {}, {}});
    return ScenarioObject("interleave", {std::move(hot_turn), std::move(cold_turn)}, 0);
}

ScenarioObject environment()
{
    State low;
    low.name = "low";
    low.requested.push_back(Event("WaterLow"));
    low.transitions.push_back({EventPattern::any("WaterLow"), 0, {}, {}});
    return ScenarioObject("environment", {std::move(low)}, 0);
}

// Feeds whatever tuple the driver set last, forever.
class MutableSource : public SensorSource {
public:
    void set(std::vector<Value> tuple) { tuple_ = std::move(tuple); }
    const std::vector<Value>* peek() override { return &tuple_; }
    void pop() override {}

private:
    std::vector<Value> tuple_;
};

} // namespace

Model watertap_model()
{
    Model model;
    model.objects.push_back(
        {std::make_shared<ScenarioObject>(environment()), ObjectKind::Ordinary});
    model.objects.push_back(
        {std::make_shared<ScenarioObject>(three_shot("add_hot", "AddHot")),
         ObjectKind::Ordinary});
    model.objects.push_back(
        {std::make_shared<ScenarioObject>(three_shot("add_cold", "AddCold")),
         ObjectKind::Ordinary});
    model.objects.push_back(
        {std::make_shared<ScenarioObject>(interleaver()), ObjectKind::Ordinary});
    return model;
}

std::string demo_watertap_trace(int steps)
{
    ModelInstance instance(watertap_model());
    RunReason reason = run(instance, steps);
    return render_trace(instance.trace, reason);
}

namespace {

constexpr int kSlots = 5;

ControllerBinding scheduler_binding()
{
    // One linear layer, 6 inputs -> 6 scores. Score 0 (the pass action) is a
    // constant 1; score i tracks slot i's occupancy flag with a small
    // tie-breaking offset; score 5's offset makes slot five the top pick even
    // when the slot is empty.
    Layer layer;
    layer.in = kSlots + 1;
    layer.out = kSlots + 1;
    layer.activation = Activation::Linear;
    layer.weights.assign(static_cast<std::size_t>(layer.in) * layer.out, 0.0);
    layer.bias = {1.0, 0.1, 0.2, 0.3, 0.4, 3.0};
    for (int i = 1; i <= kSlots; ++i)
        layer.weights[static_cast<std::size_t>(i) * layer.in + i] = 2.0;
    return ControllerBinding(Network({layer}), "Tick",
                             {"y0", "y1", "y2", "y3", "y4", "y5"});
}

} // namespace

SchedulerReport demo_scheduler(std::uint64_t seed, int rounds)
{
    SchedulerReport report;
    report.rounds = rounds;

    for (int guarded = 0; guarded < 2; ++guarded) {
        ControllerBinding binding = scheduler_binding();
        auto source = std::make_shared<MutableSource>();
        Model model;
        model.objects.push_back(
            {std::make_shared<ScenarioObject>(controller_scenario(binding)),
             ObjectKind::Controller});
        if (guarded)
            model.objects.push_back(
                {std::make_shared<ScenarioObject>(job_exists_guard(kSlots, binding)),
                 ObjectKind::Ordinary});
        model.objects.push_back(
            {std::make_shared<ScenarioObject>(sensor_scenario("Tick", source)),
             ObjectKind::Sensor});
        model.controller = binding;

        ModelInstance instance(std::move(model));
        std::mt19937_64 arrivals(seed);
        std::bernoulli_distribution arrive(0.5);
        std::vector<bool> occupied(kSlots + 1, false);
        int invalid = 0;
        bool deadlock = false;

        for (int round = 0; round < rounds && !deadlock; ++round) {
            for (int i = 1; i <= kSlots; ++i)
                if (!occupied[static_cast<std::size_t>(i)] && arrive(arrivals))
                    occupied[static_cast<std::size_t>(i)] = true;
            int count = 0;
            std::vector<Value> tuple;
            tuple.push_back(0.0);
            for (int i = 1; i <= kSlots; ++i) {
                bool occ = occupied[static_cast<std::size_t>(i)];
                tuple.push_back(occ);
                count += occ ? 1 : 0;
            }
            tuple[0] = static_cast<double>(count) / kSlots;
            source->set(std::move(tuple));

            StepResult in = run_step(instance);
            if (in.kind != StepResult::Kind::Triggered) {
                deadlock = in.kind == StepResult::Kind::Deadlock;
                break;
            }
            StepResult out = run_step(instance);
            if (out.kind != StepResult::Kind::Triggered) {
                deadlock = out.kind == StepResult::Kind::Deadlock;
                break;
            }
            const std::string& label = out.event->label();
            if (label != "y0") {
                int slot = label[1] - '0';
                if (occupied[static_cast<std::size_t>(slot)])
                    occupied[static_cast<std::size_t>(slot)] = false;
                else
                    ++invalid;
            }
        }
        if (guarded) {
            report.invalid_guarded = invalid;
            report.deadlock_guarded = deadlock;
        } else {
            report.invalid_unguarded = invalid;
            report.deadlock_unguarded = deadlock;
        }
    }
    return report;
}

CongestionReport demo_congestion(int n, int rounds)
{
    // Score 0 ("KeepRate") is constant 1, score 1 ("IncreaseRate") constant 0,
    // so the controller never changes the rate on its own.
    Layer layer;
    layer.in = 1;
    layer.out = 2;
    layer.activation = Activation::Linear;
    layer.weights = {0.0, 0.0};
    layer.bias = {1.0, 0.0};
    ControllerBinding binding(Network({layer}), "Load", {"KeepRate", "IncreaseRate"});

    auto source = std::make_shared<MutableSource>();
    source->set({1.0});

    Model model;
    model.objects.push_back(
        {std::make_shared<ScenarioObject>(controller_scenario(binding)),
         ObjectKind::Controller});
    model.objects.push_back(
        {std::make_shared<ScenarioObject>(steady_state_guard(n, binding)),
         ObjectKind::Ordinary});
    model.objects.push_back(
        {std::make_shared<ScenarioObject>(sensor_scenario("Load", source)),
         ObjectKind::Sensor});
    model.controller = binding;

    ModelInstance instance(std::move(model));
    CongestionReport report;
    for (int round = 1; round <= rounds; ++round) {
        StepResult in = run_step(instance);
        StepResult out = run_step(instance);
        if (in.kind != StepResult::Kind::Triggered ||
            out.kind != StepResult::Kind::Triggered)
            break;
        report.picks.push_back(out.event->label());
        if (!report.first_forced_round && out.event->label() != "KeepRate")
            report.first_forced_round = round;
    }
    return report;
}

} // namespace sbm
