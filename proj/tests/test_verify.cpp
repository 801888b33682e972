#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "sbm/demos.hpp"
#include "sbm/guard.hpp"
#include "sbm/verify.hpp"

using namespace sbm;

namespace {

Model guarded_model(bool with_rule, bool with_liveness)
{
    ControllerBinding binding = fx::running_example_binding();
    Model model;
    model.objects.push_back(
        {std::make_shared<ScenarioObject>(controller_scenario(binding)),
         ObjectKind::Controller});
    if (with_rule)
        model.objects.push_back(
            {std::make_shared<ScenarioObject>(
                 compile_override_rule(fx::force_y2_rule(), binding)),
             ObjectKind::Ordinary});
    if (with_liveness)
        model.objects.push_back(
            {std::make_shared<ScenarioObject>(
                 liveness_guard({"y2", 3, 0.0, false}, binding)),
             ObjectKind::Ordinary});
    model.controller = binding;
    return model;
}

InputAlphabet paper_alphabet()
{
    return InputAlphabet{{{Value(2.0), Value(1.0)},
                          {Value(1.0), Value(0.0)},
                          {Value(0.0), Value(1.0)}}};
}

} // namespace

TEST_CASE("conflicting guards: counterexample found, replay confirms")
{
    Model model = guarded_model(true, true);
    for (VerifyMode mode : {VerifyMode::Blackbox, VerifyMode::Concrete}) {
        Verdict verdict = check_deadlock_freedom(model, paper_alphabet(), mode, 10);
        REQUIRE_FALSE(verdict.safe);
        CHECK(verdict.deadlock_step == 8);
        REQUIRE(verdict.inputs.size() == 4);
        for (const Event& e : verdict.inputs)
            CHECK(e.text() == "x(2,1)");
        CHECK(verdict.trace.size() == 7);

        std::vector<std::vector<Value>> inputs;
        for (const Event& e : verdict.inputs)
            inputs.push_back(e.values());
        ReplayResult replayed = replay(model, inputs);
        CHECK(replayed.reason == RunReason::Deadlock);
        CHECK(replayed.deadlock_step == 8);
        for (std::size_t i = 0; i < verdict.trace.size(); ++i)
            CHECK(replayed.trace[i] == verdict.trace[i]);
    }
}

TEST_CASE("each single guard alone is deadlock-free")
{
    for (VerifyMode mode : {VerifyMode::Blackbox, VerifyMode::Concrete}) {
        CHECK(check_deadlock_freedom(guarded_model(true, false), paper_alphabet(), mode,
                                     10)
                  .safe);
        CHECK(check_deadlock_freedom(guarded_model(false, true), paper_alphabet(), mode,
                                     10)
                  .safe);
        CHECK(check_deadlock_freedom(guarded_model(false, false), paper_alphabet(), mode,
                                     10)
                  .safe);
    }
}

TEST_CASE("counterexample rendering")
{
    Verdict verdict =
        check_deadlock_freedom(guarded_model(true, true), paper_alphabet(),
                               VerifyMode::Blackbox, 10);
    CHECK(render_counterexample(verdict) ==
          "2,1\n2,1\n2,1\n2,1\n"
          "x(2,1)\ny2\nx(2,1)\ny2\nx(2,1)\ny2\nx(2,1)\n"
          "#deadlock at step 8\n");
}

TEST_CASE("blackbox verdicts dominate concrete ones")
{
    // anything safe under blackbox is safe under concrete: the concrete
    // successor relation is a restriction of the blackbox one
    for (int depth : {4, 8}) {
        for (bool rule : {false, true}) {
            for (bool live : {false, true}) {
                Model model = guarded_model(rule, live);
                Verdict dark = check_deadlock_freedom(model, paper_alphabet(),
                                                      VerifyMode::Blackbox, depth);
                Verdict real = check_deadlock_freedom(model, paper_alphabet(),
                                                      VerifyMode::Concrete, depth);
                if (dark.safe)
                    CHECK(real.safe);
            }
        }
    }
}

TEST_CASE("depth validation and budget semantics")
{
    Model model = guarded_model(true, true);
    CHECK_THROWS_AS(check_deadlock_freedom(model, paper_alphabet(),
                                           VerifyMode::Blackbox, 0),
                    ModelError);
    // the deadlock needs 7 triggered events; searching to depth 6 misses it
    CHECK(check_deadlock_freedom(model, paper_alphabet(), VerifyMode::Blackbox, 6).safe);
    CHECK_FALSE(
        check_deadlock_freedom(model, paper_alphabet(), VerifyMode::Blackbox, 7).safe);
}

TEST_CASE("exploration stats: water-tap dual route")
{
    Model model = watertap_model();
    ExplorationStats stats = explore(model, {}, VerifyMode::Concrete, 8);
    CHECK(stats.states_visited == 9);

    std::vector<ScenarioObject> objects;
    for (const ModelObject& mo : model.objects)
        objects.push_back(*mo.object);
    CHECK(reachable_states(compose_all(objects), 8).size() == 9);

    // both routes agree on the fixpoint as well
    CHECK(explore(model, {}, VerifyMode::Concrete, 50).states_visited == 10);
    CHECK(reachable_states(compose_all(objects), 50).size() == 10);

    ExplorationStats shallow = explore(model, {}, VerifyMode::Concrete, 3);
    CHECK(shallow.states_visited == 4); // initial plus one new state per level
    CHECK(shallow.depth_reached == 3);
}

TEST_CASE("replay input validation")
{
    Model model = guarded_model(true, true);
    CHECK_THROWS_AS(replay(model, {}), ModelError);
    CHECK_THROWS_AS(replay(fx::model_of({}), {{Value(1.0)}}), ModelError);

    // a replayed safe sequence just runs out of inputs
    ReplayResult r = replay(model, {{Value(0.0), Value(1.0)}, {Value(1.0), Value(0.0)}});
    CHECK(r.reason == RunReason::Quiescent);
    REQUIRE(r.trace.size() == 4);
    CHECK(r.trace[1].label() == "y2");
    CHECK(r.trace[3].label() == "y2"); // the rule forces y2 on (1,0)
}

TEST_CASE("fuzz: replay deadlocks are always found by verification")
{
    Model model = guarded_model(true, true);
    std::vector<std::vector<Value>> pool = paper_alphabet().entries;
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> len(1, 5);

    int deadlocks = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<std::vector<Value>> inputs;
        int n = len(rng);
        for (int i = 0; i < n; ++i)
            inputs.push_back(pool[pick(rng)]);
        ReplayResult r = replay(model, inputs);
        if (r.reason != RunReason::Deadlock)
            continue;
        ++deadlocks;
        Verdict verdict = check_deadlock_freedom(
            model, paper_alphabet(), VerifyMode::Concrete,
            static_cast<int>(r.trace.size()));
        CHECK_FALSE(verdict.safe);
        CHECK(verdict.deadlock_step <= r.deadlock_step);
    }
    CHECK(deadlocks > 0); // the fuzz corpus actually exercises the conflict
}
