#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "sbm/demos.hpp"
#include "sbm/scenario.hpp"

using namespace sbm;

namespace {

State simple_state(std::string name, std::vector<std::string> requests,
                   std::vector<std::pair<std::string, StateId>> transitions)
{
    State st;
    st.name = std::move(name);
    for (std::string& r : requests)
        st.requested.push_back(Event(std::move(r)));
    for (auto& [label, target] : transitions)
        st.transitions.push_back({EventPattern::any(label), target, {}, {}});
    return st;
}

std::vector<ScenarioObject> watertap_objects()
{
    std::vector<ScenarioObject> objects;
    for (const ModelObject& mo : watertap_model().objects)
        objects.push_back(*mo.object);
    return objects;
}

} // namespace

TEST_CASE("construction validation")
{
    CHECK_THROWS_AS(ScenarioObject("empty", {}), ModelError);

    CHECK_THROWS_AS(ScenarioObject("bad-initial", {simple_state("s", {}, {})}, 3),
                    ModelError);

    // requested event without a reacting transition
    CHECK_THROWS_AS(ScenarioObject("no-react", {simple_state("s", {"a"}, {})}),
                    ModelError);

    // out-of-range transition target
    CHECK_THROWS_AS(ScenarioObject("bad-target", {simple_state("s", {}, {{"a", 7}})}),
                    ModelError);

    // two unconditional transitions on the same label
    CHECK_THROWS_AS(
        ScenarioObject("nondet", {simple_state("s", {}, {{"a", 0}, {"a", 0}})}),
        ModelError);
}

TEST_CASE("step and declaration_at")
{
    ScenarioObject o("toggle",
                     {simple_state("off", {"flip"}, {{"flip", 1}}),
                      simple_state("on", {"flip"}, {{"flip", 0}, {"kill", 1}})});

    CHECK(o.step(0, Event("flip")) == 1);
    CHECK(o.step(1, Event("flip")) == 0);
    CHECK(o.step(0, Event("unknown")) == 0); // implicit self-loop
    CHECK(o.step(0, Event("kill")) == 0);

    SyncDeclaration d = o.declaration_at(1);
    CHECK(d.requested == std::vector<Event>{Event("flip")});
    // the kill transition is waited-for, the flip transition covers the request
    REQUIRE(d.waited.size() == 1);
    CHECK(d.waited[0].label() == "kill");

    // an exact and an any pattern on one label conflict at runtime
    State amb;
    amb.name = "s";
    amb.transitions.push_back({EventPattern::exact(Event("e", {Value(1.0)})), 0, {}, {}});
    amb.transitions.push_back(
        {EventPattern::predicate("e", [](std::span<const Value>) { return true; }), 0,
         {},
         {}});
    ScenarioObject runtime_amb("amb", {amb});
    CHECK_THROWS_AS(runtime_amb.step(0, Event("e", {Value(1.0)})), ModelError);
    CHECK(runtime_amb.step(0, Event("e", {Value(2.0)})) == 0);
}

TEST_CASE("concrete alphabet")
{
    ScenarioObject o("toggle",
                     {simple_state("off", {"flip"}, {{"flip", 1}}),
                      simple_state("on", {"flip"}, {{"flip", 0}, {"kill", 1}})});
    std::vector<Event> alphabet = concrete_alphabet(o);
    CHECK(alphabet == std::vector<Event>{Event("flip"), Event("kill")});
}

TEST_CASE("compose unions requests and blocks")
{
    std::vector<ScenarioObject> taps = watertap_objects();
    // hot scenario after WaterLow requests AddHot; interleaver blocks per turn
    ScenarioObject product = compose(taps[1], taps[3]);
    StateId q = product.step(product.initial(), Event("WaterLow"));
    SyncDeclaration d = product.declaration_at(q);
    CHECK(d.requested == std::vector<Event>{Event("AddHot")});
    CHECK(d.blocked == std::vector<std::string>{"AddCold"});
}

TEST_CASE("composing a requester with a blocker keeps the event disabled")
{
    ScenarioObject requester("req", {simple_state("s", {"a"}, {{"a", 0}})});
    State blocker_state = simple_state("t", {}, {});
    blocker_state.blocked.push_back("a");
    ScenarioObject blocker("blk", {blocker_state});
    ScenarioObject product = compose(requester, blocker);
    SyncDeclaration d = product.declaration_at(product.initial());
    CHECK(d.requested == std::vector<Event>{Event("a")});
    CHECK(d.blocked == std::vector<std::string>{"a"});
    CHECK(reachable_states(product, 5) == std::set<StateId>{product.initial()});
}

TEST_CASE("water-tap composite reachability")
{
    std::vector<ScenarioObject> taps = watertap_objects();
    ScenarioObject composite = compose_all(taps);
    // the lexicographic cycle visits 7 states; exploration of every enabled
    // event also reaches the early-WaterLow restarts, 9 states within depth 8
    CHECK(reachable_states(composite, 8).size() == 9);
    // the closure adds one more state at depth 9 and then stabilizes
    CHECK(reachable_states(composite, 9).size() == 10);
    CHECK(reachable_states(composite, 50).size() == 10);
}

TEST_CASE("composition trace sets agree with the engine")
{
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<ScenarioObject> objects = fx::random_static_objects(rng);
        ScenarioObject composite = compose_all(objects);
        CHECK(fx::engine_trace_set(fx::model_of(objects), 5) ==
              fx::composite_trace_set(composite, 5));
    }
}

TEST_CASE("composition is associative on trace sets")
{
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<std::string> labels{"a", "b", "c"};
        ScenarioObject a = fx::random_static_object(rng, 0, labels);
        ScenarioObject b = fx::random_static_object(rng, 1, labels);
        ScenarioObject c = fx::random_static_object(rng, 2, labels);
        ScenarioObject left = compose(compose(a, b), c);
        ScenarioObject right = compose(a, compose(b, c));
        CHECK(fx::composite_trace_set(left, 6) == fx::composite_trace_set(right, 6));
    }
}

TEST_CASE("compose rejects non-static objects")
{
    State st;
    st.name = "s";
    st.dynamic = [](const SyncContext&, SyncDeclaration&) {};
    ScenarioObject hooked("hooked", {st});
    ScenarioObject plain("plain", {simple_state("s", {}, {})});
    CHECK_FALSE(hooked.is_static());
    CHECK(plain.is_static());
    CHECK_THROWS_AS(compose(hooked, plain), ModelError);
}
