#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sbm/events.hpp"

using namespace sbm;

TEST_CASE("value helpers")
{
    CHECK(value_text(Value(2.0)) == "2");
    CHECK(value_text(Value(0.5)) == "0.5");
    CHECK(value_text(Value(true)) == "true");
    CHECK(value_text(Value(false)) == "false");

    CHECK(value_truthy(Value(true)));
    CHECK_FALSE(value_truthy(Value(false)));
    CHECK(value_truthy(Value(1.0)));
    CHECK_FALSE(value_truthy(Value(0.0)));

    CHECK(value_number(Value(2.5)) == 2.5);
    CHECK(value_number(Value(true)) == 1.0);
    CHECK(value_number(Value(false)) == 0.0);

    CHECK(value_less(Value(1.0), Value(2.0)));
    CHECK_FALSE(value_less(Value(2.0), Value(1.0)));
    CHECK_FALSE(value_less(Value(1.0), Value(1.0)));
}

TEST_CASE("event identity and text")
{
    Event a("x", {Value(2.0), Value(1.0)});
    Event b("x", {Value(2.0), Value(1.0)});
    Event c("x", {Value(2.0), Value(1.5)});
    Event plain("y1");

    CHECK(a == b);
    CHECK(a != c);
    CHECK(a != plain);
    CHECK(a.text() == "x(2,1)");
    CHECK(plain.text() == "y1");

    // boolean 1 and numeric 1 are different values
    Event num("f", {Value(1.0)});
    Event flag("f", {Value(true)});
    CHECK(num != flag);

    CHECK(EventHash{}(a) == EventHash{}(b));
}

TEST_CASE("event ordering is total and consistent")
{
    std::vector<Event> events{Event("b"), Event("a", {Value(1.0)}), Event("a"),
                              Event("a", {Value(0.5)})};
    std::sort(events.begin(), events.end());
    CHECK(events[0].label() == "a");
    CHECK(events[3].label() == "b");
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
        CHECK(events[i] < events[i + 1]);
        CHECK_FALSE(events[i + 1] < events[i]);
    }
}

TEST_CASE("patterns")
{
    Event e("x", {Value(2.0), Value(1.0)});

    CHECK(EventPattern::any("x").matches(e));
    CHECK_FALSE(EventPattern::any("y").matches(e));

    CHECK(EventPattern::exact(e).matches(e));
    CHECK_FALSE(EventPattern::exact(Event("x", {Value(2.0), Value(2.0)})).matches(e));
    CHECK_FALSE(EventPattern::exact(Event("x")).matches(e));

    auto first_positive = [](std::span<const Value> v) {
        return !v.empty() && value_number(v[0]) > 0;
    };
    EventPattern p = EventPattern::predicate("x", first_positive, "v0 > 0", 2);
    CHECK(p.matches(e));
    CHECK_FALSE(p.matches(Event("x", {Value(-1.0), Value(0.0)})));
    CHECK(p.predicate_text() == "v0 > 0");
    // arity-checked pattern rejects mismatched tuples loudly
    CHECK_THROWS_AS(p.matches(Event("x", {Value(1.0)})), ModelError);
}
