#ifndef SBM_EVENTS_HPP
#define SBM_EVENTS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sbm {

// Base class for all model-level errors raised by this library.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A scalar carried by a valued event: a 64-bit real or a boolean.
using Value = std::variant<double, bool>;

std::string value_text(const Value& v);
bool value_truthy(const Value& v);
double value_number(const Value& v);
bool value_less(const Value& a, const Value& b);

// An event: a label plus an ordered (possibly empty) tuple of values.
// Events are immutable; equality is label equality plus exact element-wise
// value equality (values are produced, never computed, so no tolerance).
class Event {
public:
    Event() = default;
    explicit Event(std::string label, std::vector<Value> values = {});

    const std::string& label() const { return label_; }
    const std::vector<Value>& values() const { return values_; }

    bool operator==(const Event& other) const;
    bool operator!=(const Event& other) const { return !(*this == other); }
    bool operator<(const Event& other) const;

    // Trace text form: `label` or `label(v1,v2,...)`.
    std::string text() const;

private:
    std::string label_;
    std::vector<Value> values_;
};

struct EventHash {
    std::size_t operator()(const Event& e) const;
};

// A predicate over an event's value tuple.
using ValuePredicate = std::function<bool(std::span<const Value>)>;

// Matches events by label, optionally refined by an exact value tuple or a
// predicate over the values.
class EventPattern {
public:
    enum class Kind { Any, Exact, Predicate };

    static EventPattern any(std::string label);
    static EventPattern exact(Event e);
    static EventPattern predicate(std::string label, ValuePredicate pred,
                                  std::string text = {},
                                  std::optional<std::size_t> arity = {});

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    const std::vector<Value>& exact_values() const { return exact_; }
    const std::string& predicate_text() const { return pred_text_; }

    bool matches(const Event& e) const;

private:
    Kind kind_ = Kind::Any;
    std::string label_;
    std::vector<Value> exact_;
    ValuePredicate pred_;
    std::string pred_text_;
    std::optional<std::size_t> arity_;
};

inline bool matches(const EventPattern& p, const Event& e) { return p.matches(e); }

} // namespace sbm

#endif
