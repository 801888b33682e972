#include "sbm/events.hpp"

#include <cmath>
#include <cstdio>

namespace sbm {

std::string value_text(const Value& v)
{
    if (std::holds_alternative<bool>(v))
        return std::get<bool>(v) ? "true" : "false";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", std::get<double>(v));
    return buf;
}

bool value_truthy(const Value& v)
{
    if (std::holds_alternative<bool>(v))
        return std::get<bool>(v);
    return std::get<double>(v) != 0.0;
}

double value_number(const Value& v)
{
    if (std::holds_alternative<bool>(v))
        return std::get<bool>(v) ? 1.0 : 0.0;
    return std::get<double>(v);
}

bool value_less(const Value& a, const Value& b)
{
    if (a.index() != b.index())
        return a.index() < b.index();
    if (std::holds_alternative<bool>(a))
        return std::get<bool>(a) < std::get<bool>(b);
    return std::get<double>(a) < std::get<double>(b);
}

Event::Event(std::string label, std::vector<Value> values)
    : label_(std::move(label)), values_(std::move(values))
{
    if (label_.empty())
        throw ModelError("event label must be nonempty");
}

bool Event::operator==(const Event& other) const
{
    return label_ == other.label_ && values_ == other.values_;
}

bool Event::operator<(const Event& other) const
{
    if (label_ != other.label_)
        return label_ < other.label_;
    const std::size_t n = std::min(values_.size(), other.values_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (values_[i] != other.values_[i])
            return value_less(values_[i], other.values_[i]);
    }
    return values_.size() < other.values_.size();
}

std::string Event::text() const
{
    if (values_.empty())
        return label_;
    std::string out = label_;
    out += '(';
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i)
            out += ',';
        out += value_text(values_[i]);
    }
    out += ')';
    return out;
}

std::size_t EventHash::operator()(const Event& e) const
{
    std::size_t h = std::hash<std::string>{}(e.label());
    for (const Value& v : e.values()) {
        std::size_t hv = std::holds_alternative<bool>(v)
                             ? std::hash<bool>{}(std::get<bool>(v))
                             : std::hash<double>{}(std::get<double>(v));
        h ^= hv + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

EventPattern EventPattern::any(std::string label)
{
    EventPattern p;
    p.kind_ = Kind::Any;
    p.label_ = std::move(label);
    if (p.label_.empty())
        throw ModelError("pattern label must be nonempty");
    return p;
}

EventPattern EventPattern::exact(Event e)
{
    EventPattern p;
    p.kind_ = Kind::Exact;
    p.label_ = e.label();
    p.exact_ = e.values();
    return p;
}

EventPattern EventPattern::predicate(std::string label, ValuePredicate pred,
                                     std::string text,
                                     std::optional<std::size_t> arity)
{
    EventPattern p;
    p.kind_ = Kind::Predicate;
    p.label_ = std::move(label);
    p.pred_ = std::move(pred);
    p.pred_text_ = std::move(text);
    p.arity_ = arity;
    if (p.label_.empty())
        throw ModelError("pattern label must be nonempty");
    if (!p.pred_)
        throw ModelError("predicate pattern requires a predicate");
    return p;
}

bool EventPattern::matches(const Event& e) const
{
    if (e.label() != label_)
        return false;
    switch (kind_) {
    case Kind::Any:
        return true;
    case Kind::Exact:
        return e.values() == exact_;
    case Kind::Predicate:
        if (arity_ && e.values().size() != *arity_)
            throw ModelError("pattern '" + label_ + "' expects " +
                             std::to_string(*arity_) + " values, event has " +
                             std::to_string(e.values().size()));
        return pred_(std::span<const Value>(e.values()));
    }
    return false;
}

} // namespace sbm
