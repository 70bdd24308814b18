#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "procmine/errors.hpp"
#include "procmine/timeutil.hpp"

namespace procmine {

enum class AttrKind { Text, Integer, Real, Boolean, Time };

// Kinds mirror the XES attribute tags: string, int, float, boolean, date.
using AttributeValue = std::variant<std::string, std::int64_t, double, bool, Timestamp>;

inline AttrKind kind_of(const AttributeValue& v) {
    switch (v.index()) {
        case 0: return AttrKind::Text;
        case 1: return AttrKind::Integer;
        case 2: return AttrKind::Real;
        case 3: return AttrKind::Boolean;
        default: return AttrKind::Time;
    }
}

inline const char* kind_name(AttrKind k) {
    switch (k) {
        case AttrKind::Text: return "string";
        case AttrKind::Integer: return "int";
        case AttrKind::Real: return "float";
        case AttrKind::Boolean: return "boolean";
        default: return "date";
    }
}

inline std::string attribute_to_string(const AttributeValue& v) {
    switch (kind_of(v)) {
        case AttrKind::Text: return std::get<std::string>(v);
        case AttrKind::Integer: return std::to_string(std::get<std::int64_t>(v));
        case AttrKind::Real: {
            std::ostringstream os;
            os.precision(17);
            os << std::get<double>(v);
            return os.str();
        }
        case AttrKind::Boolean: return std::get<bool>(v) ? "true" : "false";
        default: return format_iso8601(std::get<Timestamp>(v));
    }
}

struct Event {
    std::string activity;
    Timestamp timestamp;
    std::map<std::string, AttributeValue> attributes;

    bool operator==(const Event&) const = default;
};

struct Trace {
    std::string case_id;
    std::vector<Event> events;

    bool empty() const { return events.empty(); }
    std::size_t size() const { return events.size(); }

    bool operator==(const Trace&) const = default;
};

struct EventLog {
    std::vector<Trace> traces;
    std::map<std::string, std::string> metadata;

    std::set<std::string> alphabet() const {
        std::set<std::string> labels;
        for (const auto& t : traces)
            for (const auto& e : t.events) labels.insert(e.activity);
        return labels;
    }

    std::size_t event_count() const {
        std::size_t n = 0;
        for (const auto& t : traces) n += t.events.size();
        return n;
    }
};

inline std::vector<std::string> signature(const Trace& t) {
    std::vector<std::string> s;
    s.reserve(t.events.size());
    for (const auto& e : t.events) s.push_back(e.activity);
    return s;
}

// Stable: equal timestamps keep their original record order.
inline void sort_trace_events(Trace& t) {
    std::stable_sort(t.events.begin(), t.events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
}

// Checks the log contracts shared by all ingestion paths: non-empty activity
// labels, unique case ids, one value kind per attribute key across the log.
inline void validate_log(const EventLog& log) {
    std::set<std::string> seen_ids;
    std::map<std::string, AttrKind> kinds;
    for (const auto& trace : log.traces) {
        if (!seen_ids.insert(trace.case_id).second)
            throw IngestionError("duplicate case id '" + trace.case_id + "'");
        for (const auto& event : trace.events) {
            if (event.activity.empty())
                throw IngestionError("empty activity label in trace '" + trace.case_id + "'");
            for (const auto& [key, value] : event.attributes) {
                AttrKind k = kind_of(value);
                auto [it, inserted] = kinds.emplace(key, k);
                if (!inserted && it->second != k)
                    throw IngestionError("attribute '" + key + "' has mixed kinds: " +
                                         kind_name(it->second) + " vs " + kind_name(k) +
                                         " (trace '" + trace.case_id + "')");
            }
        }
    }
}

// Removes events whose activity is not in `keep`; empty traces are retained.
inline EventLog project(const EventLog& log, const std::set<std::string>& keep) {
    EventLog out;
    out.metadata = log.metadata;
    out.traces.reserve(log.traces.size());
    for (const auto& trace : log.traces) {
        Trace t;
        t.case_id = trace.case_id;
        for (const auto& event : trace.events)
            if (keep.count(event.activity)) t.events.push_back(event);
        out.traces.push_back(std::move(t));
    }
    return out;
}

template <typename Predicate>
inline EventLog filter_cases(const EventLog& log, Predicate pred) {
    EventLog out;
    out.metadata = log.metadata;
    for (const auto& trace : log.traces)
        if (pred(trace)) out.traces.push_back(trace);
    return out;
}

inline EventLog rename_activities(const EventLog& log,
                                  const std::map<std::string, std::string>& renames) {
    EventLog out = log;
    for (auto& trace : out.traces)
        for (auto& event : trace.events) {
            auto it = renames.find(event.activity);
            if (it != renames.end()) event.activity = it->second;
        }
    return out;
}

struct FillReport {
    EventLog log;
    // key -> case ids left untouched because no event of the case carries the key
    std::map<std::string, std::vector<std::string>> untouched;
};

// Per trace and per key: carry the last seen value forward, then fill the
// leading gap backward from the first carrier. Traces without any value for a
// key are reported, not touched.
inline FillReport fill_missing(const EventLog& log, const std::set<std::string>& keys) {
    FillReport report;
    report.log = log;
    for (auto& trace : report.log.traces) {
        for (const auto& key : keys) {
            std::ptrdiff_t first_carrier = -1;
            for (std::size_t i = 0; i < trace.events.size(); ++i) {
                if (trace.events[i].attributes.count(key)) {
                    first_carrier = static_cast<std::ptrdiff_t>(i);
                    break;
                }
            }
            if (first_carrier < 0) {
                report.untouched[key].push_back(trace.case_id);
                continue;
            }
            const AttributeValue* current =
                &trace.events[static_cast<std::size_t>(first_carrier)].attributes.at(key);
            for (std::size_t i = 0; i < trace.events.size(); ++i) {
                auto& attrs = trace.events[i].attributes;
                auto it = attrs.find(key);
                if (it != attrs.end())
                    current = &it->second;
                else
                    attrs.emplace(key, *current);
            }
        }
    }
    return report;
}

}  // namespace procmine
