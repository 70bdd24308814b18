#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "procmine/eventlog.hpp"
#include "procmine/xml.hpp"

namespace procmine {

namespace detail {

inline std::int64_t parse_int_strict(std::string_view text, std::size_t line) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError("bad integer '" + std::string(text) + "'", line);
    return value;
}

inline double parse_real_strict(std::string_view text, std::size_t line) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError("bad real '" + std::string(text) + "'", line);
    return value;
}

inline bool parse_bool_strict(std::string_view text, std::size_t line) {
    if (text == "true" || text == "True" || text == "TRUE") return true;
    if (text == "false" || text == "False" || text == "FALSE") return false;
    throw ParseError("bad boolean '" + std::string(text) + "'", line);
}

inline std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

// The zone designator of an ISO timestamp, for metadata bookkeeping.
inline std::string_view zone_suffix(std::string_view text) {
    std::size_t t = text.find('T');
    if (t == std::string_view::npos) t = text.find(' ');
    if (t == std::string_view::npos) return {};
    std::size_t mark = text.find_first_of("+-Zz", t);
    if (mark == std::string_view::npos) return {};
    return text.substr(mark);
}

struct XesAttribute {
    std::string tag;
    std::string key;
    std::string value;
    std::size_t line;
};

// Reads one attribute element the reader just opened and skips its subtree
// (nested attributes are outside the supported subset).
inline XesAttribute read_xes_attribute(XmlReader& reader, const XmlReader::Node& node) {
    XesAttribute attr;
    attr.tag = node.name;
    attr.line = node.line;
    for (const auto& a : node.attributes) {
        if (a.name == "key") attr.key = a.value;
        if (a.name == "value") attr.value = a.value;
    }
    reader.skip_element(node.name);
    return attr;
}

inline bool is_xes_attribute_tag(const std::string& name) {
    return name == "string" || name == "date" || name == "int" || name == "float" ||
           name == "boolean";
}

}  // namespace detail

// Parses the XES subset: log/trace/event elements with string, date, int,
// float and boolean attributes. Extensions, classifiers, globals and nested
// attributes are skipped. concept:name and time:timestamp are mandatory per
// event; concept:name is mandatory per trace (it becomes the case id).
inline EventLog parse_xes(std::string_view text) {
    using Kind = XmlReader::NodeKind;
    XmlReader reader(text);
    auto root = reader.next();
    if (!root || root->kind != Kind::StartElement || root->name != "log")
        throw ParseError("expected <log> root element", root ? root->line : 1);

    EventLog log;
    std::set<std::string> zones;
    std::size_t trace_index = 0;

    for (;;) {
        auto node = reader.next();
        if (!node) throw ParseError("unexpected end of input inside <log>", reader.line());
        if (node->kind == Kind::EndElement) break;
        if (node->kind == Kind::Text) continue;
        if (node->name != "trace") {
            reader.skip_element(node->name);
            continue;
        }

        ++trace_index;
        std::size_t trace_line = node->line;
        Trace trace;
        bool has_case_id = false;
        struct PendingEvent {
            Event event;
            bool has_activity = false;
            bool has_timestamp = false;
            std::size_t line = 0;
        };
        std::vector<PendingEvent> pending;

        for (;;) {
            auto child = reader.next();
            if (!child) throw ParseError("unexpected end of input inside <trace>", reader.line());
            if (child->kind == Kind::EndElement) break;
            if (child->kind == Kind::Text) continue;
            if (child->name == "event") {
                PendingEvent pe;
                pe.line = child->line;
                for (;;) {
                    auto field = reader.next();
                    if (!field)
                        throw ParseError("unexpected end of input inside <event>", reader.line());
                    if (field->kind == Kind::EndElement) break;
                    if (field->kind == Kind::Text) continue;
                    if (!detail::is_xes_attribute_tag(field->name)) {
                        reader.skip_element(field->name);
                        continue;
                    }
                    auto attr = detail::read_xes_attribute(reader, *field);
                    if (attr.key == "concept:name") {
                        pe.event.activity = attr.value;
                        pe.has_activity = true;
                    } else if (attr.key == "time:timestamp") {
                        auto zone = detail::zone_suffix(attr.value);
                        zones.insert(zone.empty() ? "none" : std::string(zone));
                        pe.event.timestamp = parse_iso8601(attr.value, attr.line);
                        pe.has_timestamp = true;
                    } else if (attr.tag == "string") {
                        pe.event.attributes[attr.key] = attr.value;
                    } else if (attr.tag == "date") {
                        pe.event.attributes[attr.key] = parse_iso8601(attr.value, attr.line);
                    } else if (attr.tag == "int") {
                        pe.event.attributes[attr.key] =
                            detail::parse_int_strict(attr.value, attr.line);
                    } else if (attr.tag == "float") {
                        pe.event.attributes[attr.key] =
                            detail::parse_real_strict(attr.value, attr.line);
                    } else {
                        pe.event.attributes[attr.key] =
                            detail::parse_bool_strict(attr.value, attr.line);
                    }
                }
                pending.push_back(std::move(pe));
            } else if (detail::is_xes_attribute_tag(child->name)) {
                auto attr = detail::read_xes_attribute(reader, *child);
                if (attr.key == "concept:name") {
                    trace.case_id = attr.value;
                    has_case_id = true;
                }
            } else {
                reader.skip_element(child->name);
            }
        }

        if (!has_case_id)
            throw IngestionError("trace #" + std::to_string(trace_index) + " (line " +
                                 std::to_string(trace_line) + ") has no concept:name");
        std::string trace_name = trace.case_id;
        for (auto& pe : pending) {
            if (!pe.has_activity)
                throw IngestionError("event at line " + std::to_string(pe.line) + " in trace '" +
                                     trace_name + "' has no concept:name");
            if (!pe.has_timestamp)
                throw IngestionError("event at line " + std::to_string(pe.line) + " in trace '" +
                                     trace_name + "' has no time:timestamp");
            trace.events.push_back(std::move(pe.event));
        }
        sort_trace_events(trace);
        log.traces.push_back(std::move(trace));
    }

    if (!zones.empty()) {
        std::string joined;
        for (const auto& z : zones) {
            if (!joined.empty()) joined += ",";
            joined += z;
        }
        log.metadata["source_timezones"] = joined;
    }
    validate_log(log);
    return log;
}

// Canonical XES emission: concept:name and time:timestamp first, remaining
// attributes in key order. Timestamps are written in UTC.
inline std::string serialize_xes(const EventLog& log) {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<log xes.version=\"1.0\" xes.features=\"\">\n";
    out += "  <extension name=\"Concept\" prefix=\"concept\" "
           "uri=\"http://www.xes-standard.org/concept.xesext\"/>\n";
    out += "  <extension name=\"Time\" prefix=\"time\" "
           "uri=\"http://www.xes-standard.org/time.xesext\"/>\n";
    for (const auto& trace : log.traces) {
        out += "  <trace>\n";
        out += "    <string key=\"concept:name\" value=\"" + xml_escape(trace.case_id) + "\"/>\n";
        for (const auto& event : trace.events) {
            out += "    <event>\n";
            out += "      <string key=\"concept:name\" value=\"" + xml_escape(event.activity) +
                   "\"/>\n";
            out += "      <date key=\"time:timestamp\" value=\"" +
                   format_iso8601(event.timestamp) + "\"/>\n";
            for (const auto& [key, value] : event.attributes) {
                out += "      <";
                out += kind_name(kind_of(value));
                out += " key=\"" + xml_escape(key) + "\" value=\"";
                if (kind_of(value) == AttrKind::Real)
                    out += detail::format_real(std::get<double>(value));
                else
                    out += xml_escape(attribute_to_string(value));
                out += "\"/>\n";
            }
            out += "    </event>\n";
        }
        out += "  </trace>\n";
    }
    out += "</log>\n";
    return out;
}

}  // namespace procmine
