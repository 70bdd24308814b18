#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "procmine/eventlog.hpp"
#include "procmine/xes.hpp"

namespace procmine {

struct ColumnMapping {
    std::string case_column;
    std::string activity_column;
    std::string timestamp_column;
    std::string timestamp_format;  // empty = ISO 8601
    std::vector<std::pair<std::string, AttrKind>> attribute_columns;
};

inline void validate_mapping(const ColumnMapping& m) {
    if (m.case_column.empty() || m.activity_column.empty() || m.timestamp_column.empty())
        throw ConfigError("case, activity and timestamp columns must all be named");
    if (m.case_column == m.activity_column || m.case_column == m.timestamp_column ||
        m.activity_column == m.timestamp_column)
        throw ConfigError("case, activity and timestamp columns must be distinct");
}

namespace detail {

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line;  // 1-based line the row starts on
};

// RFC 4180: quoted fields, doubled quotes, embedded newlines inside quotes.
inline std::vector<CsvRow> parse_csv_rows(std::string_view text) {
    std::vector<CsvRow> rows;
    CsvRow row{{}, 1};
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    std::size_t line = 1;

    auto end_field = [&]() {
        row.fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        rows.push_back(std::move(row));
        row = CsvRow{{}, line};
        row_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\n') ++line;
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_started = true;
                break;
            case ',':
                end_field();
                row_started = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_started || !field.empty() || !row.fields.empty()) end_row();
                row.line = line;
                break;
            default:
                field.push_back(c);
                row_started = true;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", row.line);
    if (row_started || !field.empty() || !row.fields.empty()) end_row();
    return rows;
}

}  // namespace detail

// Header row required; rows grouped by the case column in first-appearance
// order; events per case sorted by timestamp, stable on ties. Empty attribute
// cells mean the attribute is absent on that event.
inline EventLog parse_csv(std::string_view text, const ColumnMapping& mapping) {
    validate_mapping(mapping);
    auto rows = detail::parse_csv_rows(text);
    if (rows.empty()) throw ParseError("missing header row", 1);

    std::map<std::string, std::size_t> columns;
    for (std::size_t i = 0; i < rows[0].fields.size(); ++i)
        columns.emplace(rows[0].fields[i], i);
    auto column_index = [&](const std::string& name) {
        auto it = columns.find(name);
        if (it == columns.end()) throw ConfigError("column '" + name + "' not found in header");
        return it->second;
    };
    std::size_t case_col = column_index(mapping.case_column);
    std::size_t activity_col = column_index(mapping.activity_column);
    std::size_t time_col = column_index(mapping.timestamp_column);
    std::vector<std::pair<std::size_t, AttrKind>> attr_cols;
    for (const auto& [name, kind] : mapping.attribute_columns)
        attr_cols.emplace_back(column_index(name), kind);

    EventLog log;
    std::map<std::string, std::size_t> trace_index;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::size_t needed = case_col;
        needed = std::max({needed, activity_col, time_col});
        for (const auto& [col, kind] : attr_cols) needed = std::max(needed, col);
        if (row.fields.size() <= needed)
            throw ParseError("row has " + std::to_string(row.fields.size()) +
                                 " fields, header defines " + std::to_string(rows[0].fields.size()),
                             row.line);

        Event event;
        event.activity = row.fields[activity_col];
        if (event.activity.empty())
            throw IngestionError("empty activity at line " + std::to_string(row.line));
        event.timestamp =
            parse_timestamp(row.fields[time_col], mapping.timestamp_format, row.line);
        for (const auto& [col, kind] : attr_cols) {
            const std::string& cell = row.fields[col];
            if (cell.empty()) continue;
            const std::string& key = rows[0].fields[col];
            switch (kind) {
                case AttrKind::Text: event.attributes[key] = cell; break;
                case AttrKind::Integer:
                    event.attributes[key] = detail::parse_int_strict(cell, row.line);
                    break;
                case AttrKind::Real:
                    event.attributes[key] = detail::parse_real_strict(cell, row.line);
                    break;
                case AttrKind::Boolean:
                    event.attributes[key] = detail::parse_bool_strict(cell, row.line);
                    break;
                case AttrKind::Time:
                    event.attributes[key] =
                        parse_timestamp(cell, mapping.timestamp_format, row.line);
                    break;
            }
        }

        const std::string& case_id = row.fields[case_col];
        auto [it, inserted] = trace_index.emplace(case_id, log.traces.size());
        if (inserted) log.traces.push_back(Trace{case_id, {}});
        log.traces[it->second].events.push_back(std::move(event));
    }
    for (auto& trace : log.traces) sort_trace_events(trace);
    validate_log(log);
    return log;
}

namespace detail {

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

}  // namespace detail

// Writes case,activity,timestamp plus one column per attribute key occurring
// anywhere in the log (sorted), RFC 4180 quoted.  Absent attributes stay
// empty; timestamps are ISO 8601.
inline std::string serialize_csv(const EventLog& log) {
    std::set<std::string> keys;
    for (const auto& trace : log.traces)
        for (const auto& event : trace.events)
            for (const auto& [key, value] : event.attributes) {
                (void)value;
                keys.insert(key);
            }
    std::string out = "case,activity,timestamp";
    for (const auto& key : keys) out += "," + detail::csv_quote(key);
    out += "\r\n";
    for (const auto& trace : log.traces) {
        for (const auto& event : trace.events) {
            out += detail::csv_quote(trace.case_id);
            out += ',';
            out += detail::csv_quote(event.activity);
            out += ',';
            out += format_iso8601(event.timestamp);
            for (const auto& key : keys) {
                out += ',';
                auto it = event.attributes.find(key);
                if (it != event.attributes.end())
                    out += detail::csv_quote(attribute_to_string(it->second));
            }
            out += "\r\n";
        }
    }
    return out;
}

}  // namespace procmine
