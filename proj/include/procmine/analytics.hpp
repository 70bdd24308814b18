#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "procmine/errors.hpp"
#include "procmine/eventlog.hpp"

namespace procmine {

inline constexpr std::int64_t kMillisPerHour = 3600 * 1000;
inline constexpr std::int64_t kMillisPerDay = 24 * kMillisPerHour;

// ---------------------------------------------------------------------------
// Variants

struct Variant {
    std::vector<std::string> signature;
    std::vector<std::string> case_ids;  // in log order
    std::uint64_t frequency = 0;
    std::int64_t min_duration_ms = 0;
    std::int64_t max_duration_ms = 0;
    double mean_duration_ms = 0.0;
};

inline std::int64_t trace_duration_ms(const Trace& trace) {
    if (trace.events.empty()) return 0;
    return trace.events.back().timestamp.millis - trace.events.front().timestamp.millis;
}

// Groups traces by exact activity sequence; sorted by frequency descending,
// ties by signature ascending.
inline std::vector<Variant> extract_variants(const EventLog& log) {
    std::map<std::vector<std::string>, Variant> groups;
    for (const Trace& trace : log.traces) {
        std::vector<std::string> sig = signature(trace);
        Variant& v = groups[sig];
        if (v.case_ids.empty()) {
            v.signature = sig;
            v.min_duration_ms = std::numeric_limits<std::int64_t>::max();
        }
        std::int64_t duration = trace_duration_ms(trace);
        v.case_ids.push_back(trace.case_id);
        ++v.frequency;
        v.min_duration_ms = std::min(v.min_duration_ms, duration);
        v.max_duration_ms = std::max(v.max_duration_ms, duration);
        v.mean_duration_ms += static_cast<double>(duration);
    }
    std::vector<Variant> out;
    out.reserve(groups.size());
    for (auto& [sig, v] : groups) {
        (void)sig;
        v.mean_duration_ms /= static_cast<double>(v.frequency);
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), [](const Variant& a, const Variant& b) {
        if (a.frequency != b.frequency) return a.frequency > b.frequency;
        return a.signature < b.signature;
    });
    return out;
}

struct LogSummary {
    std::size_t trace_count = 0;
    std::size_t event_count = 0;
    std::size_t activity_count = 0;
    std::size_t variant_count = 0;
    std::map<std::string, std::uint64_t> occurrences;  // total per activity
    std::map<std::string, std::uint64_t> rework;       // occurrences beyond first per case
    std::string longest_case_id;
    std::size_t longest_case_events = 0;
    std::int64_t longest_case_duration_ms = 0;
    double share_over_one_day = 0.0;  // traces with duration >= 24 h
};

inline LogSummary variant_stats(const EventLog& log) {
    LogSummary s;
    s.trace_count = log.traces.size();
    std::set<std::vector<std::string>> distinct;
    std::size_t over_day = 0;
    for (const Trace& trace : log.traces) {
        distinct.insert(signature(trace));
        s.event_count += trace.events.size();
        std::map<std::string, std::uint64_t> local;
        for (const Event& event : trace.events) ++local[event.activity];
        for (const auto& [activity, count] : local) {
            s.occurrences[activity] += count;
            s.rework[activity] += count - 1;
        }
        std::int64_t duration = trace_duration_ms(trace);
        if (duration >= kMillisPerDay) ++over_day;
        bool longer = trace.events.size() > s.longest_case_events ||
                      (trace.events.size() == s.longest_case_events &&
                       (duration > s.longest_case_duration_ms ||
                        (duration == s.longest_case_duration_ms &&
                         (s.longest_case_id.empty() || trace.case_id < s.longest_case_id))));
        if (longer) {
            s.longest_case_id = trace.case_id;
            s.longest_case_events = trace.events.size();
            s.longest_case_duration_ms = duration;
        }
    }
    s.activity_count = s.occurrences.size();
    s.variant_count = distinct.size();
    s.share_over_one_day =
        s.trace_count == 0 ? 0.0 : static_cast<double>(over_day) / static_cast<double>(s.trace_count);
    return s;
}

// ---------------------------------------------------------------------------
// Temporal guidelines

struct GuidelineReport {
    std::string name;
    std::string anchor;
    std::string target;
    std::int64_t limit_ms = 0;
    std::size_t evaluable = 0;
    std::size_t compliant = 0;
    std::size_t violating = 0;
    std::size_t non_evaluable = 0;
    std::size_t negative_delays = 0;  // recording-order violations, subset of violating
    double violation_rate = 0.0;      // violating / evaluable
    double mean_delay_ms = 0.0;       // over evaluable cases
};

// Per case: delay between the first anchor event and the first target event.
// Cases missing either are non-evaluable; delays above the limit and negative
// delays (target recorded before anchor) count as violations.
inline GuidelineReport check_time_guideline(const EventLog& log, const std::string& anchor,
                                            const std::string& target, std::int64_t limit_ms,
                                            const std::string& name = std::string()) {
    if (anchor == target)
        throw ConfigError("guideline anchor and target are both '" + anchor + "'");
    if (limit_ms <= 0) throw ConfigError("guideline limit must be positive");
    GuidelineReport report;
    report.name = name.empty() ? anchor + " -> " + target : name;
    report.anchor = anchor;
    report.target = target;
    report.limit_ms = limit_ms;
    double delay_sum = 0.0;
    for (const Trace& trace : log.traces) {
        std::optional<std::int64_t> anchor_at, target_at;
        for (const Event& event : trace.events) {
            if (!anchor_at && event.activity == anchor) anchor_at = event.timestamp.millis;
            if (!target_at && event.activity == target) target_at = event.timestamp.millis;
            if (anchor_at && target_at) break;
        }
        if (!anchor_at || !target_at) {
            ++report.non_evaluable;
            continue;
        }
        std::int64_t delay = *target_at - *anchor_at;
        ++report.evaluable;
        delay_sum += static_cast<double>(delay);
        if (delay < 0) {
            ++report.violating;
            ++report.negative_delays;
        } else if (delay <= limit_ms) {
            ++report.compliant;
        } else {
            ++report.violating;
        }
    }
    if (report.evaluable > 0) {
        report.violation_rate =
            static_cast<double>(report.violating) / static_cast<double>(report.evaluable);
        report.mean_delay_ms = delay_sum / static_cast<double>(report.evaluable);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Decision rules

// Boolean expression over case-level attribute values.  A case's value for a
// key is taken from its first event carrying that key; comparisons on cases
// missing the attribute evaluate to false.
struct RuleExpr {
    enum class Kind { Compare, Between, And, Or, Not };
    Kind kind = Kind::Compare;
    std::string attribute;      // Compare / Between
    std::string op;             // Compare: = != < <= > >=
    AttributeValue literal;     // Compare
    double low = 0.0, high = 0.0;  // Between, inclusive
    std::vector<RuleExpr> children;
};

struct PathwayPredicate {
    enum class Kind { Contains, Before };
    Kind kind = Kind::Contains;
    std::string first;
    std::string second;  // Before only
};

struct DecisionRule {
    std::string name;
    std::string antecedent_text;
    std::string consequent_text;
    RuleExpr antecedent;
    PathwayPredicate consequent;
};

struct RuleReport {
    std::string name;
    std::size_t support = 0;    // cases satisfying the antecedent
    std::size_t satisfied = 0;  // of those, satisfying the consequent
    bool evaluable = false;     // support > 0
    double confidence = 0.0;
    std::vector<std::string> counterexamples;  // case ids, capped
};

namespace detail {

struct RuleToken {
    enum class Kind { Word, Quoted, Number, Symbol, End };
    Kind kind = Kind::End;
    std::string text;
    double number = 0.0;
};

class RuleLexer {
public:
    explicit RuleLexer(std::string_view text) : text_(text) { advance(); }

    const RuleToken& peek() const { return current_; }

    RuleToken take() {
        RuleToken t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        current_ = RuleToken{};
        if (pos_ >= text_.size()) return;
        char c = text_[pos_];
        if (c == '\'' || c == '"') {
            std::size_t end = text_.find(c, pos_ + 1);
            if (end == std::string_view::npos)
                throw ConfigError("unterminated quote in rule expression");
            current_.kind = RuleToken::Kind::Quoted;
            current_.text = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
            pos_ = end + 1;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '-' || c == '+') && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            double value = 0.0;
            auto [ptr, ec] =
                std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
            if (ec != std::errc())
                throw ConfigError("bad number in rule expression at '" +
                                  std::string(text_.substr(pos_, 12)) + "'");
            current_.kind = RuleToken::Kind::Number;
            current_.number = value;
            current_.text = std::string(text_.substr(pos_, static_cast<std::size_t>(
                                                               ptr - (text_.data() + pos_))));
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            return;
        }
        if (c == '(' || c == ')' || c == '=' || c == '<' || c == '>' || c == '!') {
            std::string sym(1, c);
            ++pos_;
            if ((c == '<' || c == '>' || c == '!') && pos_ < text_.size() && text_[pos_] == '=') {
                sym.push_back('=');
                ++pos_;
            }
            if (sym == "!") throw ConfigError("stray '!' in rule expression (use !=)");
            current_.kind = RuleToken::Kind::Symbol;
            current_.text = sym;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size()) {
                char w = text_[pos_];
                if (std::isalnum(static_cast<unsigned char>(w)) || w == '_' || w == ':' ||
                    w == '.' || w == '-')
                    ++pos_;
                else
                    break;
            }
            current_.kind = RuleToken::Kind::Word;
            current_.text = std::string(text_.substr(start, pos_ - start));
            return;
        }
        throw ConfigError(std::string("unexpected character '") + c + "' in rule expression");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    RuleToken current_;
};

class RuleParser {
public:
    explicit RuleParser(std::string_view text) : lexer_(text) {}

    RuleExpr parse() {
        RuleExpr expr = parse_or();
        if (lexer_.peek().kind != RuleToken::Kind::End)
            throw ConfigError("unexpected trailing text in rule expression: '" +
                              lexer_.peek().text + "'");
        return expr;
    }

private:
    bool is_word(const char* word) const {
        return lexer_.peek().kind == RuleToken::Kind::Word && lexer_.peek().text == word;
    }

    RuleExpr parse_or() {
        RuleExpr first = parse_and();
        if (!is_word("or")) return first;
        RuleExpr node;
        node.kind = RuleExpr::Kind::Or;
        node.children.push_back(std::move(first));
        while (is_word("or")) {
            lexer_.take();
            node.children.push_back(parse_and());
        }
        return node;
    }

    RuleExpr parse_and() {
        RuleExpr first = parse_unary();
        if (!is_word("and")) return first;
        RuleExpr node;
        node.kind = RuleExpr::Kind::And;
        node.children.push_back(std::move(first));
        while (is_word("and")) {
            lexer_.take();
            node.children.push_back(parse_unary());
        }
        return node;
    }

    RuleExpr parse_unary() {
        if (is_word("not")) {
            lexer_.take();
            RuleExpr node;
            node.kind = RuleExpr::Kind::Not;
            node.children.push_back(parse_unary());
            return node;
        }
        if (lexer_.peek().kind == RuleToken::Kind::Symbol && lexer_.peek().text == "(") {
            lexer_.take();
            RuleExpr inner = parse_or();
            if (!(lexer_.peek().kind == RuleToken::Kind::Symbol && lexer_.peek().text == ")"))
                throw ConfigError("missing ')' in rule expression");
            lexer_.take();
            return inner;
        }
        return parse_comparison();
    }

    RuleExpr parse_comparison() {
        RuleToken name = lexer_.take();
        if (name.kind != RuleToken::Kind::Word && name.kind != RuleToken::Kind::Quoted)
            throw ConfigError("expected an attribute name in rule expression, got '" + name.text +
                              "'");
        RuleExpr node;
        node.attribute = name.text;
        if (is_word("between")) {
            lexer_.take();
            node.kind = RuleExpr::Kind::Between;
            RuleToken low = lexer_.take();
            if (low.kind != RuleToken::Kind::Number)
                throw ConfigError("'between' expects a number, got '" + low.text + "'");
            if (!is_word("and")) throw ConfigError("'between' expects 'and'");
            lexer_.take();
            RuleToken high = lexer_.take();
            if (high.kind != RuleToken::Kind::Number)
                throw ConfigError("'between' expects a number, got '" + high.text + "'");
            node.low = low.number;
            node.high = high.number;
            if (node.low > node.high)
                throw ConfigError("'between' bounds are reversed for attribute '" +
                                  node.attribute + "'");
            return node;
        }
        RuleToken op = lexer_.take();
        if (op.kind != RuleToken::Kind::Symbol ||
            (op.text != "=" && op.text != "!=" && op.text != "<" && op.text != "<=" &&
             op.text != ">" && op.text != ">="))
            throw ConfigError("expected a comparison operator after '" + node.attribute + "'");
        node.kind = RuleExpr::Kind::Compare;
        node.op = op.text;
        RuleToken literal = lexer_.take();
        switch (literal.kind) {
            case RuleToken::Kind::Number:
                node.literal = literal.number;
                break;
            case RuleToken::Kind::Quoted:
                node.literal = literal.text;
                break;
            case RuleToken::Kind::Word:
                if (literal.text == "true")
                    node.literal = true;
                else if (literal.text == "false")
                    node.literal = false;
                else
                    node.literal = literal.text;  // bare string literal
                break;
            default:
                throw ConfigError("expected a literal after '" + node.attribute + " " + node.op +
                                  "'");
        }
        return node;
    }

    RuleLexer lexer_;
};

template <typename Cmp>
inline bool ordered(const std::string& op, Cmp cmp) {
    if (op == "=") return cmp == 0;
    if (op == "!=") return cmp != 0;
    if (op == "<") return cmp < 0;
    if (op == "<=") return cmp <= 0;
    if (op == ">") return cmp > 0;
    return cmp >= 0;  // >=
}

inline std::optional<double> numeric_value(const AttributeValue& value) {
    if (std::holds_alternative<std::int64_t>(value))
        return static_cast<double>(std::get<std::int64_t>(value));
    if (std::holds_alternative<double>(value)) return std::get<double>(value);
    return std::nullopt;
}

inline bool compare_values(const AttributeValue& value, const std::string& op,
                           const AttributeValue& literal) {
    auto value_num = numeric_value(value);
    auto literal_num = numeric_value(literal);
    if (value_num && literal_num) {
        double d = *value_num - *literal_num;
        return ordered(op, d < 0 ? -1 : d > 0 ? 1 : 0);
    }
    if (std::holds_alternative<bool>(value) && std::holds_alternative<bool>(literal)) {
        int d = static_cast<int>(std::get<bool>(value)) - static_cast<int>(std::get<bool>(literal));
        return ordered(op, d);
    }
    if (std::holds_alternative<std::string>(value) && std::holds_alternative<std::string>(literal))
        return ordered(op, std::get<std::string>(value).compare(std::get<std::string>(literal)));
    return false;  // incomparable kinds
}

inline void collect_attributes(const RuleExpr& expr, std::set<std::string>& out) {
    if (expr.kind == RuleExpr::Kind::Compare || expr.kind == RuleExpr::Kind::Between)
        out.insert(expr.attribute);
    for (const RuleExpr& child : expr.children) collect_attributes(child, out);
}

inline bool eval_expr(const RuleExpr& expr, const std::map<std::string, AttributeValue>& attrs) {
    switch (expr.kind) {
        case RuleExpr::Kind::Compare: {
            auto it = attrs.find(expr.attribute);
            if (it == attrs.end()) return false;
            return compare_values(it->second, expr.op, expr.literal);
        }
        case RuleExpr::Kind::Between: {
            auto it = attrs.find(expr.attribute);
            if (it == attrs.end()) return false;
            auto num = numeric_value(it->second);
            return num && *num >= expr.low && *num <= expr.high;
        }
        case RuleExpr::Kind::And:
            for (const RuleExpr& child : expr.children)
                if (!eval_expr(child, attrs)) return false;
            return true;
        case RuleExpr::Kind::Or:
            for (const RuleExpr& child : expr.children)
                if (eval_expr(child, attrs)) return true;
            return false;
        case RuleExpr::Kind::Not:
            return !eval_expr(expr.children.front(), attrs);
    }
    return false;
}

inline bool eval_pathway(const PathwayPredicate& predicate, const Trace& trace) {
    if (predicate.kind == PathwayPredicate::Kind::Contains) {
        for (const Event& event : trace.events)
            if (event.activity == predicate.first) return true;
        return false;
    }
    std::optional<std::size_t> first_at, second_at;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        if (!first_at && trace.events[i].activity == predicate.first) first_at = i;
        if (!second_at && trace.events[i].activity == predicate.second) second_at = i;
    }
    return first_at && second_at && *first_at < *second_at;
}

}  // namespace detail

inline RuleExpr parse_rule_expr(std::string_view text) {
    return detail::RuleParser(text).parse();
}

// Consequent notation: "contains X" or "X before Y"; names may be quoted.
inline PathwayPredicate parse_pathway_predicate(std::string_view text) {
    detail::RuleLexer lexer(text);
    using Kind = detail::RuleToken::Kind;
    detail::RuleToken first = lexer.take();
    if (first.kind != Kind::Word && first.kind != Kind::Quoted)
        throw ConfigError("bad pathway predicate: '" + std::string(text) + "'");
    PathwayPredicate predicate;
    if (first.kind == Kind::Word && first.text == "contains") {
        predicate.kind = PathwayPredicate::Kind::Contains;
        std::string name;
        for (auto t = lexer.take(); t.kind != Kind::End; t = lexer.take()) {
            if (!name.empty()) name += ' ';
            name += t.text;
        }
        if (name.empty()) throw ConfigError("'contains' expects an activity name");
        predicate.first = name;
        return predicate;
    }
    // X before Y: words accumulate into X until 'before'.
    predicate.kind = PathwayPredicate::Kind::Before;
    std::string left = first.text;
    bool seen_before = false;
    std::string right;
    for (auto t = lexer.take(); t.kind != Kind::End; t = lexer.take()) {
        if (t.kind == Kind::Word && t.text == "before" && !seen_before) {
            seen_before = true;
            continue;
        }
        std::string& side = seen_before ? right : left;
        if (!side.empty()) side += ' ';
        side += t.text;
    }
    if (!seen_before || right.empty())
        throw ConfigError("bad pathway predicate (expected 'contains X' or 'X before Y'): '" +
                          std::string(text) + "'");
    predicate.first = left;
    predicate.second = right;
    return predicate;
}

inline DecisionRule make_rule(const std::string& name, const std::string& antecedent,
                              const std::string& consequent) {
    DecisionRule rule;
    rule.name = name;
    rule.antecedent_text = antecedent;
    rule.consequent_text = consequent;
    rule.antecedent = parse_rule_expr(antecedent);
    rule.consequent = parse_pathway_predicate(consequent);
    return rule;
}

// Case-level attribute view: first value per key in event order.
inline std::map<std::string, AttributeValue> case_attributes(const Trace& trace) {
    std::map<std::string, AttributeValue> attrs;
    for (const Event& event : trace.events)
        for (const auto& [key, value] : event.attributes) attrs.emplace(key, value);
    return attrs;
}

inline RuleReport evaluate_rule(const EventLog& log, const DecisionRule& rule,
                                std::size_t max_counterexamples = 10) {
    std::set<std::string> referenced;
    detail::collect_attributes(rule.antecedent, referenced);
    std::set<std::string> schema;
    for (const Trace& trace : log.traces)
        for (const Event& event : trace.events)
            for (const auto& [key, value] : event.attributes) {
                (void)value;
                schema.insert(key);
            }
    for (const std::string& attribute : referenced)
        if (!schema.count(attribute))
            throw ConfigError("rule '" + rule.name + "' references attribute '" + attribute +
                              "' absent from the log schema");

    RuleReport report;
    report.name = rule.name;
    for (const Trace& trace : log.traces) {
        if (!detail::eval_expr(rule.antecedent, case_attributes(trace))) continue;
        ++report.support;
        if (detail::eval_pathway(rule.consequent, trace))
            ++report.satisfied;
        else if (report.counterexamples.size() < max_counterexamples)
            report.counterexamples.push_back(trace.case_id);
    }
    report.evaluable = report.support > 0;
    if (report.evaluable)
        report.confidence =
            static_cast<double>(report.satisfied) / static_cast<double>(report.support);
    return report;
}

// ---------------------------------------------------------------------------
// Cohorts

struct CohortReport {
    std::size_t total_cases = 0;
    // Mutually exclusive pathway classes covering all cases:
    std::size_t discharged_without_admission = 0;  // released, never admitted
    std::size_t no_release = 0;                    // no release event recorded
    std::size_t admitted_nc = 0;                   // normal care only
    std::size_t admitted_ic = 0;                   // intensive care first
    std::size_t nc_then_ic = 0;                    // transferred NC -> IC
    // Return statistics:
    std::size_t returns_28d = 0;  // cases with a return <= 28 days after a release
    std::size_t returns_1y = 0;   // <= 365 days
    std::map<std::string, std::size_t> returns_by_release;  // release label -> 28-day returns
    std::size_t returns_unattributed = 0;  // Return ER with no preceding release
};

namespace detail {

inline bool is_release_label(const std::string& activity) {
    return activity.size() == 9 && activity.rfind("Release ", 0) == 0 && activity[8] >= 'A' &&
           activity[8] <= 'E';
}

}  // namespace detail

// Pathway classification per case, first-occurrence ordering:
//   - no release recorded -> no_release;
//   - released without any admission -> discharged_without_admission;
//   - Admission NC only -> admitted_nc;
//   - first admission is IC (even if NC follows) -> admitted_ic;
//   - an Admission NC precedes the first Admission IC -> nc_then_ic.
// A return within k days is a Return ER event at most k days after the
// release event immediately preceding it in the trace; the first qualifying
// return attributes the case to that release's label.
inline CohortReport cohort_stats(const EventLog& log) {
    CohortReport report;
    report.total_cases = log.traces.size();
    for (const Trace& trace : log.traces) {
        std::optional<std::size_t> first_nc, first_ic;
        bool released = false;
        std::optional<std::int64_t> release_at;
        std::string release_label;
        bool returned_28d = false, returned_1y = false;
        std::string attributed_release;
        for (std::size_t i = 0; i < trace.events.size(); ++i) {
            const Event& event = trace.events[i];
            if (event.activity == "Admission NC" && !first_nc) first_nc = i;
            if (event.activity == "Admission IC" && !first_ic) first_ic = i;
            if (detail::is_release_label(event.activity)) {
                released = true;
                release_at = event.timestamp.millis;
                release_label = event.activity;
            } else if (event.activity == "Return ER") {
                if (!release_at) {
                    ++report.returns_unattributed;
                    continue;
                }
                std::int64_t gap = event.timestamp.millis - *release_at;
                if (gap <= 365 * kMillisPerDay) returned_1y = true;
                if (gap <= 28 * kMillisPerDay && !returned_28d) {
                    returned_28d = true;
                    attributed_release = release_label;
                }
            }
        }
        if (!released)
            ++report.no_release;
        else if (!first_nc && !first_ic)
            ++report.discharged_without_admission;
        else if (first_nc && !first_ic)
            ++report.admitted_nc;
        else if (first_ic && (!first_nc || *first_ic < *first_nc))
            ++report.admitted_ic;
        else
            ++report.nc_then_ic;
        if (returned_28d) {
            ++report.returns_28d;
            ++report.returns_by_release[attributed_release];
        }
        if (returned_1y) ++report.returns_1y;
    }
    return report;
}

}  // namespace procmine
