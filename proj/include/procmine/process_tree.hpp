#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "procmine/errors.hpp"

namespace procmine {

enum class TreeKind { Activity, Silent, Sequence, ExclusiveChoice, Concurrent, Loop };

// Block-structured process model. Operators carry >= 2 children; for Loop the
// first child is the body and the remaining children are redo parts.
struct ProcessTree {
    TreeKind kind = TreeKind::Silent;
    std::string label;  // Activity leaves only
    std::vector<ProcessTree> children;

    bool operator==(const ProcessTree&) const = default;

    static ProcessTree activity(std::string l) {
        ProcessTree t;
        t.kind = TreeKind::Activity;
        t.label = std::move(l);
        return t;
    }
    static ProcessTree silent() { return ProcessTree{}; }
    static ProcessTree make(TreeKind kind, std::vector<ProcessTree> children) {
        ProcessTree t;
        t.kind = kind;
        t.children = std::move(children);
        return t;
    }
    static ProcessTree sequence(std::vector<ProcessTree> c) {
        return make(TreeKind::Sequence, std::move(c));
    }
    static ProcessTree choice(std::vector<ProcessTree> c) {
        return make(TreeKind::ExclusiveChoice, std::move(c));
    }
    static ProcessTree concurrent(std::vector<ProcessTree> c) {
        return make(TreeKind::Concurrent, std::move(c));
    }
    static ProcessTree loop(std::vector<ProcessTree> c) {
        return make(TreeKind::Loop, std::move(c));
    }
};

inline void validate_tree(const ProcessTree& t) {
    switch (t.kind) {
        case TreeKind::Activity:
            if (t.label.empty()) throw DomainError("activity leaf with empty label");
            [[fallthrough]];
        case TreeKind::Silent:
            if (!t.children.empty()) throw DomainError("leaf node with children");
            return;
        default:
            if (t.children.size() < 2)
                throw DomainError("operator node needs at least 2 children");
            for (const auto& c : t.children) validate_tree(c);
    }
}

inline std::set<std::string> tree_alphabet(const ProcessTree& t) {
    std::set<std::string> labels;
    if (t.kind == TreeKind::Activity) labels.insert(t.label);
    for (const auto& c : t.children) {
        auto sub = tree_alphabet(c);
        labels.insert(sub.begin(), sub.end());
    }
    return labels;
}

namespace detail {

inline bool needs_quoting(const std::string& label) {
    if (label.empty() || label == "tau") return true;
    for (char c : label)
        if (c == '(' || c == ')' || c == ',' || c == '\'' || c == ' ' || c == '\t' ||
            c == '\n' || c == '\r')
            return true;
    return false;
}

inline std::string quote_label(const std::string& label) {
    if (!needs_quoting(label)) return label;
    std::string out = "'";
    for (char c : label) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
    }
    out.push_back('\'');
    return out;
}

}  // namespace detail

// Textual notation: Seq(a, And(b, c)), Xor(tau, a), Loop(a, b). Labels that
// collide with the syntax are single-quoted with '' escaping.
inline std::string format_tree(const ProcessTree& t) {
    switch (t.kind) {
        case TreeKind::Silent: return "tau";
        case TreeKind::Activity: return detail::quote_label(t.label);
        default: break;
    }
    const char* name = t.kind == TreeKind::Sequence         ? "Seq"
                       : t.kind == TreeKind::ExclusiveChoice ? "Xor"
                       : t.kind == TreeKind::Concurrent      ? "And"
                                                             : "Loop";
    std::string out = name;
    out.push_back('(');
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i) out += ", ";
        out += format_tree(t.children[i]);
    }
    out.push_back(')');
    return out;
}

// Sorts the children of commutative operators (Xor, And, and the redo parts
// of Loop) by their serialized form, recursively.
inline ProcessTree canonical_tree(const ProcessTree& t) {
    ProcessTree out = t;
    for (auto& c : out.children) c = canonical_tree(c);
    auto by_text = [](const ProcessTree& a, const ProcessTree& b) {
        return format_tree(a) < format_tree(b);
    };
    if (out.kind == TreeKind::ExclusiveChoice || out.kind == TreeKind::Concurrent)
        std::sort(out.children.begin(), out.children.end(), by_text);
    else if (out.kind == TreeKind::Loop && out.children.size() > 2)
        std::sort(out.children.begin() + 1, out.children.end(), by_text);
    return out;
}

namespace detail {

class TreeTextParser {
public:
    explicit TreeTextParser(std::string_view text) : text_(text) {}

    ProcessTree parse() {
        ProcessTree t = parse_node();
        skip_space();
        if (pos_ != text_.size()) throw ParseError("trailing characters after process tree");
        validate_tree(t);
        return t;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                text_[pos_] == '\r'))
            ++pos_;
    }

    ProcessTree parse_node() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of process tree text");
        if (text_[pos_] == '\'') return ProcessTree::activity(parse_quoted());
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '(' || c == ')' || c == ',' || c == '\'' || c == ' ' || c == '\t' ||
                c == '\n' || c == '\r')
                break;
            ++pos_;
        }
        std::string token(text_.substr(start, pos_ - start));
        if (token.empty()) throw ParseError("expected a node in process tree text");
        skip_space();
        bool has_paren = pos_ < text_.size() && text_[pos_] == '(';
        if (has_paren &&
            (token == "Seq" || token == "Xor" || token == "And" || token == "Loop")) {
            ++pos_;
            std::vector<ProcessTree> children;
            children.push_back(parse_node());
            skip_space();
            while (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                children.push_back(parse_node());
                skip_space();
            }
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw ParseError("expected ')' in process tree text");
            ++pos_;
            TreeKind kind = token == "Seq"   ? TreeKind::Sequence
                            : token == "Xor" ? TreeKind::ExclusiveChoice
                            : token == "And" ? TreeKind::Concurrent
                                             : TreeKind::Loop;
            if (children.size() < 2)
                throw ParseError(token + " needs at least 2 children");
            return ProcessTree::make(kind, std::move(children));
        }
        if (token == "tau") return ProcessTree::silent();
        return ProcessTree::activity(std::move(token));
    }

    std::string parse_quoted() {
        ++pos_;  // opening quote
        std::string label;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\'') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
                    label.push_back('\'');
                    pos_ += 2;
                    continue;
                }
                ++pos_;
                return label;
            }
            label.push_back(c);
            ++pos_;
        }
        throw ParseError("unterminated quoted label in process tree text");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline ProcessTree parse_tree(std::string_view text) {
    return detail::TreeTextParser(text).parse();
}

}  // namespace procmine
