#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "procmine/errors.hpp"

namespace procmine {

// Minimal non-validating pull parser, sufficient for the XES and PNML subsets
// handled here: elements, attributes, character data, comments, CDATA, and
// the five predefined entities plus numeric references. No DTDs, no
// namespaces processing (prefixes are kept verbatim in names).
class XmlReader {
public:
    enum class NodeKind { StartElement, EndElement, Text };

    struct Attribute {
        std::string name;
        std::string value;
    };

    struct Node {
        NodeKind kind;
        std::string name;                    // element name; empty for Text
        std::vector<Attribute> attributes;   // StartElement only
        std::string text;                    // Text only
        std::size_t line = 0;
    };

    explicit XmlReader(std::string_view input) : input_(input) {}

    // Next node, or nullopt at end of input. Self-closing elements yield a
    // StartElement followed by a synthetic EndElement. Whitespace-only
    // character data is skipped.
    std::optional<Node> next() {
        if (pending_end_) {
            pending_end_ = false;
            Node node;
            node.kind = NodeKind::EndElement;
            node.name = std::move(pending_end_name_);
            node.line = line_;
            return node;
        }
        while (pos_ < input_.size()) {
            if (input_[pos_] == '<') {
                if (starts_with("<?")) {
                    skip_until("?>", "unterminated processing instruction");
                    continue;
                }
                if (starts_with("<!--")) {
                    skip_until("-->", "unterminated comment");
                    continue;
                }
                if (starts_with("<![CDATA[")) {
                    return read_cdata();
                }
                if (starts_with("<!")) {
                    skip_until(">", "unterminated declaration");
                    continue;
                }
                return read_tag();
            }
            auto text = read_text();
            if (text) return text;
        }
        return std::nullopt;
    }

    // Consumes nodes until the EndElement matching an already-consumed
    // StartElement of the given name.
    void skip_element(const std::string& name) {
        std::size_t depth = 1;
        while (depth > 0) {
            auto node = next();
            if (!node) throw ParseError("unexpected end of input inside <" + name + ">", line_);
            if (node->kind == NodeKind::StartElement)
                ++depth;
            else if (node->kind == NodeKind::EndElement)
                --depth;
        }
    }

    std::size_t line() const { return line_; }

private:
    bool starts_with(std::string_view prefix) const {
        return input_.substr(pos_).substr(0, prefix.size()) == prefix;
    }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < input_.size(); ++i, ++pos_)
            if (input_[pos_] == '\n') ++line_;
    }

    void skip_until(std::string_view terminator, const char* error) {
        std::size_t found = input_.find(terminator, pos_);
        if (found == std::string_view::npos) throw ParseError(error, line_);
        advance(found + terminator.size() - pos_);
    }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

    static bool is_name_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '-' || c == '.' || c == ':';
    }

    void skip_space() {
        while (pos_ < input_.size() && is_space(input_[pos_])) advance(1);
    }

    std::string read_name() {
        std::size_t start = pos_;
        while (pos_ < input_.size() && is_name_char(input_[pos_])) advance(1);
        if (pos_ == start) throw ParseError("expected a name", line_);
        return std::string(input_.substr(start, pos_ - start));
    }

    std::string decode_entities(std::string_view raw, std::size_t line) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out.push_back(raw[i]);
                continue;
            }
            std::size_t semi = raw.find(';', i + 1);
            if (semi == std::string_view::npos) throw ParseError("unterminated entity", line);
            std::string_view entity = raw.substr(i + 1, semi - i - 1);
            if (entity == "amp")
                out.push_back('&');
            else if (entity == "lt")
                out.push_back('<');
            else if (entity == "gt")
                out.push_back('>');
            else if (entity == "quot")
                out.push_back('"');
            else if (entity == "apos")
                out.push_back('\'');
            else if (entity.size() >= 2 && entity[0] == '#') {
                unsigned long code = 0;
                try {
                    code = entity[1] == 'x' || entity[1] == 'X'
                               ? std::stoul(std::string(entity.substr(2)), nullptr, 16)
                               : std::stoul(std::string(entity.substr(1)), nullptr, 10);
                } catch (const std::exception&) {
                    throw ParseError("bad numeric entity '&" + std::string(entity) + ";'", line);
                }
                append_utf8(out, code, line);
            } else {
                throw ParseError("unknown entity '&" + std::string(entity) + ";'", line);
            }
            i = semi;
        }
        return out;
    }

    static void append_utf8(std::string& out, unsigned long code, std::size_t line) {
        if (code <= 0x7F) {
            out.push_back(static_cast<char>(code));
        } else if (code <= 0x7FF) {
            out.push_back(static_cast<char>(0xC0 | (code >> 6)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else if (code <= 0xFFFF) {
            out.push_back(static_cast<char>(0xE0 | (code >> 12)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else if (code <= 0x10FFFF) {
            out.push_back(static_cast<char>(0xF0 | (code >> 18)));
            out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else {
            throw ParseError("numeric entity out of range", line);
        }
    }

    Node read_cdata() {
        std::size_t line = line_;
        advance(9);  // <![CDATA[
        std::size_t end = input_.find("]]>", pos_);
        if (end == std::string_view::npos) throw ParseError("unterminated CDATA section", line);
        Node node;
        node.kind = NodeKind::Text;
        node.text = std::string(input_.substr(pos_, end - pos_));
        node.line = line;
        advance(end + 3 - pos_);
        return node;
    }

    std::optional<Node> read_text() {
        std::size_t line = line_;
        std::size_t start = pos_;
        while (pos_ < input_.size() && input_[pos_] != '<') advance(1);
        std::string_view raw = input_.substr(start, pos_ - start);
        bool only_space = true;
        for (char c : raw)
            if (!is_space(c)) {
                only_space = false;
                break;
            }
        if (only_space) return std::nullopt;
        Node node;
        node.kind = NodeKind::Text;
        node.text = decode_entities(raw, line);
        node.line = line;
        return node;
    }

    Node read_tag() {
        std::size_t line = line_;
        advance(1);  // <
        if (pos_ < input_.size() && input_[pos_] == '/') {
            advance(1);
            Node node;
            node.kind = NodeKind::EndElement;
            node.name = read_name();
            node.line = line;
            skip_space();
            if (pos_ >= input_.size() || input_[pos_] != '>')
                throw ParseError("expected '>' after </" + node.name, line_);
            advance(1);
            return node;
        }
        Node node;
        node.kind = NodeKind::StartElement;
        node.name = read_name();
        node.line = line;
        for (;;) {
            skip_space();
            if (pos_ >= input_.size()) throw ParseError("unterminated tag <" + node.name, line);
            char c = input_[pos_];
            if (c == '>') {
                advance(1);
                return node;
            }
            if (c == '/') {
                advance(1);
                if (pos_ >= input_.size() || input_[pos_] != '>')
                    throw ParseError("expected '/>' in <" + node.name, line_);
                advance(1);
                pending_end_ = true;
                pending_end_name_ = node.name;
                return node;
            }
            Attribute attr;
            attr.name = read_name();
            skip_space();
            if (pos_ >= input_.size() || input_[pos_] != '=')
                throw ParseError("expected '=' after attribute '" + attr.name + "'", line_);
            advance(1);
            skip_space();
            if (pos_ >= input_.size() || (input_[pos_] != '"' && input_[pos_] != '\''))
                throw ParseError("expected quoted value for attribute '" + attr.name + "'", line_);
            char quote = input_[pos_];
            advance(1);
            std::size_t value_start = pos_;
            std::size_t value_line = line_;
            while (pos_ < input_.size() && input_[pos_] != quote) {
                if (input_[pos_] == '<')
                    throw ParseError("'<' in attribute value of '" + attr.name + "'", line_);
                advance(1);
            }
            if (pos_ >= input_.size())
                throw ParseError("unterminated value for attribute '" + attr.name + "'", value_line);
            attr.value = decode_entities(input_.substr(value_start, pos_ - value_start), value_line);
            advance(1);
            node.attributes.push_back(std::move(attr));
        }
    }

    std::string_view input_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    bool pending_end_ = false;
    std::string pending_end_name_;
};

inline std::string xml_escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace procmine
