#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "procmine/errors.hpp"
#include "procmine/petri.hpp"
#include "procmine/xes.hpp"
#include "procmine/xml.hpp"

namespace procmine {

// PNML subset: net/page/place/transition/arc with initialMarking, plus the
// widely used <finalmarkings> extension.  Silent transitions are written
// without a <name> element and read back as silent.
inline std::string export_pnml(const PetriNet& net) {
    validate_net(net);
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n";
    out += "  <net id=\"net1\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n";
    out += "    <page id=\"page1\">\n";
    for (std::size_t p = 0; p < net.places.size(); ++p) {
        out += "      <place id=\"" + xml_escape(net.places[p]) + "\">\n";
        if (net.initial_marking.tokens[p] > 0)
            out += "        <initialMarking><text>" +
                   std::to_string(net.initial_marking.tokens[p]) + "</text></initialMarking>\n";
        out += "      </place>\n";
    }
    for (const auto& t : net.transitions) {
        if (t.silent()) {
            out += "      <transition id=\"" + xml_escape(t.id) + "\"/>\n";
        } else {
            out += "      <transition id=\"" + xml_escape(t.id) + "\">\n";
            out += "        <name><text>" + xml_escape(t.label) + "</text></name>\n";
            out += "      </transition>\n";
        }
    }
    std::size_t arc = 0;
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        for (int p : net.preset[t])
            out += "      <arc id=\"arc" + std::to_string(arc++) + "\" source=\"" +
                   xml_escape(net.places[static_cast<std::size_t>(p)]) + "\" target=\"" +
                   xml_escape(net.transitions[t].id) + "\"/>\n";
        for (int p : net.postset[t])
            out += "      <arc id=\"arc" + std::to_string(arc++) + "\" source=\"" +
                   xml_escape(net.transitions[t].id) + "\" target=\"" +
                   xml_escape(net.places[static_cast<std::size_t>(p)]) + "\"/>\n";
    }
    out += "    </page>\n";
    bool any_final = false;
    for (std::int32_t tokens : net.final_marking.tokens)
        if (tokens > 0) any_final = true;
    if (any_final) {
        out += "    <finalmarkings>\n      <marking>\n";
        for (std::size_t p = 0; p < net.places.size(); ++p)
            if (net.final_marking.tokens[p] > 0)
                out += "        <place idref=\"" + xml_escape(net.places[p]) + "\"><text>" +
                       std::to_string(net.final_marking.tokens[p]) + "</text></place>\n";
        out += "      </marking>\n    </finalmarkings>\n";
    }
    out += "  </net>\n</pnml>\n";
    return out;
}

namespace detail {

inline const std::string* find_xml_attr(const XmlReader::Node& node, std::string_view name) {
    for (const auto& a : node.attributes)
        if (a.name == name) return &a.value;
    return nullptr;
}

// Character data of the <text> child of the current element, e.g.
// <name><text>label</text></name>; empty when no text is present.
inline std::string pnml_text_content(XmlReader& reader, const std::string& element) {
    using Kind = XmlReader::NodeKind;
    std::string value;
    while (auto node = reader.next()) {
        if (node->kind == Kind::EndElement && node->name == element) return value;
        if (node->kind != Kind::StartElement) continue;
        if (node->name == "text") {
            while (auto inner = reader.next()) {
                if (inner->kind == Kind::EndElement && inner->name == "text") break;
                if (inner->kind == Kind::Text) value += inner->text;
            }
        } else {
            reader.skip_element(node->name);
        }
    }
    throw ParseError("unexpected end of PNML inside <" + element + ">", 0);
}

}  // namespace detail

// Parses a PNML document.  Arcs may reference nodes declared later; they are
// resolved once the whole document has been read.  A missing <finalmarkings>
// section puts one token on every sink place (empty postset) instead.
inline PetriNet import_pnml(std::string_view text) {
    using Kind = XmlReader::NodeKind;
    XmlReader reader(text);
    PetriNet net;
    struct RawArc {
        std::string source, target;
        std::size_t line;
    };
    std::vector<RawArc> arcs;
    std::map<std::string, std::int32_t> final_tokens;
    bool has_final = false;
    bool in_net = false;
    bool net_done = false;
    std::set<std::string> ids;

    while (auto node = reader.next()) {
        if (node->kind == Kind::EndElement && node->name == "net") {
            in_net = false;
            continue;
        }
        if (node->kind != Kind::StartElement) continue;
        if (node->name == "pnml" || node->name == "page") continue;
        if (node->name == "net") {
            if (net_done) {  // only the first net is read
                reader.skip_element("net");
                continue;
            }
            in_net = true;
            net_done = true;
            continue;
        }
        if (!in_net) {
            reader.skip_element(node->name);
            continue;
        }
        if (node->name == "place") {
            const std::string* id = detail::find_xml_attr(*node, "id");
            if (!id) throw ParseError("<place> without id", node->line);
            if (!ids.insert(*id).second)
                throw ParseError("duplicate PNML id '" + *id + "'", node->line);
            int p = net.add_place(*id);
            while (auto child = reader.next()) {
                if (child->kind == Kind::EndElement && child->name == "place") break;
                if (child->kind != Kind::StartElement) continue;
                if (child->name == "initialMarking") {
                    std::string count = detail::pnml_text_content(reader, "initialMarking");
                    net.initial_marking.tokens[static_cast<std::size_t>(p)] =
                        static_cast<std::int32_t>(detail::parse_int_strict(count, child->line));
                } else {
                    reader.skip_element(child->name);
                }
            }
        } else if (node->name == "transition") {
            const std::string* id = detail::find_xml_attr(*node, "id");
            if (!id) throw ParseError("<transition> without id", node->line);
            if (!ids.insert(*id).second)
                throw ParseError("duplicate PNML id '" + *id + "'", node->line);
            std::string label;
            while (auto child = reader.next()) {
                if (child->kind == Kind::EndElement && child->name == "transition") break;
                if (child->kind != Kind::StartElement) continue;
                if (child->name == "name")
                    label = detail::pnml_text_content(reader, "name");
                else
                    reader.skip_element(child->name);
            }
            net.add_transition(*id, label);
        } else if (node->name == "arc") {
            const std::string* source = detail::find_xml_attr(*node, "source");
            const std::string* target = detail::find_xml_attr(*node, "target");
            if (!source || !target) throw ParseError("<arc> without source/target", node->line);
            arcs.push_back({*source, *target, node->line});
            reader.skip_element("arc");
        } else if (node->name == "finalmarkings") {
            has_final = true;
            while (auto child = reader.next()) {
                if (child->kind == Kind::EndElement && child->name == "finalmarkings") break;
                if (child->kind != Kind::StartElement) continue;
                if (child->name == "marking") continue;
                if (child->name == "place") {
                    const std::string* idref = detail::find_xml_attr(*child, "idref");
                    if (!idref)
                        throw ParseError("final-marking <place> without idref", child->line);
                    std::string count = detail::pnml_text_content(reader, "place");
                    final_tokens[*idref] = count.empty()
                                               ? 1
                                               : static_cast<std::int32_t>(
                                                     detail::parse_int_strict(count, child->line));
                } else {
                    reader.skip_element(child->name);
                }
            }
        } else {
            reader.skip_element(node->name);
        }
    }
    if (!net_done) throw ParseError("no <net> element found", reader.line());

    for (const RawArc& arc : arcs) {
        int sp = net.place_index(arc.source);
        int st = net.transition_index(arc.source);
        int tp = net.place_index(arc.target);
        int tt = net.transition_index(arc.target);
        if (sp >= 0 && tt >= 0)
            net.add_arc_pt(sp, tt);
        else if (st >= 0 && tp >= 0)
            net.add_arc_tp(st, tp);
        else if (sp < 0 && st < 0)
            throw ParseError("arc references unknown node '" + arc.source + "'", arc.line);
        else if (tp < 0 && tt < 0)
            throw ParseError("arc references unknown node '" + arc.target + "'", arc.line);
        else
            throw ParseError("arc between two nodes of the same kind ('" + arc.source + "' -> '" +
                                 arc.target + "')",
                             arc.line);
    }

    if (has_final) {
        for (const auto& [id, tokens] : final_tokens) {
            int p = net.place_index(id);
            if (p < 0) throw ParseError("final marking references unknown place '" + id + "'", 0);
            net.final_marking.tokens[static_cast<std::size_t>(p)] = tokens;
        }
    } else {
        // No explicit final marking: every sink place carries one token.
        std::vector<bool> has_out(net.places.size(), false);
        for (const auto& pre : net.preset)
            for (int p : pre) has_out[static_cast<std::size_t>(p)] = true;
        for (std::size_t p = 0; p < net.places.size(); ++p)
            if (!has_out[p]) net.final_marking.tokens[p] = 1;
    }
    validate_net(net);
    return net;
}

}  // namespace procmine
