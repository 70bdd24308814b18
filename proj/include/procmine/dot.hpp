#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "procmine/dfg.hpp"
#include "procmine/heuristics.hpp"
#include "procmine/petri.hpp"
#include "procmine/process_tree.hpp"

namespace procmine {

namespace detail {

inline std::string dot_escape(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

inline std::string format_measure(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

}  // namespace detail

// Petri net rendering: places as circles, transitions as boxes, silent
// transitions as filled boxes.  Node order follows the net's own order, so
// output is deterministic.
inline std::string export_dot(const PetriNet& net) {
    std::string out = "digraph petrinet {\n  rankdir=LR;\n";
    for (std::size_t p = 0; p < net.places.size(); ++p) {
        out += "  place_" + std::to_string(p) + " [shape=circle, label=\"" +
               detail::dot_escape(net.places[p]) + "\"";
        if (net.initial_marking.tokens[p] > 0 || net.final_marking.tokens[p] > 0)
            out += ", penwidth=2";
        out += "];\n";
    }
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        if (net.transitions[t].silent())
            out += "  trans_" + std::to_string(t) +
                   " [shape=box, style=filled, fillcolor=black, label=\"\"];\n";
        else
            out += "  trans_" + std::to_string(t) + " [shape=box, label=\"" +
                   detail::dot_escape(net.transitions[t].label) + "\"];\n";
    }
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        for (int p : net.preset[t])
            out += "  place_" + std::to_string(p) + " -> trans_" + std::to_string(t) + ";\n";
        for (int p : net.postset[t])
            out += "  trans_" + std::to_string(t) + " -> place_" + std::to_string(p) + ";\n";
    }
    out += "}\n";
    return out;
}

namespace detail {

inline void tree_dot_nodes(const ProcessTree& tree, std::string& out, int& counter, int parent) {
    int self = counter++;
    std::string name = "node_" + std::to_string(self);
    switch (tree.kind) {
        case TreeKind::Activity:
            out += "  " + name + " [shape=box, label=\"" + dot_escape(tree.label) + "\"];\n";
            break;
        case TreeKind::Silent:
            out += "  " + name + " [shape=box, style=filled, fillcolor=black, label=\"\"];\n";
            break;
        case TreeKind::Sequence:
            out += "  " + name + " [shape=circle, label=\"seq\"];\n";
            break;
        case TreeKind::ExclusiveChoice:
            out += "  " + name + " [shape=circle, label=\"xor\"];\n";
            break;
        case TreeKind::Concurrent:
            out += "  " + name + " [shape=circle, label=\"and\"];\n";
            break;
        case TreeKind::Loop:
            out += "  " + name + " [shape=circle, label=\"loop\"];\n";
            break;
    }
    if (parent >= 0) out += "  node_" + std::to_string(parent) + " -> " + name + ";\n";
    for (const auto& child : tree.children) tree_dot_nodes(child, out, counter, self);
}

}  // namespace detail

inline std::string export_dot(const ProcessTree& tree) {
    std::string out = "digraph processtree {\n";
    int counter = 0;
    detail::tree_dot_nodes(tree, out, counter, -1);
    out += "}\n";
    return out;
}

// Causal-net rendering: one box per activity, dependency arcs labelled with
// their measure and frequency.  Repaired arcs are dashed; long-distance
// dependencies dotted.
inline std::string export_dot(const CausalNet& cnet) {
    std::string out = "digraph causalnet {\n  rankdir=LR;\n  node [shape=box];\n";
    std::map<std::string, std::size_t> index;
    for (const auto& node : cnet.nodes) {
        std::size_t i = index.size();
        index[node] = i;
        out += "  act_" + std::to_string(i) + " [label=\"" + detail::dot_escape(node) + "\"];\n";
    }
    for (const auto& [pair, arc] : cnet.graph.arcs) {
        out += "  act_" + std::to_string(index.at(pair.first)) + " -> act_" +
               std::to_string(index.at(pair.second)) + " [label=\"" +
               detail::format_measure(arc.value) + " (" + std::to_string(arc.count) + ")\"";
        if (arc.repaired) out += ", style=dashed";
        out += "];\n";
    }
    for (const auto& [from, to] : cnet.long_distance_arcs)
        out += "  act_" + std::to_string(index.at(from)) + " -> act_" +
               std::to_string(index.at(to)) + " [style=dotted, constraint=false];\n";
    out += "}\n";
    return out;
}

// Directly-follows graph with synthetic start/end markers.
inline std::string export_dot(const Dfg& graph) {
    std::string out = "digraph dfg {\n  rankdir=LR;\n";
    std::map<std::string, std::size_t> index;
    for (const auto& node : graph.nodes) {
        std::size_t i = index.size();
        index[node] = i;
        out += "  act_" + std::to_string(i) + " [shape=box, label=\"" +
               detail::dot_escape(node) + "\"];\n";
    }
    if (!graph.start_activities.empty())
        out += "  start [shape=circle, style=filled, fillcolor=green, label=\"\"];\n";
    if (!graph.end_activities.empty())
        out += "  end [shape=circle, style=filled, fillcolor=orange, label=\"\"];\n";
    for (const auto& [node, count] : graph.start_activities)
        out += "  start -> act_" + std::to_string(index.at(node)) + " [label=\"" +
               std::to_string(count) + "\"];\n";
    for (const auto& [edge, count] : graph.edges)
        out += "  act_" + std::to_string(index.at(edge.first)) + " -> act_" +
               std::to_string(index.at(edge.second)) + " [label=\"" + std::to_string(count) +
               "\"];\n";
    for (const auto& [node, count] : graph.end_activities)
        out += "  act_" + std::to_string(index.at(node)) + " -> end [label=\"" +
               std::to_string(count) + "\"];\n";
    out += "}\n";
    return out;
}

}  // namespace procmine
