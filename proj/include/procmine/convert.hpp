#pragma once

#include <string>
#include <vector>

#include "procmine/heuristics.hpp"
#include "procmine/petri.hpp"
#include "procmine/process_tree.hpp"

namespace procmine {

namespace detail {

class TreeNetBuilder {
public:
    PetriNet build(const ProcessTree& tree) {
        int source = new_place();
        int sink = new_place();
        fragment(tree, source, sink);

        // Loops at the root wire redo arcs back into the entry/exit places;
        // buffer with silent transitions to keep the workflow-net shape.
        bool source_has_in = false, sink_has_out = false;
        for (const auto& v : net_.postset)
            if (std::find(v.begin(), v.end(), source) != v.end()) source_has_in = true;
        for (const auto& v : net_.preset)
            if (std::find(v.begin(), v.end(), sink) != v.end()) sink_has_out = true;
        if (source_has_in) {
            int fresh = new_place();
            int t = new_silent();
            net_.add_arc_pt(fresh, t);
            net_.add_arc_tp(t, source);
            source = fresh;
        }
        if (sink_has_out) {
            int fresh = new_place();
            int t = new_silent();
            net_.add_arc_pt(sink, t);
            net_.add_arc_tp(t, fresh);
            sink = fresh;
        }
        net_.initial_marking.tokens[static_cast<std::size_t>(source)] = 1;
        net_.final_marking.tokens[static_cast<std::size_t>(sink)] = 1;
        return std::move(net_);
    }

private:
    int new_place() { return net_.add_place("p" + std::to_string(next_place_++)); }

    int new_silent() {
        return net_.add_transition("t" + std::to_string(next_transition_++), "");
    }

    int new_transition(const std::string& label) {
        return net_.add_transition("t" + std::to_string(next_transition_++), label);
    }

    void fragment(const ProcessTree& node, int entry, int exit) {
        switch (node.kind) {
            case TreeKind::Activity: {
                int t = new_transition(node.label);
                net_.add_arc_pt(entry, t);
                net_.add_arc_tp(t, exit);
                break;
            }
            case TreeKind::Silent: {
                int t = new_silent();
                net_.add_arc_pt(entry, t);
                net_.add_arc_tp(t, exit);
                break;
            }
            case TreeKind::Sequence: {
                int current = entry;
                for (std::size_t i = 0; i + 1 < node.children.size(); ++i) {
                    int mid = new_place();
                    fragment(node.children[i], current, mid);
                    current = mid;
                }
                fragment(node.children.back(), current, exit);
                break;
            }
            case TreeKind::ExclusiveChoice: {
                for (const auto& child : node.children) fragment(child, entry, exit);
                break;
            }
            case TreeKind::Concurrent: {
                int split = new_silent();
                int join = new_silent();
                net_.add_arc_pt(entry, split);
                net_.add_arc_tp(join, exit);
                for (const auto& child : node.children) {
                    int in = new_place();
                    int out = new_place();
                    net_.add_arc_tp(split, in);
                    net_.add_arc_pt(out, join);
                    fragment(child, in, out);
                }
                break;
            }
            case TreeKind::Loop: {
                fragment(node.children[0], entry, exit);
                for (std::size_t i = 1; i < node.children.size(); ++i)
                    fragment(node.children[i], exit, entry);
                break;
            }
        }
    }

    PetriNet net_;
    int next_place_ = 0;
    int next_transition_ = 0;
};

}  // namespace detail

// Standard recursive construction; the net's language equals the tree's.
inline PetriNet tree_to_petri(const ProcessTree& tree) {
    validate_tree(tree);
    return detail::TreeNetBuilder().build(tree);
}

// One channel place per dependency arc; a binding becomes a silent routing
// transition unless a node has a single binding on that side, in which case
// the activity transition touches its channel places directly (so a plain
// chain converts to a plain chain). Long-distance arcs are advisory and not
// encoded. Start/end behave like a single virtual binding over the source and
// sink places.
inline PetriNet cnet_to_petri(const CausalNet& cnet) {
    PetriNet net;
    if (cnet.nodes.empty()) {
        int p = net.add_place("source");
        net.initial_marking.tokens[static_cast<std::size_t>(p)] = 1;
        net.final_marking.tokens[static_cast<std::size_t>(p)] = 1;
        return net;
    }

    auto sources = cnet.source_nodes();
    auto sinks = cnet.sink_nodes();
    if (cnet.nodes.size() > 1) {
        for (const auto& node : cnet.nodes) {
            bool no_in = !cnet.input_bindings.count(node) || cnet.input_bindings.at(node).empty();
            bool no_out =
                !cnet.output_bindings.count(node) || cnet.output_bindings.at(node).empty();
            if (no_in && no_out)
                throw DomainError("disconnected activity '" + node + "' in causal net");
        }
    }
    if (sources.empty()) throw DomainError("causal net has no start node");
    if (sinks.empty()) throw DomainError("causal net has no end node");

    int p_source = net.add_place("source");
    int p_sink = net.add_place("sink");

    std::map<std::pair<std::string, std::string>, int> channel;
    auto channel_place = [&](const std::string& a, const std::string& b) {
        auto it = channel.find({a, b});
        if (it != channel.end()) return it->second;
        int p = net.add_place("arc " + a + " -> " + b);
        channel[{a, b}] = p;
        return p;
    };

    static const std::vector<std::set<std::string>> no_bindings;
    auto bindings_of = [](const std::map<std::string, std::vector<std::set<std::string>>>& m,
                          const std::string& node) -> const std::vector<std::set<std::string>>& {
        auto it = m.find(node);
        return it == m.end() ? no_bindings : it->second;
    };

    std::map<std::string, int> activity_transition;
    for (const auto& node : cnet.nodes)
        activity_transition[node] = net.add_transition("t " + node, node);

    for (const auto& node : cnet.nodes) {
        int t = activity_transition[node];
        const auto& inputs = bindings_of(cnet.input_bindings, node);
        if (inputs.empty()) {
            if (sources.size() == 1) {
                net.add_arc_pt(p_source, t);
            } else {
                int entry = net.add_place("entry " + node);
                int router = net.add_transition("start " + node, "");
                net.add_arc_pt(p_source, router);
                net.add_arc_tp(router, entry);
                net.add_arc_pt(entry, t);
            }
        } else if (inputs.size() == 1) {
            for (const auto& u : inputs[0]) net.add_arc_pt(channel_place(u, node), t);
        } else {
            int ready = net.add_place("ready " + node);
            net.add_arc_pt(ready, t);
            for (std::size_t k = 0; k < inputs.size(); ++k) {
                int router =
                    net.add_transition("in " + node + " #" + std::to_string(k + 1), "");
                for (const auto& u : inputs[k]) net.add_arc_pt(channel_place(u, node), router);
                net.add_arc_tp(router, ready);
            }
        }

        const auto& outputs = bindings_of(cnet.output_bindings, node);
        if (outputs.empty()) {
            if (sinks.size() == 1) {
                net.add_arc_tp(t, p_sink);
            } else {
                int exit = net.add_place("exit " + node);
                int router = net.add_transition("end " + node, "");
                net.add_arc_tp(t, exit);
                net.add_arc_pt(exit, router);
                net.add_arc_tp(router, p_sink);
            }
        } else if (outputs.size() == 1) {
            for (const auto& b : outputs[0]) net.add_arc_tp(t, channel_place(node, b));
        } else {
            int done = net.add_place("done " + node);
            net.add_arc_tp(t, done);
            for (std::size_t k = 0; k < outputs.size(); ++k) {
                int router =
                    net.add_transition("out " + node + " #" + std::to_string(k + 1), "");
                net.add_arc_pt(done, router);
                for (const auto& b : outputs[k]) net.add_arc_tp(router, channel_place(node, b));
            }
        }
    }

    net.initial_marking.tokens[static_cast<std::size_t>(p_source)] = 1;
    net.final_marking.tokens[static_cast<std::size_t>(p_sink)] = 1;
    return net;
}

}  // namespace procmine
