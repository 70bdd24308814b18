#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "procmine/dfg.hpp"
#include "procmine/errors.hpp"
#include "procmine/eventlog.hpp"

namespace procmine {

struct HeuristicsParams {
    double dependency_threshold = 0.95;
    double long_distance_threshold = 0.98;
    double and_threshold = 0.65;
    std::uint64_t min_directly_follows = 1;
};

inline void validate_params(const HeuristicsParams& p) {
    if (p.dependency_threshold < 0.0 || p.dependency_threshold > 1.0)
        throw ConfigError("dependency threshold must be in [0,1]");
    if (p.long_distance_threshold < 0.0 || p.long_distance_threshold > 1.0)
        throw ConfigError("long distance threshold must be in [0,1]");
    if (p.and_threshold < 0.0 || p.and_threshold > 1.0)
        throw ConfigError("and threshold must be in [0,1]");
    if (p.min_directly_follows < 1)
        throw ConfigError("min directly-follows count must be at least 1");
}

inline double dependency_measure(std::uint64_t count_ab, std::uint64_t count_ba) {
    return (static_cast<double>(count_ab) - static_cast<double>(count_ba)) /
           (static_cast<double>(count_ab) + static_cast<double>(count_ba) + 1.0);
}

inline double self_dependency_measure(std::uint64_t count_aa) {
    return static_cast<double>(count_aa) / (static_cast<double>(count_aa) + 1.0);
}

inline double two_loop_measure(std::uint64_t count_aba, std::uint64_t count_bab) {
    return (static_cast<double>(count_aba) + static_cast<double>(count_bab)) /
           (static_cast<double>(count_aba) + static_cast<double>(count_bab) + 1.0);
}

struct DependencyArc {
    double value = 0.0;
    std::uint64_t count = 0;
    bool repaired = false;
};

struct DependencyGraph {
    std::set<std::string> nodes;
    std::map<std::pair<std::string, std::string>, DependencyArc> arcs;
    Dfg frequencies;

    bool has_arc(const std::string& a, const std::string& b) const {
        return arcs.count({a, b}) > 0;
    }
};

namespace detail {

// a,b,a patterns per ordered pair, for length-two-loop detection.
inline std::map<std::pair<std::string, std::string>, std::uint64_t> two_loop_counts(
    const EventLog& log) {
    std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
    for (const auto& trace : log.traces)
        for (std::size_t i = 0; i + 2 < trace.events.size(); ++i) {
            const auto& a = trace.events[i].activity;
            const auto& b = trace.events[i + 1].activity;
            if (a == b) continue;
            if (trace.events[i + 2].activity == a) counts[{a, b}]++;
        }
    return counts;
}

}  // namespace detail

// Thresholded dependency graph with self-loop and length-two-loop handling,
// then all-activities-connected repair: every activity observed with a
// directly-follows predecessor keeps at least one incoming arc, every
// activity observed with a successor keeps one outgoing arc; rescued arcs are
// the best-valued candidates and carry the repaired flag.
inline DependencyGraph build_dependency_graph(const EventLog& log,
                                              const HeuristicsParams& params) {
    validate_params(params);
    DependencyGraph graph;
    graph.frequencies = build_dfg(log);
    graph.nodes = log.alphabet();
    const Dfg& freq = graph.frequencies;

    for (const auto& a : graph.nodes) {
        std::uint64_t aa = freq.count(a, a);
        if (aa >= params.min_directly_follows &&
            self_dependency_measure(aa) >= params.dependency_threshold)
            graph.arcs[{a, a}] = {self_dependency_measure(aa), aa, false};
    }

    auto two_loops = detail::two_loop_counts(log);
    for (const auto& a : graph.nodes)
        for (const auto& b : graph.nodes) {
            if (a >= b) continue;
            if (graph.has_arc(a, a) || graph.has_arc(b, b)) continue;
            std::uint64_t aba = 0, bab = 0;
            if (auto it = two_loops.find({a, b}); it != two_loops.end()) aba = it->second;
            if (auto it = two_loops.find({b, a}); it != two_loops.end()) bab = it->second;
            if (aba + bab == 0) continue;
            double measure = two_loop_measure(aba, bab);
            if (measure < params.dependency_threshold) continue;
            if (freq.count(a, b) >= params.min_directly_follows)
                graph.arcs[{a, b}] = {measure, freq.count(a, b), false};
            if (freq.count(b, a) >= params.min_directly_follows)
                graph.arcs[{b, a}] = {measure, freq.count(b, a), false};
        }

    for (const auto& [edge, count] : freq.edges) {
        if (edge.first == edge.second || graph.has_arc(edge.first, edge.second)) continue;
        if (count < params.min_directly_follows) continue;
        double measure = dependency_measure(count, freq.count(edge.second, edge.first));
        if (measure >= params.dependency_threshold)
            graph.arcs[{edge.first, edge.second}] = {measure, count, false};
    }

    // Repair pass. An activity is a pure start (end) when no directly-follows
    // edge ever enters (leaves) it; those are exempt.
    for (const auto& x : graph.nodes) {
        bool observed_in = false, has_in = false;
        bool observed_out = false, has_out = false;
        for (const auto& [edge, count] : freq.edges) {
            (void)count;
            if (edge.second == x) observed_in = true;
            if (edge.first == x) observed_out = true;
        }
        for (const auto& [arc, info] : graph.arcs) {
            (void)info;
            if (arc.second == x) has_in = true;
            if (arc.first == x) has_out = true;
        }
        if (observed_in && !has_in) {
            std::string best;
            double best_value = -2.0;
            for (const auto& [edge, count] : freq.edges) {
                (void)count;
                if (edge.second != x) continue;
                const auto& u = edge.first;
                double value = u == x ? self_dependency_measure(freq.count(x, x))
                                      : dependency_measure(freq.count(u, x), freq.count(x, u));
                if (value > best_value || (value == best_value && u < best)) {
                    best = u;
                    best_value = value;
                }
            }
            graph.arcs[{best, x}] = {best_value, freq.count(best, x), true};
        }
        if (observed_out && !has_out) {
            std::string best;
            double best_value = -2.0;
            for (const auto& [edge, count] : freq.edges) {
                (void)count;
                if (edge.first != x) continue;
                const auto& v = edge.second;
                double value = v == x ? self_dependency_measure(freq.count(x, x))
                                      : dependency_measure(freq.count(x, v), freq.count(v, x));
                if (value > best_value || (value == best_value && v < best)) {
                    best = v;
                    best_value = value;
                }
            }
            graph.arcs[{x, best}] = {best_value, freq.count(x, best), true};
        }
    }
    return graph;
}

// Activities attached to the graph by at least one arc that met the
// thresholds on its own (i.e. not only by repair).
inline std::set<std::string> genuinely_connected(const DependencyGraph& graph) {
    std::set<std::string> connected;
    for (const auto& [arc, info] : graph.arcs)
        if (!info.repaired) {
            connected.insert(arc.first);
            connected.insert(arc.second);
        }
    return connected;
}

struct CausalNet {
    std::set<std::string> nodes;
    // AND within a set, XOR across sets; sets sorted by smallest member.
    std::map<std::string, std::vector<std::set<std::string>>> input_bindings;
    std::map<std::string, std::vector<std::set<std::string>>> output_bindings;
    std::set<std::pair<std::string, std::string>> long_distance_arcs;
    DependencyGraph graph;

    std::set<std::string> source_nodes() const {
        std::set<std::string> out;
        for (const auto& n : nodes)
            if (!input_bindings.count(n) || input_bindings.at(n).empty()) out.insert(n);
        return out;
    }
    std::set<std::string> sink_nodes() const {
        std::set<std::string> out;
        for (const auto& n : nodes)
            if (!output_bindings.count(n) || output_bindings.at(n).empty()) out.insert(n);
        return out;
    }
};

namespace detail {

// Clusters `neighbors` of `a` into AND groups: b and c share a group when
// (|b>c| + |c>b|) / (|x| + |y| + 1) >= and_threshold, where x,y are the
// directly-follows counts linking a with b and c in the binding direction.
inline std::vector<std::set<std::string>> cluster_bindings(
    const Dfg& freq, const std::string& a, const std::vector<std::string>& neighbors,
    bool outputs, double and_threshold) {
    std::vector<std::size_t> parent(neighbors.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < neighbors.size(); ++i)
        for (std::size_t j = i + 1; j < neighbors.size(); ++j) {
            const auto& b = neighbors[i];
            const auto& c = neighbors[j];
            std::uint64_t cross = freq.count(b, c) + freq.count(c, b);
            std::uint64_t base = outputs ? freq.count(a, b) + freq.count(a, c)
                                         : freq.count(b, a) + freq.count(c, a);
            double measure =
                static_cast<double>(cross) / (static_cast<double>(base) + 1.0);
            if (measure >= and_threshold) parent[find(i)] = find(j);
        }
    std::map<std::size_t, std::set<std::string>> grouped;
    for (std::size_t i = 0; i < neighbors.size(); ++i) grouped[find(i)].insert(neighbors[i]);
    std::vector<std::set<std::string>> result;
    for (auto& [root, members] : grouped) {
        (void)root;
        result.push_back(std::move(members));
    }
    std::sort(result.begin(), result.end(),
              [](const auto& x, const auto& y) { return *x.begin() < *y.begin(); });
    return result;
}

}  // namespace detail

// Derives AND/XOR input and output bindings for every node of the graph.
// Self-loop arcs become their own singleton bindings.
inline CausalNet bind_splits_joins(const EventLog& log, const DependencyGraph& graph,
                                   const HeuristicsParams& params) {
    validate_params(params);
    (void)log;
    CausalNet net;
    net.nodes = graph.nodes;
    net.graph = graph;
    const Dfg& freq = graph.frequencies;

    for (const auto& a : net.nodes) {
        std::vector<std::string> successors, predecessors;
        bool self_loop = false;
        for (const auto& [arc, info] : graph.arcs) {
            (void)info;
            if (arc.first == a && arc.second == a)
                self_loop = true;
            else if (arc.first == a)
                successors.push_back(arc.second);
            else if (arc.second == a)
                predecessors.push_back(arc.first);
        }
        auto outputs =
            detail::cluster_bindings(freq, a, successors, true, params.and_threshold);
        auto inputs =
            detail::cluster_bindings(freq, a, predecessors, false, params.and_threshold);
        if (self_loop) {
            outputs.push_back({a});
            inputs.push_back({a});
        }
        if (!outputs.empty()) net.output_bindings[a] = std::move(outputs);
        if (!inputs.empty()) net.input_bindings[a] = std::move(inputs);
    }
    return net;
}

// Pairs (a,b) where b eventually follows a often enough, unless the graph
// already carries the direct arc a->b.
inline std::set<std::pair<std::string, std::string>> long_distance_dependencies(
    const EventLog& log, const DependencyGraph& graph, const HeuristicsParams& params) {
    validate_params(params);
    std::map<std::string, std::uint64_t> occurrences;
    std::map<std::pair<std::string, std::string>, std::uint64_t> eventually;
    for (const auto& trace : log.traces) {
        for (const auto& event : trace.events) occurrences[event.activity]++;
        std::set<std::string> seen_after;  // activities occurring at or after position i
        std::set<std::pair<std::string, std::string>> trace_pairs;
        for (std::size_t i = trace.events.size(); i-- > 0;) {
            const auto& a = trace.events[i].activity;
            for (const auto& b : seen_after) trace_pairs.insert({a, b});
            seen_after.insert(a);
        }
        for (const auto& pair : trace_pairs) eventually[pair]++;
    }
    std::set<std::pair<std::string, std::string>> result;
    for (const auto& [pair, count] : eventually) {
        if (pair.first == pair.second) continue;
        if (graph.has_arc(pair.first, pair.second)) continue;
        double measure =
            2.0 * static_cast<double>(count) /
            (static_cast<double>(occurrences[pair.first]) +
             static_cast<double>(occurrences[pair.second]) + 1.0);
        if (measure >= params.long_distance_threshold) result.insert(pair);
    }
    return result;
}

inline CausalNet discover_heuristics(const EventLog& log,
                                     const HeuristicsParams& params = {}) {
    DependencyGraph graph = build_dependency_graph(log, params);
    CausalNet net = bind_splits_joins(log, graph, params);
    net.long_distance_arcs = long_distance_dependencies(log, graph, params);
    return net;
}

}  // namespace procmine
