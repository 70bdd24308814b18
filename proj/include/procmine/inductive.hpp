#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "procmine/dfg.hpp"
#include "procmine/eventlog.hpp"
#include "procmine/process_tree.hpp"

namespace procmine {

struct Cut {
    enum class Operator { Xor, Sequence, Concurrent, Loop };
    Operator op;
    // Disjoint, non-empty, covering the DFG node set. Order matters for
    // Sequence (chain order) and Loop (body first).
    std::vector<std::set<std::string>> partition;
};

namespace detail {

inline std::optional<Cut> xor_cut(const Dfg& g) {
    auto components = weak_components(g, g.nodes);
    if (components.size() < 2) return std::nullopt;
    return Cut{Cut::Operator::Xor, std::move(components)};
}

inline std::optional<Cut> sequence_cut(const Dfg& g) {
    std::vector<std::string> labels(g.nodes.begin(), g.nodes.end());
    std::vector<std::size_t> parent(labels.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto reach = [&](std::size_t i, std::size_t j) {
        return g.reach_set(labels[i]).count(labels[j]) > 0;
    };

    // Mutually reachable labels share a group; so do mutually unreachable ones
    // (they sit in parallel branches of the same chain position).
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            bool ij = reach(i, j), ji = reach(j, i);
            if (ij == ji) parent[find(i)] = find(j);
        }

    std::map<std::size_t, std::set<std::string>> grouped;
    for (std::size_t i = 0; i < labels.size(); ++i) grouped[find(i)].insert(labels[i]);
    if (grouped.size() < 2) return std::nullopt;

    std::vector<std::set<std::string>> groups;
    for (auto& [root, members] : grouped) {
        (void)root;
        groups.push_back(std::move(members));
    }
    auto group_reaches = [&](const std::set<std::string>& from,
                             const std::set<std::string>& to) {
        for (const auto& x : from) {
            const auto& r = g.reach_set(x);
            for (const auto& y : to)
                if (r.count(y)) return true;
        }
        return false;
    };
    // Order by how many other groups each one reaches, then verify the result
    // is a strict chain; merged groups are not guaranteed to form one.
    std::vector<std::size_t> reach_counts(groups.size(), 0);
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = 0; j < groups.size(); ++j)
            if (i != j && group_reaches(groups[i], groups[j])) ++reach_counts[i];
    std::vector<std::size_t> order(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (reach_counts[a] != reach_counts[b]) return reach_counts[a] > reach_counts[b];
        return *groups[a].begin() < *groups[b].begin();
    });
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            if (!group_reaches(groups[order[i]], groups[order[j]])) return std::nullopt;
            if (group_reaches(groups[order[j]], groups[order[i]])) return std::nullopt;
        }

    Cut cut{Cut::Operator::Sequence, {}};
    for (std::size_t idx : order) cut.partition.push_back(std::move(groups[idx]));
    return cut;
}

inline std::optional<Cut> concurrent_cut(const Dfg& g) {
    std::vector<std::string> labels(g.nodes.begin(), g.nodes.end());
    std::vector<std::size_t> parent(labels.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    // Labels not connected in both directions cannot run concurrently and
    // stay in the same group.
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            if (!g.has_edge(labels[i], labels[j]) || !g.has_edge(labels[j], labels[i]))
                parent[find(i)] = find(j);

    std::map<std::size_t, std::set<std::string>> grouped;
    for (std::size_t i = 0; i < labels.size(); ++i) grouped[find(i)].insert(labels[i]);
    if (grouped.size() < 2) return std::nullopt;

    std::vector<std::set<std::string>> groups;
    for (auto& [root, members] : grouped) {
        (void)root;
        groups.push_back(std::move(members));
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });

    auto good = [&](const std::set<std::string>& group) {
        bool has_start = false, has_end = false;
        for (const auto& x : group) {
            if (g.start_activities.count(x)) has_start = true;
            if (g.end_activities.count(x)) has_end = true;
        }
        return has_start && has_end;
    };
    // Merge groups lacking a start or an end into the first other group.
    for (;;) {
        std::size_t bad = groups.size();
        for (std::size_t i = 0; i < groups.size(); ++i)
            if (!good(groups[i])) {
                bad = i;
                break;
            }
        if (bad == groups.size()) break;
        if (groups.size() < 2) return std::nullopt;
        std::size_t target = bad == 0 ? 1 : 0;
        groups[target].insert(groups[bad].begin(), groups[bad].end());
        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(bad));
        std::sort(groups.begin(), groups.end(),
                  [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
    }
    if (groups.size() < 2) return std::nullopt;
    return Cut{Cut::Operator::Concurrent, std::move(groups)};
}

inline std::optional<Cut> loop_cut(const Dfg& g) {
    std::set<std::string> starts, ends, body;
    for (const auto& [label, n] : g.start_activities) {
        (void)n;
        if (g.nodes.count(label)) starts.insert(label);
    }
    for (const auto& [label, n] : g.end_activities) {
        (void)n;
        if (g.nodes.count(label)) ends.insert(label);
    }
    body.insert(starts.begin(), starts.end());
    body.insert(ends.begin(), ends.end());
    if (body.empty() || body.size() == g.nodes.size()) return std::nullopt;

    std::set<std::string> rest;
    for (const auto& node : g.nodes)
        if (!body.count(node)) rest.insert(node);
    auto components = weak_components(g, rest);

    // A component is a redo part when it is entered only from end activities,
    // left only into start activities, and connects from all ends / to all
    // starts or none of them; otherwise it belongs to the body.
    std::vector<std::set<std::string>> redos;
    for (auto& component : components) {
        bool redo = true;
        for (const auto& x : component) {
            std::set<std::string> ends_in, starts_out;
            for (const auto& [edge, n] : g.edges) {
                (void)n;
                if (edge.second == x && !component.count(edge.first)) {
                    if (!ends.count(edge.first)) redo = false;
                    ends_in.insert(edge.first);
                }
                if (edge.first == x && !component.count(edge.second)) {
                    if (!starts.count(edge.second)) redo = false;
                    starts_out.insert(edge.second);
                }
            }
            if (!redo) break;
            if (!ends_in.empty() && ends_in != ends) redo = false;
            if (!starts_out.empty() && starts_out != starts) redo = false;
            if (!redo) break;
        }
        if (redo)
            redos.push_back(std::move(component));
        else
            body.insert(component.begin(), component.end());
    }
    if (redos.empty()) return std::nullopt;

    Cut cut{Cut::Operator::Loop, {}};
    cut.partition.push_back(std::move(body));
    std::sort(redos.begin(), redos.end(),
              [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
    for (auto& r : redos) cut.partition.push_back(std::move(r));
    return cut;
}

}  // namespace detail

// Detectors tried in the fixed order Xor, Sequence, Concurrent, Loop.
inline std::optional<Cut> detect_cut(const Dfg& g) {
    if (g.nodes.empty()) return std::nullopt;
    if (auto cut = detail::xor_cut(g)) return cut;
    if (auto cut = detail::sequence_cut(g)) return cut;
    if (auto cut = detail::concurrent_cut(g)) return cut;
    if (auto cut = detail::loop_cut(g)) return cut;
    return std::nullopt;
}

inline std::vector<EventLog> split_log(const EventLog& log, const Cut& cut) {
    std::map<std::string, std::size_t> group_of;
    for (std::size_t i = 0; i < cut.partition.size(); ++i)
        for (const auto& label : cut.partition[i]) group_of[label] = i;
    std::vector<EventLog> subs(cut.partition.size());
    std::uint64_t dropped = 0;

    switch (cut.op) {
        case Cut::Operator::Xor:
            for (const auto& trace : log.traces) {
                std::vector<std::size_t> votes(subs.size(), 0);
                for (const auto& event : trace.events) {
                    auto it = group_of.find(event.activity);
                    if (it != group_of.end()) ++votes[it->second];
                }
                std::size_t winner = 0;
                for (std::size_t i = 1; i < votes.size(); ++i)
                    if (votes[i] > votes[winner]) winner = i;
                Trace t;
                t.case_id = trace.case_id;
                for (const auto& event : trace.events) {
                    auto it = group_of.find(event.activity);
                    if (it != group_of.end() && it->second == winner)
                        t.events.push_back(event);
                    else
                        ++dropped;
                }
                subs[winner].traces.push_back(std::move(t));
            }
            break;

        case Cut::Operator::Sequence:
            for (const auto& trace : log.traces) {
                std::vector<Trace> segments(subs.size());
                for (auto& s : segments) s.case_id = trace.case_id;
                std::size_t current = 0;
                for (const auto& event : trace.events) {
                    auto it = group_of.find(event.activity);
                    if (it == group_of.end() || it->second < current) {
                        ++dropped;
                        continue;
                    }
                    current = it->second;
                    segments[current].events.push_back(event);
                }
                for (std::size_t i = 0; i < subs.size(); ++i)
                    subs[i].traces.push_back(std::move(segments[i]));
            }
            break;

        case Cut::Operator::Concurrent:
            for (const auto& trace : log.traces) {
                std::vector<Trace> parts(subs.size());
                for (auto& p : parts) p.case_id = trace.case_id;
                for (const auto& event : trace.events) {
                    auto it = group_of.find(event.activity);
                    if (it == group_of.end()) {
                        ++dropped;
                        continue;
                    }
                    parts[it->second].events.push_back(event);
                }
                for (std::size_t i = 0; i < subs.size(); ++i)
                    subs[i].traces.push_back(std::move(parts[i]));
            }
            break;

        case Cut::Operator::Loop:
            for (const auto& trace : log.traces) {
                std::vector<std::size_t> counters(subs.size(), 0);
                auto emit = [&](std::size_t group, Trace&& run) {
                    run.case_id = trace.case_id + "#" + std::to_string(++counters[group]);
                    subs[group].traces.push_back(std::move(run));
                };
                // Body runs must open and close the trace; under noise a trace
                // may start or end inside a redo part, or hop between redo
                // parts, in which case empty body runs keep the shape valid.
                bool first = true;
                Trace run;
                std::size_t run_group = 0;
                for (const auto& event : trace.events) {
                    auto it = group_of.find(event.activity);
                    if (it == group_of.end()) {
                        ++dropped;
                        continue;
                    }
                    std::size_t group = it->second;
                    if (first || group != run_group) {
                        if (!first) {
                            std::size_t prev_group = run_group;
                            emit(run_group, std::move(run));
                            if (prev_group != 0 && group != 0) emit(0, Trace{});
                        } else if (group != 0) {
                            emit(0, Trace{});
                        }
                        run = Trace{};
                        run_group = group;
                        first = false;
                    }
                    run.events.push_back(event);
                }
                if (!first) {
                    std::size_t last_group = run_group;
                    emit(run_group, std::move(run));
                    if (last_group != 0) emit(0, Trace{});
                } else {
                    emit(0, Trace{});
                }
            }
            break;
    }

    if (dropped > 0)
        for (auto& sub : subs)
            sub.metadata["split_dropped_events"] = std::to_string(dropped);
    return subs;
}

inline std::optional<ProcessTree> base_case(const EventLog& log) {
    bool any_empty = false, any_single = false;
    std::string single_label;
    for (const auto& trace : log.traces) {
        if (trace.events.empty()) {
            any_empty = true;
            continue;
        }
        if (trace.events.size() > 1) return std::nullopt;
        const std::string& label = trace.events[0].activity;
        if (any_single && label != single_label) return std::nullopt;
        any_single = true;
        single_label = label;
    }
    if (!any_single) return ProcessTree::silent();
    if (!any_empty) return ProcessTree::activity(single_label);
    return ProcessTree::choice({ProcessTree::silent(), ProcessTree::activity(single_label)});
}

namespace detail {

inline ProcessTree discover_impl(const EventLog& log, double noise_threshold);

// Fall-throughs in order: strip empty traces, factor out a once-per-trace
// activity, split off one activity concurrently when the remainder becomes
// cuttable, flower model.
inline ProcessTree fall_through_impl(const EventLog& log, double noise_threshold) {
    bool any_empty = false;
    for (const auto& trace : log.traces)
        if (trace.events.empty()) {
            any_empty = true;
            break;
        }
    if (any_empty) {
        EventLog rest = filter_cases(log, [](const Trace& t) { return !t.events.empty(); });
        return ProcessTree::choice(
            {ProcessTree::silent(), discover_impl(rest, noise_threshold)});
    }

    std::set<std::string> alphabet = log.alphabet();
    if (alphabet.size() >= 2) {
        for (const auto& candidate : alphabet) {
            bool once_everywhere = !log.traces.empty();
            for (const auto& trace : log.traces) {
                std::size_t n = 0;
                for (const auto& event : trace.events)
                    if (event.activity == candidate) ++n;
                if (n != 1) {
                    once_everywhere = false;
                    break;
                }
            }
            if (once_everywhere) {
                std::set<std::string> rest_labels = alphabet;
                rest_labels.erase(candidate);
                return ProcessTree::concurrent(
                    {ProcessTree::activity(candidate),
                     discover_impl(project(log, rest_labels), noise_threshold)});
            }
        }

        for (const auto& candidate : alphabet) {
            std::set<std::string> rest_labels = alphabet;
            rest_labels.erase(candidate);
            EventLog rest = project(log, rest_labels);
            Dfg g = drop_infrequent_edges(build_dfg(rest), noise_threshold);
            if (base_case(rest) || detect_cut(g)) {
                EventLog own = project(log, {candidate});
                return ProcessTree::concurrent({discover_impl(own, noise_threshold),
                                                discover_impl(rest, noise_threshold)});
            }
        }
    }

    std::vector<ProcessTree> children;
    children.push_back(ProcessTree::silent());
    for (const auto& label : alphabet) children.push_back(ProcessTree::activity(label));
    if (children.size() < 2) return ProcessTree::silent();
    return ProcessTree::loop(std::move(children));
}

inline ProcessTree discover_impl(const EventLog& log, double noise_threshold) {
    // Empty traces below the noise share are treated as noise, not as a way
    // to skip the whole subprocess.
    if (noise_threshold > 0.0) {
        std::size_t empties = 0;
        for (const auto& trace : log.traces)
            if (trace.events.empty()) ++empties;
        if (empties > 0 && empties < log.traces.size() &&
            static_cast<double>(empties) <=
                noise_threshold * static_cast<double>(log.traces.size())) {
            EventLog kept =
                filter_cases(log, [](const Trace& t) { return !t.events.empty(); });
            return discover_impl(kept, noise_threshold);
        }
    }
    if (auto base = base_case(log)) return *base;
    Dfg g = drop_infrequent_edges(build_dfg(log), noise_threshold);
    if (auto cut = detect_cut(g)) {
        auto subs = split_log(log, *cut);
        std::vector<ProcessTree> children;
        children.reserve(subs.size());
        for (const auto& sub : subs) children.push_back(discover_impl(sub, noise_threshold));
        switch (cut->op) {
            case Cut::Operator::Xor: return ProcessTree::choice(std::move(children));
            case Cut::Operator::Sequence: return ProcessTree::sequence(std::move(children));
            case Cut::Operator::Concurrent: return ProcessTree::concurrent(std::move(children));
            default: return ProcessTree::loop(std::move(children));
        }
    }
    return fall_through_impl(log, noise_threshold);
}

}  // namespace detail

inline ProcessTree fall_through(const EventLog& log, double noise_threshold = 0.0) {
    return canonical_tree(detail::fall_through_impl(log, noise_threshold));
}

// Inductive discovery. At noise_threshold 0 the result's language includes
// every trace of the log; with a positive threshold infrequent
// directly-follows edges and rare empty traces are dropped before cut
// detection.
inline ProcessTree discover_inductive(const EventLog& log, double noise_threshold = 0.0) {
    if (noise_threshold < 0.0 || noise_threshold > 1.0)
        throw ConfigError("noise threshold must be in [0,1]");
    return canonical_tree(detail::discover_impl(log, noise_threshold));
}

}  // namespace procmine
