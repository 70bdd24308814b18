#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "procmine/eventlog.hpp"
#include "procmine/parallel.hpp"
#include "procmine/petri.hpp"

namespace procmine {

// Token-replay outcome for a single trace.  Fitness combines the missing and
// remaining token ratios: 0.5 * (1 - m/c) + 0.5 * (1 - r/p).
struct TraceReplay {
    std::uint64_t produced = 0;
    std::uint64_t consumed = 0;
    std::uint64_t missing = 0;
    std::uint64_t remaining = 0;
    double fitness = 1.0;
    bool fits = true;
};

struct ReplayResult {
    std::vector<TraceReplay> per_trace;              // parallel to log.traces
    double log_fitness = 1.0;                        // mean over traces
    std::map<std::string, std::uint64_t> executions; // transition id -> firings
    std::uint64_t unknown_label_events = 0;          // events with no matching transition
};

namespace detail {

// Cap on distinct markings visited per silent-reachability search.  Keeps
// replay total even on nets where silent transitions can cycle.
inline constexpr std::size_t kSilentSearchStateCap = 50000;

struct ReplayScratch {
    const PetriNet* net = nullptr;
    std::vector<int> silent_transitions;
    std::map<std::string, std::vector<int>> by_label;
    std::size_t silent_depth_cap = 0;

    explicit ReplayScratch(const PetriNet& n) : net(&n) {
        for (std::size_t t = 0; t < n.transitions.size(); ++t) {
            int ti = static_cast<int>(t);
            if (n.transitions[t].silent())
                silent_transitions.push_back(ti);
            else
                by_label[n.transitions[t].label].push_back(ti);
        }
        silent_depth_cap = silent_transitions.size();
    }
};

// Breadth-first search over silent firings from `from`, stopping at the first
// marking where `goal` holds.  Returns the silent firing sequence, or nullopt
// if no reachable marking within the depth/state budget satisfies the goal.
template <typename Goal>
inline std::optional<std::vector<int>> silent_search(const ReplayScratch& s, const Marking& from,
                                                     Goal goal) {
    if (goal(from)) return std::vector<int>{};
    if (s.silent_transitions.empty()) return std::nullopt;
    struct State {
        Marking marking;
        std::size_t depth;
        std::vector<int> path;
    };
    std::deque<State> queue;
    std::set<std::vector<std::int32_t>> seen;
    queue.push_back({from, 0, {}});
    seen.insert(from.tokens);
    while (!queue.empty()) {
        State cur = std::move(queue.front());
        queue.pop_front();
        if (cur.depth >= s.silent_depth_cap) continue;
        for (int ti : s.silent_transitions) {
            if (!is_enabled(*s.net, cur.marking, ti)) continue;
            Marking next = fire(*s.net, cur.marking, ti);
            if (!seen.insert(next.tokens).second) continue;
            std::vector<int> path = cur.path;
            path.push_back(ti);
            if (goal(next)) return path;
            if (seen.size() >= kSilentSearchStateCap) return std::nullopt;
            queue.push_back({std::move(next), cur.depth + 1, std::move(path)});
        }
    }
    return std::nullopt;
}

struct VariantReplay {
    TraceReplay counts;
    std::vector<std::uint64_t> executions; // per transition index
    std::uint64_t unknown_labels = 0;
};

inline VariantReplay replay_variant(const ReplayScratch& s, const std::vector<std::string>& sig) {
    const PetriNet& net = *s.net;
    VariantReplay out;
    out.executions.assign(net.transitions.size(), 0);
    Marking marking = net.initial_marking;
    std::uint64_t produced = 0, consumed = 0, missing = 0;
    for (std::int32_t tokens : marking.tokens) produced += static_cast<std::uint64_t>(tokens);

    auto fire_counted = [&](int ti) {
        consumed += net.preset[static_cast<std::size_t>(ti)].size();
        produced += net.postset[static_cast<std::size_t>(ti)].size();
        ++out.executions[static_cast<std::size_t>(ti)];
        marking = fire(net, marking, ti);
    };

    for (const std::string& activity : sig) {
        auto labelled = s.by_label.find(activity);
        if (labelled == s.by_label.end()) {
            // No transition carries this label: one missing/remaining pair.
            ++missing;
            ++consumed;
            ++produced;
            ++out.counts.remaining;
            ++out.unknown_labels;
            continue;
        }
        int direct = -1;
        for (int ti : labelled->second)
            if (is_enabled(net, marking, ti)) {
                direct = ti;
                break;
            }
        if (direct >= 0) {
            fire_counted(direct);
            continue;
        }
        auto enables = [&](const Marking& m) {
            for (int ti : labelled->second)
                if (is_enabled(net, m, ti)) return true;
            return false;
        };
        if (auto path = silent_search(s, marking, enables)) {
            for (int ti : *path) fire_counted(ti);
            for (int ti : labelled->second)
                if (is_enabled(net, marking, ti)) {
                    fire_counted(ti);
                    break;
                }
            continue;
        }
        // Force-fire the candidate needing the fewest injected tokens.
        int best = labelled->second.front();
        std::uint64_t best_deficit = ~std::uint64_t{0};
        for (int ti : labelled->second) {
            std::uint64_t deficit = 0;
            for (int p : net.preset[static_cast<std::size_t>(ti)])
                if (marking.tokens[static_cast<std::size_t>(p)] < 1) ++deficit;
            if (deficit < best_deficit) {
                best_deficit = deficit;
                best = ti;
            }
        }
        for (int p : net.preset[static_cast<std::size_t>(best)])
            if (marking.tokens[static_cast<std::size_t>(p)] < 1) {
                ++marking.tokens[static_cast<std::size_t>(p)];
                ++missing;
            }
        fire_counted(best);
    }

    // Reach the final marking through silent transitions if possible, then
    // settle the final-marking consumption.
    if (!(marking == net.final_marking)) {
        auto at_final = [&](const Marking& m) { return m == net.final_marking; };
        if (auto path = silent_search(s, marking, at_final))
            for (int ti : *path) fire_counted(ti);
    }
    for (std::size_t p = 0; p < net.places.size(); ++p) {
        std::int32_t want = net.final_marking.tokens[p];
        std::int32_t have = marking.tokens[p];
        consumed += static_cast<std::uint64_t>(want);
        if (have < want) missing += static_cast<std::uint64_t>(want - have);
        if (have > want)
            out.counts.remaining += static_cast<std::uint64_t>(have - want);
    }

    out.counts.produced = produced;
    out.counts.consumed = consumed;
    out.counts.missing = missing;
    double m_term = consumed == 0 ? 0.0 : static_cast<double>(missing) / static_cast<double>(consumed);
    double r_term =
        produced == 0 ? 0.0 : static_cast<double>(out.counts.remaining) / static_cast<double>(produced);
    out.counts.fitness = 0.5 * (1.0 - m_term) + 0.5 * (1.0 - r_term);
    out.counts.fits = missing == 0 && out.counts.remaining == 0;
    return out;
}

}  // namespace detail

// Replays every trace of the log against the net.  Traces sharing a variant
// are replayed once; transition execution counts aggregate over all traces.
inline ReplayResult token_replay(const PetriNet& net, const EventLog& log, unsigned threads = 1) {
    validate_net(net);
    detail::ReplayScratch scratch(net);

    std::map<std::vector<std::string>, std::vector<std::size_t>> variants;
    for (std::size_t i = 0; i < log.traces.size(); ++i)
        variants[signature(log.traces[i])].push_back(i);

    std::vector<const std::vector<std::string>*> order;
    order.reserve(variants.size());
    for (const auto& [sig, indices] : variants) {
        (void)indices;
        order.push_back(&sig);
    }
    std::vector<detail::VariantReplay> replies(order.size());
    parallel_for(order.size(), threads,
                 [&](std::size_t v) { replies[v] = detail::replay_variant(scratch, *order[v]); });

    ReplayResult result;
    result.per_trace.resize(log.traces.size());
    std::vector<std::uint64_t> executions(net.transitions.size(), 0);
    double fitness_sum = 0.0;
    std::size_t v = 0;
    for (const auto& [sig, indices] : variants) {
        (void)sig;
        const detail::VariantReplay& reply = replies[v++];
        for (std::size_t i : indices) result.per_trace[i] = reply.counts;
        std::uint64_t weight = indices.size();
        fitness_sum += reply.counts.fitness * static_cast<double>(weight);
        result.unknown_label_events += reply.unknown_labels * weight;
        for (std::size_t t = 0; t < executions.size(); ++t)
            executions[t] += reply.executions[t] * weight;
    }
    for (std::size_t t = 0; t < executions.size(); ++t)
        result.executions[net.transitions[t].id] = executions[t];
    result.log_fitness =
        log.traces.empty() ? 1.0 : fitness_sum / static_cast<double>(log.traces.size());
    return result;
}

}  // namespace procmine
