#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "procmine/align.hpp"
#include "procmine/eventlog.hpp"
#include "procmine/parallel.hpp"
#include "procmine/petri.hpp"
#include "procmine/replay.hpp"

namespace procmine {

namespace detail {

// Visible activities enabled in `from` or in any marking reachable from it by
// firing only silent transitions (bounded breadth-first closure).
inline std::set<std::string> visible_enabled_closure(const ReplayScratch& s, const Marking& from) {
    const PetriNet& net = *s.net;
    std::set<std::string> labels;
    std::deque<Marking> queue;
    std::set<std::vector<std::int32_t>> seen;
    queue.push_back(from);
    seen.insert(from.tokens);
    while (!queue.empty()) {
        Marking cur = std::move(queue.front());
        queue.pop_front();
        for (std::size_t t = 0; t < net.transitions.size(); ++t) {
            int ti = static_cast<int>(t);
            if (!is_enabled(net, cur, ti)) continue;
            if (!net.transitions[t].silent()) {
                labels.insert(net.transitions[t].label);
                continue;
            }
            Marking next = fire(net, cur, ti);
            if (seen.size() < kSilentSearchStateCap && seen.insert(next.tokens).second)
                queue.push_back(std::move(next));
        }
    }
    return labels;
}

}  // namespace detail

struct PrecisionResult {
    double value = 1.0;
    std::vector<std::string> excluded;  // case ids whose alignment ran out of budget
};

// Escaping-edges precision.  Every aligned trace yields one model state per
// log prefix; at each state the visible activities enabled (through silent
// moves) but never observed next in the log count as escaping edges:
//   precision = 1 - sum_p w(p)*|escaping(p)| / sum_p w(p)*|enabled(p)|
// with w(p) the number of traces visiting prefix p.  A prefix reached by
// several variants keeps the state of the variant that is first in signature
// order.  A denominator of zero yields 1.0.
inline PrecisionResult precision_escaping(const PetriNet& net, const EventLog& log,
                                          const AlignCosts& costs = {},
                                          std::size_t node_limit = kDefaultAlignBudget,
                                          unsigned threads = 1) {
    validate_net(net);
    PrecisionResult out;
    if (log.traces.empty()) return out;
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

    std::vector<std::optional<Alignment>> aligned(order.size());
    std::vector<std::exception_ptr> failures(order.size());
    parallel_for(order.size(), threads, [&](std::size_t v) {
        try {
            aligned[v] = align(net, *order[v], costs, node_limit);
        } catch (const BudgetError&) {
            aligned[v] = std::nullopt;
        } catch (...) {
            failures[v] = std::current_exception();
        }
    });
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    struct PrefixInfo {
        Marking marking;
        std::set<std::string> observed;
        std::uint64_t weight = 0;
    };
    std::map<std::vector<std::string>, PrefixInfo> prefixes;
    std::size_t v = 0;
    for (const auto& [sig, indices] : variants) {
        std::optional<Alignment>& alignment = aligned[v++];
        if (!alignment) {
            for (std::size_t i : indices) out.excluded.push_back(log.traces[i].case_id);
            continue;
        }
        std::uint64_t weight = indices.size();
        Marking marking = net.initial_marking;
        std::vector<std::string> prefix;
        auto visit = [&]() {
            PrefixInfo& info = prefixes[prefix];
            if (info.weight == 0) info.marking = marking;
            info.weight += weight;
            if (prefix.size() < sig.size()) info.observed.insert(sig[prefix.size()]);
        };
        visit();
        for (const AlignMove& move : alignment->moves) {
            switch (move.kind) {
                case AlignMove::Kind::Sync:
                    marking = fire(net, marking, move.transition);
                    prefix.push_back(move.activity);
                    visit();
                    break;
                case AlignMove::Kind::LogOnly:
                    prefix.push_back(move.activity);
                    visit();
                    break;
                case AlignMove::Kind::ModelOnly:
                    marking = fire(net, marking, move.transition);
                    break;
            }
        }
    }
    std::sort(out.excluded.begin(), out.excluded.end());

    double enabled_sum = 0.0, escaping_sum = 0.0;
    for (const auto& [prefix, info] : prefixes) {
        (void)prefix;
        std::set<std::string> enabled = detail::visible_enabled_closure(scratch, info.marking);
        std::size_t escaping = 0;
        for (const std::string& label : enabled)
            if (!info.observed.count(label)) ++escaping;
        enabled_sum += static_cast<double>(info.weight) * static_cast<double>(enabled.size());
        escaping_sum += static_cast<double>(info.weight) * static_cast<double>(escaping);
    }
    out.value = enabled_sum == 0.0 ? 1.0 : 1.0 - escaping_sum / enabled_sum;
    return out;
}

// Execution-frequency generalization over token-replay firings:
//   1 - (sum_t inv(t)) / |T|, inv(t) = 1/sqrt(executions(t)), inv = 1 if never fired.
inline double generalization(const PetriNet& net, const EventLog& log, unsigned threads = 1) {
    if (net.transitions.empty()) return 1.0;
    ReplayResult replayed = token_replay(net, log, threads);
    double sum = 0.0;
    for (const auto& [id, count] : replayed.executions) {
        (void)id;
        sum += count == 0 ? 1.0 : 1.0 / std::sqrt(static_cast<double>(count));
    }
    return 1.0 - sum / static_cast<double>(net.transitions.size());
}

// Inverse-arc-degree simplicity: 1 / (1 + max(0, mean node degree - 2)).
inline double simplicity(const PetriNet& net) {
    std::size_t nodes = net.places.size() + net.transitions.size();
    if (nodes == 0) return 1.0;
    double mean = 2.0 * static_cast<double>(net.arc_count()) / static_cast<double>(nodes);
    double excess = mean > 2.0 ? mean - 2.0 : 0.0;
    return 1.0 / (1.0 + excess);
}

struct QualityOptions {
    bool alignments = true;  // also compute alignment-based fitness
    AlignCosts costs{};
    std::size_t node_limit = kDefaultAlignBudget;
    unsigned threads = 1;
};

struct QualityReport {
    double fitness_replay = 1.0;
    double fraction_fitting = 1.0;  // share of traces replaying without deviation
    std::optional<double> fitness_alignment;
    double precision = 1.0;
    double generalization = 1.0;
    double simplicity = 1.0;
    std::vector<std::string> excluded_traces;  // union of alignment budget exclusions
    std::uint64_t unknown_label_events = 0;
};

inline QualityReport quality_report(const PetriNet& net, const EventLog& log,
                                    const QualityOptions& options = {}) {
    QualityReport report;
    ReplayResult replayed = token_replay(net, log, options.threads);
    report.fitness_replay = replayed.log_fitness;
    report.unknown_label_events = replayed.unknown_label_events;
    if (!log.traces.empty()) {
        std::size_t fitting = 0;
        for (const TraceReplay& t : replayed.per_trace)
            if (t.fits) ++fitting;
        report.fraction_fitting =
            static_cast<double>(fitting) / static_cast<double>(log.traces.size());
    }
    if (net.transitions.empty()) {
        report.generalization = 1.0;
    } else {
        double sum = 0.0;
        for (const auto& [id, count] : replayed.executions) {
            (void)id;
            sum += count == 0 ? 1.0 : 1.0 / std::sqrt(static_cast<double>(count));
        }
        report.generalization = 1.0 - sum / static_cast<double>(net.transitions.size());
    }
    report.simplicity = simplicity(net);
    if (options.alignments) {
        AlignmentFitness af =
            fitness_alignment(net, log, options.costs, options.node_limit, options.threads);
        report.fitness_alignment = af.value;
        report.excluded_traces = af.excluded;
    }
    PrecisionResult pr =
        precision_escaping(net, log, options.costs, options.node_limit, options.threads);
    report.precision = pr.value;
    for (const std::string& id : pr.excluded)
        if (std::find(report.excluded_traces.begin(), report.excluded_traces.end(), id) ==
            report.excluded_traces.end())
            report.excluded_traces.push_back(id);
    std::sort(report.excluded_traces.begin(), report.excluded_traces.end());
    return report;
}

}  // namespace procmine
