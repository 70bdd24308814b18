#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "procmine/errors.hpp"
#include "procmine/eventlog.hpp"
#include "procmine/parallel.hpp"
#include "procmine/petri.hpp"

namespace procmine {

struct AlignMove {
    enum class Kind { Sync, LogOnly, ModelOnly };
    Kind kind = Kind::Sync;
    std::string activity;  // event label (Sync/LogOnly) or transition label (ModelOnly)
    int transition = -1;   // transition index for Sync/ModelOnly, -1 for LogOnly
};

struct Alignment {
    std::vector<AlignMove> moves;
    double cost = 0.0;
    std::size_t expanded = 0;  // A* nodes popped
};

// Unit costs of the standard alignment cost function.  Synchronous and
// silent-model moves are free; every deviation costs one unit per side.
struct AlignCosts {
    double sync = 0.0;
    double silent = 0.0;
    double log_move = 1.0;
    double model_move = 1.0;
};

inline constexpr std::size_t kDefaultAlignBudget = 1000000;

// Optimal alignment of one trace against the net via A* over the synchronous
// product.  The heuristic counts remaining events whose label no transition
// carries (each must become a log move), which is admissible and consistent.
// Ties on f are broken by insertion order, so results are deterministic.
// Throws BudgetError once more than `node_limit` nodes have been expanded.
inline Alignment align(const PetriNet& net, const std::vector<std::string>& trace,
                       const AlignCosts& costs = {}, std::size_t node_limit = kDefaultAlignBudget,
                       const std::string& trace_name = std::string()) {
    std::set<std::string> net_labels;
    for (const auto& t : net.transitions)
        if (!t.silent()) net_labels.insert(t.label);

    // h[i] = cost of log moves forced by unknown labels in trace[i..).
    std::vector<double> h(trace.size() + 1, 0.0);
    for (std::size_t i = trace.size(); i-- > 0;)
        h[i] = h[i + 1] + (net_labels.count(trace[i]) ? 0.0 : costs.log_move);

    struct Node {
        int pos;
        Marking marking;
        double g;
        int parent;
        AlignMove move;
    };
    struct Entry {
        double f;
        std::uint64_t seq;
        int node;
        bool operator>(const Entry& o) const {
            if (f != o.f) return f > o.f;
            return seq > o.seq;
        }
    };

    std::vector<Node> nodes;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    std::map<std::pair<int, std::vector<std::int32_t>>, double> best;
    std::uint64_t seq = 0;

    nodes.push_back({0, net.initial_marking, 0.0, -1, {}});
    best[{0, net.initial_marking.tokens}] = 0.0;
    open.push({h[0], seq++, 0});

    std::size_t expanded = 0;
    auto push_child = [&](int parent, int pos, Marking marking, double g, AlignMove move) {
        auto key = std::make_pair(pos, marking.tokens);
        auto it = best.find(key);
        if (it != best.end() && it->second <= g) return;
        best[key] = g;
        nodes.push_back({pos, std::move(marking), g, parent, std::move(move)});
        open.push({g + h[static_cast<std::size_t>(pos)], seq++, static_cast<int>(nodes.size()) - 1});
    };

    while (!open.empty()) {
        Entry top = open.top();
        open.pop();
        const Node& cur = nodes[static_cast<std::size_t>(top.node)];
        auto key = std::make_pair(cur.pos, cur.marking.tokens);
        if (best[key] < cur.g) continue;  // superseded entry
        if (static_cast<std::size_t>(cur.pos) == trace.size() && cur.marking == net.final_marking) {
            Alignment result;
            result.cost = cur.g;
            result.expanded = expanded;
            for (int n = top.node; nodes[static_cast<std::size_t>(n)].parent >= 0;
                 n = nodes[static_cast<std::size_t>(n)].parent)
                result.moves.push_back(nodes[static_cast<std::size_t>(n)].move);
            std::reverse(result.moves.begin(), result.moves.end());
            return result;
        }
        if (++expanded > node_limit)
            throw BudgetError("alignment search budget exceeded for trace '" +
                              (trace_name.empty() ? std::string("<unnamed>") : trace_name) +
                              "' (limit " + std::to_string(node_limit) + " nodes)");

        int pos = cur.pos;
        double g = cur.g;
        Marking marking = cur.marking;  // copy: pushes may reallocate `nodes`
        bool has_event = static_cast<std::size_t>(pos) < trace.size();
        if (has_event) {
            const std::string& activity = trace[static_cast<std::size_t>(pos)];
            for (std::size_t t = 0; t < net.transitions.size(); ++t) {
                int ti = static_cast<int>(t);
                if (net.transitions[t].silent() || net.transitions[t].label != activity) continue;
                if (!is_enabled(net, marking, ti)) continue;
                push_child(top.node, pos + 1, fire(net, marking, ti), g + costs.sync,
                           {AlignMove::Kind::Sync, activity, ti});
            }
        }
        for (std::size_t t = 0; t < net.transitions.size(); ++t) {
            int ti = static_cast<int>(t);
            if (!is_enabled(net, marking, ti)) continue;
            bool silent = net.transitions[t].silent();
            push_child(top.node, pos, fire(net, marking, ti),
                       g + (silent ? costs.silent : costs.model_move),
                       {AlignMove::Kind::ModelOnly, net.transitions[t].label, ti});
        }
        if (has_event)
            push_child(top.node, pos + 1, marking, g + costs.log_move,
                       {AlignMove::Kind::LogOnly, trace[static_cast<std::size_t>(pos)], -1});
    }
    throw DomainError("net admits no run from its initial to its final marking");
}

// Cost of the cheapest full model run (alignment of the empty trace).
inline double cheapest_model_cost(const PetriNet& net, const AlignCosts& costs = {},
                                  std::size_t node_limit = kDefaultAlignBudget) {
    return align(net, {}, costs, node_limit, "<empty>").cost;
}

struct AlignmentFitness {
    double value = 1.0;
    std::vector<std::string> excluded;  // case ids skipped due to budget exhaustion
};

// Alignment-based fitness: mean over traces of
//   1 - cost(trace) / (log_move * |trace| + cheapest_model_cost).
// Traces whose search exceeds the node budget are excluded from the mean and
// reported.  An empty log scores 1.0; a log with every trace excluded 0.0.
inline AlignmentFitness fitness_alignment(const PetriNet& net, const EventLog& log,
                                          const AlignCosts& costs = {},
                                          std::size_t node_limit = kDefaultAlignBudget,
                                          unsigned threads = 1) {
    validate_net(net);
    AlignmentFitness out;
    if (log.traces.empty()) return out;
    double reference = cheapest_model_cost(net, costs, node_limit);

    std::map<std::vector<std::string>, std::vector<std::size_t>> variants;
    for (std::size_t i = 0; i < log.traces.size(); ++i)
        variants[signature(log.traces[i])].push_back(i);
    std::vector<const std::vector<std::string>*> order;
    order.reserve(variants.size());
    for (const auto& [sig, indices] : variants) {
        (void)indices;
        order.push_back(&sig);
    }

    std::vector<std::optional<double>> fitness(order.size());
    std::vector<std::exception_ptr> failures(order.size());
    parallel_for(order.size(), threads, [&](std::size_t v) {
        try {
            Alignment a = align(net, *order[v], costs, node_limit);
            double denom = costs.log_move * static_cast<double>(order[v]->size()) + reference;
            fitness[v] = denom == 0.0 ? 1.0 : 1.0 - a.cost / denom;
        } catch (const BudgetError&) {
            fitness[v] = std::nullopt;
        } catch (...) {
            failures[v] = std::current_exception();
        }
    });
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    double sum = 0.0;
    std::size_t counted = 0;
    std::size_t v = 0;
    for (const auto& [sig, indices] : variants) {
        (void)sig;
        std::optional<double> f = fitness[v++];
        if (f) {
            sum += *f * static_cast<double>(indices.size());
            counted += indices.size();
        } else {
            for (std::size_t i : indices) out.excluded.push_back(log.traces[i].case_id);
        }
    }
    std::sort(out.excluded.begin(), out.excluded.end());
    out.value = counted == 0 ? 0.0 : sum / static_cast<double>(counted);
    return out;
}

}  // namespace procmine
