#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "procmine/errors.hpp"
#include "procmine/eventlog.hpp"

namespace procmine {

// Weighted directly-follows graph. Treated as immutable once built; the
// transitive closure is memoized on first reachability query.
struct Dfg {
    std::set<std::string> nodes;
    std::map<std::pair<std::string, std::string>, std::uint64_t> edges;
    std::map<std::string, std::uint64_t> start_activities;
    std::map<std::string, std::uint64_t> end_activities;

    Dfg() : memo_(std::make_shared<Memo>()) {}
    Dfg(const Dfg& other)
        : nodes(other.nodes),
          edges(other.edges),
          start_activities(other.start_activities),
          end_activities(other.end_activities),
          memo_(std::make_shared<Memo>()) {}
    Dfg& operator=(const Dfg& other) {
        if (this != &other) {
            nodes = other.nodes;
            edges = other.edges;
            start_activities = other.start_activities;
            end_activities = other.end_activities;
            memo_ = std::make_shared<Memo>();
        }
        return *this;
    }
    Dfg(Dfg&&) = default;
    Dfg& operator=(Dfg&&) = default;

    bool has_edge(const std::string& a, const std::string& b) const {
        return edges.count({a, b}) > 0;
    }

    std::uint64_t count(const std::string& a, const std::string& b) const {
        auto it = edges.find({a, b});
        return it == edges.end() ? 0 : it->second;
    }

    // Labels reachable from `a` by a directed path of length >= 1.
    const std::set<std::string>& reach_set(const std::string& a) const {
        std::call_once(memo_->flag, [this] { compute_closure(); });
        static const std::set<std::string> empty;
        auto it = memo_->reach.find(a);
        return it == memo_->reach.end() ? empty : it->second;
    }

private:
    struct Memo {
        std::once_flag flag;
        std::map<std::string, std::set<std::string>> reach;
    };

    void compute_closure() const {
        std::map<std::string, std::vector<const std::string*>> successors;
        for (const auto& [edge, n] : edges) {
            (void)n;
            successors[edge.first].push_back(&edge.second);
        }
        for (const auto& node : nodes) {
            std::set<std::string>& reach = memo_->reach[node];
            std::vector<const std::string*> frontier;
            auto it = successors.find(node);
            if (it != successors.end()) frontier = it->second;
            while (!frontier.empty()) {
                const std::string* current = frontier.back();
                frontier.pop_back();
                if (!reach.insert(*current).second) continue;
                auto succ = successors.find(*current);
                if (succ != successors.end())
                    frontier.insert(frontier.end(), succ->second.begin(), succ->second.end());
            }
        }
    }

    mutable std::shared_ptr<Memo> memo_;
};

inline Dfg build_dfg(const EventLog& log) {
    Dfg g;
    for (const auto& trace : log.traces) {
        if (trace.events.empty()) continue;
        g.start_activities[trace.events.front().activity]++;
        g.end_activities[trace.events.back().activity]++;
        for (std::size_t i = 0; i < trace.events.size(); ++i) {
            g.nodes.insert(trace.events[i].activity);
            if (i + 1 < trace.events.size())
                g.edges[{trace.events[i].activity, trace.events[i + 1].activity}]++;
        }
    }
    return g;
}

inline bool reachable(const Dfg& g, const std::string& a, const std::string& b) {
    if (!g.nodes.count(a)) throw DomainError("unknown activity '" + a + "'");
    if (!g.nodes.count(b)) throw DomainError("unknown activity '" + b + "'");
    return g.reach_set(a).count(b) > 0;
}

using EdgeFilter =
    std::function<bool(const std::string&, const std::string&, std::uint64_t)>;

// Connected components of the undirected view of the filtered edge set,
// restricted to the given labels. Sorted by smallest member.
inline std::vector<std::set<std::string>> weak_components(
    const Dfg& g, const std::set<std::string>& restricted_to, const EdgeFilter& filter = {}) {
    std::map<std::string, std::size_t> index;
    std::vector<std::string> labels(restricted_to.begin(), restricted_to.end());
    for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;

    std::vector<std::size_t> parent(labels.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    for (const auto& [edge, count] : g.edges) {
        auto a = index.find(edge.first);
        auto b = index.find(edge.second);
        if (a == index.end() || b == index.end()) continue;
        if (filter && !filter(edge.first, edge.second, count)) continue;
        parent[find(a->second)] = find(b->second);
    }

    std::map<std::size_t, std::set<std::string>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) groups[find(i)].insert(labels[i]);
    std::vector<std::set<std::string>> result;
    for (auto& [root, members] : groups) {
        (void)root;
        result.push_back(std::move(members));
    }
    std::sort(result.begin(), result.end(),
              [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
    return result;
}

// Drops edges whose count falls below threshold x (max outgoing count of the
// edge's source). Ending a trace counts as an outgoing option of the last
// activity, so a rare edge out of a frequent end activity is dropped too.
// Start/end tallies themselves are kept as observed.
inline Dfg drop_infrequent_edges(const Dfg& g, double threshold) {
    if (threshold <= 0.0) return g;
    Dfg out;
    out.nodes = g.nodes;
    out.start_activities = g.start_activities;
    out.end_activities = g.end_activities;
    std::map<std::string, std::uint64_t> max_out;
    for (const auto& [edge, count] : g.edges) {
        auto& m = max_out[edge.first];
        if (count > m) m = count;
    }
    for (const auto& [node, count] : g.end_activities) {
        auto& m = max_out[node];
        if (count > m) m = count;
    }
    for (const auto& [edge, count] : g.edges)
        if (static_cast<double>(count) >=
            threshold * static_cast<double>(max_out[edge.first]))
            out.edges[edge] = count;
    return out;
}

}  // namespace procmine
