#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "procmine/errors.hpp"

namespace procmine {

// Token distribution over the places of one net, indexed like net.places.
struct Marking {
    std::vector<std::int32_t> tokens;

    bool operator==(const Marking&) const = default;

    std::int64_t total() const {
        return std::accumulate(tokens.begin(), tokens.end(), std::int64_t{0});
    }
};

// Place/transition net. Transitions with an empty label are silent. Arcs are
// unweighted; presets and postsets are kept sorted and duplicate-free.
struct PetriNet {
    struct Transition {
        std::string id;
        std::string label;

        bool silent() const { return label.empty(); }
        bool operator==(const Transition&) const = default;
    };

    std::vector<std::string> places;
    std::vector<Transition> transitions;
    std::vector<std::vector<int>> preset;   // per transition: consumed places
    std::vector<std::vector<int>> postset;  // per transition: produced places
    Marking initial_marking;
    Marking final_marking;

    bool operator==(const PetriNet&) const = default;

    int add_place(const std::string& id) {
        places.push_back(id);
        initial_marking.tokens.push_back(0);
        final_marking.tokens.push_back(0);
        return static_cast<int>(places.size()) - 1;
    }

    int add_transition(const std::string& id, const std::string& label) {
        transitions.push_back({id, label});
        preset.emplace_back();
        postset.emplace_back();
        return static_cast<int>(transitions.size()) - 1;
    }

    void add_arc_pt(int place, int transition) {
        insert_sorted(preset[static_cast<std::size_t>(transition)], place);
    }

    void add_arc_tp(int transition, int place) {
        insert_sorted(postset[static_cast<std::size_t>(transition)], place);
    }

    int place_index(const std::string& id) const {
        for (std::size_t i = 0; i < places.size(); ++i)
            if (places[i] == id) return static_cast<int>(i);
        return -1;
    }

    int transition_index(const std::string& id) const {
        for (std::size_t i = 0; i < transitions.size(); ++i)
            if (transitions[i].id == id) return static_cast<int>(i);
        return -1;
    }

    Marking empty_marking() const {
        Marking m;
        m.tokens.assign(places.size(), 0);
        return m;
    }

    Marking marking_from_map(const std::map<std::string, std::int32_t>& counts) const {
        Marking m = empty_marking();
        for (const auto& [id, n] : counts) {
            int p = place_index(id);
            if (p < 0) throw DomainError("marking references unknown place '" + id + "'");
            m.tokens[static_cast<std::size_t>(p)] = n;
        }
        return m;
    }

    std::map<std::string, std::int32_t> marking_to_map(const Marking& m) const {
        std::map<std::string, std::int32_t> counts;
        for (std::size_t i = 0; i < places.size(); ++i)
            if (m.tokens[i] != 0) counts[places[i]] = m.tokens[i];
        return counts;
    }

    std::size_t arc_count() const {
        std::size_t n = 0;
        for (const auto& v : preset) n += v.size();
        for (const auto& v : postset) n += v.size();
        return n;
    }

private:
    static void insert_sorted(std::vector<int>& v, int x) {
        auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it == v.end() || *it != x) v.insert(it, x);
    }
};

inline bool is_enabled(const PetriNet& net, const Marking& m, int transition) {
    for (int p : net.preset[static_cast<std::size_t>(transition)])
        if (m.tokens[static_cast<std::size_t>(p)] < 1) return false;
    return true;
}

// Transitions enabled under the marking, in index order.
inline std::vector<int> enabled(const PetriNet& net, const Marking& m) {
    std::vector<int> result;
    for (std::size_t t = 0; t < net.transitions.size(); ++t)
        if (is_enabled(net, m, static_cast<int>(t))) result.push_back(static_cast<int>(t));
    return result;
}

inline Marking fire(const PetriNet& net, const Marking& m, int transition) {
    if (!is_enabled(net, m, transition))
        throw ContractViolation("firing disabled transition '" +
                                net.transitions[static_cast<std::size_t>(transition)].id + "'");
    Marking out = m;
    for (int p : net.preset[static_cast<std::size_t>(transition)])
        --out.tokens[static_cast<std::size_t>(p)];
    for (int p : net.postset[static_cast<std::size_t>(transition)])
        ++out.tokens[static_cast<std::size_t>(p)];
    return out;
}

inline void validate_net(const PetriNet& net) {
    if (net.initial_marking.tokens.size() != net.places.size() ||
        net.final_marking.tokens.size() != net.places.size())
        throw DomainError("markings do not match the place count");
    for (const auto& v : net.initial_marking.tokens)
        if (v < 0) throw DomainError("negative token count in initial marking");
    for (const auto& v : net.final_marking.tokens)
        if (v < 0) throw DomainError("negative token count in final marking");
    std::map<std::string, int> seen;
    for (const auto& p : net.places)
        if (++seen[p] > 1) throw DomainError("duplicate place id '" + p + "'");
    seen.clear();
    for (const auto& t : net.transitions)
        if (++seen[t.id] > 1) throw DomainError("duplicate transition id '" + t.id + "'");
}

}  // namespace procmine
