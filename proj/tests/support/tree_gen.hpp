#pragma once

// Test-side generators: seeded random process trees and bounded samples of
// their trace language. Deliberately independent of the discovery code — logs
// sampled here act as ground truth for rediscovery and replay properties.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "procmine/eventlog.hpp"
#include "procmine/process_tree.hpp"

namespace treegen {

using procmine::ProcessTree;
using procmine::TreeKind;
using Word = std::vector<std::string>;

struct GenOptions {
    std::size_t max_activities = 8;
    int max_depth = 4;
    std::size_t word_cap = 400;  // language bound applied at every operator
    std::size_t log_cap = 200;   // traces kept per synthesized log
};

namespace detail {

inline ProcessTree build(std::mt19937& rng, std::vector<std::string>& labels, int depth,
                         int max_depth, bool inside_loop) {
    std::uniform_int_distribution<int> pct(0, 99);
    bool leaf = depth >= max_depth || labels.empty() || (depth > 0 && pct(rng) < 35);
    if (leaf) {
        if (labels.empty() || pct(rng) < 10) return ProcessTree::silent();
        ProcessTree t = ProcessTree::activity(labels.back());
        labels.pop_back();
        return t;
    }
    // No loop directly inside a loop: keeps the sampled language finite-ish
    // under the two-unrolling bound without losing operator coverage.
    int choices = inside_loop ? 3 : 4;
    int pick = std::uniform_int_distribution<int>(0, choices - 1)(rng);
    TreeKind kind = pick == 0   ? TreeKind::Sequence
                    : pick == 1 ? TreeKind::ExclusiveChoice
                    : pick == 2 ? TreeKind::Concurrent
                                : TreeKind::Loop;
    std::size_t arity = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
    std::vector<ProcessTree> children;
    for (std::size_t i = 0; i < arity; ++i)
        children.push_back(
            build(rng, labels, depth + 1, max_depth, inside_loop || kind == TreeKind::Loop));
    return ProcessTree::make(kind, std::move(children));
}

inline void dedupe_cap(std::vector<Word>& words, std::size_t cap) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    if (words.size() > cap) words.resize(cap);
}

inline std::vector<Word> concat(const std::vector<Word>& a, const std::vector<Word>& b,
                                std::size_t cap) {
    std::vector<Word> out;
    for (const Word& x : a) {
        for (const Word& y : b) {
            Word w = x;
            w.insert(w.end(), y.begin(), y.end());
            out.push_back(std::move(w));
            if (out.size() >= cap * 4) break;
        }
        if (out.size() >= cap * 4) break;
    }
    dedupe_cap(out, cap);
    return out;
}

inline void interleavings(const Word& a, const Word& b, std::size_t ai, std::size_t bi, Word& cur,
                          std::vector<Word>& out, std::size_t pair_cap) {
    if (out.size() >= pair_cap) return;
    if (ai == a.size() && bi == b.size()) {
        out.push_back(cur);
        return;
    }
    if (ai < a.size()) {
        cur.push_back(a[ai]);
        interleavings(a, b, ai + 1, bi, cur, out, pair_cap);
        cur.pop_back();
    }
    if (bi < b.size()) {
        cur.push_back(b[bi]);
        interleavings(a, b, ai, bi + 1, cur, out, pair_cap);
        cur.pop_back();
    }
}

inline std::vector<Word> shuffle_product(const std::vector<Word>& a, const std::vector<Word>& b,
                                         std::size_t cap) {
    std::vector<Word> out;
    for (const Word& x : a) {
        for (const Word& y : b) {
            Word cur;
            interleavings(x, y, 0, 0, cur, out, out.size() + 64);
            if (out.size() >= cap * 4) break;
        }
        if (out.size() >= cap * 4) break;
    }
    dedupe_cap(out, cap);
    return out;
}

}  // namespace detail

inline ProcessTree random_tree(std::mt19937& rng, const GenOptions& opt = {}) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < opt.max_activities; ++i)
        labels.push_back(std::string(1, static_cast<char>('a' + i)));
    std::shuffle(labels.begin(), labels.end(), rng);
    return detail::build(rng, labels, 0, opt.max_depth, false);
}

// Sorted, duplicate-free sample of the tree language; loops are unrolled at
// most twice. Always a subset of the true language.
inline std::vector<Word> language(const ProcessTree& t, std::size_t cap) {
    using detail::concat;
    using detail::dedupe_cap;
    using detail::shuffle_product;
    switch (t.kind) {
        case TreeKind::Activity: return {Word{t.label}};
        case TreeKind::Silent: return {Word{}};
        case TreeKind::Sequence: {
            std::vector<Word> acc = language(t.children[0], cap);
            for (std::size_t i = 1; i < t.children.size(); ++i)
                acc = concat(acc, language(t.children[i], cap), cap);
            return acc;
        }
        case TreeKind::ExclusiveChoice: {
            std::vector<Word> acc;
            for (const auto& c : t.children) {
                auto sub = language(c, cap);
                acc.insert(acc.end(), sub.begin(), sub.end());
            }
            dedupe_cap(acc, cap);
            return acc;
        }
        case TreeKind::Concurrent: {
            std::vector<Word> acc = language(t.children[0], cap);
            for (std::size_t i = 1; i < t.children.size(); ++i)
                acc = shuffle_product(acc, language(t.children[i], cap), cap);
            return acc;
        }
        case TreeKind::Loop: {
            std::vector<Word> body = language(t.children[0], cap);
            std::vector<Word> redo;
            for (std::size_t i = 1; i < t.children.size(); ++i) {
                auto sub = language(t.children[i], cap);
                redo.insert(redo.end(), sub.begin(), sub.end());
            }
            detail::dedupe_cap(redo, cap);
            std::vector<Word> all = body;
            std::vector<Word> level = body;
            for (int unroll = 0; unroll < 2; ++unroll) {
                level = concat(concat(level, redo, cap), body, cap);
                all.insert(all.end(), level.begin(), level.end());
            }
            dedupe_cap(all, cap);
            return all;
        }
    }
    return {};
}

inline procmine::EventLog log_from_words(const std::vector<Word>& words) {
    procmine::EventLog log;
    for (std::size_t i = 0; i < words.size(); ++i) {
        procmine::Trace trace;
        trace.case_id = "case_" + std::to_string(i + 1);
        for (std::size_t j = 0; j < words[i].size(); ++j) {
            procmine::Event e;
            e.activity = words[i][j];
            e.timestamp.millis = static_cast<std::int64_t>(i) * 3600000 +
                                 static_cast<std::int64_t>(j) * 60000;
            trace.events.push_back(std::move(e));
        }
        log.traces.push_back(std::move(trace));
    }
    return log;
}

inline procmine::EventLog sample_log(const ProcessTree& t, const GenOptions& opt = {}) {
    auto words = language(t, opt.word_cap);
    if (words.size() > opt.log_cap) words.resize(opt.log_cap);
    return log_from_words(words);
}

}  // namespace treegen
