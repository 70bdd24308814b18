#include <catch2/catch_amalgamated.hpp>

#include "procmine/convert.hpp"
#include "procmine/heuristics.hpp"
#include "procmine/replay.hpp"
#include "support/tree_gen.hpp"

using namespace procmine;

namespace {

EventLog log_of(const std::vector<std::vector<std::string>>& words) {
    return treegen::log_from_words(words);
}

EventLog repeat(const std::vector<std::string>& word, int times,
                const std::vector<std::vector<std::string>>& extra = {}) {
    std::vector<std::vector<std::string>> words(static_cast<std::size_t>(times), word);
    words.insert(words.end(), extra.begin(), extra.end());
    return log_of(words);
}

}  // namespace

TEST_CASE("dependency measures") {
    CHECK(dependency_measure(5, 0) == 5.0 / 6.0);
    CHECK(dependency_measure(5, 5) == 0.0);
    CHECK(dependency_measure(0, 5) == -5.0 / 6.0);
    CHECK(self_dependency_measure(3) == 0.75);
    CHECK(two_loop_measure(2, 1) == 0.75);
}

TEST_CASE("parameter validation") {
    HeuristicsParams p;
    CHECK_NOTHROW(validate_params(p));
    p.dependency_threshold = 1.5;
    CHECK_THROWS_AS(validate_params(p), ConfigError);
    p = {};
    p.min_directly_follows = 0;
    CHECK_THROWS_AS(validate_params(p), ConfigError);
}

TEST_CASE("thresholding decides between genuine and repaired arcs") {
    EventLog log = repeat({"a", "b"}, 9);  // dependency 9/10

    HeuristicsParams loose;
    loose.dependency_threshold = 0.9;
    DependencyGraph genuine = build_dependency_graph(log, loose);
    REQUIRE(genuine.has_arc("a", "b"));
    CHECK(genuine.arcs.at({"a", "b"}).value == 0.9);
    CHECK(genuine.arcs.at({"a", "b"}).count == 9);
    CHECK_FALSE(genuine.arcs.at({"a", "b"}).repaired);
    CHECK(genuinely_connected(genuine) == std::set<std::string>{"a", "b"});

    HeuristicsParams strict;  // default 0.95 rejects 0.9, repair rescues it
    DependencyGraph rescued = build_dependency_graph(log, strict);
    REQUIRE(rescued.has_arc("a", "b"));
    CHECK(rescued.arcs.at({"a", "b"}).repaired);
    CHECK(genuinely_connected(rescued).empty());
}

TEST_CASE("balanced ping-pong traffic is repaired in both directions") {
    // Both orders equally often: dependency 0 on both arcs, yet neither
    // activity is a pure start or end, so repair must reconnect both.
    EventLog log = repeat({"a", "b"}, 5, {{"b", "a"}, {"b", "a"}, {"b", "a"}, {"b", "a"},
                                          {"b", "a"}});
    DependencyGraph graph = build_dependency_graph(log, {});
    REQUIRE(graph.arcs.size() == 2);
    CHECK(graph.arcs.at({"a", "b"}).repaired);
    CHECK(graph.arcs.at({"b", "a"}).repaired);
    CHECK(graph.arcs.at({"a", "b"}).value == 0.0);
    CHECK(genuinely_connected(graph).empty());
}

TEST_CASE("pure starts and ends are exempt from repair") {
    EventLog log = repeat({"a", "b"}, 9);
    DependencyGraph graph = build_dependency_graph(log, {});
    // `a` is never preceded and `b` never followed: no incoming arc for a,
    // no outgoing for b, and that is fine.
    CHECK_FALSE(graph.has_arc("b", "a"));
    CHECK_FALSE(graph.has_arc("a", "a"));
    CHECK(graph.arcs.size() == 1);
}

TEST_CASE("self-loops use their own measure") {
    HeuristicsParams p;
    p.dependency_threshold = 0.9;
    EventLog log = repeat({"a", "b", "b", "b", "c"}, 10);  // b>b observed 20 times
    DependencyGraph graph = build_dependency_graph(log, p);
    REQUIRE(graph.has_arc("b", "b"));
    CHECK(graph.arcs.at({"b", "b"}).value == 20.0 / 21.0);
    CHECK_FALSE(graph.arcs.at({"b", "b"}).repaired);
}

TEST_CASE("length-two loops connect both directions") {
    HeuristicsParams p;
    p.dependency_threshold = 0.95;
    EventLog log = repeat({"a", "b", "a", "b", "a"}, 10);  // aba 20x, bab 10x
    DependencyGraph graph = build_dependency_graph(log, p);
    REQUIRE(graph.has_arc("a", "b"));
    REQUIRE(graph.has_arc("b", "a"));
    CHECK(graph.arcs.at({"a", "b"}).value == 30.0 / 31.0);
    CHECK(graph.arcs.at({"a", "b"}).count == 20);
    CHECK(graph.arcs.at({"b", "a"}).count == 20);
    CHECK_FALSE(graph.arcs.at({"a", "b"}).repaired);
    CHECK(genuinely_connected(graph) == std::set<std::string>{"a", "b"});
}

TEST_CASE("splits and joins are clustered into AND and XOR bindings") {
    HeuristicsParams p;
    p.dependency_threshold = 0.8;

    SECTION("exclusive branches stay separate") {
        std::vector<std::vector<std::string>> words;
        for (int i = 0; i < 10; ++i) words.push_back({"a", "b", "d"});
        for (int i = 0; i < 10; ++i) words.push_back({"a", "c", "d"});
        CausalNet net = discover_heuristics(log_of(words), p);
        REQUIRE(net.output_bindings.count("a"));
        CHECK(net.output_bindings.at("a") ==
              std::vector<std::set<std::string>>{{"b"}, {"c"}});
        CHECK(net.input_bindings.at("d") ==
              std::vector<std::set<std::string>>{{"b"}, {"c"}});
        CHECK(net.source_nodes() == std::set<std::string>{"a"});
        CHECK(net.sink_nodes() == std::set<std::string>{"d"});
    }
    SECTION("interleaved branches share one binding") {
        std::vector<std::vector<std::string>> words;
        for (int i = 0; i < 5; ++i) words.push_back({"a", "b", "c", "d"});
        for (int i = 0; i < 5; ++i) words.push_back({"a", "c", "b", "d"});
        CausalNet net = discover_heuristics(log_of(words), p);
        CHECK(net.output_bindings.at("a") == std::vector<std::set<std::string>>{{"b", "c"}});
        CHECK(net.input_bindings.at("d") == std::vector<std::set<std::string>>{{"b", "c"}});
    }
    SECTION("self-loop arcs become their own singleton binding") {
        HeuristicsParams q;
        q.dependency_threshold = 0.9;
        CausalNet net = discover_heuristics(repeat({"a", "b", "b", "c"}, 10), q);
        CHECK(net.output_bindings.at("b") ==
              std::vector<std::set<std::string>>{{"c"}, {"b"}});
        CHECK(net.input_bindings.at("b") ==
              std::vector<std::set<std::string>>{{"a"}, {"b"}});
    }
}

TEST_CASE("long-distance dependencies") {
    EventLog log = log_of({{"a", "x", "b"}, {"a", "x", "c"}});
    HeuristicsParams p;
    p.dependency_threshold = 0.6;  // keeps a->x genuine; x->b, x->c get repaired

    SECTION("the measure sits exactly at 2|a..b| / (|a|+|b|+1)") {
        p.long_distance_threshold = 0.5;
        auto pairs = long_distance_dependencies(log, build_dependency_graph(log, p), p);
        CHECK(pairs == std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"a", "c"}});
        p.long_distance_threshold = 0.51;
        CHECK(long_distance_dependencies(log, build_dependency_graph(log, p), p).empty());
    }
    SECTION("existing direct arcs suppress the pair") {
        p.long_distance_threshold = 0.1;
        auto pairs = long_distance_dependencies(log, build_dependency_graph(log, p), p);
        CHECK(pairs.count({"a", "b"}));
        CHECK_FALSE(pairs.count({"a", "x"}));  // direct arc
        CHECK_FALSE(pairs.count({"x", "b"}));  // repaired arc still counts
    }
    SECTION("discovery carries the pairs through") {
        p.long_distance_threshold = 0.5;
        CausalNet net = discover_heuristics(log, p);
        CHECK(net.long_distance_arcs.count({"a", "b"}));
    }
}

TEST_CASE("causal net converts to a replayable petri net") {
    SECTION("a plain chain converts to a plain chain") {
        CausalNet cnet = discover_heuristics(repeat({"a", "b", "c"}, 10), {});
        PetriNet net = cnet_to_petri(cnet);
        validate_net(net);
        CHECK(net.transitions.size() == 3);  // no routing transitions needed
        CHECK(net.places.size() == 4);       // source, sink, two channels
        ReplayResult replay = token_replay(net, repeat({"a", "b", "c"}, 1));
        CHECK(replay.log_fitness == 1.0);
    }
    SECTION("xor routing replays both branches") {
        std::vector<std::vector<std::string>> words;
        for (int i = 0; i < 10; ++i) words.push_back({"a", "b", "d"});
        for (int i = 0; i < 10; ++i) words.push_back({"a", "c", "d"});
        HeuristicsParams p;
        p.dependency_threshold = 0.8;
        PetriNet net = cnet_to_petri(discover_heuristics(log_of(words), p));
        validate_net(net);
        ReplayResult replay = token_replay(net, log_of({{"a", "b", "d"}, {"a", "c", "d"}}));
        CHECK(replay.log_fitness == 1.0);
    }
    SECTION("and routing replays interleavings") {
        std::vector<std::vector<std::string>> words;
        for (int i = 0; i < 5; ++i) words.push_back({"a", "b", "c", "d"});
        for (int i = 0; i < 5; ++i) words.push_back({"a", "c", "b", "d"});
        HeuristicsParams p;
        p.dependency_threshold = 0.8;
        PetriNet net = cnet_to_petri(discover_heuristics(log_of(words), p));
        ReplayResult replay = token_replay(net, log_of(words));
        CHECK(replay.log_fitness == 1.0);
    }
    SECTION("a causal net with a dangling node is rejected") {
        CausalNet broken;
        broken.nodes = {"a", "b"};
        broken.output_bindings["a"] = {{"b"}};
        broken.input_bindings["b"] = {{"a"}};
        broken.nodes.insert("ghost");
        CHECK_THROWS_AS(cnet_to_petri(broken), DomainError);
    }
}
