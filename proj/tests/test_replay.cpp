#include <catch2/catch_amalgamated.hpp>

#include "procmine/convert.hpp"
#include "procmine/process_tree.hpp"
#include "procmine/replay.hpp"
#include "support/tree_gen.hpp"

using namespace procmine;

namespace {

PetriNet seq_ab() { return tree_to_petri(parse_tree("Seq(a, b)")); }

std::string id_of(const PetriNet& net, const std::string& label) {
    for (const auto& t : net.transitions)
        if (t.label == label) return t.id;
    FAIL("no transition labelled " << label);
    return {};
}

}  // namespace

TEST_CASE("replay counts tokens through a two-step sequence") {
    PetriNet net = seq_ab();

    SECTION("the full word fits perfectly") {
        ReplayResult r = token_replay(net, treegen::log_from_words({{"a", "b"}}));
        REQUIRE(r.per_trace.size() == 1);
        CHECK(r.per_trace[0].produced == 3);
        CHECK(r.per_trace[0].consumed == 3);
        CHECK(r.per_trace[0].missing == 0);
        CHECK(r.per_trace[0].remaining == 0);
        CHECK(r.per_trace[0].fits);
        CHECK(r.log_fitness == 1.0);
    }
    SECTION("stopping halfway scores one half") {
        ReplayResult r = token_replay(net, treegen::log_from_words({{"a"}}));
        CHECK(r.per_trace[0].produced == 2);
        CHECK(r.per_trace[0].consumed == 2);
        CHECK(r.per_trace[0].missing == 1);
        CHECK(r.per_trace[0].remaining == 1);
        CHECK_FALSE(r.per_trace[0].fits);
        CHECK(r.log_fitness == 0.5);
    }
    SECTION("skipping the first step force-fires with an injected token") {
        ReplayResult r = token_replay(net, treegen::log_from_words({{"b"}}));
        CHECK(r.per_trace[0].missing == 1);
        CHECK(r.per_trace[0].remaining == 1);
        CHECK(r.log_fitness == 0.5);
        CHECK(r.executions.at(id_of(net, "b")) == 1);
        CHECK(r.executions.at(id_of(net, "a")) == 0);
    }
    SECTION("labels the net does not know are counted") {
        ReplayResult r = token_replay(net, treegen::log_from_words({{"a", "zz", "b"}}));
        CHECK(r.unknown_label_events == 1);
        CHECK(r.per_trace[0].produced == 4);
        CHECK(r.per_trace[0].consumed == 4);
        CHECK(r.per_trace[0].missing == 1);
        CHECK(r.per_trace[0].remaining == 1);
        CHECK(r.log_fitness == 0.75);
    }
    SECTION("log fitness is the mean over traces") {
        ReplayResult r = token_replay(net, treegen::log_from_words({{"a", "b"}, {"a"}}));
        CHECK(r.log_fitness == 0.75);
    }
    SECTION("an empty log is perfectly fit") {
        ReplayResult r = token_replay(net, EventLog{});
        CHECK(r.per_trace.empty());
        CHECK(r.log_fitness == 1.0);
        CHECK(r.executions.at(id_of(net, "a")) == 0);
    }
}

TEST_CASE("execution counts aggregate once per trace, not per variant") {
    PetriNet net = seq_ab();
    ReplayResult r = token_replay(
        net, treegen::log_from_words({{"a", "b"}, {"a"}, {"a", "b"}, {"a", "b"}, {"a"}}));
    CHECK(r.executions.at(id_of(net, "a")) == 5);
    CHECK(r.executions.at(id_of(net, "b")) == 3);
}

TEST_CASE("silent transitions bridge gaps in both directions") {
    SECTION("a chain of taus before the first visible step") {
        PetriNet net;
        int p0 = net.add_place("p0");
        int p1 = net.add_place("p1");
        int p2 = net.add_place("p2");
        int p3 = net.add_place("p3");
        int p4 = net.add_place("p4");
        int s1 = net.add_transition("s1", "");
        int s2 = net.add_transition("s2", "");
        int s3 = net.add_transition("s3", "");
        int a = net.add_transition("a", "a");
        net.add_arc_pt(p0, s1);
        net.add_arc_tp(s1, p1);
        net.add_arc_pt(p1, s2);
        net.add_arc_tp(s2, p2);
        net.add_arc_pt(p2, s3);
        net.add_arc_tp(s3, p3);
        net.add_arc_pt(p3, a);
        net.add_arc_tp(a, p4);
        net.initial_marking.tokens[static_cast<std::size_t>(p0)] = 1;
        net.final_marking.tokens[static_cast<std::size_t>(p4)] = 1;

        ReplayResult r = token_replay(net, treegen::log_from_words({{"a"}}));
        CHECK(r.per_trace[0].fits);
        CHECK(r.log_fitness == 1.0);
        CHECK(r.executions.at("s2") == 1);
    }
    SECTION("taus settle the final marking after the last visible step") {
        // And(a, b) ends with a silent join that replay must still take.
        PetriNet net = tree_to_petri(parse_tree("And(a, b)"));
        ReplayResult r = token_replay(net, treegen::log_from_words({{"b", "a"}, {"a", "b"}}));
        CHECK(r.per_trace[0].fits);
        CHECK(r.per_trace[1].fits);
        CHECK(r.log_fitness == 1.0);
    }
}

TEST_CASE("force-firing picks the candidate needing the fewest injected tokens") {
    PetriNet net;
    int q0 = net.add_place("q0");
    int q1 = net.add_place("q1");
    int q2 = net.add_place("q2");
    int q3 = net.add_place("q3");
    int x1 = net.add_transition("x1", "x");
    int x2 = net.add_transition("x2", "x");
    net.add_arc_pt(q1, x1);
    net.add_arc_pt(q2, x1);
    net.add_arc_tp(x1, q3);
    net.add_arc_pt(q1, x2);
    net.add_arc_tp(x2, q3);
    net.initial_marking.tokens[static_cast<std::size_t>(q0)] = 1;
    net.final_marking.tokens[static_cast<std::size_t>(q3)] = 1;

    ReplayResult r = token_replay(net, treegen::log_from_words({{"x"}}));
    CHECK(r.executions.at("x2") == 1);
    CHECK(r.executions.at("x1") == 0);
    CHECK(r.per_trace[0].missing == 1);
    CHECK(r.log_fitness == 0.5);
}

TEST_CASE("replay is independent of the thread count") {
    std::mt19937 rng(4711);
    for (int round = 0; round < 6; ++round) {
        ProcessTree t = treegen::random_tree(rng);
        PetriNet net = tree_to_petri(t);
        EventLog log = treegen::sample_log(t);
        // distort a few traces so imperfect branches are exercised too
        for (std::size_t i = 0; i < log.traces.size(); i += 3)
            if (!log.traces[i].events.empty()) log.traces[i].events.pop_back();

        ReplayResult solo = token_replay(net, log, 1);
        ReplayResult many = token_replay(net, log, 7);
        REQUIRE(solo.per_trace.size() == many.per_trace.size());
        for (std::size_t i = 0; i < solo.per_trace.size(); ++i) {
            CHECK(solo.per_trace[i].fitness == many.per_trace[i].fitness);
            CHECK(solo.per_trace[i].fits == many.per_trace[i].fits);
        }
        CHECK(solo.log_fitness == many.log_fitness);
        CHECK(solo.executions == many.executions);
        CHECK(solo.unknown_label_events == many.unknown_label_events);
    }
}
