#include <catch2/catch_amalgamated.hpp>

#include "procmine/align.hpp"
#include "procmine/convert.hpp"
#include "procmine/process_tree.hpp"
#include "procmine/systematic.hpp"
#include "support/align_oracle.hpp"
#include "support/tree_gen.hpp"

using namespace procmine;

namespace {

// Model-side moves must form a legal firing sequence into the final marking,
// and the log-side projection must spell the trace.
void check_moves(const PetriNet& net, const std::vector<std::string>& trace, const Alignment& a) {
    Marking marking = net.initial_marking;
    std::vector<std::string> log_side;
    for (const AlignMove& move : a.moves) {
        switch (move.kind) {
            case AlignMove::Kind::LogOnly:
                CHECK(move.transition == -1);
                log_side.push_back(move.activity);
                break;
            case AlignMove::Kind::Sync:
                log_side.push_back(move.activity);
                REQUIRE(move.transition >= 0);
                CHECK(net.transitions[static_cast<std::size_t>(move.transition)].label ==
                      move.activity);
                REQUIRE(is_enabled(net, marking, move.transition));
                marking = fire(net, marking, move.transition);
                break;
            case AlignMove::Kind::ModelOnly:
                REQUIRE(move.transition >= 0);
                REQUIRE(is_enabled(net, marking, move.transition));
                marking = fire(net, marking, move.transition);
                break;
        }
    }
    CHECK(marking == net.final_marking);
    CHECK(log_side == trace);
}

}  // namespace

TEST_CASE("a missing middle step costs one model move") {
    PetriNet net = tree_to_petri(parse_tree("Seq(a, b, c)"));
    Alignment a = align(net, {"a", "c"});
    CHECK(a.cost == 1.0);
    check_moves(net, {"a", "c"}, a);

    AlignmentFitness f = fitness_alignment(net, treegen::log_from_words({{"a", "c"}}));
    CHECK(f.value == 0.8);  // 1 - 1 / (2 log moves + 3 model steps)
    CHECK(f.excluded.empty());
}

TEST_CASE("alignment pins on small nets") {
    PetriNet net = tree_to_petri(parse_tree("Seq(a, b, c)"));
    SECTION("perfect trace costs nothing") {
        Alignment a = align(net, {"a", "b", "c"});
        CHECK(a.cost == 0.0);
        CHECK(a.moves.size() == 3);
        check_moves(net, {"a", "b", "c"}, a);
    }
    SECTION("a foreign label costs one log move") {
        Alignment a = align(net, {"a", "zz", "b", "c"});
        CHECK(a.cost == 1.0);
        check_moves(net, {"a", "zz", "b", "c"}, a);
    }
    SECTION("the empty trace costs the cheapest full run") {
        Alignment a = align(net, {});
        CHECK(a.cost == 3.0);
        check_moves(net, {}, a);
    }
    SECTION("silent moves are free") {
        PetriNet skip = tree_to_petri(parse_tree("Seq(a, Xor(b, tau), c)"));
        CHECK(align(skip, {"a", "c"}).cost == 0.0);
        CHECK(align(skip, {"a", "b", "c"}).cost == 0.0);
    }
}

TEST_CASE("cheapest model run") {
    CHECK(cheapest_model_cost(tree_to_petri(parse_tree("Seq(a, b, c)"))) == 3.0);
    CHECK(cheapest_model_cost(tree_to_petri(parse_tree("Xor(a, tau)"))) == 0.0);
    CHECK(cheapest_model_cost(tree_to_petri(parse_tree("And(a, Xor(b, c))"))) == 2.0);
    // the ward model can run end to end with only the registration visible
    CHECK(cheapest_model_cost(build_systematic_model()) == 1.0);
}

TEST_CASE("alignment cost matches a uniform-cost oracle on random instances") {
    std::mt19937 rng(20260814);
    treegen::GenOptions opt;
    opt.max_activities = 5;
    opt.max_depth = 3;
    int checked = 0;
    while (checked < 60) {
        ProcessTree tree = treegen::random_tree(rng, opt);
        PetriNet net = tree_to_petri(tree);
        if (net.transitions.size() > 8) continue;

        std::set<std::string> labels = tree_alphabet(tree);
        std::vector<std::string> alphabet(labels.begin(), labels.end());
        alphabet.push_back("zz");  // label the net does not know
        std::uniform_int_distribution<std::size_t> len(0, 6);
        std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
        std::vector<std::string> trace;
        for (std::size_t i = len(rng); i-- > 0;) trace.push_back(alphabet[pick(rng)]);

        std::optional<double> expected = oracle::alignment_cost(net, trace);
        REQUIRE(expected.has_value());
        Alignment got = align(net, trace);
        INFO("tree: " << format_tree(tree));
        CHECK(got.cost == *expected);
        check_moves(net, trace, got);
        ++checked;
    }
}

TEST_CASE("search failure modes") {
    SECTION("a dead net admits no alignment") {
        PetriNet dead;
        dead.add_place("p");
        dead.add_place("q");
        dead.initial_marking.tokens[0] = 1;
        dead.final_marking.tokens[1] = 1;
        CHECK_THROWS_AS(align(dead, {}), DomainError);
        CHECK_THROWS_WITH(align(dead, {"a"}),
                          Catch::Matchers::ContainsSubstring("admits no run"));
    }
    SECTION("the node budget is enforced and names the trace") {
        PetriNet net = tree_to_petri(parse_tree("Seq(a, b, c)"));
        CHECK_THROWS_AS(align(net, {"c", "b", "a"}, {}, 2, "c7"), BudgetError);
        CHECK_THROWS_WITH(align(net, {"c", "b", "a"}, {}, 2, "c7"),
                          Catch::Matchers::ContainsSubstring("trace 'c7'") &&
                              Catch::Matchers::ContainsSubstring("limit 2"));
        CHECK_THROWS_WITH(align(net, {"c", "b", "a"}, {}, 2),
                          Catch::Matchers::ContainsSubstring("<unnamed>"));
    }
}

TEST_CASE("fitness excludes over-budget traces and reports them sorted") {
    PetriNet net = tree_to_petri(parse_tree("And(a, b, c)"));

    EventLog log;
    auto add_trace = [&](const std::string& case_id, std::vector<std::string> word) {
        Trace t;
        t.case_id = case_id;
        for (std::size_t i = 0; i < word.size(); ++i) {
            Event e;
            e.activity = word[i];
            e.timestamp.millis = static_cast<std::int64_t>(i);
            t.events.push_back(std::move(e));
        }
        log.traces.push_back(std::move(t));
    };
    add_trace("ok1", {"a", "b", "c"});
    std::vector<std::string> adversarial(12, "c");
    add_trace("z2", adversarial);
    add_trace("a9", adversarial);

    // budget chosen to let the reference run and the fitting trace through
    // while the adversarial variant exhausts it
    std::size_t budget = 64;
    AlignmentFitness f = fitness_alignment(net, log, {}, budget);
    CHECK(f.excluded == std::vector<std::string>{"a9", "z2"});
    CHECK(f.value == 1.0);  // only the fitting trace remains in the mean

    SECTION("a budget too small for the reference run propagates") {
        CHECK_THROWS_AS(fitness_alignment(net, log, {}, 1), BudgetError);
    }
    SECTION("a full-budget run keeps every trace") {
        AlignmentFitness full = fitness_alignment(net, log);
        CHECK(full.excluded.empty());
        CHECK(full.value < 1.0);
        CHECK(full.value > 0.0);
    }
    SECTION("every trace excluded scores zero") {
        EventLog bad;
        bad.traces.assign(log.traces.begin() + 1, log.traces.end());
        AlignmentFitness none = fitness_alignment(net, bad, {}, budget);
        CHECK(none.value == 0.0);
        CHECK(none.excluded.size() == 2);
    }
    SECTION("threads do not change the outcome") {
        AlignmentFitness solo = fitness_alignment(net, log, {}, budget, 1);
        AlignmentFitness many = fitness_alignment(net, log, {}, budget, 6);
        CHECK(solo.value == many.value);
        CHECK(solo.excluded == many.excluded);
    }
}
