#include <catch2/catch_amalgamated.hpp>

#include "procmine/eventlog.hpp"

using namespace procmine;

namespace {

Event ev(std::string activity, std::int64_t millis) {
    Event e;
    e.activity = std::move(activity);
    e.timestamp.millis = millis;
    return e;
}

EventLog two_trace_log() {
    EventLog log;
    Trace t1{"c1", {ev("a", 0), ev("b", 1000), ev("a", 2000)}};
    Trace t2{"c2", {ev("b", 0), ev("c", 500)}};
    log.traces = {t1, t2};
    return log;
}

}  // namespace

TEST_CASE("attribute values stringify by kind") {
    CHECK(attribute_to_string(AttributeValue{std::string("ward")}) == "ward");
    CHECK(attribute_to_string(AttributeValue{std::int64_t{42}}) == "42");
    CHECK(attribute_to_string(AttributeValue{true}) == "true");
    CHECK(attribute_to_string(AttributeValue{false}) == "false");
    CHECK(attribute_to_string(AttributeValue{2.5}) == "2.5");
    CHECK(attribute_to_string(AttributeValue{Timestamp{0}}) == "1970-01-01T00:00:00.000+00:00");
    CHECK(kind_of(AttributeValue{std::int64_t{1}}) == AttrKind::Integer);
    CHECK(std::string(kind_name(AttrKind::Real)) == "float");
}

TEST_CASE("signature and counting helpers") {
    EventLog log = two_trace_log();
    CHECK(signature(log.traces[0]) == std::vector<std::string>{"a", "b", "a"});
    CHECK(log.event_count() == 5);
    CHECK(log.alphabet() == std::set<std::string>{"a", "b", "c"});
}

TEST_CASE("event sorting is stable for equal timestamps") {
    Trace t{"c", {ev("later", 5), ev("first", 1), ev("tie1", 3), ev("tie2", 3)}};
    sort_trace_events(t);
    CHECK(signature(t) == std::vector<std::string>{"first", "tie1", "tie2", "later"});
}

TEST_CASE("log validation enforces ingestion contracts") {
    EventLog log = two_trace_log();
    CHECK_NOTHROW(validate_log(log));

    SECTION("duplicate case ids") {
        log.traces[1].case_id = "c1";
        CHECK_THROWS_AS(validate_log(log), IngestionError);
        CHECK_THROWS_WITH(validate_log(log), Catch::Matchers::ContainsSubstring("c1"));
    }
    SECTION("empty activity labels") {
        log.traces[0].events[1].activity.clear();
        CHECK_THROWS_AS(validate_log(log), IngestionError);
    }
    SECTION("one value kind per attribute key") {
        log.traces[0].events[0].attributes["age"] = std::int64_t{60};
        log.traces[1].events[0].attributes["age"] = 60.0;
        CHECK_THROWS_AS(validate_log(log), IngestionError);
        CHECK_THROWS_WITH(validate_log(log), Catch::Matchers::ContainsSubstring("age"));
    }
}

TEST_CASE("projection keeps traces and drops foreign events") {
    EventLog log = two_trace_log();
    EventLog projected = project(log, {"a", "c"});
    REQUIRE(projected.traces.size() == 2);
    CHECK(signature(projected.traces[0]) == std::vector<std::string>{"a", "a"});
    CHECK(signature(projected.traces[1]) == std::vector<std::string>{"c"});
    EventLog none = project(log, {});
    CHECK(none.traces.size() == 2);
    CHECK(none.traces[0].empty());
}

TEST_CASE("case filtering and renaming") {
    EventLog log = two_trace_log();
    EventLog only_c2 = filter_cases(log, [](const Trace& t) { return t.case_id == "c2"; });
    REQUIRE(only_c2.traces.size() == 1);
    CHECK(only_c2.traces[0].case_id == "c2");

    EventLog renamed = rename_activities(log, {{"a", "alpha"}, {"missing", "x"}});
    CHECK(signature(renamed.traces[0]) == std::vector<std::string>{"alpha", "b", "alpha"});
    CHECK(signature(renamed.traces[1]) == std::vector<std::string>{"b", "c"});
}

TEST_CASE("missing-value fill carries values forward, then backward") {
    EventLog log;
    Trace t{"c1", {ev("a", 0), ev("b", 1), ev("c", 2), ev("d", 3), ev("e", 4)}};
    t.events[1].attributes["lab"] = 7.25;
    t.events[3].attributes["lab"] = 7.5;
    Trace bare{"c2", {ev("a", 0), ev("b", 1)}};
    log.traces = {t, bare};

    FillReport report = fill_missing(log, {"lab", "ghost"});
    const auto& filled = report.log.traces[0].events;
    CHECK(std::get<double>(filled[0].attributes.at("lab")) == 7.25);  // leading gap: backward
    CHECK(std::get<double>(filled[1].attributes.at("lab")) == 7.25);
    CHECK(std::get<double>(filled[2].attributes.at("lab")) == 7.25);  // forward from first
    CHECK(std::get<double>(filled[3].attributes.at("lab")) == 7.5);
    CHECK(std::get<double>(filled[4].attributes.at("lab")) == 7.5);   // forward from second
    CHECK(report.log.traces[1].events[0].attributes.empty());
    CHECK(report.untouched.at("lab") == std::vector<std::string>{"c2"});
    CHECK(report.untouched.at("ghost") == std::vector<std::string>{"c1", "c2"});
}
