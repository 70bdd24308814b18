#include <catch2/catch_amalgamated.hpp>

#include "procmine/xes.hpp"

using namespace procmine;

namespace {

const char* kSmallLog = R"(<?xml version="1.0" encoding="UTF-8"?>
<log xes.version="1.0">
  <extension name="Concept" prefix="concept" uri="http://www.xes-standard.org/concept.xesext"/>
  <global scope="event"><string key="concept:name" value="__INVALID__"/></global>
  <classifier name="Activity" keys="concept:name"/>
  <string key="concept:name" value="demo"/>
  <trace>
    <string key="concept:name" value="p7"/>
    <event>
      <string key="concept:name" value="ER Registration"/>
      <date key="time:timestamp" value="2014-10-22T11:15:41.000+02:00"/>
      <int key="Age" value="85"/>
      <boolean key="InfectionSuspected" value="true"/>
      <float key="CRP" value="210.25"/>
      <string key="Diagnose" value="A &amp; B &lt;acute&gt;"/>
    </event>
    <event>
      <date key="time:timestamp" value="2014-10-22T09:27:00.000+00:00"/>
      <string key="concept:name" value="ER Triage"/>
    </event>
  </trace>
  <trace>
    <string key="concept:name" value="p8"/>
  </trace>
</log>
)";

}  // namespace

TEST_CASE("xes parsing reads the supported subset") {
    EventLog log = parse_xes(kSmallLog);
    REQUIRE(log.traces.size() == 2);
    const Trace& t = log.traces[0];
    CHECK(t.case_id == "p7");
    REQUIRE(t.events.size() == 2);
    // events are sorted by timestamp: 11:15+02:00 is 09:15 UTC, before 09:27
    CHECK(t.events[0].activity == "ER Registration");
    CHECK(t.events[1].activity == "ER Triage");
    CHECK(format_iso8601(t.events[0].timestamp) == "2014-10-22T09:15:41.000+00:00");
    CHECK(std::get<std::int64_t>(t.events[0].attributes.at("Age")) == 85);
    CHECK(std::get<bool>(t.events[0].attributes.at("InfectionSuspected")) == true);
    CHECK(std::get<double>(t.events[0].attributes.at("CRP")) == 210.25);
    CHECK(std::get<std::string>(t.events[0].attributes.at("Diagnose")) == "A & B <acute>");
    CHECK(log.traces[1].empty());
    CHECK(log.metadata.at("source_timezones") == "+00:00,+02:00");
}

TEST_CASE("xes parsing rejects structural violations") {
    CHECK_THROWS_AS(parse_xes("<notalog/>"), ParseError);
    CHECK_THROWS_AS(parse_xes("<log><trace>"), ParseError);

    SECTION("trace without case id") {
        const char* text = "<log><trace><event>"
                           "<string key=\"concept:name\" value=\"a\"/>"
                           "<date key=\"time:timestamp\" value=\"2020-01-01T00:00:00\"/>"
                           "</event></trace></log>";
        CHECK_THROWS_AS(parse_xes(text), IngestionError);
        CHECK_THROWS_WITH(parse_xes(text), Catch::Matchers::ContainsSubstring("concept:name"));
    }
    SECTION("event without activity") {
        const char* text = "<log><trace><string key=\"concept:name\" value=\"c\"/>"
                           "<event><date key=\"time:timestamp\" value=\"2020-01-01T00:00:00\"/>"
                           "</event></trace></log>";
        CHECK_THROWS_AS(parse_xes(text), IngestionError);
    }
    SECTION("event without timestamp") {
        const char* text = "<log><trace><string key=\"concept:name\" value=\"c\"/>"
                           "<event><string key=\"concept:name\" value=\"a\"/>"
                           "</event></trace></log>";
        CHECK_THROWS_AS(parse_xes(text), IngestionError);
    }
    SECTION("malformed typed values") {
        const char* text = "<log><trace><string key=\"concept:name\" value=\"c\"/>"
                           "<event><string key=\"concept:name\" value=\"a\"/>"
                           "<date key=\"time:timestamp\" value=\"2020-01-01T00:00:00\"/>"
                           "<int key=\"Age\" value=\"old\"/>"
                           "</event></trace></log>";
        CHECK_THROWS_AS(parse_xes(text), ParseError);
    }
    SECTION("duplicate case ids") {
        const char* text = "<log><trace><string key=\"concept:name\" value=\"c\"/></trace>"
                           "<trace><string key=\"concept:name\" value=\"c\"/></trace></log>";
        CHECK_THROWS_AS(parse_xes(text), IngestionError);
    }
}

TEST_CASE("xes serialization round-trips the log") {
    EventLog log = parse_xes(kSmallLog);
    EventLog again = parse_xes(serialize_xes(log));
    CHECK(again.traces == log.traces);
    // serialization is deterministic
    CHECK(serialize_xes(log) == serialize_xes(again));
}

TEST_CASE("xes serialization escapes markup and keeps float precision") {
    EventLog log;
    Trace t{"<case&1>", {}};
    Event e;
    e.activity = "say \"hi\" & leave";
    e.timestamp.millis = 0;
    e.attributes["ratio"] = 0.1;  // not representable in binary; must survive
    t.events.push_back(e);
    log.traces.push_back(t);

    std::string xml = serialize_xes(log);
    CHECK(xml.find("&lt;case&amp;1&gt;") != std::string::npos);
    CHECK(xml.find("say &quot;hi&quot; &amp; leave") != std::string::npos);

    EventLog again = parse_xes(xml);
    CHECK(again.traces == log.traces);
    CHECK(std::get<double>(again.traces[0].events[0].attributes.at("ratio")) == 0.1);
}

TEST_CASE("strict number parsing refuses partial matches") {
    CHECK(detail::parse_int_strict("-12", 0) == -12);
    CHECK_THROWS_AS(detail::parse_int_strict("12x", 3), ParseError);
    CHECK_THROWS_AS(detail::parse_int_strict("", 3), ParseError);
    CHECK(detail::parse_real_strict("2.5e3", 0) == 2500.0);
    CHECK_THROWS_AS(detail::parse_real_strict("2.5.3", 3), ParseError);
    CHECK(detail::parse_bool_strict("True", 0) == true);
    CHECK_THROWS_AS(detail::parse_bool_strict("yes", 3), ParseError);
}
