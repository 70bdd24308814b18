#include <catch2/catch_amalgamated.hpp>

#include "procmine/csv.hpp"

using namespace procmine;

namespace {

ColumnMapping basic_mapping() {
    ColumnMapping m;
    m.case_column = "case";
    m.activity_column = "activity";
    m.timestamp_column = "timestamp";
    return m;
}

}  // namespace

TEST_CASE("mapping validation rejects incomplete or contradictory mappings") {
    ColumnMapping m = basic_mapping();
    CHECK_NOTHROW(validate_mapping(m));
    SECTION("missing column name") {
        m.activity_column.clear();
        CHECK_THROWS_AS(validate_mapping(m), ConfigError);
    }
    SECTION("same column twice") {
        m.activity_column = "case";
        CHECK_THROWS_AS(validate_mapping(m), ConfigError);
    }
}

TEST_CASE("csv parsing groups rows into traces by case id") {
    std::string text =
        "case,activity,timestamp\n"
        "c1,a,2020-01-01T00:00:02\n"
        "c2,a,2020-01-01T00:00:00\n"
        "c1,b,2020-01-01T00:00:01\n";
    EventLog log = parse_csv(text, basic_mapping());
    REQUIRE(log.traces.size() == 2);
    CHECK(log.traces[0].case_id == "c1");  // first-appearance order
    CHECK(signature(log.traces[0]) == std::vector<std::string>{"b", "a"});  // time-sorted
    CHECK(log.traces[1].case_id == "c2");
}

TEST_CASE("csv parsing honors quoting, CRLF and typed attribute columns") {
    ColumnMapping m = basic_mapping();
    m.attribute_columns = {{"Age", AttrKind::Integer},
                           {"CRP", AttrKind::Real},
                           {"Suspected", AttrKind::Boolean},
                           {"Note", AttrKind::Text}};
    std::string text =
        "case,activity,timestamp,Age,CRP,Suspected,Note\r\n"
        "c1,\"a, with comma\",2020-01-01T00:00:00,62,210.25,true,\"say \"\"hi\"\"\"\r\n"
        "c1,b,2020-01-01T00:00:01,,,,\r\n";
    EventLog log = parse_csv(text, m);
    REQUIRE(log.traces.size() == 1);
    const auto& events = log.traces[0].events;
    REQUIRE(events.size() == 2);
    CHECK(events[0].activity == "a, with comma");
    CHECK(std::get<std::int64_t>(events[0].attributes.at("Age")) == 62);
    CHECK(std::get<double>(events[0].attributes.at("CRP")) == 210.25);
    CHECK(std::get<bool>(events[0].attributes.at("Suspected")) == true);
    CHECK(std::get<std::string>(events[0].attributes.at("Note")) == "say \"hi\"");
    CHECK(events[1].attributes.empty());  // blank cells mean absent, not empty string
}

TEST_CASE("csv parsing reports errors with line numbers") {
    SECTION("unknown column") {
        std::string text = "case,activity,when\nc1,a,2020-01-01T00:00:00\n";
        CHECK_THROWS_AS(parse_csv(text, basic_mapping()), ConfigError);
    }
    SECTION("short row") {
        std::string text = "case,activity,timestamp\nc1,a\n";
        CHECK_THROWS_AS(parse_csv(text, basic_mapping()), ParseError);
    }
    SECTION("bad timestamp names the line") {
        std::string text = "case,activity,timestamp\nc1,a,2020-01-01T00:00:00\nc1,b,nonsense\n";
        try {
            parse_csv(text, basic_mapping());
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SECTION("empty activity") {
        std::string text = "case,activity,timestamp\nc1,,2020-01-01T00:00:00\n";
        CHECK_THROWS_AS(parse_csv(text, basic_mapping()), IngestionError);
    }
    SECTION("custom timestamp format") {
        ColumnMapping m = basic_mapping();
        m.timestamp_format = "%d.%m.%Y %H:%M";
        std::string text = "case,activity,timestamp\nc1,a,22.10.2014 09:15\n";
        EventLog log = parse_csv(text, m);
        CHECK(format_iso8601(log.traces[0].events[0].timestamp) ==
              "2014-10-22T09:15:00.000+00:00");
    }
}

TEST_CASE("csv serialization emits rfc 4180 with a sorted attribute header") {
    ColumnMapping m = basic_mapping();
    m.attribute_columns = {{"b_attr", AttrKind::Text}, {"a_attr", AttrKind::Integer}};
    std::string text =
        "case,activity,timestamp,b_attr,a_attr\n"
        "c1,\"x,y\",2020-01-01T00:00:00,\"quote\"\"d\",5\n"
        "c1,plain,2020-01-01T00:00:01,,\n";
    EventLog log = parse_csv(text, m);
    std::string out = serialize_csv(log);
    CHECK(out ==
          "case,activity,timestamp,a_attr,b_attr\r\n"
          "c1,\"x,y\",2020-01-01T00:00:00.000+00:00,5,\"quote\"\"d\"\r\n"
          "c1,plain,2020-01-01T00:00:01.000+00:00,,\r\n");

    // parse(serialize(log)) loses only the attribute kinds the mapping encodes
    ColumnMapping back = basic_mapping();
    back.attribute_columns = {{"a_attr", AttrKind::Integer}, {"b_attr", AttrKind::Text}};
    EventLog again = parse_csv(out, back);
    CHECK(again.traces == log.traces);
}
