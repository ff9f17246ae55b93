#include <doctest.h>

#include "nlsearch/compiler.hpp"
#include "nlsearch/errors.hpp"
#include "nlsearch/rng.hpp"

using namespace nlsearch;

namespace {

const SchemaRegistry& schema() {
    static const SchemaRegistry s = default_schema();
    return s;
}

}  // namespace

TEST_CASE("scrub enforces titles exclusivity") {
    SearchEntityDocument doc;
    doc.set("titles", StringList{"Data Scientist"});
    doc.set("management_levels", StringList{"C-Level"});
    const ScrubReport report = scrub(doc, schema());
    CHECK_FALSE(report.doc_after.has("management_levels"));
    CHECK(report.doc_after.has("titles"));
    REQUIRE(report.removals.size() == 1);
    CHECK(report.removals[0].field == "management_levels");
    CHECK(report.removals[0].reason == RemovalReason::Exclusivity);
}

TEST_CASE("scrub drops out-of-bank values and keeps the rest") {
    SearchEntityDocument doc;
    doc.set("departments", StringList{"Sales", "Piloting"});
    const ScrubReport report = scrub(doc, schema());
    CHECK(std::get<StringList>(*report.doc_after.find("departments")) == StringList{"Sales"});
    REQUIRE(report.removals.size() == 1);
    CHECK(report.removals[0].value == "Piloting");
    CHECK(report.removals[0].reason == RemovalReason::OutOfBank);
}

TEST_CASE("scrub canonicalizes bank casing") {
    SearchEntityDocument doc;
    doc.set("management_levels", StringList{"c-level"});
    doc.set("person_or_company", std::string("PERSON"));
    const ScrubReport report = scrub(doc, schema());
    CHECK(report.removals.empty());
    CHECK(std::get<StringList>(*report.doc_after.find("management_levels")) ==
          StringList{"C-Level"});
    CHECK(std::get<std::string>(*report.doc_after.find("person_or_company")) == "person");
}

TEST_CASE("scrub passes a lone bound through and swaps reversed pairs") {
    SearchEntityDocument doc;
    doc.set("revenue_min", std::int64_t{500000});
    ScrubReport report = scrub(doc, schema());
    CHECK(report.removals.empty());
    CHECK(report.doc_after == doc);

    doc.set("revenue_max", std::int64_t{400000});
    report = scrub(doc, schema());
    REQUIRE(report.removals.size() == 1);
    CHECK(report.removals[0].reason == RemovalReason::BoundConflict);
    CHECK(std::get<std::int64_t>(*report.doc_after.find("revenue_min")) == 400000);
    CHECK(std::get<std::int64_t>(*report.doc_after.find("revenue_max")) == 500000);
}

TEST_CASE("scrub drops fields emptied by removals") {
    SearchEntityDocument doc;
    doc.set("departments", StringList{"Piloting"});
    doc.set("location", LocationMap{{"us_states", {"Atlantis"}}});
    const ScrubReport report = scrub(doc, schema());
    CHECK(report.doc_after.empty());
    CHECK(report.removals.size() == 2);
}

TEST_CASE("compile maps shapes to clause kinds in registry order") {
    SearchEntityDocument doc;
    doc.set("company_name", StringList{"Zoominfo", "Chorus"});
    doc.set("management_levels", StringList{"C-Level", "VP-Level"});
    doc.set("location", LocationMap{{"us_states", {"United States"}}});
    doc.set("person_or_company", std::string("person"));

    const QueryAst ast = compile(doc, schema());
    REQUIRE(ast.clauses.size() == 4);
    CHECK(ast.clauses[0].kind == Clause::Kind::TextMatch);
    CHECK(ast.clauses[0].field == "company_name");
    CHECK(ast.clauses[0].values == std::vector<std::string>{"Chorus", "Zoominfo"});
    CHECK(ast.clauses[1].kind == Clause::Kind::ScopedMembership);
    CHECK(ast.clauses[1].sub_key == "us_states");
    CHECK(ast.clauses[2].kind == Clause::Kind::Membership);
    CHECK(ast.clauses[2].field == "management_levels");
    CHECK(ast.clauses[3].values == std::vector<std::string>{"person"});
}

TEST_CASE("compile of a lone employee bound and of the empty document") {
    SearchEntityDocument doc;
    doc.set("employee_min", std::int64_t{5000});
    const QueryAst ast = compile(doc, schema());
    REQUIRE(ast.clauses.size() == 1);
    CHECK(ast.clauses[0].kind == Clause::Kind::Range);
    CHECK(ast.clauses[0].field == "employee");
    CHECK(ast.clauses[0].min == 5000);
    CHECK_FALSE(ast.clauses[0].max.has_value());

    CHECK(compile(SearchEntityDocument{}, schema()).clauses.empty());
}

TEST_CASE("compile rejects unscrubbed documents") {
    SearchEntityDocument doc;
    doc.set("departments", StringList{"Piloting"});
    CHECK_THROWS_AS((void)compile(doc, schema()), CompileContractError);

    SearchEntityDocument exclusive;
    exclusive.set("titles", StringList{"Lawyer"});
    exclusive.set("departments", StringList{"Sales"});
    CHECK_THROWS_AS((void)compile(exclusive, schema()), CompileContractError);
}

TEST_CASE("canonical serialization") {
    CHECK(serialize_canonical(QueryAst{}) == "{}");

    SearchEntityDocument doc;
    doc.set("revenue_min", std::int64_t{500000});
    const QueryAst ast = compile(doc, schema());
    CHECK(serialize_canonical(ast) == R"({"revenue":{"min":500000}})");
    CHECK(serialize_canonical(ast) == serialize_canonical(ast));
}

TEST_CASE("filter serialization grammar") {
    SearchEntityDocument doc;
    doc.set("revenue_min", std::int64_t{500000});
    CHECK(serialize_filter(compile(doc, schema())) == "revenue:[500000 TO *]");

    SearchEntityDocument contact;
    contact.set("contact_info", StringList{"Phone", "Email"});
    CHECK(serialize_filter(compile(contact, schema())) ==
          "contact_info:(\"Email\" OR \"Phone\")");

    CHECK(serialize_filter(QueryAst{}) == "");
}

TEST_CASE("filter strings escape quotes and backslashes") {
    Clause c;
    c.kind = Clause::Kind::TextMatch;
    c.field = "titles";
    c.values = {"a \"quoted\" title", "back\\slash"};
    const QueryAst ast{{c}};
    const QueryAst back = parse_filter(serialize_filter(ast), schema());
    CHECK(back == ast);
}

TEST_CASE("filter round-trip over compiled documents") {
    SearchEntityDocument doc;
    doc.set("company_keywords", StringList{"crm software"});
    doc.set("location", LocationMap{{"us_states", {"Ohio"}}, {"others", {"London"}}});
    doc.set("revenue_min", std::int64_t{10});
    doc.set("revenue_max", std::int64_t{20});
    doc.set("contact_info", StringList{"Email"});
    const QueryAst ast = compile(doc, schema());
    CHECK(parse_filter(serialize_filter(ast), schema()) == ast);
}

TEST_CASE("scrub is idempotent over randomized documents") {
    SplitMix rng(7);
    const std::vector<std::string> junk = {"Boss", "Piloting", "Atlantis", "C-Level", "Sales",
                                           "Lawyer", "b2b"};
    for (int iter = 0; iter < 200; ++iter) {
        SearchEntityDocument doc;
        if (rng.bounded(2)) doc.set("titles", StringList{"Lawyer"});
        if (rng.bounded(2)) {
            doc.set("management_levels", StringList{junk[rng.bounded(junk.size())]});
        }
        if (rng.bounded(2)) doc.set("departments", StringList{junk[rng.bounded(junk.size())]});
        if (rng.bounded(2)) doc.set("revenue_min", std::int64_t(rng.bounded(1000)));
        if (rng.bounded(2)) doc.set("revenue_max", std::int64_t(rng.bounded(1000)));

        const ScrubReport first = scrub(doc, schema());
        const ScrubReport second = scrub(first.doc_after, schema());
        CHECK(second.removals.empty());
        CHECK(second.doc_after == first.doc_after);
        // the scrubbed document always compiles
        CHECK_NOTHROW((void)compile(first.doc_after, schema()));
    }
}
