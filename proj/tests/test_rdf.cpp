#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "sparqlopt/rdf_io.hpp"

using namespace sparqlopt;

TEST_SUITE_BEGIN("rdf");

TEST_CASE("term kinds are disjoint and rendering is injective") {
    Term i = Term::iri("x");
    Term l = Term::literal("x");
    Term b = Term::blank("x");
    Term v = Term::variable("x");
    std::set<std::string> renders = {i.render(), l.render(), b.render(), v.render()};
    CHECK(renders.size() == 4);
    CHECK(i.render() == "x");
    CHECK(l.render() == "\"x\"");
    CHECK(b.render() == "_:x");
    CHECK(v.render() == "?x");
    for (const Term& t : {i, l, b, v}) CHECK(Term::parse(t.render()) == t);
}

TEST_CASE("triple slot kinds are enforced") {
    CHECK_NOTHROW(Triple(Term::iri("a"), Term::iri("b"), Term::literal("l")));
    CHECK_NOTHROW(Triple(Term::blank("n"), Term::iri("b"), Term::blank("m")));
    CHECK_THROWS_AS(Triple(Term::literal("l"), Term::iri("b"), Term::iri("c")), ParseError);
    CHECK_THROWS_AS(Triple(Term::iri("a"), Term::literal("l"), Term::iri("c")), ParseError);
    CHECK_THROWS_AS(Triple(Term::iri("a"), Term::blank("n"), Term::iri("c")), ParseError);
    CHECK_THROWS_AS(Triple(Term::variable("x"), Term::iri("b"), Term::iri("c")), ParseError);
}

TEST_CASE("parse_document on the erratum database") {
    Document d = parse_document("(0, c, 1)");
    REQUIRE(d.size() == 1);
    const Triple& t = *d.begin();
    CHECK(t.subject == Term::iri("0"));
    CHECK(t.predicate == Term::iri("c"));
    CHECK(t.object == Term::iri("1"));
}

TEST_CASE("empty input and comments give the empty document") {
    CHECK(parse_document("").empty());
    CHECK(parse_document("# nothing here\n\n  \n").empty());
}

TEST_CASE("duplicate triples collapse") {
    Document d = parse_document("(a, b, c)\n(a, b, c)\n");
    CHECK(d.size() == 1);
}

TEST_CASE("syntax and kind errors carry line numbers") {
    CHECK_THROWS_AS(parse_document("(a, b)\n"), ParseError);
    try {
        parse_document("(a, b, c)\n(\"lit\", b, c)\n");
        FAIL("expected a kind violation");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("\"lit\"") != std::string::npos);
    }
}

TEST_CASE("serialize is deterministic and parse-serialize is the identity") {
    Document d = parse_document("(b, p, \"v\")\n(a, p, _:n)\n");
    std::string s = serialize_document(d);
    CHECK(s == "(a, p, _:n)\n(b, p, \"v\")\n");
    CHECK(parse_document(s) == d);
    CHECK(serialize_document(Document{}) == "");
}

TEST_CASE("round trip on random documents") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        Document d;
        int n = gen::range(rng, 0, 100);
        for (int k = 0; k < n; ++k) {
            Term o = gen::range(rng, 0, 2) == 0 ? Term::literal("l" + std::to_string(k % 7))
                                                : Term::iri(gen::pick(rng, gen::vocab()));
            d.insert(Triple(Term::iri(gen::pick(rng, gen::vocab())),
                            Term::iri(gen::pick(rng, gen::vocab())), o));
        }
        CHECK(parse_document(serialize_document(d)) == d);
    }
}

TEST_SUITE_END();
