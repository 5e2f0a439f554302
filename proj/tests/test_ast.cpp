#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "sparqlopt/parser.hpp"

using namespace sparqlopt;

TEST_SUITE_BEGIN("ast");

TEST_CASE("parsing the erratum query") {
    SparqlQuery q = parse_query("SELECT ?a WHERE ((0,c,?a) OPT ((?a,c,1) UNION (0,c,?b)))");
    CHECK(q.projection == std::set<std::string>{"a"});
    REQUIRE(q.body->op == SparqlExpr::Op::Opt);
    CHECK(q.body->left->op == SparqlExpr::Op::Pattern);
    CHECK(q.body->right->op == SparqlExpr::Op::Union);
    CHECK(vars(q) == std::set<std::string>{"a", "b"});
}

TEST_CASE("unsafe filters are rejected at parse time naming the variable") {
    try {
        parse_expr("(?x,p,?y) FILTER bnd(?z)");
        FAIL("expected an unsafe-filter error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("?z") != std::string::npos);
    }
    // construction enforces the same invariant
    ExprPtr p = SparqlExpr::make_pattern(TriplePattern(Term::variable("x"), Term::iri("p"),
                                                       Term::variable("y")));
    CHECK_THROWS_AS(SparqlExpr::make_filter(p, FilterCondition::bound("z")), ParseError);
}

TEST_CASE("precedence: FILTER tightest, then AND, OPT, UNION, left associative") {
    ExprPtr e = parse_expr("(a,p,?x) AND (a,q,?y) FILTER bnd(?y) OPT (a,r,?z) UNION (a,s,?w)");
    // ((((a,p,?x) AND ((a,q,?y) FILTER ...)) OPT (a,r,?z)) UNION (a,s,?w))
    REQUIRE(e->op == SparqlExpr::Op::Union);
    REQUIRE(e->left->op == SparqlExpr::Op::Opt);
    REQUIRE(e->left->left->op == SparqlExpr::Op::And);
    CHECK(e->left->left->right->op == SparqlExpr::Op::Filter);

    ExprPtr l = parse_expr("(a,p,?x) AND (a,q,?y) AND (a,r,?z)");
    CHECK(l->op == SparqlExpr::Op::And);
    CHECK(l->left->op == SparqlExpr::Op::And);  // left associative
}

TEST_CASE("vars") {
    CHECK(vars(*parse_expr("(0,c,?a)")) == std::set<std::string>{"a"});
    CHECK(vars(*parse_expr("(a,b,c)")).empty());
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        ExprPtr q1 = gen::random_expr(rng, 2);
        ExprPtr q2 = gen::random_expr(rng, 2);
        std::set<std::string> u = vars(*q1);
        auto v2 = vars(*q2);
        u.insert(v2.begin(), v2.end());
        CHECK(vars(*SparqlExpr::make_and(q1, q2)) == u);
    }
}

TEST_CASE("opt_rank") {
    CHECK(opt_rank(*parse_expr("(a,b,?x)")) == 0);
    CHECK(opt_rank(*parse_expr("((a,b,?x) OPT (a,b,?y)) OPT (a,b,?z)")) == 2);
    CHECK(opt_rank(*parse_expr("(a,b,?x) AND ((a,b,?y) UNION (a,b,?z))")) == 0);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        ExprPtr q1 = gen::random_expr(rng, 3);
        ExprPtr q2 = gen::random_expr(rng, 3);
        CHECK(opt_rank(*SparqlExpr::make_opt(q1, q2)) ==
              std::max(opt_rank(*q1), opt_rank(*q2)) + 1);
    }
}

TEST_CASE("fragment_of") {
    CHECK(fragment_of(*parse_expr("(a,b,?x) AND (a,b,?y)")).name() == "A");
    Fragment err = fragment_of(*parse_expr("((0,c,?a) OPT ((?a,c,1) UNION (0,c,?b)))"));
    CHECK(err.name() == "OU");
    CHECK_FALSE(err.uses_and);
    Fragment aplus = fragment_of(parse_query("SELECT ?x WHERE (?x,b,?y) AND (?x,c,?z)"));
    CHECK(aplus.name() == "A+");
    CHECK(aplus.top_level_select);
    CHECK(fragment_of(*parse_expr("(a,b,c)")).name() == "t");
}

TEST_CASE("serialize parses back to the same tree") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        ExprPtr e = gen::random_expr(rng, 3);
        CHECK(equal(parse_expr(e->render()), e));
    }
    for (int i = 0; i < 100; ++i) {
        SparqlQuery q;
        q.body = gen::random_expr(rng, 3);
        q.projection = {"a", "x"};
        CHECK(equal(parse_query(q.render()), q));
    }
}

TEST_CASE("is_bgp") {
    CHECK(is_bgp(*parse_expr("(?x,p,?y) AND (?y,q,?z) AND (a,b,c)")));
    CHECK_FALSE(is_bgp(*parse_expr("(?x,p,?y) UNION (?y,q,?z)")));
    CHECK_FALSE(is_bgp(*parse_expr("(?x,p,?y) FILTER bnd(?x)")));
}

TEST_SUITE_END();
