#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "sparqlopt/parser.hpp"
#include "sparqlopt/rdf_io.hpp"

using namespace sparqlopt;

namespace {

Mapping m(std::initializer_list<std::pair<std::string, std::string>> binds) {
    Mapping out;
    for (auto& [v, c] : binds) out.bind(v, Term::iri(c));
    return out;
}

// Independent recursive membership decision procedure for the
// Filter/Union fragment, used as an oracle against the evaluator.
bool fu_member(const Mapping& mu, const Document& d, const SparqlExpr& e) {
    switch (e.op) {
        case SparqlExpr::Op::Pattern: {
            if (mu.domain() != vars(e.pattern)) return false;
            Term s = e.pattern.subject.is_variable() ? *mu.get(e.pattern.subject.text())
                                                     : e.pattern.subject;
            Term p = e.pattern.predicate.is_variable() ? *mu.get(e.pattern.predicate.text())
                                                       : e.pattern.predicate;
            Term o = e.pattern.object.is_variable() ? *mu.get(e.pattern.object.text())
                                                    : e.pattern.object;
            for (const Triple& t : d)
                if (t.subject == s && t.predicate == p && t.object == o) return true;
            return false;
        }
        case SparqlExpr::Op::Union:
            return fu_member(mu, d, *e.left) || fu_member(mu, d, *e.right);
        case SparqlExpr::Op::Filter:
            return fu_member(mu, d, *e.left) && satisfies(mu, *e.cond);
        default: throw std::logic_error("not an FU expression");
    }
}

// Random Filter/Union expression.
ExprPtr random_fu(std::mt19937_64& rng, int depth) {
    if (depth <= 0 || gen::range(rng, 0, 2) == 0)
        return SparqlExpr::make_pattern(gen::random_pattern(rng));
    if (gen::range(rng, 0, 1) == 0)
        return SparqlExpr::make_union(random_fu(rng, depth - 1), random_fu(rng, depth - 1));
    ExprPtr child = random_fu(rng, depth - 1);
    std::set<std::string> v = vars(*child);
    if (v.empty()) return child;
    return SparqlExpr::make_filter(child, gen::random_condition(rng, v));
}

}  // namespace

TEST_SUITE_BEGIN("algebra");

TEST_CASE("compatibility") {
    CHECK(compatible(m({{"a", "1"}}), m({{"b", "1"}})));
    CHECK_FALSE(compatible(m({{"a", "1"}}), m({{"a", "0"}})));
    CHECK(compatible(m({{"a", "1"}, {"b", "1"}}), m({{"a", "1"}})));
    CHECK(compatible(Mapping{}, m({{"a", "1"}})));
}

TEST_CASE("operator definitions on empty operands") {
    MappingSet omega = {m({{"a", "1"}}), m({{"b", "0"}})};
    MappingSet none;
    CHECK(join(omega, none).empty());
    CHECK(set_union(omega, none) == omega);
    CHECK(minus(omega, none) == omega);
    CHECK(left_outer_join(omega, none) == omega);
}

TEST_CASE("left outer join equals join union minus, randomized") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        MappingSet l, r;
        for (int k = gen::range(rng, 0, 4); k > 0; --k) {
            Mapping mu;
            for (int j = gen::range(rng, 0, 3); j > 0; --j)
                mu.bind(gen::pick(rng, gen::var_names()), Term::iri(gen::pick(rng, gen::vocab())));
            l.insert(mu);
        }
        for (int k = gen::range(rng, 0, 4); k > 0; --k) {
            Mapping mu;
            for (int j = gen::range(rng, 0, 3); j > 0; --j)
                mu.bind(gen::pick(rng, gen::var_names()), Term::iri(gen::pick(rng, gen::vocab())));
            r.insert(mu);
        }
        CHECK(left_outer_join(l, r) == set_union(join(l, r), minus(l, r)));
    }
}

TEST_CASE("filter satisfaction per the two-valued semantics") {
    Mapping mu1 = m({{"a", "1"}});
    CHECK(satisfies(mu1, *FilterCondition::bound("a")));
    CHECK_FALSE(satisfies(mu1, *FilterCondition::bound("x")));
    // an equality on an unbound variable fails, its negation holds
    Mapping empty;
    FilterPtr neq = FilterCondition::negation(
        FilterCondition::eq_const("x", Term::iri("1")));
    CHECK_FALSE(satisfies(empty, *neq->lhs));
    CHECK(satisfies(empty, *neq));
    Mapping mu2 = m({{"x", "1"}, {"y", "1"}});
    CHECK(satisfies(mu2, *FilterCondition::eq_var("x", "y")));
    CHECK_FALSE(satisfies(m({{"x", "1"}}), *FilterCondition::eq_var("x", "y")));
}

TEST_CASE("translation is structural") {
    ExprPtr filt = parse_expr("(?x,p,?y) FILTER bnd(?x)");
    AlgPtr a = translate(*filt);
    REQUIRE(a->op == AlgebraExpr::Op::Select);
    CHECK(a->left->op == AlgebraExpr::Op::Leaf);
    AlgPtr err = translate(*parse_expr("((0,c,?a) OPT ((?a,c,1) UNION (0,c,?b)))"));
    REQUIRE(err->op == AlgebraExpr::Op::LeftJoin);
    CHECK(err->left->op == AlgebraExpr::Op::Leaf);
    CHECK(err->right->op == AlgebraExpr::Op::Union);
    AlgPtr q = translate(parse_query("SELECT ?x WHERE (?x,p,?y)"));
    CHECK(q->op == AlgebraExpr::Op::Project);
}

TEST_CASE("the erratum example evaluates as in the paper") {
    Document d = parse_document("(0, c, 1)");
    MappingSet lhs = evaluate(*parse_expr("(0,c,?a) OPT ((?a,c,1) UNION (0,c,?b))"), d);
    MappingSet rhs =
        evaluate(*parse_expr("((0,c,?a) OPT (?a,c,1)) UNION ((0,c,?a) OPT (0,c,?b))"), d);
    CHECK(lhs == MappingSet{m({{"a", "1"}, {"b", "1"}})});
    CHECK(rhs == MappingSet{m({{"a", "1"}}), m({{"a", "1"}, {"b", "1"}})});
    CHECK(lhs != rhs);
    // the left outer join example from the erratum evaluation
    CHECK(left_outer_join({m({{"a", "1"}})}, {m({{"a", "1"}, {"b", "1"}})}) ==
          MappingSet{m({{"a", "1"}, {"b", "1"}})});
}

TEST_CASE("any pattern on the empty document gives the empty set") {
    CHECK(evaluate(*parse_expr("(?x,?y,?z)"), Document{}).empty());
}

TEST_CASE("leaf evaluation binds exactly the pattern variables") {
    Document d = parse_document("(a, p, b)\n(a, p, c)\n(b, q, c)\n");
    MappingSet r = evaluate(*parse_expr("(a,p,?o)"), d);
    CHECK(r == MappingSet{m({{"o", "b"}}), m({{"o", "c"}})});
    // repeated variables must unify
    Document d2 = parse_document("(a, p, a)\n(a, p, b)\n");
    CHECK(evaluate(*parse_expr("(?x,p,?x)"), d2) == MappingSet{m({{"x", "a"}})});
}

TEST_CASE("safe_vars follows the recursion") {
    AlgPtr leaf = translate(*parse_expr("(?x,p,?y)"));
    CHECK(safe_vars(*leaf) == std::set<std::string>{"x", "y"});
    AlgPtr u = translate(*parse_expr("(?x,p,?y) UNION (?z,p,?y)"));
    CHECK(safe_vars(*u) == std::set<std::string>{"y"});
    AlgPtr disjoint = translate(*parse_expr("(?x,p,c) UNION (?z,p,c)"));
    CHECK(safe_vars(*disjoint).empty());
    AlgPtr opt = translate(*parse_expr("(?x,p,c) OPT (?x,q,?y)"));
    CHECK(safe_vars(*opt) == std::set<std::string>{"x"});
}

TEST_CASE("safe variables are bound in every result mapping") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 300; ++i) {
        AlgPtr a = gen::random_alg(rng, 3);
        Document d = gen::random_document(rng);
        std::set<std::string> sv = safe_vars(*a);
        std::set<std::string> v = vars(*a);
        CHECK(std::includes(v.begin(), v.end(), sv.begin(), sv.end()));
        for (const Mapping& mu : evaluate(*a, d))
            for (const std::string& x : sv) CHECK(mu.bound(x));
    }
}

TEST_CASE("incompatibility property of union- and projection-free expressions") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        AlgPtr a = gen::random_upf(rng, 3);
        REQUIRE(is_union_projection_free(*a));
        MappingSet r = evaluate(*a, gen::random_document(rng));
        for (auto it = r.begin(); it != r.end(); ++it)
            for (auto jt = std::next(it); jt != r.end(); ++jt)
                CHECK_FALSE(compatible(*it, *jt));
    }
}

TEST_CASE("membership agrees with the Filter/Union decision procedure") {
    std::mt19937_64 rng(19);
    int hits = 0;
    for (int i = 0; i < 500; ++i) {
        ExprPtr e = random_fu(rng, 3);
        Document d = gen::random_document(rng);
        MappingSet r = evaluate(*e, d);
        // test members and a perturbed non-member candidate
        for (const Mapping& mu : r) {
            CHECK(fu_member(mu, d, *e));
            ++hits;
        }
        Mapping probe;
        probe.bind("a", Term::iri(gen::pick(rng, gen::vocab())));
        CHECK(membership(probe, d, *e) == fu_member(probe, d, *e));
    }
    CHECK(hits > 0);
}

TEST_CASE("membership in the erratum example") {
    Document d = parse_document("(0, c, 1)");
    Mapping mu = m({{"a", "1"}});
    CHECK_FALSE(membership(mu, d, *parse_expr("(0,c,?a) OPT ((?a,c,1) UNION (0,c,?b))")));
    CHECK(membership(mu, d,
                     *parse_expr("((0,c,?a) OPT (?a,c,1)) UNION ((0,c,?a) OPT (0,c,?b))")));
    CHECK_FALSE(membership(Mapping{}, d, *parse_expr("(0,c,?a)")));
}

TEST_CASE("project restricts domains") {
    Document d = parse_document("(a, p, b)\n");
    SparqlQuery q = parse_query("SELECT ?x WHERE (?x,p,?y)");
    CHECK(evaluate(q, d) == MappingSet{m({{"x", "a"}})});
    // projection to variables absent from the body yields the empty mapping
    SparqlQuery q2 = parse_query("SELECT ?z WHERE (?x,p,?y)");
    CHECK(evaluate(q2, d) == MappingSet{Mapping{}});
}

TEST_CASE("mapping rendering and parsing") {
    Mapping mu = m({{"b", "0"}, {"a", "1"}});
    CHECK(mu.render() == "{?a -> 1, ?b -> 0}");
    CHECK(Mapping::parse(mu.render()) == mu);
    CHECK(Mapping::parse("{}") == Mapping{});
}

TEST_SUITE_END();
