#pragma once

// The Lemma-1 non-equivalence catalog: every operator combination the
// appendix rules out, with its cited witness over D = {(0,c,1)} (or the
// projection counterexample document). The appendix labels half of the
// right-hand variants "symmetrical to the previous one" without spelling
// them out; those witnesses were derived by exhaustive search over the same
// leaf pool and are marked cited = false.

#include <string>
#include <vector>

#include "sparqlopt/algebra.hpp"
#include "sparqlopt/parser.hpp"
#include "sparqlopt/rdf_io.hpp"

namespace cex {

using namespace sparqlopt;

struct NonEquivalence {
    std::string name;
    AlgPtr lhs, rhs;
    Document doc;
    bool cited = true;
};

inline AlgPtr leaf(const std::string& pattern) { return translate(*parse_expr(pattern)); }

inline std::vector<NonEquivalence> lemma1_catalog() {
    const Document d0 = parse_document("(0, c, 1)");
    const Document d1b = parse_document("(0, f, 0)\n(1, t, 1)\n(a, tv, 0)\n(a, tv, 1)\n");
    auto J = AlgebraExpr::join;
    auto U = AlgebraExpr::set_union;
    auto M = AlgebraExpr::minus;
    auto L = AlgebraExpr::left_join;

    std::vector<NonEquivalence> out;
    auto add = [&](const std::string& name, AlgPtr lhs, AlgPtr rhs, const Document& d,
                   bool cited = true) {
        out.push_back({name, std::move(lhs), std::move(rhs), d, cited});
    };

    // 1a: JIdem / LIdem beyond the union- and projection-free fragment
    AlgPtr a_1a = U(leaf("(?x,c,1)"), leaf("(0,c,?y)"));
    add("JIdem beyond the fragment (1a)", J(a_1a, a_1a), a_1a, d0);
    add("LIdem beyond the fragment (1a)", L(a_1a, a_1a), a_1a, d0);

    // 1b: the same failure with projection instead of union
    AlgPtr a_1b = AlgebraExpr::project(
        {"x", "y"}, L(L(leaf("(a,tv,?z)"), leaf("(?z,f,?x)")), leaf("(?z,t,?y)")));
    add("JIdem beyond the fragment (1b)", J(a_1b, a_1b), a_1b, d1b);
    add("LIdem beyond the fragment (1b)", L(a_1b, a_1b), a_1b, d1b);

    AlgPtr A = leaf("(0,c,?a)");     // evaluates to {{?a -> 1}}
    AlgPtr Ainv = leaf("(?a,c,1)");  // evaluates to {{?a -> 0}}
    AlgPtr B = leaf("(0,c,?b)");
    AlgPtr Binv = leaf("(?b,c,1)");
    AlgPtr C = leaf("(c,c,c)");      // evaluates to the empty set

    // claim 3: minus and left join are not left-distributive over union
    add("minus not left-distributive over union",
        M(A, U(Ainv, B)), U(M(A, Ainv), M(A, B)), d0);
    add("left join not left-distributive over union (the erratum)",
        L(A, U(Ainv, B)), U(L(A, Ainv), L(A, B)), d0);

    // claim 4, distributivity over join
    add("union not left-distributive over join",
        U(Ainv, J(Binv, B)), J(U(Ainv, Binv), U(Ainv, B)), d0);
    add("union not right-distributive over join",
        U(J(A, Ainv), B), J(U(A, B), U(Ainv, B)), d0, false);
    add("minus not left-distributive over join",
        M(Ainv, J(Binv, B)), J(M(Ainv, Binv), M(Ainv, B)), d0);
    add("minus not right-distributive over join",
        M(J(A, B), Ainv), J(M(A, Ainv), M(B, Ainv)), d0);
    add("left join not left-distributive over join",
        L(Ainv, J(Binv, A)), J(L(Ainv, Binv), L(Ainv, A)), d0);
    add("left join not right-distributive over join",
        L(J(A, B), Ainv), J(L(A, Ainv), L(B, Ainv)), d0);

    // claim 4, distributivity over minus
    add("union not left-distributive over minus",
        U(Ainv, M(A, Ainv)), M(U(Ainv, A), U(Ainv, Ainv)), d0);
    add("union not right-distributive over minus",
        U(M(A, Ainv), A), M(U(A, A), U(Ainv, A)), d0, false);
    add("join not left-distributive over minus",
        J(Ainv, M(Binv, A)), M(J(Ainv, Binv), J(Ainv, A)), d0);
    add("join not right-distributive over minus",
        J(M(A, B), Binv), M(J(A, Binv), J(B, Binv)), d0, false);
    add("left join not left-distributive over minus",
        L(Ainv, M(Binv, Binv)), M(L(Ainv, Binv), L(Ainv, Binv)), d0);
    add("left join not right-distributive over minus",
        L(M(Ainv, Binv), B), M(L(Ainv, B), L(Binv, B)), d0);

    // claim 4, distributivity over left join
    add("union not left-distributive over left join",
        U(Ainv, L(C, Binv)), L(U(Ainv, C), U(Ainv, Binv)), d0);
    add("union not right-distributive over left join",
        U(L(A, Ainv), B), L(U(A, B), U(Ainv, B)), d0, false);
    add("join not left-distributive over left join",
        J(Ainv, L(Binv, A)), L(J(Ainv, Binv), J(Ainv, A)), d0);
    add("join not right-distributive over left join",
        J(L(A, B), Binv), L(J(A, Binv), J(B, Binv)), d0, false);
    add("minus not left-distributive over left join",
        M(Ainv, L(Binv, A)), L(M(Ainv, Binv), M(Ainv, A)), d0);
    add("minus not right-distributive over left join",
        M(L(Ainv, Binv), B), L(M(Ainv, B), M(Binv, B)), d0);

    return out;
}

}  // namespace cex
