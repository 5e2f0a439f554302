#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparqlopt/ast.hpp"
#include "sparqlopt/relational.hpp"

namespace sparqlopt {

/// Translation outcomes carry an explicit undefined state; the reason names
/// the offending atom or variable.
struct CqTranslation {
    bool defined = false;
    CQ cq;
    std::string reason;
};

struct QueryTranslation {
    bool defined = false;
    SparqlQuery query;
    std::string reason;
};

/// The patterns of an And-only expression, left to right; nullopt when the
/// expression uses other operators.
std::optional<std::vector<TriplePattern>> bgp_patterns(const SparqlExpr& e);

Arg term_to_arg(const Term& t);
/// Inverse of term_to_arg; fails on labeled nulls.
std::optional<Term> arg_to_term(const Arg& a);

/// C1: Select_S(t1 And ... And tn) to ans(S) <- T(t1), ..., T(tn).
CqTranslation c1_translate(const SparqlQuery& q);

/// C1 inverse: defined when every atom is a ternary T-atom whose slots obey
/// the triple pattern kinds.
QueryTranslation c1_inverse(const CQ& q);

/// C2: one binary atom p(s, o) per pattern; undefined when some predicate is
/// a variable.
CqTranslation c2_translate(const SparqlQuery& q);

/// C2 inverse over binary atoms; relation names are re-embedded as predicate
/// IRIs.
QueryTranslation c2_inverse(const CQ& q);

/// The per-constraint image under the C2 relabeling h(T(a1,a2,a3)) =
/// a2(a1,a3); atoms with a variable predicate are erased. Returns the empty
/// set when any image fails the TGD/EGD well-formedness conditions.
Sigma sigma_prime(const Sigma& sigma);

}  // namespace sparqlopt
