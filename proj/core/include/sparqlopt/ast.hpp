#pragma once

#include <memory>
#include <set>
#include <string>

#include "sparqlopt/term.hpp"

namespace sparqlopt {

struct FilterCondition;
using FilterPtr = std::shared_ptr<const FilterCondition>;

/// Filter conditions: the three atomic checks bnd(?x), ?x=c, ?x=?y
/// combined with !, && and ||.
struct FilterCondition {
    enum class Kind { Bound, EqConst, EqVar, Not, And, Or };

    Kind kind;
    std::string var;    // Bound, EqConst, EqVar (left)
    std::string var2;   // EqVar (right)
    Term constant;      // EqConst
    FilterPtr lhs, rhs; // Not (lhs only), And, Or

    static FilterPtr bound(std::string v);
    static FilterPtr eq_const(std::string v, Term c);
    static FilterPtr eq_var(std::string v, std::string w);
    static FilterPtr negation(FilterPtr c);
    static FilterPtr conjunction(FilterPtr l, FilterPtr r);
    static FilterPtr disjunction(FilterPtr l, FilterPtr r);

    std::string render() const;
};

bool equal(const FilterPtr& a, const FilterPtr& b);
std::set<std::string> vars(const FilterCondition& c);

/// A triple pattern: subject in BIV, predicate in IV, object in BILV.
struct TriplePattern {
    Term subject, predicate, object;

    TriplePattern() = default;
    /// Throws ParseError on a slot kind violation.
    TriplePattern(Term s, Term p, Term o, int line = 0);

    std::string render() const;
    auto operator<=>(const TriplePattern&) const = default;
};

struct SparqlExpr;
using ExprPtr = std::shared_ptr<const SparqlExpr>;

/// A SPARQL expression over And, Union, Opt and Filter. Trees are immutable
/// and shared; binary operators stay binary.
struct SparqlExpr {
    enum class Op { Pattern, And, Union, Opt, Filter };

    Op op;
    TriplePattern pattern;  // Pattern
    ExprPtr left, right;    // And/Union/Opt; Filter uses left only
    FilterPtr cond;         // Filter

    static ExprPtr make_pattern(TriplePattern t);
    static ExprPtr make_and(ExprPtr l, ExprPtr r);
    static ExprPtr make_union(ExprPtr l, ExprPtr r);
    static ExprPtr make_opt(ExprPtr l, ExprPtr r);
    /// Enforces the safe-filter restriction vars(cond) subset of vars(child);
    /// throws ParseError naming the first offending variable.
    static ExprPtr make_filter(ExprPtr child, FilterPtr cond, int line = 0);

    std::string render() const;
};

bool equal(const ExprPtr& a, const ExprPtr& b);

/// A SPARQL query Select_S(Q). S need not be a subset of vars(Q).
struct SparqlQuery {
    std::set<std::string> projection;
    ExprPtr body;

    std::string render() const;
};

bool equal(const SparqlQuery& a, const SparqlQuery& b);

std::set<std::string> vars(const TriplePattern& t);
std::set<std::string> vars(const SparqlExpr& e);
std::set<std::string> vars(const SparqlQuery& q);

/// Deepest nesting of Opt operators.
int opt_rank(const SparqlExpr& e);

/// The minimal operator set used by an expression, as a fragment descriptor.
struct Fragment {
    bool uses_and = false, uses_filter = false, uses_opt = false, uses_union = false;
    bool top_level_select = false;

    /// Class name in the paper's shorthand, e.g. "AO", "E", "A+", "t".
    std::string name() const;
    bool opt_free() const { return !uses_opt; }
};

Fragment fragment_of(const SparqlExpr& e);
Fragment fragment_of(const SparqlQuery& q);

/// True if the expression is a basic graph pattern (And-combined triple
/// patterns only).
bool is_bgp(const SparqlExpr& e);

}  // namespace sparqlopt
