#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sparqlopt/algebra.hpp"

namespace sparqlopt {

struct BoolExpr;
using BoolPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
    enum class Kind { Var, Not, And, Or };

    Kind kind;
    std::string var;
    BoolPtr lhs, rhs;

    static BoolPtr variable(std::string v);
    static BoolPtr negation(BoolPtr c);
    static BoolPtr conjunction(BoolPtr l, BoolPtr r);
    static BoolPtr disjunction(BoolPtr l, BoolPtr r);

    std::string render() const;
};

enum class Quant { ForAll, Exists };

/// A quantified boolean formula with a per-variable prefix and a
/// quantifier-free matrix.
struct Qbf {
    std::vector<std::pair<Quant, std::string>> prefix;
    BoolPtr matrix;

    std::set<std::string> prefix_vars() const;
    std::set<std::string> matrix_vars() const;
    bool closed() const;
    /// forall x1 exists y1 ... forall xm exists ym with m >= 1.
    bool alternating_forall_exists() const;
    /// Clauses of a CNF matrix as (positive, variable) literals; nullopt when
    /// the matrix is not in CNF.
    std::optional<std::vector<std::vector<std::pair<bool, std::string>>>> cnf_clauses() const;

    std::string render() const;
};

/// Syntax: `forall x1 exists y1 : (x1 | !y1) & (!x1 | y1)`.
Qbf parse_qbf(std::string_view text);

/// A 3-CNF formula over variables 1..num_vars; literals are signed indices.
struct Cnf3 {
    int num_vars = 0;
    std::vector<std::array<int, 3>> clauses;
};

/// DIMACS-style input: `p cnf <vars> <clauses>` then three literals and a 0
/// per line.
Cnf3 parse_dimacs3(std::string_view text);

struct QbfEncoding {
    Document doc;
    ExprPtr expr;
    Mapping target;  // {?B0 -> 1}
};

/// And/Filter/Opt encoding; the matrix may be any quantifier-free formula.
QbfEncoding encode_qbf_afo(const Qbf& phi);
/// And/Opt encoding; requires a CNF matrix.
QbfEncoding encode_qbf_ao(const Qbf& phi);
/// Opt-only encoding; requires a CNF matrix. The single remaining And block
/// is eliminated with the and-rewriting construction below.
QbfEncoding encode_qbf_o(const Qbf& phi);

struct SatEncoding {
    Document doc;
    SparqlQuery query;
    Mapping target;  // {?A -> 1}
};

SatEncoding encode_3sat(const Cnf3& psi);

/// Exhaustive evaluation of the quantifier tree; at most 16 prefix
/// variables, closed formulas only.
bool brute_force_qbf(const Qbf& phi);
bool brute_force_sat(const Cnf3& psi);

/// The And-elimination construction over the fixed 4-triple document: both
/// sides evaluate to the same mapping set, and the guarded expression
/// extends every solution of q by the fresh variables bound to 1.
struct AndRewriting {
    Document doc;     // {(a,true,1), (a,false,0), (a,tv,0), (a,tv,1)}
    ExprPtr guarded;  // Q' = ((q Opt V2) Opt V3) ... Opt Vn
    ExprPtr lhs;      // Q' Opt (q1 And q2 And ... And qn)
    ExprPtr rhs;      // Q' Opt ((Q'' Opt notV2) ... Opt notVn)
};

/// `fresh` must contain qs.size() - 1 variable names unused in q and qs.
AndRewriting and_rewriting(const ExprPtr& q, const std::vector<ExprPtr>& qs,
                           const std::vector<std::string>& fresh);

}  // namespace sparqlopt
