#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sparqlopt/ast.hpp"
#include "sparqlopt/term.hpp"

namespace sparqlopt {

/// A solution mapping: a finite partial function from variables to RDF terms.
class Mapping {
public:
    Mapping() = default;
    Mapping(std::initializer_list<std::pair<std::string, Term>> init);

    bool bound(const std::string& var) const { return bindings_.count(var) != 0; }
    const Term* get(const std::string& var) const;
    void bind(const std::string& var, Term value);

    size_t size() const { return bindings_.size(); }
    bool empty() const { return bindings_.empty(); }
    std::set<std::string> domain() const;
    const std::map<std::string, Term>& bindings() const { return bindings_; }

    /// Restriction of the mapping to the variables in S.
    Mapping restrict(const std::set<std::string>& s) const;

    /// Renders as `{?a -> 1, ?b -> 0}` with variables sorted.
    std::string render() const;
    static Mapping parse(std::string_view text);

    auto operator<=>(const Mapping&) const = default;

private:
    std::map<std::string, Term> bindings_;
};

/// mu1 ~ mu2: the mappings agree on every shared variable.
bool compatible(const Mapping& a, const Mapping& b);

/// Union of two compatible mappings.
Mapping merge(const Mapping& a, const Mapping& b);

using MappingSet = std::set<Mapping>;

std::string render(const MappingSet& set);

// The six algebra operations over mapping sets.
MappingSet join(const MappingSet& l, const MappingSet& r);
MappingSet set_union(const MappingSet& l, const MappingSet& r);
MappingSet minus(const MappingSet& l, const MappingSet& r);
MappingSet left_outer_join(const MappingSet& l, const MappingSet& r);
MappingSet project(const std::set<std::string>& s, const MappingSet& omega);
MappingSet select(const FilterCondition& cond, const MappingSet& omega);

/// Two-valued filter satisfaction: equality checks fail on unbound
/// variables, negation then flips the failure.
bool satisfies(const Mapping& mu, const FilterCondition& cond);

struct AlgebraExpr;
using AlgPtr = std::shared_ptr<const AlgebraExpr>;

/// A SPARQL algebra expression. Project may occur at any position, not just
/// top-level. Empty is the canonical empty expression: it evaluates to the
/// empty mapping set on every document.
struct AlgebraExpr {
    enum class Op { Leaf, Join, Union, Minus, LeftJoin, Project, Select, Empty };

    Op op;
    TriplePattern pattern;          // Leaf
    AlgPtr left, right;             // binary ops; unary ops use left
    FilterPtr cond;                 // Select
    std::set<std::string> proj;     // Project

    static AlgPtr leaf(TriplePattern t);
    static AlgPtr join(AlgPtr l, AlgPtr r);
    static AlgPtr set_union(AlgPtr l, AlgPtr r);
    static AlgPtr minus(AlgPtr l, AlgPtr r);
    static AlgPtr left_join(AlgPtr l, AlgPtr r);
    static AlgPtr project(std::set<std::string> s, AlgPtr child);
    static AlgPtr select(FilterPtr cond, AlgPtr child);
    static AlgPtr empty();

    std::string render() const;
};

bool equal(const AlgPtr& a, const AlgPtr& b);

std::set<std::string> vars(const AlgebraExpr& a);

/// Def-5 recursion: the variables inevitably bound in every solution.
std::set<std::string> safe_vars(const AlgebraExpr& a);

/// True if the expression lies in the union- and projection-free
/// sub-language (joins, minus, left joins and selections over leaves).
bool is_union_projection_free(const AlgebraExpr& a);

/// Structural translation of Def 4: And -> join, Opt -> left join,
/// Union -> union, Filter -> select, Select -> project.
AlgPtr translate(const SparqlExpr& e);
AlgPtr translate(const SparqlQuery& q);

MappingSet evaluate(const AlgebraExpr& a, const Document& d);
MappingSet evaluate(const SparqlExpr& e, const Document& d);
MappingSet evaluate(const SparqlQuery& q, const Document& d);

/// The Evaluation decision problem: is mu in the result of q on d?
bool membership(const Mapping& mu, const Document& d, const SparqlExpr& e);
bool membership(const Mapping& mu, const Document& d, const SparqlQuery& q);

}  // namespace sparqlopt
