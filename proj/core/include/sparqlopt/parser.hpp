#pragma once

#include <optional>
#include <string_view>

#include "sparqlopt/ast.hpp"

namespace sparqlopt {

/// Result of parsing a query file: either a full SELECT query or a bare
/// expression.
struct ParsedQuery {
    std::optional<std::set<std::string>> projection;
    ExprPtr body;

    bool is_query() const { return projection.has_value(); }
    SparqlQuery query() const { return SparqlQuery{*projection, body}; }
};

/// Parses `SELECT ?x ... WHERE expr` or a bare expression. Operator
/// precedence: FILTER binds tightest, then AND, OPT, UNION; all binary
/// operators associate to the left; parentheses override. Unsafe filters
/// are rejected here.
ParsedQuery parse(std::string_view text);

ExprPtr parse_expr(std::string_view text);
SparqlQuery parse_query(std::string_view text);
FilterPtr parse_condition(std::string_view text);

}  // namespace sparqlopt
