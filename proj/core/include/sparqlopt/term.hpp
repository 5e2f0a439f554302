#pragma once

#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sparqlopt {

/// Error raised by the text-level parsers (documents, queries, constraints).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class TermKind { Iri, Literal, Blank, Variable };

/// An RDF term or a query variable. The four kinds are disjoint and the
/// rendering is injective: IRIs print bare, literals double-quoted, blank
/// nodes with a "_:" prefix and variables with a "?" prefix.
class Term {
public:
    Term() : kind_(TermKind::Iri) {}

    static Term iri(std::string s) { return Term(TermKind::Iri, std::move(s)); }
    static Term literal(std::string s) { return Term(TermKind::Literal, std::move(s)); }
    static Term blank(std::string s) { return Term(TermKind::Blank, std::move(s)); }
    static Term variable(std::string s) { return Term(TermKind::Variable, std::move(s)); }

    TermKind kind() const { return kind_; }
    const std::string& text() const { return text_; }

    bool is_variable() const { return kind_ == TermKind::Variable; }
    bool is_literal() const { return kind_ == TermKind::Literal; }
    /// True for IRIs, literals and blank nodes (members of BIL).
    bool is_constant() const { return kind_ != TermKind::Variable; }

    std::string render() const;

    /// Parses a single term token ("?x", "_:b", "\"lit\"" or a bare IRI).
    static Term parse(std::string_view token, int line = 0);

    auto operator<=>(const Term&) const = default;

private:
    Term(TermKind kind, std::string text) : kind_(kind), text_(std::move(text)) {}

    TermKind kind_;
    std::string text_;
};

/// An RDF triple: subject in BI, predicate in I, object in BIL.
struct Triple {
    Term subject;
    Term predicate;
    Term object;

    Triple() = default;
    /// Throws ParseError if a slot violates the kind constraints.
    Triple(Term s, Term p, Term o, int line = 0);

    std::string render() const;
    auto operator<=>(const Triple&) const = default;
};

/// An RDF database: a finite set of triples.
using Document = std::set<Triple>;

}  // namespace sparqlopt
