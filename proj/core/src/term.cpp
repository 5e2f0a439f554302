#include "sparqlopt/term.hpp"

namespace sparqlopt {

std::string Term::render() const {
    switch (kind_) {
        case TermKind::Iri: return text_;
        case TermKind::Literal: return "\"" + text_ + "\"";
        case TermKind::Blank: return "_:" + text_;
        case TermKind::Variable: return "?" + text_;
    }
    return text_;
}

Term Term::parse(std::string_view token, int line) {
    if (token.empty())
        throw ParseError("empty term", line);
    if (token.front() == '?') {
        if (token.size() == 1)
            throw ParseError("empty variable name", line);
        return variable(std::string(token.substr(1)));
    }
    if (token.size() >= 2 && token.substr(0, 2) == "_:") {
        if (token.size() == 2)
            throw ParseError("empty blank node label", line);
        return blank(std::string(token.substr(2)));
    }
    if (token.front() == '"' || token.front() == '\'') {
        char quote = token.front();
        if (token.size() < 2 || token.back() != quote)
            throw ParseError("unterminated literal " + std::string(token), line);
        return literal(std::string(token.substr(1, token.size() - 2)));
    }
    return iri(std::string(token));
}

Triple::Triple(Term s, Term p, Term o, int line)
    : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)) {
    auto bad = [&](const char* slot, const char* expect) {
        throw ParseError(std::string(slot) + " of triple (" + subject.render() + ", " +
                             predicate.render() + ", " + object.render() + ") must be " + expect,
                         line);
    };
    if (subject.is_variable() || predicate.is_variable() || object.is_variable())
        bad("slot", "a constant (variables occur only in patterns)");
    if (subject.is_literal())
        bad("subject", "an IRI or blank node");
    if (predicate.kind() != TermKind::Iri)
        bad("predicate", "an IRI");
}

std::string Triple::render() const {
    return "(" + subject.render() + ", " + predicate.render() + ", " + object.render() + ")";
}

}  // namespace sparqlopt
