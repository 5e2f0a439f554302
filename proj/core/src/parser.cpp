#include "sparqlopt/parser.hpp"

#include <cctype>
#include <vector>

namespace sparqlopt {

namespace {

enum class Tok {
    LParen, RParen, Comma, Eq, Bang, AndAnd, OrOr,
    Select, Where, And, Union, Opt, Filter, Bnd,
    TermToken, End
};

struct Token {
    Tok kind;
    std::string text;  // raw term token for TermToken
    int line;
};

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    size_t pos = 0;
    int line = 1;
    while (pos < src.size()) {
        char c = src[pos];
        if (c == '\n') {
            ++line;
            ++pos;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
            continue;
        }
        if (c == '#') {
            while (pos < src.size() && src[pos] != '\n') ++pos;
            continue;
        }
        switch (c) {
            case '(': out.push_back({Tok::LParen, "", line}); ++pos; continue;
            case ')': out.push_back({Tok::RParen, "", line}); ++pos; continue;
            case ',': out.push_back({Tok::Comma, "", line}); ++pos; continue;
            case '=': out.push_back({Tok::Eq, "", line}); ++pos; continue;
            case '!': out.push_back({Tok::Bang, "", line}); ++pos; continue;
            case '&':
                if (pos + 1 < src.size() && src[pos + 1] == '&') {
                    out.push_back({Tok::AndAnd, "", line});
                    pos += 2;
                    continue;
                }
                throw ParseError("stray '&'", line);
            case '|':
                if (pos + 1 < src.size() && src[pos + 1] == '|') {
                    out.push_back({Tok::OrOr, "", line});
                    pos += 2;
                    continue;
                }
                throw ParseError("stray '|'", line);
            default: break;
        }
        if (c == '"' || c == '\'') {
            size_t end = src.find(c, pos + 1);
            if (end == std::string_view::npos) throw ParseError("unterminated literal", line);
            out.push_back({Tok::TermToken, std::string(src.substr(pos, end - pos + 1)), line});
            pos = end + 1;
            continue;
        }
        size_t start = pos;
        while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) &&
               std::string_view("(),=!&|\"'#").find(src[pos]) == std::string_view::npos)
            ++pos;
        std::string word(src.substr(start, pos - start));
        if (word == "SELECT") out.push_back({Tok::Select, "", line});
        else if (word == "WHERE") out.push_back({Tok::Where, "", line});
        else if (word == "AND") out.push_back({Tok::And, "", line});
        else if (word == "UNION") out.push_back({Tok::Union, "", line});
        else if (word == "OPT") out.push_back({Tok::Opt, "", line});
        else if (word == "FILTER") out.push_back({Tok::Filter, "", line});
        else if (word == "bnd") out.push_back({Tok::Bnd, "", line});
        else out.push_back({Tok::TermToken, word, line});
    }
    out.push_back({Tok::End, "", line});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    ParsedQuery parse_top() {
        ParsedQuery out;
        if (peek().kind == Tok::Select) {
            take();
            std::set<std::string> proj;
            while (peek().kind == Tok::TermToken) {
                Term t = Term::parse(peek().text, peek().line);
                if (!t.is_variable())
                    throw ParseError("SELECT expects variables, got " + peek().text, peek().line);
                proj.insert(t.text());
                take();
            }
            if (proj.empty()) throw ParseError("SELECT needs at least one variable", peek().line);
            expect(Tok::Where, "WHERE");
            out.projection = std::move(proj);
        }
        out.body = parse_union();
        if (peek().kind != Tok::End)
            throw ParseError("trailing input after expression", peek().line);
        return out;
    }

    FilterPtr parse_cond_top() {
        FilterPtr c = parse_or();
        if (peek().kind != Tok::End)
            throw ParseError("trailing input after condition", peek().line);
        return c;
    }

private:
    const Token& peek(size_t ahead = 0) const {
        size_t i = idx_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    Token take() { return toks_[idx_ < toks_.size() - 1 ? idx_++ : idx_]; }

    void expect(Tok k, const char* what) {
        if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().line);
        take();
    }

    ExprPtr parse_union() {
        ExprPtr e = parse_opt();
        while (peek().kind == Tok::Union) {
            take();
            e = SparqlExpr::make_union(e, parse_opt());
        }
        return e;
    }

    ExprPtr parse_opt() {
        ExprPtr e = parse_and();
        while (peek().kind == Tok::Opt) {
            take();
            e = SparqlExpr::make_opt(e, parse_and());
        }
        return e;
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_filter();
        while (peek().kind == Tok::And) {
            take();
            e = SparqlExpr::make_and(e, parse_filter());
        }
        return e;
    }

    ExprPtr parse_filter() {
        ExprPtr e = parse_primary();
        while (peek().kind == Tok::Filter) {
            int line = take().line;
            e = SparqlExpr::make_filter(e, parse_or(), line);
        }
        return e;
    }

    ExprPtr parse_primary() {
        if (peek().kind != Tok::LParen)
            throw ParseError("expected ( to start a pattern or subexpression", peek().line);
        // A '(' opens a triple pattern iff a term token comes right after;
        // otherwise it parenthesizes an expression.
        if (peek(1).kind == Tok::TermToken) return parse_pattern();
        take();
        ExprPtr e = parse_union();
        expect(Tok::RParen, ")");
        return e;
    }

    ExprPtr parse_pattern() {
        int line = peek().line;
        expect(Tok::LParen, "(");
        Term s = take_term();
        expect(Tok::Comma, ",");
        Term p = take_term();
        expect(Tok::Comma, ",");
        Term o = take_term();
        expect(Tok::RParen, ")");
        return SparqlExpr::make_pattern(TriplePattern(s, p, o, line));
    }

    Term take_term() {
        if (peek().kind != Tok::TermToken) throw ParseError("expected a term", peek().line);
        Token t = take();
        return Term::parse(t.text, t.line);
    }

    FilterPtr parse_or() {
        FilterPtr c = parse_cond_and();
        while (peek().kind == Tok::OrOr) {
            take();
            c = FilterCondition::disjunction(c, parse_cond_and());
        }
        return c;
    }

    FilterPtr parse_cond_and() {
        FilterPtr c = parse_cond_unary();
        while (peek().kind == Tok::AndAnd) {
            take();
            c = FilterCondition::conjunction(c, parse_cond_unary());
        }
        return c;
    }

    FilterPtr parse_cond_unary() {
        if (peek().kind == Tok::Bang) {
            take();
            return FilterCondition::negation(parse_cond_unary());
        }
        if (peek().kind == Tok::Bnd) {
            take();
            expect(Tok::LParen, "(");
            Term v = take_term();
            if (!v.is_variable()) throw ParseError("bnd expects a variable", peek().line);
            expect(Tok::RParen, ")");
            return FilterCondition::bound(v.text());
        }
        if (peek().kind == Tok::LParen) {
            take();
            FilterPtr c = parse_or();
            expect(Tok::RParen, ")");
            return c;
        }
        Term v = take_term();
        if (!v.is_variable())
            throw ParseError("filter atom must start with a variable", peek().line);
        expect(Tok::Eq, "=");
        Term rhs = take_term();
        if (rhs.is_variable()) return FilterCondition::eq_var(v.text(), rhs.text());
        return FilterCondition::eq_const(v.text(), rhs);
    }

    std::vector<Token> toks_;
    size_t idx_ = 0;
};

}  // namespace

ParsedQuery parse(std::string_view text) { return Parser(text).parse_top(); }

ExprPtr parse_expr(std::string_view text) {
    ParsedQuery p = parse(text);
    if (p.is_query()) throw ParseError("expected a bare expression, got a SELECT query");
    return p.body;
}

SparqlQuery parse_query(std::string_view text) {
    ParsedQuery p = parse(text);
    if (!p.is_query()) throw ParseError("expected a SELECT query");
    return p.query();
}

FilterPtr parse_condition(std::string_view text) { return Parser(text).parse_cond_top(); }

}  // namespace sparqlopt
