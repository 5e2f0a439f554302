#include "sparqlopt/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sparqlopt {

BoolPtr BoolExpr::variable(std::string v) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Kind::Var;
    e->var = std::move(v);
    return e;
}

BoolPtr BoolExpr::negation(BoolPtr c) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Kind::Not;
    e->lhs = std::move(c);
    return e;
}

BoolPtr BoolExpr::conjunction(BoolPtr l, BoolPtr r) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Kind::And;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

BoolPtr BoolExpr::disjunction(BoolPtr l, BoolPtr r) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Kind::Or;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

std::string BoolExpr::render() const {
    switch (kind) {
        case Kind::Var: return var;
        case Kind::Not: return "!" + lhs->render();
        case Kind::And: return "(" + lhs->render() + " & " + rhs->render() + ")";
        case Kind::Or: return "(" + lhs->render() + " | " + rhs->render() + ")";
    }
    return {};
}

std::set<std::string> Qbf::prefix_vars() const {
    std::set<std::string> out;
    for (auto& [q, v] : prefix) out.insert(v);
    return out;
}

namespace {

void collect_vars(const BoolPtr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->kind == BoolExpr::Kind::Var) {
        out.insert(e->var);
        return;
    }
    collect_vars(e->lhs, out);
    collect_vars(e->rhs, out);
}

bool eval_bool(const BoolPtr& e, const std::map<std::string, bool>& env) {
    switch (e->kind) {
        case BoolExpr::Kind::Var: return env.at(e->var);
        case BoolExpr::Kind::Not: return !eval_bool(e->lhs, env);
        case BoolExpr::Kind::And: return eval_bool(e->lhs, env) && eval_bool(e->rhs, env);
        case BoolExpr::Kind::Or: return eval_bool(e->lhs, env) || eval_bool(e->rhs, env);
    }
    return false;
}

}  // namespace

std::set<std::string> Qbf::matrix_vars() const {
    std::set<std::string> out;
    collect_vars(matrix, out);
    return out;
}

bool Qbf::closed() const {
    auto pv = prefix_vars();
    for (const std::string& v : matrix_vars())
        if (!pv.count(v)) return false;
    return true;
}

bool Qbf::alternating_forall_exists() const {
    if (prefix.empty() || prefix.size() % 2 != 0) return false;
    if (prefix_vars().size() != prefix.size()) return false;
    for (size_t i = 0; i < prefix.size(); ++i) {
        Quant expect = i % 2 == 0 ? Quant::ForAll : Quant::Exists;
        if (prefix[i].first != expect) return false;
    }
    return true;
}

namespace {

bool literal_of(const BoolPtr& e, std::pair<bool, std::string>& out) {
    if (e->kind == BoolExpr::Kind::Var) {
        out = {true, e->var};
        return true;
    }
    if (e->kind == BoolExpr::Kind::Not && e->lhs->kind == BoolExpr::Kind::Var) {
        out = {false, e->lhs->var};
        return true;
    }
    return false;
}

bool clause_of(const BoolPtr& e, std::vector<std::pair<bool, std::string>>& clause) {
    std::pair<bool, std::string> lit;
    if (literal_of(e, lit)) {
        clause.push_back(lit);
        return true;
    }
    if (e->kind == BoolExpr::Kind::Or)
        return clause_of(e->lhs, clause) && clause_of(e->rhs, clause);
    return false;
}

bool cnf_of(const BoolPtr& e, std::vector<std::vector<std::pair<bool, std::string>>>& out) {
    if (e->kind == BoolExpr::Kind::And)
        return cnf_of(e->lhs, out) && cnf_of(e->rhs, out);
    std::vector<std::pair<bool, std::string>> clause;
    if (!clause_of(e, clause)) return false;
    out.push_back(std::move(clause));
    return true;
}

}  // namespace

std::optional<std::vector<std::vector<std::pair<bool, std::string>>>> Qbf::cnf_clauses() const {
    std::vector<std::vector<std::pair<bool, std::string>>> out;
    if (!matrix || !cnf_of(matrix, out)) return std::nullopt;
    return out;
}

std::string Qbf::render() const {
    std::string s;
    for (auto& [q, v] : prefix) s += (q == Quant::ForAll ? "forall " : "exists ") + v + " ";
    return s + ": " + (matrix ? matrix->render() : "");
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct QbfParser {
    std::string_view src;
    size_t pos = 0;

    void ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    std::string word() {
        ws();
        size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        return std::string(src.substr(start, pos - start));
    }

    char peek() {
        ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    BoolPtr parse_or() {
        BoolPtr e = parse_and();
        while (peek() == '|') {
            ++pos;
            e = BoolExpr::disjunction(e, parse_and());
        }
        return e;
    }

    BoolPtr parse_and() {
        BoolPtr e = parse_unary();
        while (peek() == '&') {
            ++pos;
            e = BoolExpr::conjunction(e, parse_unary());
        }
        return e;
    }

    BoolPtr parse_unary() {
        char c = peek();
        if (c == '!') {
            ++pos;
            return BoolExpr::negation(parse_unary());
        }
        if (c == '(') {
            ++pos;
            BoolPtr e = parse_or();
            if (peek() != ')') throw ParseError("expected ) in boolean formula");
            ++pos;
            return e;
        }
        std::string v = word();
        if (v.empty()) throw ParseError("expected a boolean variable");
        return BoolExpr::variable(v);
    }
};

}  // namespace

Qbf parse_qbf(std::string_view text) {
    QbfParser p{text};
    Qbf out;
    while (true) {
        size_t save = p.pos;
        std::string w = p.word();
        if (w == "forall" || w == "exists") {
            std::string v = p.word();
            if (v.empty()) throw ParseError("expected a variable after " + w);
            out.prefix.emplace_back(w == "forall" ? Quant::ForAll : Quant::Exists, v);
        } else {
            p.pos = save;
            break;
        }
    }
    if (p.peek() != ':') throw ParseError("expected : between prefix and matrix");
    ++p.pos;
    out.matrix = p.parse_or();
    p.ws();
    if (p.pos != text.size()) throw ParseError("trailing input after QBF matrix");
    return out;
}

Cnf3 parse_dimacs3(std::string_view text) {
    Cnf3 out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "c" || first[0] == '#') continue;
        if (first == "p") {
            std::string kind;
            int nc;
            if (!(ls >> kind >> out.num_vars >> nc) || kind != "cnf")
                throw ParseError("bad DIMACS header: " + line);
            continue;
        }
        std::array<int, 3> clause{};
        size_t count = 0;
        int lit = std::stoi(first);
        while (true) {
            if (lit == 0) break;
            if (count >= 3) throw ParseError("clause with more than three literals: " + line);
            clause[count++] = lit;
            if (!(ls >> lit)) throw ParseError("clause not terminated by 0: " + line);
        }
        if (count != 3) throw ParseError("clause must contain exactly three literals: " + line);
        for (int l : clause) {
            int v = std::abs(l);
            if (v < 1 || (out.num_vars && v > out.num_vars))
                throw ParseError("literal out of range: " + line);
            out.num_vars = std::max(out.num_vars, v);
        }
        out.clauses.push_back(clause);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracles
// ---------------------------------------------------------------------------

namespace {

bool qbf_rec(const Qbf& phi, size_t i, std::map<std::string, bool>& env) {
    if (i == phi.prefix.size()) return eval_bool(phi.matrix, env);
    auto [q, v] = phi.prefix[i];
    env[v] = false;
    bool f = qbf_rec(phi, i + 1, env);
    env[v] = true;
    bool t = qbf_rec(phi, i + 1, env);
    env.erase(v);
    return q == Quant::ForAll ? (f && t) : (f || t);
}

}  // namespace

bool brute_force_qbf(const Qbf& phi) {
    if (phi.prefix.size() > 16) throw std::invalid_argument("too many quantified variables");
    if (phi.prefix_vars().size() != phi.prefix.size())
        throw std::invalid_argument("duplicate variable in the prefix");
    if (!phi.closed()) throw std::invalid_argument("free variable in the matrix");
    std::map<std::string, bool> env;
    return qbf_rec(phi, 0, env);
}

bool brute_force_sat(const Cnf3& psi) {
    if (psi.num_vars > 16) throw std::invalid_argument("too many variables");
    for (unsigned long mask = 0; mask < (1ul << psi.num_vars); ++mask) {
        bool all = true;
        for (const auto& clause : psi.clauses) {
            bool any = false;
            for (int lit : clause) {
                bool val = (mask >> (std::abs(lit) - 1)) & 1;
                if ((lit > 0) == val) {
                    any = true;
                    break;
                }
            }
            if (!any) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return psi.clauses.empty();
}

// ---------------------------------------------------------------------------
// Encodings
// ---------------------------------------------------------------------------

namespace {

Term iri(const std::string& s) { return Term::iri(s); }

ExprPtr pat(const std::string& s, const std::string& p, const Term& o) {
    return SparqlExpr::make_pattern(TriplePattern(iri(s), iri(p), o));
}

ExprPtr pat_var(const std::string& s, const std::string& p, const std::string& v) {
    return pat(s, p, Term::variable(v));
}

ExprPtr and_chain(const std::vector<ExprPtr>& es) {
    ExprPtr out;
    for (const ExprPtr& e : es) out = out ? SparqlExpr::make_and(out, e) : e;
    return out;
}

ExprPtr opt_chain(const std::vector<ExprPtr>& es) {
    ExprPtr out;
    for (const ExprPtr& e : es) out = out ? SparqlExpr::make_opt(out, e) : e;
    return out;
}

Document base_document() {
    Document d;
    d.insert(Triple(iri("a"), iri("tv"), iri("0")));
    d.insert(Triple(iri("a"), iri("tv"), iri("1")));
    d.insert(Triple(iri("a"), iri("false"), iri("0")));
    d.insert(Triple(iri("a"), iri("true"), iri("1")));
    return d;
}

// SPARQL variable for a QBF variable: capitalized first letter, paper style
// (x1 becomes ?X1).
std::string sparql_var(const std::string& qbf_var) {
    std::string out = qbf_var;
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

struct Shell {
    std::vector<std::string> xs, ys;  // SPARQL variable names per block
    size_t m = 0;
};

Shell shell_of(const Qbf& phi) {
    if (!phi.alternating_forall_exists())
        throw std::invalid_argument(
            "the encoding needs a prefix of the shape forall x1 exists y1 ... forall xm exists ym");
    if (!phi.closed()) throw std::invalid_argument("free variable in the matrix");
    if (!phi.matrix) throw std::invalid_argument("empty matrix");
    Shell s;
    s.m = phi.prefix.size() / 2;
    for (size_t i = 0; i < phi.prefix.size(); i += 2) {
        s.xs.push_back(sparql_var(phi.prefix[i].second));
        s.ys.push_back(sparql_var(phi.prefix[i + 1].second));
    }
    std::set<std::string> seen;
    for (const std::string& v : s.xs) seen.insert(v);
    for (const std::string& v : s.ys) seen.insert(v);
    if (seen.size() != 2 * s.m)
        throw std::invalid_argument("variable names collide after capitalization");
    for (size_t i = 0; i <= s.m; ++i) {
        if (seen.count("A" + std::to_string(i)) || seen.count("B" + std::to_string(i)))
            throw std::invalid_argument("variable name collides with a reserved ?A_i/?B_i name");
    }
    return s;
}

// P_i and Q_i of the quantifier shell; `use_and` selects the And- or
// Opt-based chain.
ExprPtr shell_p(const Shell& s, size_t i, bool use_and) {
    std::vector<ExprPtr> parts;
    for (size_t j = 1; j <= i; ++j) parts.push_back(pat_var("a", "tv", s.xs[j - 1]));
    for (size_t j = 1; j + 1 <= i; ++j) parts.push_back(pat_var("a", "tv", s.ys[j - 1]));
    parts.push_back(pat_var("a", "false", "A" + std::to_string(i - 1)));
    parts.push_back(pat_var("a", "true", "A" + std::to_string(i)));
    return use_and ? and_chain(parts) : opt_chain(parts);
}

ExprPtr shell_q(const Shell& s, size_t i, bool use_and) {
    std::vector<ExprPtr> parts;
    for (size_t j = 1; j <= i; ++j) parts.push_back(pat_var("a", "tv", s.xs[j - 1]));
    for (size_t j = 1; j <= i; ++j) parts.push_back(pat_var("a", "tv", s.ys[j - 1]));
    parts.push_back(pat_var("a", "false", "B" + std::to_string(i - 1)));
    parts.push_back(pat_var("a", "true", "B" + std::to_string(i)));
    return use_and ? and_chain(parts) : opt_chain(parts);
}

// Wraps the innermost expression into the quantifier shell:
// (a,true,?B0) Opt (P1 Opt (Q1 Opt (P2 Opt (... inner ...)))).
ExprPtr shell_wrap(const Shell& s, bool use_and, const ExprPtr& inner_m) {
    ExprPtr cur = inner_m;  // the block for i = m
    for (size_t i = s.m; i-- > 1;) {
        ExprPtr qi = shell_q(s, i, use_and);
        ExprPtr pi = shell_p(s, i, use_and);
        cur = SparqlExpr::make_opt(pi, SparqlExpr::make_opt(qi, cur));
    }
    return SparqlExpr::make_opt(pat_var("a", "true", "B0"), cur);
}

Mapping target_b0() { return Mapping{{"B0", iri("1")}}; }

FilterPtr matrix_condition(const BoolPtr& e) {
    switch (e->kind) {
        case BoolExpr::Kind::Var:
            return FilterCondition::eq_const(sparql_var(e->var), iri("1"));
        case BoolExpr::Kind::Not: return FilterCondition::negation(matrix_condition(e->lhs));
        case BoolExpr::Kind::And:
            return FilterCondition::conjunction(matrix_condition(e->lhs),
                                                matrix_condition(e->rhs));
        case BoolExpr::Kind::Or:
            return FilterCondition::disjunction(matrix_condition(e->lhs),
                                                matrix_condition(e->rhs));
    }
    return nullptr;
}

using CnfClauses = std::vector<std::vector<std::pair<bool, std::string>>>;

Document cnf_document(const Qbf& phi, const CnfClauses& clauses) {
    Document d = base_document();
    for (size_t i = 0; i < clauses.size(); ++i)
        for (const auto& [sign, v] : clauses[i])
            d.insert(Triple(iri("a"), iri("var" + std::to_string(i + 1)), iri(v)));
    for (const std::string& v : phi.matrix_vars()) d.insert(Triple(iri("a"), iri(v), iri(v)));
    return d;
}

// The per-clause cascade: (a,var_i,?var_i) Opt-extended once per literal.
ExprPtr clause_encoding(size_t clause_idx,
                        const std::vector<std::pair<bool, std::string>>& clause, bool use_and) {
    std::string cv = "var" + std::to_string(clause_idx + 1);
    ExprPtr cur = pat_var("a", cv, cv);
    for (const auto& [sign, v] : clause) {
        ExprPtr hit = pat_var("a", v, cv);
        ExprPtr mark = pat_var("a", sign ? "true" : "false", sparql_var(v));
        ExprPtr ext = use_and ? SparqlExpr::make_and(hit, mark) : SparqlExpr::make_opt(hit, mark);
        cur = SparqlExpr::make_opt(cur, ext);
    }
    return cur;
}

void check_cnf_reserved(const Qbf& phi, const CnfClauses& clauses, const Shell& s) {
    if (clauses.empty()) throw std::invalid_argument("matrix has no clauses");
    std::set<std::string> names;
    for (const std::string& v : s.xs) names.insert(v);
    for (const std::string& v : s.ys) names.insert(v);
    for (size_t i = 1; i <= clauses.size(); ++i)
        if (names.count("var" + std::to_string(i)))
            throw std::invalid_argument("variable name collides with a reserved ?var_i name");
    for (size_t i = 2; i <= clauses.size() + 1; ++i)
        if (names.count("V" + std::to_string(i)))
            throw std::invalid_argument("variable name collides with a reserved ?V_i name");
    (void)phi;
}

}  // namespace

QbfEncoding encode_qbf_afo(const Qbf& phi) {
    Shell s = shell_of(phi);
    QbfEncoding out;
    out.doc = base_document();
    std::vector<ExprPtr> tv_parts;
    for (const std::string& v : phi.matrix_vars()) tv_parts.push_back(pat_var("a", "tv", sparql_var(v)));
    if (tv_parts.empty()) throw std::invalid_argument("matrix uses no variables");
    ExprPtr p_psi = SparqlExpr::make_filter(and_chain(tv_parts), matrix_condition(phi.matrix));
    ExprPtr inner = SparqlExpr::make_opt(shell_p(s, s.m, true),
                                         SparqlExpr::make_and(shell_q(s, s.m, true), p_psi));
    out.expr = shell_wrap(s, true, inner);
    out.target = target_b0();
    return out;
}

QbfEncoding encode_qbf_ao(const Qbf& phi) {
    Shell s = shell_of(phi);
    auto clauses = phi.cnf_clauses();
    if (!clauses) throw std::invalid_argument("the And/Opt encoding needs a CNF matrix");
    check_cnf_reserved(phi, *clauses, s);
    QbfEncoding out;
    out.doc = cnf_document(phi, *clauses);
    std::vector<ExprPtr> clause_parts;
    for (size_t i = 0; i < clauses->size(); ++i)
        clause_parts.push_back(clause_encoding(i, (*clauses)[i], true));
    ExprPtr p_psi = and_chain(clause_parts);
    ExprPtr inner = SparqlExpr::make_opt(shell_p(s, s.m, true),
                                         SparqlExpr::make_and(shell_q(s, s.m, true), p_psi));
    out.expr = shell_wrap(s, true, inner);
    out.target = target_b0();
    return out;
}

AndRewriting and_rewriting(const ExprPtr& q, const std::vector<ExprPtr>& qs,
                           const std::vector<std::string>& fresh) {
    if (qs.size() < 2) throw std::invalid_argument("the rewriting needs at least two conjuncts");
    if (fresh.size() != qs.size() - 1)
        throw std::invalid_argument("need exactly one fresh variable per conjunct beyond the first");
    std::set<std::string> used = vars(*q);
    for (const ExprPtr& e : qs) {
        auto v = vars(*e);
        used.insert(v.begin(), v.end());
    }
    for (const std::string& f : fresh)
        if (used.count(f)) throw std::invalid_argument("?" + f + " is not fresh");

    AndRewriting out;
    out.doc = base_document();

    ExprPtr guarded = q;
    for (const std::string& f : fresh)
        guarded = SparqlExpr::make_opt(guarded, pat_var("a", "true", f));
    out.guarded = guarded;

    out.lhs = SparqlExpr::make_opt(guarded, and_chain(qs));

    ExprPtr qpp = qs[0];
    for (size_t i = 1; i < qs.size(); ++i) {
        ExprPtr vi = pat_var("a", "true", fresh[i - 1]);
        qpp = SparqlExpr::make_opt(qpp, SparqlExpr::make_opt(qs[i], vi));
    }
    ExprPtr rhs_inner = qpp;
    for (const std::string& f : fresh)
        rhs_inner = SparqlExpr::make_opt(rhs_inner, pat_var("a", "false", f));
    out.rhs = SparqlExpr::make_opt(guarded, rhs_inner);
    return out;
}

QbfEncoding encode_qbf_o(const Qbf& phi) {
    Shell s = shell_of(phi);
    auto clauses = phi.cnf_clauses();
    if (!clauses) throw std::invalid_argument("the Opt-only encoding needs a CNF matrix");
    check_cnf_reserved(phi, *clauses, s);
    QbfEncoding out;
    out.doc = cnf_document(phi, *clauses);

    std::vector<ExprPtr> qs;
    qs.push_back(shell_q(s, s.m, false));
    for (size_t i = 0; i < clauses->size(); ++i)
        qs.push_back(clause_encoding(i, (*clauses)[i], false));
    std::vector<std::string> fresh;
    for (size_t i = 2; i <= qs.size(); ++i) fresh.push_back("V" + std::to_string(i));

    AndRewriting rw = and_rewriting(shell_p(s, s.m, false), qs, fresh);
    out.expr = shell_wrap(s, false, rw.rhs);
    out.target = target_b0();
    return out;
}

SatEncoding encode_3sat(const Cnf3& psi) {
    if (psi.num_vars < 1 || psi.clauses.empty())
        throw std::invalid_argument("the 3SAT encoding needs at least one variable and clause");
    for (const auto& clause : psi.clauses)
        for (int lit : clause)
            if (lit == 0 || std::abs(lit) > psi.num_vars)
                throw std::invalid_argument("literal out of range");

    SatEncoding out;
    // all value triples except (0,0,0): a clause holds unless all three
    // literals are false
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                if (a || b || c)
                    out.doc.insert(Triple(iri(std::to_string(a)), iri(std::to_string(b)),
                                          iri(std::to_string(c))));
    out.doc.insert(Triple(iri("0"), iri("c"), iri("1")));
    out.doc.insert(Triple(iri("1"), iri("c"), iri("0")));

    auto lit_var = [](int lit) {
        return Term::variable((lit > 0 ? "X" : "XB") + std::to_string(std::abs(lit)));
    };
    std::vector<ExprPtr> parts;
    for (const auto& clause : psi.clauses)
        parts.push_back(SparqlExpr::make_pattern(
            TriplePattern(lit_var(clause[0]), lit_var(clause[1]), lit_var(clause[2]))));
    for (int k = 1; k <= psi.num_vars; ++k)
        parts.push_back(SparqlExpr::make_pattern(
            TriplePattern(Term::variable("X" + std::to_string(k)), iri("c"),
                          Term::variable("XB" + std::to_string(k)))));
    parts.push_back(SparqlExpr::make_pattern(TriplePattern(iri("0"), iri("c"), Term::variable("A"))));

    out.query.projection = {"A"};
    out.query.body = and_chain(parts);
    out.target = Mapping{{"A", iri("1")}};
    return out;
}

}  // namespace sparqlopt
