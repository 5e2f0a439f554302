#include "sparqlopt/ast.hpp"

#include <algorithm>

namespace sparqlopt {

FilterPtr FilterCondition::bound(std::string v) {
    auto c = std::make_shared<FilterCondition>();
    c->kind = Kind::Bound;
    c->var = std::move(v);
    return c;
}

FilterPtr FilterCondition::eq_const(std::string v, Term constant) {
    auto c = std::make_shared<FilterCondition>();
    c->kind = Kind::EqConst;
    c->var = std::move(v);
    c->constant = std::move(constant);
    return c;
}

FilterPtr FilterCondition::eq_var(std::string v, std::string w) {
    auto c = std::make_shared<FilterCondition>();
    c->kind = Kind::EqVar;
    c->var = std::move(v);
    c->var2 = std::move(w);
    return c;
}

FilterPtr FilterCondition::negation(FilterPtr inner) {
    auto c = std::make_shared<FilterCondition>();
    c->kind = Kind::Not;
    c->lhs = std::move(inner);
    return c;
}

FilterPtr FilterCondition::conjunction(FilterPtr l, FilterPtr r) {
    auto c = std::make_shared<FilterCondition>();
    c->kind = Kind::And;
    c->lhs = std::move(l);
    c->rhs = std::move(r);
    return c;
}

FilterPtr FilterCondition::disjunction(FilterPtr l, FilterPtr r) {
    auto c = std::make_shared<FilterCondition>();
    c->kind = Kind::Or;
    c->lhs = std::move(l);
    c->rhs = std::move(r);
    return c;
}

std::string FilterCondition::render() const {
    switch (kind) {
        case Kind::Bound: return "bnd(?" + var + ")";
        case Kind::EqConst: return "?" + var + " = " + constant.render();
        case Kind::EqVar: return "?" + var + " = ?" + var2;
        case Kind::Not: return "!(" + lhs->render() + ")";
        case Kind::And: return "(" + lhs->render() + " && " + rhs->render() + ")";
        case Kind::Or: return "(" + lhs->render() + " || " + rhs->render() + ")";
    }
    return {};
}

bool equal(const FilterPtr& a, const FilterPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case FilterCondition::Kind::Bound: return a->var == b->var;
        case FilterCondition::Kind::EqConst: return a->var == b->var && a->constant == b->constant;
        case FilterCondition::Kind::EqVar: return a->var == b->var && a->var2 == b->var2;
        case FilterCondition::Kind::Not: return equal(a->lhs, b->lhs);
        case FilterCondition::Kind::And:
        case FilterCondition::Kind::Or: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
    return false;
}

std::set<std::string> vars(const FilterCondition& c) {
    std::set<std::string> out;
    switch (c.kind) {
        case FilterCondition::Kind::Bound: out.insert(c.var); break;
        case FilterCondition::Kind::EqConst: out.insert(c.var); break;
        case FilterCondition::Kind::EqVar:
            out.insert(c.var);
            out.insert(c.var2);
            break;
        case FilterCondition::Kind::Not: out = vars(*c.lhs); break;
        case FilterCondition::Kind::And:
        case FilterCondition::Kind::Or: {
            out = vars(*c.lhs);
            auto r = vars(*c.rhs);
            out.insert(r.begin(), r.end());
            break;
        }
    }
    return out;
}

TriplePattern::TriplePattern(Term s, Term p, Term o, int line)
    : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)) {
    auto bad = [&](const char* slot, const char* expect) {
        throw ParseError(std::string(slot) + " of pattern (" + subject.render() + ", " +
                             predicate.render() + ", " + object.render() + ") must be " + expect,
                         line);
    };
    if (subject.is_literal()) bad("subject", "in BIV");
    if (!predicate.is_variable() && predicate.kind() != TermKind::Iri) bad("predicate", "in IV");
}

std::string TriplePattern::render() const {
    return "(" + subject.render() + ", " + predicate.render() + ", " + object.render() + ")";
}

ExprPtr SparqlExpr::make_pattern(TriplePattern t) {
    auto e = std::make_shared<SparqlExpr>();
    e->op = Op::Pattern;
    e->pattern = std::move(t);
    return e;
}

static ExprPtr make_binary(SparqlExpr::Op op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<SparqlExpr>();
    e->op = op;
    e->left = std::move(l);
    e->right = std::move(r);
    return e;
}

ExprPtr SparqlExpr::make_and(ExprPtr l, ExprPtr r) { return make_binary(Op::And, std::move(l), std::move(r)); }
ExprPtr SparqlExpr::make_union(ExprPtr l, ExprPtr r) { return make_binary(Op::Union, std::move(l), std::move(r)); }
ExprPtr SparqlExpr::make_opt(ExprPtr l, ExprPtr r) { return make_binary(Op::Opt, std::move(l), std::move(r)); }

ExprPtr SparqlExpr::make_filter(ExprPtr child, FilterPtr cond, int line) {
    std::set<std::string> in_child = vars(*child);
    for (const std::string& v : vars(*cond)) {
        if (!in_child.count(v))
            throw ParseError("unsafe filter: variable ?" + v + " does not occur in the filtered expression", line);
    }
    auto e = std::make_shared<SparqlExpr>();
    e->op = Op::Filter;
    e->left = std::move(child);
    e->cond = std::move(cond);
    return e;
}

std::string SparqlExpr::render() const {
    switch (op) {
        case Op::Pattern: return pattern.render();
        case Op::And: return "(" + left->render() + " AND " + right->render() + ")";
        case Op::Union: return "(" + left->render() + " UNION " + right->render() + ")";
        case Op::Opt: return "(" + left->render() + " OPT " + right->render() + ")";
        case Op::Filter: return "(" + left->render() + " FILTER " + cond->render() + ")";
    }
    return {};
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op) return false;
    switch (a->op) {
        case SparqlExpr::Op::Pattern: return a->pattern == b->pattern;
        case SparqlExpr::Op::Filter: return equal(a->cond, b->cond) && equal(a->left, b->left);
        default: return equal(a->left, b->left) && equal(a->right, b->right);
    }
}

std::string SparqlQuery::render() const {
    std::string s = "SELECT";
    for (const auto& v : projection) s += " ?" + v;
    return s + " WHERE " + body->render();
}

bool equal(const SparqlQuery& a, const SparqlQuery& b) {
    return a.projection == b.projection && equal(a.body, b.body);
}

std::set<std::string> vars(const TriplePattern& t) {
    std::set<std::string> out;
    for (const Term* term : {&t.subject, &t.predicate, &t.object})
        if (term->is_variable()) out.insert(term->text());
    return out;
}

std::set<std::string> vars(const SparqlExpr& e) {
    switch (e.op) {
        case SparqlExpr::Op::Pattern: return vars(e.pattern);
        case SparqlExpr::Op::Filter: {
            auto out = vars(*e.left);
            auto c = vars(*e.cond);
            out.insert(c.begin(), c.end());
            return out;
        }
        default: {
            auto out = vars(*e.left);
            auto r = vars(*e.right);
            out.insert(r.begin(), r.end());
            return out;
        }
    }
}

std::set<std::string> vars(const SparqlQuery& q) {
    auto out = vars(*q.body);
    out.insert(q.projection.begin(), q.projection.end());
    return out;
}

int opt_rank(const SparqlExpr& e) {
    switch (e.op) {
        case SparqlExpr::Op::Pattern: return 0;
        case SparqlExpr::Op::Filter: return opt_rank(*e.left);
        case SparqlExpr::Op::And:
        case SparqlExpr::Op::Union: return std::max(opt_rank(*e.left), opt_rank(*e.right));
        case SparqlExpr::Op::Opt:
            return std::max(opt_rank(*e.left), opt_rank(*e.right)) + 1;
    }
    return 0;
}

static void scan(const SparqlExpr& e, Fragment& f) {
    switch (e.op) {
        case SparqlExpr::Op::Pattern: return;
        case SparqlExpr::Op::And: f.uses_and = true; break;
        case SparqlExpr::Op::Union: f.uses_union = true; break;
        case SparqlExpr::Op::Opt: f.uses_opt = true; break;
        case SparqlExpr::Op::Filter:
            f.uses_filter = true;
            scan(*e.left, f);
            return;
    }
    scan(*e.left, f);
    scan(*e.right, f);
}

std::string Fragment::name() const {
    std::string s;
    if (uses_and) s += "A";
    if (uses_filter) s += "F";
    if (uses_opt) s += "O";
    if (uses_union) s += "U";
    if (s == "AFOU") s = "E";
    if (s.empty()) s = "t";
    if (top_level_select) s += "+";
    return s;
}

Fragment fragment_of(const SparqlExpr& e) {
    Fragment f;
    scan(e, f);
    return f;
}

Fragment fragment_of(const SparqlQuery& q) {
    Fragment f = fragment_of(*q.body);
    f.top_level_select = true;
    return f;
}

bool is_bgp(const SparqlExpr& e) {
    if (e.op == SparqlExpr::Op::Pattern) return true;
    if (e.op == SparqlExpr::Op::And) return is_bgp(*e.left) && is_bgp(*e.right);
    return false;
}

}  // namespace sparqlopt
