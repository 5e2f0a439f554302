#include "sparqlopt/cq.hpp"

#include <algorithm>

namespace sparqlopt {

std::optional<std::vector<TriplePattern>> bgp_patterns(const SparqlExpr& e) {
    if (e.op == SparqlExpr::Op::Pattern) return std::vector<TriplePattern>{e.pattern};
    if (e.op != SparqlExpr::Op::And) return std::nullopt;
    auto l = bgp_patterns(*e.left);
    auto r = bgp_patterns(*e.right);
    if (!l || !r) return std::nullopt;
    l->insert(l->end(), r->begin(), r->end());
    return l;
}

Arg term_to_arg(const Term& t) {
    if (t.is_variable()) return Arg::var(t.text());
    return Arg::constant(t.render());
}

std::optional<Term> arg_to_term(const Arg& a) {
    if (a.is_null()) return std::nullopt;
    if (a.is_var()) return Term::variable(a.name);
    try {
        return Term::parse(a.name);
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

namespace {

CqTranslation translate_bgp(const SparqlQuery& q, bool binary) {
    CqTranslation out;
    auto patterns = bgp_patterns(*q.body);
    if (!patterns) {
        out.reason = "query body is not And-only";
        return out;
    }
    if (q.projection.empty()) {
        out.reason = "empty projection";
        return out;
    }
    std::set<std::string> bv = vars(*q.body);
    for (const std::string& v : q.projection)
        if (!bv.count(v)) {
            out.reason = "projected variable ?" + v + " does not occur in the body";
            return out;
        }
    for (const TriplePattern& t : *patterns) {
        Atom a;
        if (binary) {
            if (t.predicate.is_variable()) {
                out.reason = "pattern " + t.render() + " has a variable predicate";
                return out;
            }
            a.rel = t.predicate.render();
            a.args = {term_to_arg(t.subject), term_to_arg(t.object)};
        } else {
            a.rel = "T";
            a.args = {term_to_arg(t.subject), term_to_arg(t.predicate), term_to_arg(t.object)};
        }
        out.cq.body.push_back(std::move(a));
    }
    for (const std::string& v : q.projection) out.cq.head.push_back(Arg::var(v));
    out.cq.validate();
    out.defined = true;
    return out;
}

QueryTranslation inverse_common(const CQ& q, bool binary) {
    QueryTranslation out;
    ExprPtr body;
    for (const Atom& a : q.body) {
        Term s, p, o;
        if (binary) {
            if (a.args.size() != 2) {
                out.reason = "atom " + a.render() + " is not binary";
                return out;
            }
            try {
                p = Term::parse(a.rel);
            } catch (const ParseError&) {
                out.reason = "relation name " + a.rel + " is not a term";
                return out;
            }
            auto st = arg_to_term(a.args[0]);
            auto ot = arg_to_term(a.args[1]);
            if (!st || !ot) {
                out.reason = "atom " + a.render() + " contains a labeled null";
                return out;
            }
            s = *st;
            o = *ot;
        } else {
            if (a.rel != "T" || a.args.size() != 3) {
                out.reason = "atom " + a.render() + " is not a ternary T-atom";
                return out;
            }
            auto st = arg_to_term(a.args[0]);
            auto pt = arg_to_term(a.args[1]);
            auto ot = arg_to_term(a.args[2]);
            if (!st || !pt || !ot) {
                out.reason = "atom " + a.render() + " contains a labeled null";
                return out;
            }
            s = *st;
            p = *pt;
            o = *ot;
        }
        ExprPtr pat;
        try {
            pat = SparqlExpr::make_pattern(TriplePattern(s, p, o));
        } catch (const ParseError& e) {
            out.reason = "atom " + a.render() + " is not a valid pattern: " + e.what();
            return out;
        }
        body = body ? SparqlExpr::make_and(body, pat) : pat;
    }
    if (!body) {
        out.reason = "empty body";
        return out;
    }
    for (const Arg& h : q.head) {
        if (!h.is_var()) {
            out.reason = "head entry " + h.render() + " is not a variable";
            return out;
        }
        out.query.projection.insert(h.name);
    }
    if (out.query.projection.empty()) {
        out.reason = "empty head";
        return out;
    }
    out.query.body = body;
    out.defined = true;
    return out;
}

}  // namespace

CqTranslation c1_translate(const SparqlQuery& q) { return translate_bgp(q, false); }

QueryTranslation c1_inverse(const CQ& q) { return inverse_common(q, false); }

CqTranslation c2_translate(const SparqlQuery& q) { return translate_bgp(q, true); }

QueryTranslation c2_inverse(const CQ& q) { return inverse_common(q, true); }

namespace {

// h erases atoms with a variable in predicate position and relabels the
// rest; fails on non-ternary or non-T atoms.
std::optional<std::vector<Atom>> h_image(const std::vector<Atom>& atoms) {
    std::vector<Atom> out;
    for (const Atom& a : atoms) {
        if (a.rel != "T" || a.args.size() != 3) return std::nullopt;
        if (a.args[1].is_var()) continue;  // erased
        Atom b;
        b.rel = a.args[1].name;
        b.args = {a.args[0], a.args[2]};
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace

Sigma sigma_prime(const Sigma& sigma) {
    Sigma out;
    for (const Constraint& c : sigma) {
        auto body = h_image(c.body);
        if (!body) return {};
        Constraint img;
        img.kind = c.kind;
        img.body = std::move(*body);
        if (c.is_tgd()) {
            auto head = h_image(c.head);
            if (!head) return {};
            img.head = std::move(*head);
            std::set<std::string> head_vars = vars(img.head);
            for (const std::string& y : c.existentials)
                if (head_vars.count(y)) img.existentials.push_back(y);
        } else {
            img.eq_left = c.eq_left;
            img.eq_right = c.eq_right;
        }
        if (img.check()) return {};  // not a constraint: the whole image collapses
        out.push_back(std::move(img));
    }
    return out;
}

}  // namespace sparqlopt
