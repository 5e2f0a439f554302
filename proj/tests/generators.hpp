#pragma once

// Shared randomized-input generators for the unit and acceptance suites.

#include <random>
#include <vector>

#include "sparqlopt/algebra.hpp"
#include "sparqlopt/relational.hpp"

namespace gen {

using namespace sparqlopt;

inline const std::vector<std::string>& vocab() {
    static const std::vector<std::string> v = {"0", "1", "c", "d"};
    return v;
}

inline const std::vector<std::string>& var_names() {
    static const std::vector<std::string> v = {"a", "b", "x", "y"};
    return v;
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& from) {
    std::uniform_int_distribution<size_t> d(0, from.size() - 1);
    return from[d(rng)];
}

inline int range(std::mt19937_64& rng, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng);
}

inline Document random_document(std::mt19937_64& rng, int max_triples = 6) {
    Document d;
    int n = range(rng, 0, max_triples);
    for (int i = 0; i < n; ++i)
        d.insert(Triple(Term::iri(pick(rng, vocab())), Term::iri(pick(rng, vocab())),
                        Term::iri(pick(rng, vocab()))));
    return d;
}

inline Term random_slot(std::mt19937_64& rng, double var_prob = 0.5) {
    std::bernoulli_distribution v(var_prob);
    if (v(rng)) return Term::variable(pick(rng, var_names()));
    return Term::iri(pick(rng, vocab()));
}

inline TriplePattern random_pattern(std::mt19937_64& rng) {
    return TriplePattern(random_slot(rng), random_slot(rng), random_slot(rng));
}

inline FilterPtr random_condition(std::mt19937_64& rng, const std::set<std::string>& over,
                                  int depth = 2) {
    std::vector<std::string> vars(over.begin(), over.end());
    if (vars.empty()) vars.push_back("a");  // never used on safe construction paths
    int kind = depth > 0 ? range(rng, 0, 5) : range(rng, 0, 2);
    switch (kind) {
        case 0: return FilterCondition::bound(pick(rng, vars));
        case 1:
            return FilterCondition::eq_const(pick(rng, vars), Term::iri(pick(rng, vocab())));
        case 2: return FilterCondition::eq_var(pick(rng, vars), pick(rng, vars));
        case 3: return FilterCondition::negation(random_condition(rng, over, depth - 1));
        case 4:
            return FilterCondition::conjunction(random_condition(rng, over, depth - 1),
                                                random_condition(rng, over, depth - 1));
        default:
            return FilterCondition::disjunction(random_condition(rng, over, depth - 1),
                                                random_condition(rng, over, depth - 1));
    }
}

// Random SPARQL expression; filters are built over the child's variables so
// the safety restriction holds by construction.
inline ExprPtr random_expr(std::mt19937_64& rng, int depth) {
    if (depth <= 0 || range(rng, 0, 3) == 0)
        return SparqlExpr::make_pattern(random_pattern(rng));
    switch (range(rng, 0, 3)) {
        case 0: return SparqlExpr::make_and(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 1:
            return SparqlExpr::make_union(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 2: return SparqlExpr::make_opt(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        default: {
            ExprPtr child = random_expr(rng, depth - 1);
            std::set<std::string> v = vars(*child);
            if (v.empty()) return child;
            return SparqlExpr::make_filter(child, random_condition(rng, v));
        }
    }
}

// Random union- and projection-free algebra expression.
inline AlgPtr random_upf(std::mt19937_64& rng, int depth) {
    if (depth <= 0 || range(rng, 0, 3) == 0) return AlgebraExpr::leaf(random_pattern(rng));
    switch (range(rng, 0, 3)) {
        case 0: return AlgebraExpr::join(random_upf(rng, depth - 1), random_upf(rng, depth - 1));
        case 1: return AlgebraExpr::minus(random_upf(rng, depth - 1), random_upf(rng, depth - 1));
        case 2:
            return AlgebraExpr::left_join(random_upf(rng, depth - 1), random_upf(rng, depth - 1));
        default: {
            AlgPtr child = random_upf(rng, depth - 1);
            std::set<std::string> v = vars(*child);
            if (v.empty()) return child;
            return AlgebraExpr::select(random_condition(rng, v), child);
        }
    }
}

// Random full algebra expression (with union, project and select).
inline AlgPtr random_alg(std::mt19937_64& rng, int depth) {
    if (depth <= 0 || range(rng, 0, 4) == 0) return AlgebraExpr::leaf(random_pattern(rng));
    switch (range(rng, 0, 5)) {
        case 0: return AlgebraExpr::join(random_alg(rng, depth - 1), random_alg(rng, depth - 1));
        case 1:
            return AlgebraExpr::set_union(random_alg(rng, depth - 1), random_alg(rng, depth - 1));
        case 2: return AlgebraExpr::minus(random_alg(rng, depth - 1), random_alg(rng, depth - 1));
        case 3:
            return AlgebraExpr::left_join(random_alg(rng, depth - 1), random_alg(rng, depth - 1));
        case 4: {
            AlgPtr child = random_alg(rng, depth - 1);
            std::set<std::string> v = vars(*child);
            if (v.empty()) return child;
            std::set<std::string> proj;
            for (const std::string& x : v)
                if (range(rng, 0, 1)) proj.insert(x);
            return AlgebraExpr::project(proj, child);
        }
        default: {
            AlgPtr child = random_alg(rng, depth - 1);
            std::set<std::string> v = vars(*child);
            if (v.empty()) return child;
            return AlgebraExpr::select(random_condition(rng, v), child);
        }
    }
}

inline Instance random_instance(std::mt19937_64& rng, const std::vector<std::string>& rels,
                                const std::vector<int>& arities, int max_values,
                                int max_facts) {
    Instance out;
    int n = range(rng, 1, max_facts);
    for (int i = 0; i < n; ++i) {
        size_t r = static_cast<size_t>(range(rng, 0, static_cast<int>(rels.size()) - 1));
        Atom a;
        a.rel = rels[r];
        for (int k = 0; k < arities[r]; ++k)
            a.args.push_back(Arg::constant("v" + std::to_string(range(rng, 0, max_values - 1))));
        out.insert(std::move(a));
    }
    return out;
}

// Random TGD/EGD mix over the given schema; constraints are well-formed by
// construction.
inline Sigma random_sigma(std::mt19937_64& rng, const std::vector<std::string>& rels,
                          const std::vector<int>& arities, int max_constraints,
                          bool allow_egds = true) {
    std::vector<std::string> pool = {"u", "v", "w", "z"};
    Sigma out;
    int n = range(rng, 1, max_constraints);
    for (int i = 0; i < n; ++i) {
        Constraint c;
        int body_atoms = range(rng, 1, 2);
        for (int b = 0; b < body_atoms; ++b) {
            size_t r = static_cast<size_t>(range(rng, 0, static_cast<int>(rels.size()) - 1));
            Atom a;
            a.rel = rels[r];
            for (int k = 0; k < arities[r]; ++k) a.args.push_back(Arg::var(pick(rng, pool)));
            c.body.push_back(std::move(a));
        }
        std::set<std::string> bv = c.body_vars();
        std::vector<std::string> bvv(bv.begin(), bv.end());
        if (allow_egds && bvv.size() >= 2 && range(rng, 0, 3) == 0) {
            c.kind = Constraint::Kind::Egd;
            c.eq_left = pick(rng, bvv);
            do {
                c.eq_right = pick(rng, bvv);
            } while (c.eq_right == c.eq_left && bvv.size() > 1);
            if (c.eq_left == c.eq_right) continue;
        } else {
            c.kind = Constraint::Kind::Tgd;
            bool existential = range(rng, 0, 2) == 0;
            std::string ex = "y" + std::to_string(i);
            if (existential) c.existentials.push_back(ex);
            size_t r = static_cast<size_t>(range(rng, 0, static_cast<int>(rels.size()) - 1));
            Atom a;
            a.rel = rels[r];
            for (int k = 0; k < arities[r]; ++k) {
                if (existential && range(rng, 0, 2) == 0) a.args.push_back(Arg::var(ex));
                else a.args.push_back(Arg::var(pick(rng, bvv)));
            }
            if (existential &&
                std::none_of(a.args.begin(), a.args.end(),
                             [&](const Arg& x) { return x.is_var() && x.name == ex; }))
                a.args.back() = Arg::var(ex);
            c.head.push_back(std::move(a));
        }
        c.validate();
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace gen
