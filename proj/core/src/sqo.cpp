#include "sparqlopt/sqo.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "sparqlopt/termination.hpp"

namespace sparqlopt {

std::string SemanticStep::render() const {
    std::string p = "[";
    for (size_t i = 0; i < pos.size(); ++i) {
        if (i) p += ".";
        p += std::to_string(pos[i]);
    }
    p += "]";
    return kind + " at " + p + ": " + before->render() + "  ==>  " + after->render() +
           (note.empty() ? "" : "  (" + note + ")");
}

std::string SqoReport::render() const {
    std::ostringstream out;
    out << "input: " << input.render() << "\n";
    if (!scheme_used.empty()) {
        out << "scheme: " << scheme_used << " (C1 " << (c1_defined ? "defined" : "undefined")
            << ", C2 " << (c2_defined ? "defined" : "undefined") << ", sigma' "
            << (sigma_prime_applicable ? "applicable" : "not applicable") << ")\n";
        out << "chase: " << chase_status;
        if (certified) out << ", termination certified by " << certificate;
        out << "\n";
        out << "complete: " << (complete ? "yes" : "no") << "\n";
        if (unknown) out << "status: unknown\n";
        out << "rewrites: " << rewrites.size() << "\n";
        for (const SparqlQuery& r : rewrites) out << "  " << r.render() << "\n";
    }
    if (!semantic_steps.empty()) {
        out << "semantic steps: " << semantic_steps.size() << "\n";
        for (const SemanticStep& s : semantic_steps) out << "  " << s.render() << "\n";
        if (rewritten) out << "result: " << rewritten->render() << "\n";
    }
    for (const std::string& n : notes) out << "note: " << n << "\n";
    return out.str();
}

std::string SqoReport::render_structured() const {
    std::ostringstream out;
    out << "input=" << input.render() << "\n";
    out << "scheme=" << scheme_used << "\n";
    out << "c1_defined=" << c1_defined << "\n";
    out << "c2_defined=" << c2_defined << "\n";
    out << "sigma_prime_applicable=" << sigma_prime_applicable << "\n";
    out << "chase_status=" << chase_status << "\n";
    out << "certified=" << certified << "\n";
    out << "certificate=" << certificate << "\n";
    out << "complete=" << complete << "\n";
    out << "unknown=" << unknown << "\n";
    out << "rewrite_count=" << rewrites.size() << "\n";
    for (size_t i = 0; i < rewrites.size(); ++i)
        out << "rewrite." << i << "=" << rewrites[i].render() << "\n";
    out << "semantic_step_count=" << semantic_steps.size() << "\n";
    for (size_t i = 0; i < semantic_steps.size(); ++i)
        out << "semantic_step." << i << "=" << semantic_steps[i].render() << "\n";
    if (rewritten) out << "result=" << rewritten->render() << "\n";
    for (size_t i = 0; i < notes.size(); ++i) out << "note." << i << "=" << notes[i] << "\n";
    return out.str();
}

namespace {

std::optional<std::string> certified_by(const Sigma& sigma) {
    TerminationReport r = analyze(sigma);
    if (r.weakly_acyclic) return "weak acyclicity";
    if (r.safe) return "safety";
    if (r.stratified) return "stratification";
    if (r.safely_stratified) return "safe stratification";
    if (r.safely_restricted) return "safe restriction";
    return std::nullopt;
}

// Sigma-equivalence of two And-only queries decided through C1 and the
// chase-based containment check.
Tri bgp_equivalent(const CQ& a, const CQ& b, const Sigma& sigma, long budget) {
    ContainmentResult fwd = contained_in(a, b, sigma, budget);
    if (fwd.value != Tri::Yes) return fwd.value;
    ContainmentResult bwd = contained_in(b, a, sigma, budget);
    return bwd.value;
}

CQ bgp_to_cq(const std::vector<TriplePattern>& patterns, const std::set<std::string>& head) {
    CQ q;
    for (const TriplePattern& t : patterns) {
        Atom a;
        a.rel = "T";
        a.args = {term_to_arg(t.subject), term_to_arg(t.predicate), term_to_arg(t.object)};
        q.body.push_back(std::move(a));
    }
    for (const std::string& v : head) q.head.push_back(Arg::var(v));
    q.validate();
    return q;
}

long effective_budget(const Sigma& sigma, const CQ& q, bool certified, long base) {
    if (!certified) return base;
    std::set<Arg> values;
    for (const Atom& a : q.body)
        for (const Arg& x : a.args) values.insert(x);
    return std::max(base, safety_budget(sigma, values.size()));
}

}  // namespace

SqoReport optimize_bgp(const SparqlQuery& q, const Sigma& sigma, const SqoOptions& opt,
                       const std::string& scheme) {
    SqoReport rep;
    rep.input = q;

    CqTranslation c1 = c1_translate(q);
    if (!c1.defined)
        throw std::invalid_argument("optimize_bgp requires an And-only query: " + c1.reason);
    rep.c1_defined = true;

    CqTranslation c2 = c2_translate(q);
    rep.c2_defined = c2.defined;
    Sigma sp = sigma_prime(sigma);
    rep.sigma_prime_applicable = c2.defined && !sigma.empty() && sp.size() == sigma.size();
    if (sigma.empty()) rep.sigma_prime_applicable = c2.defined;

    // Termination certificates: a condition on sigma certifies the C1 chase;
    // a condition on sigma' certifies the C2 chase and thereby the C1 chase.
    if (auto cert = certified_by(sigma)) {
        rep.certified = true;
        rep.certificate = *cert + " of the constraints";
    } else if (rep.sigma_prime_applicable) {
        if (auto cert2 = certified_by(sp)) {
            rep.certified = true;
            rep.certificate = *cert2 + " of the C2-translated constraints";
        }
    }

    bool use_c2 = scheme == "c2";
    if (use_c2 && (!c2.defined || (!sigma.empty() && sp.size() != sigma.size())))
        throw std::invalid_argument("the C2 scheme is not applicable to this input");
    rep.scheme_used = use_c2 ? "c2" : "c1";

    const CQ& base_cq = use_c2 ? c2.cq : c1.cq;
    const Sigma& base_sigma = use_c2 ? sp : sigma;
    long budget = effective_budget(base_sigma, base_cq, rep.certified, opt.budget);

    CbResult res = cb(base_cq, base_sigma, budget, opt.backchase_cap);
    switch (res.status) {
        case CbResult::Status::Ok: rep.chase_status = "terminated"; break;
        case CbResult::Status::Unknown:
            rep.chase_status = "budget-exceeded";
            rep.unknown = !rep.certified;
            break;
        case CbResult::Status::Unsatisfiable: rep.chase_status = "unsatisfiable"; break;
        case CbResult::Status::AtomCapExceeded: rep.chase_status = "cap-exceeded"; break;
    }
    if (!res.note.empty()) rep.notes.push_back(res.note);

    for (const CQ& rewrite : res.rewrites) {
        QueryTranslation back = use_c2 ? c2_inverse(rewrite) : c1_inverse(rewrite);
        if (back.defined) {
            rep.rewrites.push_back(back.query);
        } else {
            rep.notes.push_back("dropped " + rewrite.render() + ": " + back.reason);
        }
    }
    std::sort(rep.rewrites.begin(), rep.rewrites.end(),
              [](const SparqlQuery& a, const SparqlQuery& b) { return a.render() < b.render(); });

    // completeness flag of the scheme (the universal plan stays And-only)
    PlanResult u = universal_plan(c1.cq, sigma, budget);
    rep.complete = u.status == PlanResult::Status::Ok && c1_inverse(u.plan).defined;
    if (u.status == PlanResult::Status::Ok && !rep.complete)
        rep.notes.push_back("universal plan is not a valid SPARQL query: " +
                            c1_inverse(u.plan).reason);
    return rep;
}

namespace {

std::optional<CQ> expr_to_cq(const ExprPtr& e, const std::set<std::string>& head) {
    auto pats = bgp_patterns(*e);
    if (!pats) return std::nullopt;
    return bgp_to_cq(*pats, head);
}

}  // namespace

OptRewrite elim_opt_to_and(const ExprPtr& q1, const ExprPtr& q2, const Sigma& sigma,
                           const SqoOptions& opt) {
    OptRewrite out;
    auto v1 = vars(*q1);
    auto a = expr_to_cq(q1, v1);
    std::set<std::string> both = v1;
    auto b_cq = expr_to_cq(q2, {});
    if (!a || !b_cq) {
        out.note = "precondition undecidable: both sides must be And-only";
        return out;
    }
    CQ joined = *a;
    for (const Atom& at : b_cq->body) joined.body.push_back(at);
    Tri eq = bgp_equivalent(*a, joined, sigma, opt.budget);
    if (eq == Tri::Unknown) {
        out.note = "precondition undecided within the chase budget";
        return out;
    }
    if (eq == Tri::No) {
        out.note = "precondition fails: the optional side is not implied";
        return out;
    }
    out.applicable = true;
    out.result = SparqlExpr::make_and(q1, q2);
    out.note = "Q1 is equivalent to Select_{vars(Q1)}(Q1 And Q2) under the constraints";
    return out;
}

OptRewrite elim_opt_redundant_bgp(const ExprPtr& q1, const ExprPtr& q2, const ExprPtr& q3,
                                  const Sigma& sigma, const SqoOptions& opt) {
    OptRewrite out;
    auto v1 = vars(*q1);
    auto v2 = vars(*q2);
    if (!std::includes(v1.begin(), v1.end(), v2.begin(), v2.end())) {
        out.note = "vars(Q2) must be contained in vars(Q1) for the unprojected equivalence";
        return out;
    }
    auto a = expr_to_cq(q1, v1);
    auto b_cq = expr_to_cq(q2, {});
    if (!a || !b_cq) {
        out.note = "precondition undecidable: Q1 and Q2 must be And-only";
        return out;
    }
    CQ joined = *a;
    for (const Atom& at : b_cq->body) joined.body.push_back(at);
    Tri eq = bgp_equivalent(*a, joined, sigma, opt.budget);
    if (eq == Tri::Unknown) {
        out.note = "precondition undecided within the chase budget";
        return out;
    }
    if (eq == Tri::No) {
        out.note = "precondition fails: Q2 is not implied by Q1";
        return out;
    }
    out.applicable = true;
    out.result = SparqlExpr::make_opt(q1, q3);
    out.note = "Q1 is equivalent to Q1 And Q2 under the constraints";
    return out;
}

// ---------------------------------------------------------------------------
// Filter rewrites
// ---------------------------------------------------------------------------

namespace {

// A join tower of leaves, convertible back to an And-only expression.
std::optional<std::vector<TriplePattern>> alg_bgp(const AlgPtr& a) {
    if (a->op == AlgebraExpr::Op::Leaf) return std::vector<TriplePattern>{a->pattern};
    if (a->op != AlgebraExpr::Op::Join) return std::nullopt;
    auto l = alg_bgp(a->left);
    auto r = alg_bgp(a->right);
    if (!l || !r) return std::nullopt;
    l->insert(l->end(), r->begin(), r->end());
    return l;
}

CQ patterns_to_cq(const std::vector<TriplePattern>& pats, const std::set<std::string>& head) {
    return bgp_to_cq(pats, head);
}

Term substituted(const Term& t, const std::string& from, const std::string& to) {
    if (t.is_variable() && t.text() == from) return Term::variable(to);
    return t;
}

std::vector<TriplePattern> substitute(const std::vector<TriplePattern>& pats,
                                      const std::string& from, const std::string& to) {
    std::vector<TriplePattern> out;
    for (const TriplePattern& t : pats)
        out.emplace_back(substituted(t.subject, from, to), substituted(t.predicate, from, to),
                         substituted(t.object, from, to));
    return out;
}

AlgPtr join_tower(const std::vector<TriplePattern>& pats) {
    AlgPtr out;
    for (const TriplePattern& t : pats) {
        AlgPtr leaf = AlgebraExpr::leaf(t);
        out = out ? AlgebraExpr::join(out, leaf) : leaf;
    }
    return out;
}

// Decides Select_S(Q2) equivalent to Select_S(Q2[y -> x]) for a BGP Q2.
Tri substitution_equivalent(const std::vector<TriplePattern>& pats,
                            const std::set<std::string>& s, const std::string& x,
                            const std::string& y, const Sigma& sigma, long budget) {
    CQ lhs = patterns_to_cq(pats, s);
    std::vector<TriplePattern> subst = substitute(pats, y, x);
    CQ rhs = patterns_to_cq(subst, s);
    return bgp_equivalent(lhs, rhs, sigma, budget);
}

struct SiteRewrite {
    TreePos pos;
    AlgPtr after;
    std::string kind;
    std::string note;
};

std::optional<SiteRewrite> try_filter_site(const AlgPtr& root, const TreePos& pos,
                                           const Sigma& sigma, const SqoOptions& opt) {
    AlgPtr n = subtree_at(root, pos);
    if (n->op != AlgebraExpr::Op::Select) return std::nullopt;
    using FK = FilterCondition::Kind;

    // bullet 1: Filter_{not bnd(?x)}(Q1 Opt Q2) is empty when Q2 is implied
    if (n->cond->kind == FK::Not && n->cond->lhs->kind == FK::Bound &&
        n->left->op == AlgebraExpr::Op::LeftJoin) {
        const std::string& x = n->cond->lhs->var;
        auto p1 = alg_bgp(n->left->left);
        auto p2 = alg_bgp(n->left->right);
        if (p1 && p2) {
            std::set<std::string> v2;
            for (const TriplePattern& t : *p2) {
                auto tv = vars(t);
                v2.insert(tv.begin(), tv.end());
            }
            if (v2.count(x)) {
                std::set<std::string> v1;
                for (const TriplePattern& t : *p1) {
                    auto tv = vars(t);
                    v1.insert(tv.begin(), tv.end());
                }
                CQ a = patterns_to_cq(*p1, v1);
                std::vector<TriplePattern> all = *p1;
                all.insert(all.end(), p2->begin(), p2->end());
                CQ joined = patterns_to_cq(all, v1);
                if (bgp_equivalent(a, joined, sigma, opt.budget) == Tri::Yes)
                    return SiteRewrite{pos, AlgebraExpr::empty(), "filter-1",
                                       "?" + x + " is bound in every solution because the "
                                       "optional side is implied by the constraints"};
            }
        }
    }

    // bullet 3: Filter_{not ?x=?y}(Q2) is empty when the constraints force
    // ?x = ?y
    if (n->cond->kind == FK::Not && n->cond->lhs->kind == FK::EqVar) {
        const std::string& x = n->cond->lhs->var;
        const std::string& y = n->cond->lhs->var2;
        auto p2 = alg_bgp(n->left);
        if (p2) {
            std::set<std::string> v2 = vars(*n->left);
            if (v2.count(x) && v2.count(y) && x != y) {
                std::set<std::string> s = v2;
                s.erase(y);
                if (substitution_equivalent(*p2, s, x, y, sigma, opt.budget) == Tri::Yes)
                    return SiteRewrite{pos, AlgebraExpr::empty(), "filter-3",
                                       "the constraints force ?" + x + " = ?" + y};
            }
        }
    }
    return std::nullopt;
}

// bullet 2 applies at the top of a query: Project_S(Filter_{?x=?y}(Q2))
// becomes Project_S(Q2[y -> x]).
std::optional<SiteRewrite> try_filter_top(const AlgPtr& root, const Sigma& sigma,
                                          const SqoOptions& opt) {
    if (root->op != AlgebraExpr::Op::Project) return std::nullopt;
    AlgPtr f = root->left;
    if (f->op != AlgebraExpr::Op::Select || f->cond->kind != FilterCondition::Kind::EqVar)
        return std::nullopt;
    auto p2 = alg_bgp(f->left);
    if (!p2) return std::nullopt;
    std::set<std::string> v2 = vars(*f->left);
    // the substituted variable must not be projected; try both orientations
    for (auto [x, y] : {std::pair{f->cond->var, f->cond->var2},
                        std::pair{f->cond->var2, f->cond->var}}) {
        if (x == y || root->proj.count(y)) continue;
        if (!v2.count(x) || !v2.count(y)) continue;
        std::set<std::string> s = root->proj;
        if (substitution_equivalent(*p2, s, x, y, sigma, opt.budget) != Tri::Yes) continue;
        AlgPtr body = join_tower(substitute(*p2, y, x));
        return SiteRewrite{{}, AlgebraExpr::project(root->proj, body), "filter-2",
                           "the equality filter ?" + x + " = ?" + y +
                               " is implied; ?" + y + " substituted by ?" + x};
    }
    return std::nullopt;
}

void all_positions(const AlgPtr& node, TreePos& cur, std::vector<TreePos>& out) {
    int k;
    switch (node->op) {
        case AlgebraExpr::Op::Leaf:
        case AlgebraExpr::Op::Empty: k = 0; break;
        case AlgebraExpr::Op::Project:
        case AlgebraExpr::Op::Select: k = 1; break;
        default: k = 2; break;
    }
    if (k >= 1) {
        cur.push_back(0);
        all_positions(node->left, cur, out);
        cur.pop_back();
    }
    if (k == 2) {
        cur.push_back(1);
        all_positions(node->right, cur, out);
        cur.pop_back();
    }
    out.push_back(cur);
}

}  // namespace

FilterRewriteResult filter_rewrites(const SparqlQuery& q, const Sigma& sigma,
                                    const SqoOptions& opt) {
    FilterRewriteResult out;
    out.original = translate(q);
    AlgPtr cur = out.original;
    bool changed = true;
    while (changed) {
        changed = false;
        if (auto top = try_filter_top(cur, sigma, opt)) {
            out.steps.push_back(
                {top->kind, top->pos, subtree_at(cur, top->pos), top->after, top->note});
            cur = replace_at(cur, top->pos, top->after);
            changed = true;
            continue;
        }
        std::vector<TreePos> positions;
        TreePos walk;
        all_positions(cur, walk, positions);
        for (const TreePos& p : positions) {
            if (auto site = try_filter_site(cur, p, sigma, opt)) {
                out.steps.push_back(
                    {site->kind, site->pos, subtree_at(cur, site->pos), site->after, site->note});
                cur = replace_at(cur, site->pos, site->after);
                changed = true;
                break;
            }
        }
    }
    out.rewritten = cur;
    return out;
}

// ---------------------------------------------------------------------------
// Full pipeline and model generation
// ---------------------------------------------------------------------------

namespace {

// Tries the two Opt eliminations over every left-join node whose sides are
// join towers of leaves.
void semantic_opt_pass(AlgPtr& cur, const Sigma& sigma, const SqoOptions& opt,
                       std::vector<SemanticStep>& steps) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<TreePos> positions;
        TreePos walk;
        all_positions(cur, walk, positions);
        for (const TreePos& p : positions) {
            AlgPtr n = subtree_at(cur, p);
            if (n->op != AlgebraExpr::Op::LeftJoin) continue;
            auto p1 = alg_bgp(n->left);
            if (!p1) continue;
            auto p2 = alg_bgp(n->right);
            if (p2) {
                // Opt to And when the optional side is implied
                ExprPtr q1;
                for (const TriplePattern& t : *p1) {
                    ExprPtr pat = SparqlExpr::make_pattern(t);
                    q1 = q1 ? SparqlExpr::make_and(q1, pat) : pat;
                }
                ExprPtr q2;
                for (const TriplePattern& t : *p2) {
                    ExprPtr pat = SparqlExpr::make_pattern(t);
                    q2 = q2 ? SparqlExpr::make_and(q2, pat) : pat;
                }
                OptRewrite r = elim_opt_to_and(q1, q2, sigma, opt);
                if (r.applicable) {
                    AlgPtr after = AlgebraExpr::join(n->left, n->right);
                    steps.push_back({"elim-opt-1", p, n, after, r.note});
                    cur = replace_at(cur, p, after);
                    changed = true;
                    break;
                }
            }
            // redundant BGP inside the optional side: Q1 Opt (Q2 And Q3)
            if (n->right->op == AlgebraExpr::Op::Join) {
                for (bool left_is_q2 : {true, false}) {
                    AlgPtr a2 = left_is_q2 ? n->right->left : n->right->right;
                    AlgPtr a3 = left_is_q2 ? n->right->right : n->right->left;
                    auto pp2 = alg_bgp(a2);
                    if (!pp2) continue;
                    std::set<std::string> v1, v2;
                    for (const TriplePattern& t : *p1) {
                        auto tv = vars(t);
                        v1.insert(tv.begin(), tv.end());
                    }
                    for (const TriplePattern& t : *pp2) {
                        auto tv = vars(t);
                        v2.insert(tv.begin(), tv.end());
                    }
                    if (!std::includes(v1.begin(), v1.end(), v2.begin(), v2.end())) continue;
                    CQ a = patterns_to_cq(*p1, v1);
                    std::vector<TriplePattern> all = *p1;
                    all.insert(all.end(), pp2->begin(), pp2->end());
                    CQ joined = patterns_to_cq(all, v1);
                    if (bgp_equivalent(a, joined, sigma, opt.budget) != Tri::Yes) continue;
                    AlgPtr after = AlgebraExpr::left_join(n->left, a3);
                    steps.push_back({"elim-opt-2", p, n, after,
                                     "the inner And operand is implied by the left side"});
                    cur = replace_at(cur, p, after);
                    changed = true;
                    break;
                }
                if (changed) break;
            }
        }
    }
}

}  // namespace

SqoReport optimize(const SparqlQuery& q, const Sigma& sigma, const SqoOptions& opt,
                   const std::string& scheme) {
    if (bgp_patterns(*q.body)) return optimize_bgp(q, sigma, opt, scheme);
    SqoReport rep;
    rep.input = q;
    rep.chase_status = "skipped";
    rep.notes.push_back(
        "query is not And-only; applying the semantic Opt/Filter rewrites instead of C&B");
    FilterRewriteResult fr = filter_rewrites(q, sigma, opt);
    AlgPtr cur = fr.rewritten;
    rep.semantic_steps = fr.steps;
    semantic_opt_pass(cur, sigma, opt, rep.semantic_steps);
    rep.rewritten = cur;
    return rep;
}

std::vector<Document> generate_sigma_models(const Sigma& sigma, int count, std::mt19937_64& rng,
                                            long budget) {
    std::vector<Document> out;
    std::vector<std::string> pool = {"c0", "c1", "c2", "c3"};
    for (const std::string& c : constants_of(sigma)) pool.push_back(c);
    int attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts < count * 60) {
        ++attempts;
        Instance inst;
        std::uniform_int_distribution<size_t> value(0, pool.size() - 1);
        std::uniform_int_distribution<int> nfacts(1, 4);
        int n = nfacts(rng);
        for (int i = 0; i < n; ++i) {
            Atom a;
            a.rel = "T";
            a.args = {Arg::constant(pool[value(rng)]), Arg::constant(pool[value(rng)]),
                      Arg::constant(pool[value(rng)])};
            inst.insert(std::move(a));
        }
        ChaseOptions copt;
        copt.budget = budget;
        ChaseOutcome res = chase(inst, sigma, copt);
        if (res.status != ChaseOutcome::Status::Terminated) continue;
        Document doc;
        bool ok = true;
        for (const Atom& a : res.instance) {
            if (a.rel != "T" || a.args.size() != 3) {
                ok = false;
                break;
            }
            Term t[3];
            for (int i = 0; i < 3; ++i) {
                const Arg& x = a.args[i];
                if (x.is_null()) {
                    t[i] = Term::iri("n" + std::to_string(x.null_id));
                } else {
                    auto term = arg_to_term(x);
                    if (!term) {
                        ok = false;
                        break;
                    }
                    t[i] = *term;
                }
            }
            if (!ok) break;
            try {
                doc.insert(Triple(t[0], t[1], t[2]));
            } catch (const ParseError&) {
                ok = false;  // kind violation (e.g. literal in subject position)
                break;
            }
        }
        if (ok) out.push_back(std::move(doc));
    }
    return out;
}

}  // namespace sparqlopt
