#include "sparqlopt/chase.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sparqlopt {

std::string ChaseTraceLine::render() const {
    std::ostringstream out;
    out << "step " << step << " constraint " << constraint << " witness " << witness << " : "
        << action;
    return out.str();
}

Arg ChaseOutcome::resolve(Arg a) const {
    for (const auto& [loser, survivor] : merges)
        if (a == loser) a = survivor;
    return a;
}

namespace {

std::string render_witness(const Constraint& c, const Homomorphism& h) {
    std::string s = "{";
    bool first = true;
    for (const std::string& v : c.universal_vars()) {
        if (!first) s += ", ";
        first = false;
        s += v + "->" + apply_hom(h, Arg::var(v)).render();
    }
    return s + "}";
}

long max_null_id(const Instance& i) {
    long m = 0;
    for (const Atom& a : i)
        for (const Arg& x : a.args)
            if (x.is_null()) m = std::max(m, x.null_id);
    return m;
}

// A TGD is applicable at h if the head cannot be completed within i.
bool head_satisfied(const Instance& i, const Constraint& tgd, const Homomorphism& h) {
    Homomorphism seed;
    for (const auto& [k, v] : h) seed.emplace(k, v);
    // existential variables stay free in the seed
    return find_homomorphism(tgd.head, i, seed).has_value();
}

}  // namespace

Instance tgd_step(const Instance& i, const Constraint& tgd, const Homomorphism& h,
                  long& null_counter) {
    if (!tgd.is_tgd()) throw std::invalid_argument("tgd_step on an EGD");
    if (head_satisfied(i, tgd, h))
        throw std::invalid_argument("constraint not applicable: head already satisfied");
    Homomorphism nu = h;
    for (const std::string& y : tgd.existentials) nu[Arg::var(y)] = Arg::null(++null_counter);
    Instance out = i;
    for (const Atom& a : tgd.head) out.insert(apply_hom(nu, a));
    return out;
}

EgdStepResult egd_step(const Instance& i, const Constraint& egd, const Homomorphism& h) {
    if (!egd.is_egd()) throw std::invalid_argument("egd_step on a TGD");
    Arg u = apply_hom(h, Arg::var(egd.eq_left));
    Arg v = apply_hom(h, Arg::var(egd.eq_right));
    if (u == v) throw std::invalid_argument("constraint not applicable: values already equal");
    EgdStepResult res;
    if (u.is_const() && v.is_const()) {
        res.failed = true;
        res.clash = {u, v};
        return res;
    }
    // substitute the null by the other value everywhere
    Arg loser = v.is_null() ? v : u;
    Arg survivor = v.is_null() ? u : v;
    res.substituted = {loser, survivor};
    for (const Atom& a : i) {
        Atom b = a;
        for (Arg& x : b.args)
            if (x == loser) x = survivor;
        res.instance.insert(std::move(b));
    }
    return res;
}

bool models(const Instance& i, const Constraint& c) {
    bool ok = true;
    for_each_homomorphism(c.body, i, {}, [&](const Homomorphism& h) {
        if (c.is_tgd()) {
            if (!head_satisfied(i, c, h)) {
                ok = false;
                return false;
            }
        } else {
            if (apply_hom(h, Arg::var(c.eq_left)) != apply_hom(h, Arg::var(c.eq_right))) {
                ok = false;
                return false;
            }
        }
        return true;
    });
    return ok;
}

bool models(const Instance& i, const Sigma& sigma) {
    return std::all_of(sigma.begin(), sigma.end(),
                       [&](const Constraint& c) { return models(i, c); });
}

namespace {

// Finds an applicable homomorphism for constraint c on i: least in the
// enumeration order when `least`, greatest otherwise.
std::optional<Homomorphism> applicable_witness(const Instance& i, const Constraint& c,
                                               bool least) {
    std::optional<Homomorphism> out;
    for_each_homomorphism(c.body, i, {}, [&](const Homomorphism& h) {
        bool applicable;
        if (c.is_tgd()) {
            applicable = !head_satisfied(i, c, h);
        } else {
            applicable = apply_hom(h, Arg::var(c.eq_left)) != apply_hom(h, Arg::var(c.eq_right));
        }
        if (applicable) {
            out = h;
            return !least;  // stop at the first witness when looking for the least
        }
        return true;
    });
    return out;
}

}  // namespace

ChaseOutcome chase(const Instance& start, const Sigma& sigma, const ChaseOptions& opt) {
    ChaseOutcome out;
    out.instance = start;
    long null_counter = max_null_id(start);
    if (sigma.empty()) return out;

    size_t n = sigma.size();
    size_t cursor = 0;  // round-robin start position
    while (true) {
        if (out.steps >= opt.budget) {
            out.status = ChaseOutcome::Status::BudgetExceeded;
            return out;
        }
        bool fired = false;
        for (size_t k = 0; k < n && !fired; ++k) {
            size_t idx = opt.order == ChaseOptions::Order::RoundRobin
                             ? (cursor + k) % n
                             : n - 1 - k;
            const Constraint& c = sigma[idx];
            auto h = applicable_witness(out.instance, c,
                                        opt.order == ChaseOptions::Order::RoundRobin);
            if (!h) continue;
            fired = true;
            ++out.steps;
            if (opt.order == ChaseOptions::Order::RoundRobin) cursor = (idx + 1) % n;
            if (c.is_tgd()) {
                Instance before = out.instance;
                out.instance = tgd_step(out.instance, c, *h, null_counter);
                if (opt.keep_trace) {
                    std::string added;
                    for (const Atom& a : out.instance)
                        if (!before.count(a)) added += (added.empty() ? "" : ", ") + a.render();
                    out.trace.push_back({out.steps, idx, render_witness(c, *h), "add " + added});
                }
            } else {
                EgdStepResult res = egd_step(out.instance, c, *h);
                if (res.failed) {
                    out.status = ChaseOutcome::Status::Failed;
                    out.clash = res.clash;
                    if (opt.keep_trace)
                        out.trace.push_back({out.steps, idx, render_witness(c, *h),
                                             "FAIL " + res.clash.first.render() + " = " +
                                                 res.clash.second.render()});
                    return out;
                }
                out.instance = std::move(res.instance);
                out.merges.push_back(res.substituted);
                if (opt.keep_trace)
                    out.trace.push_back({out.steps, idx, render_witness(c, *h),
                                         "merge " + res.substituted.first.render() + " -> " +
                                             res.substituted.second.render()});
            }
        }
        if (!fired) {
            out.status = ChaseOutcome::Status::Terminated;
            return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Containment, universal plan, C&B
// ---------------------------------------------------------------------------

namespace {

struct Frozen {
    Instance instance;
    std::vector<Arg> head;                 // frozen head tuple
    std::map<std::string, long> var_null;  // variable -> null id
};

Frozen freeze(const CQ& q) {
    Frozen f;
    long next = 0;
    auto freeze_arg = [&](const Arg& a) -> Arg {
        if (!a.is_var()) return a;
        auto it = f.var_null.find(a.name);
        if (it == f.var_null.end()) it = f.var_null.emplace(a.name, ++next).first;
        return Arg::null(it->second);
    };
    for (const Atom& a : q.body) {
        Atom g;
        g.rel = a.rel;
        for (const Arg& x : a.args) g.args.push_back(freeze_arg(x));
        f.instance.insert(std::move(g));
    }
    for (const Arg& h : q.head) f.head.push_back(freeze_arg(h));
    return f;
}

}  // namespace

ContainmentResult contained_in(const CQ& q, const CQ& q2, const Sigma& sigma, long budget) {
    if (q.head.size() != q2.head.size())
        throw std::invalid_argument("containment check on queries of different head arity");
    Frozen f = freeze(q);
    ChaseOptions opt;
    opt.budget = budget;
    ChaseOutcome res = chase(f.instance, sigma, opt);
    if (res.status == ChaseOutcome::Status::Failed) return {Tri::Yes, true};
    if (res.status == ChaseOutcome::Status::BudgetExceeded) return {Tri::Unknown, false};

    // seed: q2's head entries must land on q's (resolved) frozen head tuple
    Homomorphism seed;
    for (size_t i = 0; i < q2.head.size(); ++i) {
        Arg target = res.resolve(f.head[i]);
        const Arg& src = q2.head[i];
        if (src.is_const()) {
            if (src != target) return {Tri::No, false};
            continue;
        }
        auto it = seed.find(src);
        if (it != seed.end()) {
            if (it->second != target) return {Tri::No, false};
        } else {
            seed.emplace(src, target);
        }
    }
    bool found = find_homomorphism(q2.body, res.instance, seed).has_value();
    return {found ? Tri::Yes : Tri::No, false};
}

PlanResult universal_plan(const CQ& q, const Sigma& sigma, long budget) {
    PlanResult out;
    Frozen f = freeze(q);
    ChaseOptions opt;
    opt.budget = budget;
    ChaseOutcome res = chase(f.instance, sigma, opt);
    if (res.status == ChaseOutcome::Status::Failed) {
        out.status = PlanResult::Status::Unsatisfiable;
        return out;
    }
    if (res.status == ChaseOutcome::Status::BudgetExceeded) {
        out.status = PlanResult::Status::Unknown;
        return out;
    }

    // unfreeze: surviving nulls become variables again; frozen query
    // variables keep their names where they survived the merges
    std::map<Arg, std::string> null_var;
    for (const auto& [v, id] : f.var_null) {
        Arg survivor = res.resolve(Arg::null(id));
        if (survivor.is_null() && !null_var.count(survivor)) null_var.emplace(survivor, v);
    }
    std::set<std::string> used;
    for (auto& [n, v] : null_var) used.insert(v);
    long fresh = 0;
    auto unfreeze_arg = [&](const Arg& a) -> Arg {
        if (!a.is_null()) return a;
        auto it = null_var.find(a);
        if (it == null_var.end()) {
            std::string name;
            do {
                name = "z" + std::to_string(++fresh);
            } while (used.count(name));
            used.insert(name);
            it = null_var.emplace(a, name).first;
        }
        return Arg::var(it->second);
    };
    for (const Atom& a : res.instance) {
        Atom b;
        b.rel = a.rel;
        for (const Arg& x : a.args) b.args.push_back(unfreeze_arg(x));
        out.plan.body.push_back(std::move(b));
    }
    std::sort(out.plan.body.begin(), out.plan.body.end());
    for (const Arg& h : f.head) out.plan.head.push_back(unfreeze_arg(res.resolve(h)));
    out.plan.validate();
    return out;
}

bool isomorphic(const CQ& a, const CQ& b) {
    if (a.head.size() != b.head.size() || a.body.size() != b.body.size()) return false;
    std::set<std::string> va = vars(a.body), vb = vars(b.body);
    if (va.size() != vb.size()) return false;

    std::set<Atom> bset(b.body.begin(), b.body.end());
    std::set<Atom> aset(a.body.begin(), a.body.end());
    if (aset.size() != bset.size()) return false;

    std::vector<std::string> avars(va.begin(), va.end());
    std::vector<std::string> bvars(vb.begin(), vb.end());
    std::map<std::string, std::string> assign;
    std::set<std::string> taken;

    // backtracking over bijective variable assignments
    std::function<bool(size_t)> go = [&](size_t i) -> bool {
        if (i == avars.size()) {
            Homomorphism h;
            for (auto& [x, y] : assign) h.emplace(Arg::var(x), Arg::var(y));
            std::set<Atom> mapped;
            for (const Atom& at : a.body) mapped.insert(apply_hom(h, at));
            if (mapped != bset) return false;
            for (size_t k = 0; k < a.head.size(); ++k) {
                Arg lhs = apply_hom(h, a.head[k]);
                if (lhs != b.head[k]) return false;
            }
            return true;
        }
        for (const std::string& cand : bvars) {
            if (taken.count(cand)) continue;
            assign[avars[i]] = cand;
            taken.insert(cand);
            if (go(i + 1)) return true;
            taken.erase(cand);
            assign.erase(avars[i]);
        }
        return false;
    };
    return go(0);
}

CbResult cb(const CQ& q, const Sigma& sigma, long budget, int atom_cap) {
    CbResult out;
    PlanResult u = universal_plan(q, sigma, budget);
    if (u.status == PlanResult::Status::Unsatisfiable) {
        out.status = CbResult::Status::Unsatisfiable;
        out.note = "canonical chase of the query failed; the query has no models under the constraints";
        return out;
    }
    if (u.status == PlanResult::Status::Unknown) {
        out.status = CbResult::Status::Unknown;
        out.note = "chase budget exceeded while computing the universal plan";
        return out;
    }
    const CQ& plan = u.plan;
    size_t n = plan.body.size();
    if (static_cast<int>(n) > atom_cap) {
        out.status = CbResult::Status::AtomCapExceeded;
        out.note = "universal plan has " + std::to_string(n) + " atoms, cap is " +
                   std::to_string(atom_cap) + "; raise the cap to enumerate sub-queries";
        return out;
    }

    std::set<std::string> head_vars;
    for (const Arg& h : plan.head)
        if (h.is_var()) head_vars.insert(h.name);

    // enumerate sub-bodies by increasing size; the first size with a
    // Sigma-equivalent sub-query yields all minimal rewritings
    for (size_t size = 1; size <= n; ++size) {
        std::vector<CQ> found;
        std::vector<size_t> idx(size);
        std::function<bool(size_t, size_t)> comb = [&](size_t start, size_t k) -> bool {
            if (k == size) {
                CQ cand;
                cand.head = plan.head;
                for (size_t i : idx) cand.body.push_back(plan.body[i]);
                std::set<std::string> bv = vars(cand.body);
                for (const std::string& hv : head_vars)
                    if (!bv.count(hv)) return true;  // head not covered, skip
                ContainmentResult fwd = contained_in(cand, q, sigma, budget);
                if (fwd.value == Tri::Unknown) {
                    out.status = CbResult::Status::Unknown;
                    out.note = "chase budget exceeded during a backchase containment check";
                    return false;
                }
                if (fwd.value == Tri::No) return true;
                ContainmentResult bwd = contained_in(q, cand, sigma, budget);
                if (bwd.value == Tri::Unknown) {
                    out.status = CbResult::Status::Unknown;
                    out.note = "chase budget exceeded during a backchase containment check";
                    return false;
                }
                if (bwd.value == Tri::No) return true;
                for (const CQ& kept : found)
                    if (isomorphic(kept, cand)) return true;
                found.push_back(std::move(cand));
                return true;
            }
            for (size_t i = start; i < n; ++i) {
                idx[k] = i;
                if (!comb(i + 1, k + 1)) return false;
            }
            return true;
        };
        if (!comb(0, 0)) return out;  // unknown bubbled up
        if (!found.empty()) {
            out.rewrites = std::move(found);
            return out;
        }
    }
    return out;  // empty: no sub-body equivalent (cannot happen, the full plan qualifies)
}

}  // namespace sparqlopt
