#include "sparqlopt/rewrite.hpp"

#include <algorithm>

namespace sparqlopt {

namespace {

using Op = AlgebraExpr::Op;
using FK = FilterCondition::Kind;

bool upf(const AlgPtr& a) { return is_union_projection_free(*a); }

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::set<std::string> intersect(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

bool is_not_bound(const FilterPtr& c, std::string& var) {
    if (c->kind == FK::Not && c->lhs->kind == FK::Bound) {
        var = c->lhs->var;
        return true;
    }
    return false;
}

bool conj_of_equalities(const FilterPtr& c) {
    switch (c->kind) {
        case FK::EqConst:
        case FK::EqVar: return true;
        case FK::And: return conj_of_equalities(c->lhs) && conj_of_equalities(c->rhs);
        default: return false;
    }
}

// Weak precondition of footnote 6: R is a conjunction of atomic equalities,
// vars(R) subset of vars(A), vars(B) cap vars(R) subset of safeVars(A).
bool weak_push_ok(const FilterPtr& r, const AlgPtr& a, const AlgPtr& b) {
    if (!conj_of_equalities(r)) return false;
    auto rv = vars(*r);
    if (!subset(rv, vars(*a))) return false;
    return subset(intersect(vars(*b), rv), safe_vars(*a));
}

// Computes the replacement if `rule` applies at node `n` in direction `dir`,
// null otherwise. All side conditions are checked here.
AlgPtr try_rule(RuleId rule, Direction dir, const AlgPtr& n) {
    const bool fwd = dir == Direction::Forward;
    switch (rule) {
        case RuleId::UIdem:
            if (fwd) {
                if (n->op == Op::Union && equal(n->left, n->right)) return n->left;
            } else {
                return AlgebraExpr::set_union(n, n);
            }
            return nullptr;
        case RuleId::JIdem:
            if (fwd) {
                if (n->op == Op::Join && equal(n->left, n->right) && upf(n->left)) return n->left;
            } else if (upf(n)) {
                return AlgebraExpr::join(n, n);
            }
            return nullptr;
        case RuleId::LIdem:
            if (fwd) {
                if (n->op == Op::LeftJoin && equal(n->left, n->right) && upf(n->left))
                    return n->left;
            } else if (upf(n)) {
                return AlgebraExpr::left_join(n, n);
            }
            return nullptr;
        case RuleId::Inv:
            if (fwd && n->op == Op::Minus && equal(n->left, n->right)) return AlgebraExpr::empty();
            return nullptr;
        case RuleId::UAss:
            if (fwd) {
                if (n->op == Op::Union && n->left->op == Op::Union)
                    return AlgebraExpr::set_union(
                        n->left->left, AlgebraExpr::set_union(n->left->right, n->right));
            } else {
                if (n->op == Op::Union && n->right->op == Op::Union)
                    return AlgebraExpr::set_union(
                        AlgebraExpr::set_union(n->left, n->right->left), n->right->right);
            }
            return nullptr;
        case RuleId::JAss:
            if (fwd) {
                if (n->op == Op::Join && n->left->op == Op::Join)
                    return AlgebraExpr::join(n->left->left,
                                             AlgebraExpr::join(n->left->right, n->right));
            } else {
                if (n->op == Op::Join && n->right->op == Op::Join)
                    return AlgebraExpr::join(AlgebraExpr::join(n->left, n->right->left),
                                             n->right->right);
            }
            return nullptr;
        case RuleId::UComm:
            if (n->op == Op::Union) return AlgebraExpr::set_union(n->right, n->left);
            return nullptr;
        case RuleId::JComm:
            if (n->op == Op::Join) return AlgebraExpr::join(n->right, n->left);
            return nullptr;
        case RuleId::JUDistR:
            if (fwd) {
                if (n->op == Op::Join && n->left->op == Op::Union)
                    return AlgebraExpr::set_union(
                        AlgebraExpr::join(n->left->left, n->right),
                        AlgebraExpr::join(n->left->right, n->right));
            } else {
                if (n->op == Op::Union && n->left->op == Op::Join && n->right->op == Op::Join &&
                    equal(n->left->right, n->right->right))
                    return AlgebraExpr::join(
                        AlgebraExpr::set_union(n->left->left, n->right->left), n->left->right);
            }
            return nullptr;
        case RuleId::JUDistL:
            if (fwd) {
                if (n->op == Op::Join && n->right->op == Op::Union)
                    return AlgebraExpr::set_union(
                        AlgebraExpr::join(n->left, n->right->left),
                        AlgebraExpr::join(n->left, n->right->right));
            } else {
                if (n->op == Op::Union && n->left->op == Op::Join && n->right->op == Op::Join &&
                    equal(n->left->left, n->right->left))
                    return AlgebraExpr::join(
                        n->left->left, AlgebraExpr::set_union(n->left->right, n->right->right));
            }
            return nullptr;
        case RuleId::MUDistR:
            if (fwd) {
                if (n->op == Op::Minus && n->left->op == Op::Union)
                    return AlgebraExpr::set_union(
                        AlgebraExpr::minus(n->left->left, n->right),
                        AlgebraExpr::minus(n->left->right, n->right));
            } else {
                if (n->op == Op::Union && n->left->op == Op::Minus && n->right->op == Op::Minus &&
                    equal(n->left->right, n->right->right))
                    return AlgebraExpr::minus(
                        AlgebraExpr::set_union(n->left->left, n->right->left), n->left->right);
            }
            return nullptr;
        case RuleId::LUDistR:
            if (fwd) {
                if (n->op == Op::LeftJoin && n->left->op == Op::Union)
                    return AlgebraExpr::set_union(
                        AlgebraExpr::left_join(n->left->left, n->right),
                        AlgebraExpr::left_join(n->left->right, n->right));
            } else {
                if (n->op == Op::Union && n->left->op == Op::LeftJoin &&
                    n->right->op == Op::LeftJoin && equal(n->left->right, n->right->right))
                    return AlgebraExpr::left_join(
                        AlgebraExpr::set_union(n->left->left, n->right->left), n->left->right);
            }
            return nullptr;
        case RuleId::SUPush:
            if (fwd) {
                if (n->op == Op::Select && n->left->op == Op::Union)
                    return AlgebraExpr::set_union(AlgebraExpr::select(n->cond, n->left->left),
                                                  AlgebraExpr::select(n->cond, n->left->right));
            } else {
                if (n->op == Op::Union && n->left->op == Op::Select &&
                    n->right->op == Op::Select && equal(n->left->cond, n->right->cond))
                    return AlgebraExpr::select(
                        n->left->cond, AlgebraExpr::set_union(n->left->left, n->right->left));
            }
            return nullptr;
        case RuleId::SDecompI:
            if (fwd) {
                if (n->op == Op::Select && n->cond->kind == FK::And)
                    return AlgebraExpr::select(n->cond->lhs,
                                               AlgebraExpr::select(n->cond->rhs, n->left));
            } else {
                if (n->op == Op::Select && n->left->op == Op::Select)
                    return AlgebraExpr::select(
                        FilterCondition::conjunction(n->cond, n->left->cond), n->left->left);
            }
            return nullptr;
        case RuleId::SDecompII:
            if (fwd) {
                if (n->op == Op::Select && n->cond->kind == FK::Or)
                    return AlgebraExpr::set_union(AlgebraExpr::select(n->cond->lhs, n->left),
                                                  AlgebraExpr::select(n->cond->rhs, n->left));
            } else {
                if (n->op == Op::Union && n->left->op == Op::Select &&
                    n->right->op == Op::Select && equal(n->left->left, n->right->left))
                    return AlgebraExpr::select(
                        FilterCondition::disjunction(n->left->cond, n->right->cond),
                        n->left->left);
            }
            return nullptr;
        case RuleId::SReord:
            if (n->op == Op::Select && n->left->op == Op::Select)
                return AlgebraExpr::select(n->left->cond,
                                           AlgebraExpr::select(n->cond, n->left->left));
            return nullptr;
        case RuleId::BndI:
            if (fwd && n->op == Op::Select && n->cond->kind == FK::Bound &&
                safe_vars(*n->left).count(n->cond->var))
                return n->left;
            return nullptr;
        case RuleId::BndII:
            if (fwd && n->op == Op::Select && n->cond->kind == FK::Bound &&
                !vars(*n->left).count(n->cond->var))
                return AlgebraExpr::empty();
            return nullptr;
        case RuleId::BndIII: {
            std::string x;
            if (fwd && n->op == Op::Select && is_not_bound(n->cond, x) &&
                safe_vars(*n->left).count(x))
                return AlgebraExpr::empty();
            return nullptr;
        }
        case RuleId::BndIV: {
            std::string x;
            if (fwd && n->op == Op::Select && is_not_bound(n->cond, x) && !vars(*n->left).count(x))
                return n->left;
            return nullptr;
        }
        case RuleId::BndV:
            if (fwd && n->op == Op::Select && n->cond->kind == FK::Bound &&
                n->left->op == Op::LeftJoin) {
                const std::string& x = n->cond->var;
                if (safe_vars(*n->left->right).count(x) && !vars(*n->left->left).count(x))
                    return AlgebraExpr::join(n->left->left, n->left->right);
            }
            return nullptr;
        case RuleId::SJPush:
            if (fwd) {
                if (n->op == Op::Select && n->left->op == Op::Join &&
                    subset(vars(*n->cond), safe_vars(*n->left->left)))
                    return AlgebraExpr::join(AlgebraExpr::select(n->cond, n->left->left),
                                             n->left->right);
            } else {
                if (n->op == Op::Join && n->left->op == Op::Select &&
                    subset(vars(*n->left->cond), safe_vars(*n->left->left)))
                    return AlgebraExpr::select(n->left->cond,
                                               AlgebraExpr::join(n->left->left, n->right));
            }
            return nullptr;
        case RuleId::SMPush:
            if (fwd) {
                if (n->op == Op::Select && n->left->op == Op::Minus &&
                    subset(vars(*n->cond), safe_vars(*n->left->left)))
                    return AlgebraExpr::minus(AlgebraExpr::select(n->cond, n->left->left),
                                              n->left->right);
            } else {
                if (n->op == Op::Minus && n->left->op == Op::Select &&
                    subset(vars(*n->left->cond), safe_vars(*n->left->left)))
                    return AlgebraExpr::select(n->left->cond,
                                               AlgebraExpr::minus(n->left->left, n->right));
            }
            return nullptr;
        case RuleId::SLPush:
            if (fwd) {
                if (n->op == Op::Select && n->left->op == Op::LeftJoin &&
                    subset(vars(*n->cond), safe_vars(*n->left->left)))
                    return AlgebraExpr::left_join(AlgebraExpr::select(n->cond, n->left->left),
                                                  n->left->right);
            } else {
                if (n->op == Op::LeftJoin && n->left->op == Op::Select &&
                    subset(vars(*n->left->cond), safe_vars(*n->left->left)))
                    return AlgebraExpr::select(n->left->cond,
                                               AlgebraExpr::left_join(n->left->left, n->right));
            }
            return nullptr;
        case RuleId::MReord:
            if (n->op == Op::Minus && n->left->op == Op::Minus)
                return AlgebraExpr::minus(AlgebraExpr::minus(n->left->left, n->right),
                                          n->left->right);
            return nullptr;
        case RuleId::MMUCorr:
            if (fwd) {
                if (n->op == Op::Minus && n->left->op == Op::Minus)
                    return AlgebraExpr::minus(
                        n->left->left, AlgebraExpr::set_union(n->left->right, n->right));
            } else {
                if (n->op == Op::Minus && n->right->op == Op::Union)
                    return AlgebraExpr::minus(AlgebraExpr::minus(n->left, n->right->left),
                                              n->right->right);
            }
            return nullptr;
        case RuleId::MJ:
            if (fwd) {
                if (n->op == Op::Minus)
                    return AlgebraExpr::minus(n->left, AlgebraExpr::join(n->left, n->right));
            } else {
                if (n->op == Op::Minus && n->right->op == Op::Join &&
                    equal(n->left, n->right->left))
                    return AlgebraExpr::minus(n->left, n->right->right);
            }
            return nullptr;
        case RuleId::LJ:
            if (fwd) {
                if (n->op == Op::LeftJoin && upf(n->left) && upf(n->right))
                    return AlgebraExpr::left_join(n->left, AlgebraExpr::join(n->left, n->right));
            } else {
                if (n->op == Op::LeftJoin && n->right->op == Op::Join &&
                    equal(n->left, n->right->left) && upf(n->left) && upf(n->right->right))
                    return AlgebraExpr::left_join(n->left, n->right->right);
            }
            return nullptr;
        case RuleId::NegBndMinus: {
            std::string x;
            if (fwd && n->op == Op::Select && is_not_bound(n->cond, x) &&
                n->left->op == Op::LeftJoin && upf(n->left->left) && upf(n->left->right) &&
                safe_vars(*n->left->right).count(x) && !vars(*n->left->left).count(x))
                return AlgebraExpr::minus(n->left->left, n->left->right);
            return nullptr;
        }
        case RuleId::WeakFilterPush:
            if (fwd) {
                if (n->op == Op::Select &&
                    (n->left->op == Op::Join || n->left->op == Op::Minus ||
                     n->left->op == Op::LeftJoin) &&
                    weak_push_ok(n->cond, n->left->left, n->left->right)) {
                    AlgPtr pushed = AlgebraExpr::select(n->cond, n->left->left);
                    if (n->left->op == Op::Join) return AlgebraExpr::join(pushed, n->left->right);
                    if (n->left->op == Op::Minus) return AlgebraExpr::minus(pushed, n->left->right);
                    return AlgebraExpr::left_join(pushed, n->left->right);
                }
            } else {
                if ((n->op == Op::Join || n->op == Op::Minus || n->op == Op::LeftJoin) &&
                    n->left->op == Op::Select &&
                    weak_push_ok(n->left->cond, n->left->left, n->right)) {
                    AlgPtr inner;
                    if (n->op == Op::Join) inner = AlgebraExpr::join(n->left->left, n->right);
                    else if (n->op == Op::Minus) inner = AlgebraExpr::minus(n->left->left, n->right);
                    else inner = AlgebraExpr::left_join(n->left->left, n->right);
                    return AlgebraExpr::select(n->left->cond, inner);
                }
            }
            return nullptr;
    }
    return nullptr;
}

int arity(const AlgebraExpr& a) {
    switch (a.op) {
        case Op::Leaf:
        case Op::Empty: return 0;
        case Op::Project:
        case Op::Select: return 1;
        default: return 2;
    }
}

void positions_post_order(const AlgPtr& node, TreePos& cur, std::vector<TreePos>& out) {
    int k = arity(*node);
    if (k >= 1) {
        cur.push_back(0);
        positions_post_order(node->left, cur, out);
        cur.pop_back();
    }
    if (k == 2) {
        cur.push_back(1);
        positions_post_order(node->right, cur, out);
        cur.pop_back();
    }
    out.push_back(cur);
}

}  // namespace

const char* rule_name(RuleId r) {
    switch (r) {
        case RuleId::UIdem: return "UIdem";
        case RuleId::JIdem: return "JIdem";
        case RuleId::LIdem: return "LIdem";
        case RuleId::Inv: return "Inv";
        case RuleId::UAss: return "UAss";
        case RuleId::JAss: return "JAss";
        case RuleId::UComm: return "UComm";
        case RuleId::JComm: return "JComm";
        case RuleId::JUDistR: return "JUDistR";
        case RuleId::JUDistL: return "JUDistL";
        case RuleId::MUDistR: return "MUDistR";
        case RuleId::LUDistR: return "LUDistR";
        case RuleId::SUPush: return "SUPush";
        case RuleId::SDecompI: return "SDecompI";
        case RuleId::SDecompII: return "SDecompII";
        case RuleId::SReord: return "SReord";
        case RuleId::BndI: return "BndI";
        case RuleId::BndII: return "BndII";
        case RuleId::BndIII: return "BndIII";
        case RuleId::BndIV: return "BndIV";
        case RuleId::BndV: return "BndV";
        case RuleId::SJPush: return "SJPush";
        case RuleId::SMPush: return "SMPush";
        case RuleId::SLPush: return "SLPush";
        case RuleId::MReord: return "MReord";
        case RuleId::MMUCorr: return "MMUCorr";
        case RuleId::MJ: return "MJ";
        case RuleId::LJ: return "LJ";
        case RuleId::NegBndMinus: return "NegBndMinus";
        case RuleId::WeakFilterPush: return "WeakFilterPush";
    }
    return "?";
}

std::vector<RuleId> all_rules() {
    return {RuleId::UIdem,   RuleId::JIdem,    RuleId::LIdem,   RuleId::Inv,
            RuleId::UAss,    RuleId::JAss,     RuleId::UComm,   RuleId::JComm,
            RuleId::JUDistR, RuleId::JUDistL,  RuleId::MUDistR, RuleId::LUDistR,
            RuleId::SUPush,  RuleId::SDecompI, RuleId::SDecompII, RuleId::SReord,
            RuleId::BndI,    RuleId::BndII,    RuleId::BndIII,  RuleId::BndIV,
            RuleId::BndV,    RuleId::SJPush,   RuleId::SMPush,  RuleId::SLPush,
            RuleId::MReord,  RuleId::MMUCorr,  RuleId::MJ,      RuleId::LJ,
            RuleId::NegBndMinus, RuleId::WeakFilterPush};
}

AlgPtr subtree_at(const AlgPtr& root, const TreePos& pos) {
    AlgPtr cur = root;
    for (int step : pos) {
        if (step < 0 || step >= arity(*cur)) throw RewriteError("invalid tree position");
        cur = step == 0 ? cur->left : cur->right;
    }
    return cur;
}

AlgPtr replace_at(const AlgPtr& root, const TreePos& pos, AlgPtr replacement) {
    if (pos.empty()) return replacement;
    int step = pos.front();
    if (step < 0 || step >= arity(*root)) throw RewriteError("invalid tree position");
    TreePos rest(pos.begin() + 1, pos.end());
    auto copy = std::make_shared<AlgebraExpr>(*root);
    if (step == 0)
        copy->left = replace_at(root->left, rest, std::move(replacement));
    else
        copy->right = replace_at(root->right, rest, std::move(replacement));
    return copy;
}

std::string RewriteStep::render() const {
    std::string p = "[";
    for (size_t i = 0; i < pos.size(); ++i) {
        if (i) p += ".";
        p += std::to_string(pos[i]);
    }
    p += "]";
    return std::string(rule_name(rule)) + (dir == Direction::Forward ? " ->" : " <-") + " at " + p +
           ": " + before->render() + "  ==>  " + after->render();
}

std::vector<TreePos> applicable_sites(RuleId rule, Direction dir, const AlgPtr& root) {
    std::vector<TreePos> all;
    TreePos cur;
    positions_post_order(root, cur, all);
    std::vector<TreePos> out;
    for (const TreePos& p : all)
        if (try_rule(rule, dir, subtree_at(root, p))) out.push_back(p);
    return out;
}

AlgPtr apply_rule(RuleId rule, Direction dir, const AlgPtr& root, const TreePos& pos) {
    AlgPtr node = subtree_at(root, pos);
    AlgPtr repl = try_rule(rule, dir, node);
    if (!repl)
        throw RewriteError(std::string(rule_name(rule)) + " not applicable at the given site");
    return replace_at(root, pos, repl);
}

namespace {

// Applies the first (leftmost-innermost site, then rule priority) applicable
// rule; returns false at fixpoint.
bool apply_first(const std::vector<std::pair<RuleId, Direction>>& rules, AlgPtr& root,
                 RewriteTrace& trace) {
    std::vector<TreePos> all;
    TreePos cur;
    positions_post_order(root, cur, all);
    for (const TreePos& p : all) {
        AlgPtr node = subtree_at(root, p);
        for (auto [rule, dir] : rules) {
            if (AlgPtr repl = try_rule(rule, dir, node)) {
                trace.push_back({rule, dir, p, node, repl});
                root = replace_at(root, p, repl);
                return true;
            }
        }
    }
    return false;
}

}  // namespace

std::pair<AlgPtr, RewriteTrace> normalize_filters(const AlgPtr& root) {
    static const std::vector<std::pair<RuleId, Direction>> rules = {
        {RuleId::SDecompI, Direction::Forward}, {RuleId::BndI, Direction::Forward},
        {RuleId::BndII, Direction::Forward},    {RuleId::BndIII, Direction::Forward},
        {RuleId::BndIV, Direction::Forward},    {RuleId::BndV, Direction::Forward},
        {RuleId::SUPush, Direction::Forward},   {RuleId::SJPush, Direction::Forward},
        {RuleId::SMPush, Direction::Forward},   {RuleId::SLPush, Direction::Forward},
    };
    AlgPtr cur = root;
    RewriteTrace trace;
    while (apply_first(rules, cur, trace)) {}
    return {cur, trace};
}

std::pair<AlgPtr, RewriteTrace> extract_negation(const AlgPtr& root) {
    static const std::vector<std::pair<RuleId, Direction>> rules = {
        {RuleId::LJ, Direction::Backward},
        {RuleId::NegBndMinus, Direction::Forward},
    };
    AlgPtr cur = root;
    RewriteTrace trace;
    while (apply_first(rules, cur, trace)) {}
    return {cur, trace};
}

AlgPtr replay(const AlgPtr& source, const RewriteTrace& trace) {
    AlgPtr cur = source;
    for (const RewriteStep& step : trace) {
        AlgPtr node = subtree_at(cur, step.pos);
        if (!equal(node, step.before))
            throw RewriteError("trace replay mismatch at step " + step.render());
        AlgPtr repl = try_rule(step.rule, step.dir, node);
        if (!repl || !equal(repl, step.after))
            throw RewriteError("trace replay produced a different subtree at " + step.render());
        cur = replace_at(cur, step.pos, repl);
    }
    return cur;
}

}  // namespace sparqlopt
