#include "sparqlopt/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace sparqlopt {

Mapping::Mapping(std::initializer_list<std::pair<std::string, Term>> init) {
    for (auto& [v, t] : init) bindings_.emplace(v, t);
}

const Term* Mapping::get(const std::string& var) const {
    auto it = bindings_.find(var);
    return it == bindings_.end() ? nullptr : &it->second;
}

void Mapping::bind(const std::string& var, Term value) {
    bindings_.insert_or_assign(var, std::move(value));
}

std::set<std::string> Mapping::domain() const {
    std::set<std::string> out;
    for (auto& [v, t] : bindings_) out.insert(v);
    return out;
}

Mapping Mapping::restrict(const std::set<std::string>& s) const {
    Mapping out;
    for (auto& [v, t] : bindings_)
        if (s.count(v)) out.bindings_.emplace(v, t);
    return out;
}

std::string Mapping::render() const {
    std::string s = "{";
    bool first = true;
    for (auto& [v, t] : bindings_) {
        if (!first) s += ", ";
        first = false;
        s += "?" + v + " -> " + t.render();
    }
    return s + "}";
}

Mapping Mapping::parse(std::string_view text) {
    auto fail = [&] { throw ParseError("bad mapping syntax: " + std::string(text)); };
    size_t b = text.find('{');
    size_t e = text.rfind('}');
    if (b == std::string_view::npos || e == std::string_view::npos || e < b) fail();
    std::string_view inner = text.substr(b + 1, e - b - 1);
    Mapping out;
    size_t pos = 0;
    while (pos < inner.size()) {
        size_t comma = inner.find(',', pos);
        std::string_view item =
            inner.substr(pos, comma == std::string_view::npos ? inner.size() - pos : comma - pos);
        pos = comma == std::string_view::npos ? inner.size() : comma + 1;
        size_t arrow = item.find("->");
        if (arrow == std::string_view::npos) {
            if (item.find_first_not_of(" \t") == std::string_view::npos) continue;
            fail();
        }
        auto trim = [](std::string_view s) {
            size_t x = s.find_first_not_of(" \t");
            size_t y = s.find_last_not_of(" \t");
            return x == std::string_view::npos ? std::string_view{} : s.substr(x, y - x + 1);
        };
        Term var = Term::parse(trim(item.substr(0, arrow)));
        Term val = Term::parse(trim(item.substr(arrow + 2)));
        if (!var.is_variable() || val.is_variable()) fail();
        out.bind(var.text(), val);
    }
    return out;
}

bool compatible(const Mapping& a, const Mapping& b) {
    // walk the smaller one
    const Mapping& small = a.size() <= b.size() ? a : b;
    const Mapping& big = a.size() <= b.size() ? b : a;
    for (auto& [v, t] : small.bindings()) {
        const Term* other = big.get(v);
        if (other && *other != t) return false;
    }
    return true;
}

Mapping merge(const Mapping& a, const Mapping& b) {
    Mapping out = a;
    for (auto& [v, t] : b.bindings()) out.bind(v, t);
    return out;
}

std::string render(const MappingSet& set) {
    std::ostringstream out;
    for (const Mapping& mu : set) out << mu.render() << "\n";
    return out.str();
}

MappingSet join(const MappingSet& l, const MappingSet& r) {
    MappingSet out;
    for (const Mapping& ml : l)
        for (const Mapping& mr : r)
            if (compatible(ml, mr)) out.insert(merge(ml, mr));
    return out;
}

MappingSet set_union(const MappingSet& l, const MappingSet& r) {
    MappingSet out = l;
    out.insert(r.begin(), r.end());
    return out;
}

MappingSet minus(const MappingSet& l, const MappingSet& r) {
    MappingSet out;
    for (const Mapping& ml : l) {
        bool any = false;
        for (const Mapping& mr : r)
            if (compatible(ml, mr)) {
                any = true;
                break;
            }
        if (!any) out.insert(ml);
    }
    return out;
}

MappingSet left_outer_join(const MappingSet& l, const MappingSet& r) {
    return set_union(join(l, r), minus(l, r));
}

MappingSet project(const std::set<std::string>& s, const MappingSet& omega) {
    MappingSet out;
    for (const Mapping& mu : omega) out.insert(mu.restrict(s));
    return out;
}

MappingSet select(const FilterCondition& cond, const MappingSet& omega) {
    MappingSet out;
    for (const Mapping& mu : omega)
        if (satisfies(mu, cond)) out.insert(mu);
    return out;
}

bool satisfies(const Mapping& mu, const FilterCondition& cond) {
    switch (cond.kind) {
        case FilterCondition::Kind::Bound: return mu.bound(cond.var);
        case FilterCondition::Kind::EqConst: {
            const Term* t = mu.get(cond.var);
            return t && *t == cond.constant;
        }
        case FilterCondition::Kind::EqVar: {
            const Term* a = mu.get(cond.var);
            const Term* b = mu.get(cond.var2);
            return a && b && *a == *b;
        }
        case FilterCondition::Kind::Not: return !satisfies(mu, *cond.lhs);
        case FilterCondition::Kind::And: return satisfies(mu, *cond.lhs) && satisfies(mu, *cond.rhs);
        case FilterCondition::Kind::Or: return satisfies(mu, *cond.lhs) || satisfies(mu, *cond.rhs);
    }
    return false;
}

AlgPtr AlgebraExpr::leaf(TriplePattern t) {
    auto a = std::make_shared<AlgebraExpr>();
    a->op = Op::Leaf;
    a->pattern = std::move(t);
    return a;
}

static AlgPtr make_binary(AlgebraExpr::Op op, AlgPtr l, AlgPtr r) {
    auto a = std::make_shared<AlgebraExpr>();
    a->op = op;
    a->left = std::move(l);
    a->right = std::move(r);
    return a;
}

AlgPtr AlgebraExpr::join(AlgPtr l, AlgPtr r) { return make_binary(Op::Join, std::move(l), std::move(r)); }
AlgPtr AlgebraExpr::set_union(AlgPtr l, AlgPtr r) { return make_binary(Op::Union, std::move(l), std::move(r)); }
AlgPtr AlgebraExpr::minus(AlgPtr l, AlgPtr r) { return make_binary(Op::Minus, std::move(l), std::move(r)); }
AlgPtr AlgebraExpr::left_join(AlgPtr l, AlgPtr r) { return make_binary(Op::LeftJoin, std::move(l), std::move(r)); }

AlgPtr AlgebraExpr::project(std::set<std::string> s, AlgPtr child) {
    auto a = std::make_shared<AlgebraExpr>();
    a->op = Op::Project;
    a->proj = std::move(s);
    a->left = std::move(child);
    return a;
}

AlgPtr AlgebraExpr::select(FilterPtr cond, AlgPtr child) {
    auto a = std::make_shared<AlgebraExpr>();
    a->op = Op::Select;
    a->cond = std::move(cond);
    a->left = std::move(child);
    return a;
}

AlgPtr AlgebraExpr::empty() {
    auto a = std::make_shared<AlgebraExpr>();
    a->op = Op::Empty;
    return a;
}

std::string AlgebraExpr::render() const {
    switch (op) {
        case Op::Leaf: return "[[" + pattern.render() + "]]";
        case Op::Join: return "(" + left->render() + " JOIN " + right->render() + ")";
        case Op::Union: return "(" + left->render() + " UNION " + right->render() + ")";
        case Op::Minus: return "(" + left->render() + " MINUS " + right->render() + ")";
        case Op::LeftJoin: return "(" + left->render() + " LEFTJOIN " + right->render() + ")";
        case Op::Project: {
            std::string s = "PROJECT{";
            bool first = true;
            for (auto& v : proj) {
                if (!first) s += ",";
                first = false;
                s += "?" + v;
            }
            return s + "}(" + left->render() + ")";
        }
        case Op::Select: return "SELECT{" + cond->render() + "}(" + left->render() + ")";
        case Op::Empty: return "EMPTY";
    }
    return {};
}

bool equal(const AlgPtr& a, const AlgPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op) return false;
    switch (a->op) {
        case AlgebraExpr::Op::Leaf: return a->pattern == b->pattern;
        case AlgebraExpr::Op::Empty: return true;
        case AlgebraExpr::Op::Project: return a->proj == b->proj && equal(a->left, b->left);
        case AlgebraExpr::Op::Select: return equal(a->cond, b->cond) && equal(a->left, b->left);
        default: return equal(a->left, b->left) && equal(a->right, b->right);
    }
}

std::set<std::string> vars(const AlgebraExpr& a) {
    switch (a.op) {
        case AlgebraExpr::Op::Leaf: return vars(a.pattern);
        case AlgebraExpr::Op::Empty: return {};
        case AlgebraExpr::Op::Project: {
            // the variables that can appear in results
            auto inner = vars(*a.left);
            std::set<std::string> out;
            std::set_intersection(inner.begin(), inner.end(), a.proj.begin(), a.proj.end(),
                                  std::inserter(out, out.begin()));
            return out;
        }
        case AlgebraExpr::Op::Select: {
            auto out = vars(*a.left);
            auto c = vars(*a.cond);
            out.insert(c.begin(), c.end());
            return out;
        }
        default: {
            auto out = vars(*a.left);
            auto r = vars(*a.right);
            out.insert(r.begin(), r.end());
            return out;
        }
    }
}

std::set<std::string> safe_vars(const AlgebraExpr& a) {
    switch (a.op) {
        case AlgebraExpr::Op::Leaf: return vars(a.pattern);
        case AlgebraExpr::Op::Empty: return {};
        case AlgebraExpr::Op::Join: {
            auto out = safe_vars(*a.left);
            auto r = safe_vars(*a.right);
            out.insert(r.begin(), r.end());
            return out;
        }
        case AlgebraExpr::Op::Union: {
            auto l = safe_vars(*a.left);
            auto r = safe_vars(*a.right);
            std::set<std::string> out;
            std::set_intersection(l.begin(), l.end(), r.begin(), r.end(),
                                  std::inserter(out, out.begin()));
            return out;
        }
        case AlgebraExpr::Op::Minus:
        case AlgebraExpr::Op::LeftJoin:
        case AlgebraExpr::Op::Select: return safe_vars(*a.left);
        case AlgebraExpr::Op::Project: {
            auto l = safe_vars(*a.left);
            std::set<std::string> out;
            std::set_intersection(l.begin(), l.end(), a.proj.begin(), a.proj.end(),
                                  std::inserter(out, out.begin()));
            return out;
        }
    }
    return {};
}

bool is_union_projection_free(const AlgebraExpr& a) {
    switch (a.op) {
        case AlgebraExpr::Op::Leaf: return true;
        case AlgebraExpr::Op::Union:
        case AlgebraExpr::Op::Project:
        case AlgebraExpr::Op::Empty: return false;
        case AlgebraExpr::Op::Select: return is_union_projection_free(*a.left);
        default:
            return is_union_projection_free(*a.left) && is_union_projection_free(*a.right);
    }
}

AlgPtr translate(const SparqlExpr& e) {
    switch (e.op) {
        case SparqlExpr::Op::Pattern: return AlgebraExpr::leaf(e.pattern);
        case SparqlExpr::Op::And: return AlgebraExpr::join(translate(*e.left), translate(*e.right));
        case SparqlExpr::Op::Union:
            return AlgebraExpr::set_union(translate(*e.left), translate(*e.right));
        case SparqlExpr::Op::Opt:
            return AlgebraExpr::left_join(translate(*e.left), translate(*e.right));
        case SparqlExpr::Op::Filter: return AlgebraExpr::select(e.cond, translate(*e.left));
    }
    return nullptr;
}

AlgPtr translate(const SparqlQuery& q) {
    return AlgebraExpr::project(q.projection, translate(*q.body));
}

namespace {

// Matches one triple pattern against one triple; extends mu on success.
bool unify(const TriplePattern& t, const Triple& triple, Mapping& mu) {
    const std::pair<const Term*, const Term*> slots[3] = {
        {&t.subject, &triple.subject}, {&t.predicate, &triple.predicate}, {&t.object, &triple.object}};
    for (auto [pat, val] : slots) {
        if (pat->is_variable()) {
            const Term* bound = mu.get(pat->text());
            if (bound) {
                if (*bound != *val) return false;
            } else {
                mu.bind(pat->text(), *val);
            }
        } else if (*pat != *val) {
            return false;
        }
    }
    return true;
}

MappingSet evaluate_leaf(const TriplePattern& t, const Document& d) {
    MappingSet out;
    for (const Triple& triple : d) {
        Mapping mu;
        if (unify(t, triple, mu)) out.insert(std::move(mu));
    }
    return out;
}

}  // namespace

MappingSet evaluate(const AlgebraExpr& a, const Document& d) {
    switch (a.op) {
        case AlgebraExpr::Op::Leaf: return evaluate_leaf(a.pattern, d);
        case AlgebraExpr::Op::Empty: return {};
        case AlgebraExpr::Op::Join: return join(evaluate(*a.left, d), evaluate(*a.right, d));
        case AlgebraExpr::Op::Union: return set_union(evaluate(*a.left, d), evaluate(*a.right, d));
        case AlgebraExpr::Op::Minus: return minus(evaluate(*a.left, d), evaluate(*a.right, d));
        case AlgebraExpr::Op::LeftJoin:
            return left_outer_join(evaluate(*a.left, d), evaluate(*a.right, d));
        case AlgebraExpr::Op::Project: return project(a.proj, evaluate(*a.left, d));
        case AlgebraExpr::Op::Select: return select(*a.cond, evaluate(*a.left, d));
    }
    return {};
}

MappingSet evaluate(const SparqlExpr& e, const Document& d) { return evaluate(*translate(e), d); }

MappingSet evaluate(const SparqlQuery& q, const Document& d) { return evaluate(*translate(q), d); }

bool membership(const Mapping& mu, const Document& d, const SparqlExpr& e) {
    return evaluate(e, d).count(mu) != 0;
}

bool membership(const Mapping& mu, const Document& d, const SparqlQuery& q) {
    return evaluate(q, d).count(mu) != 0;
}

}  // namespace sparqlopt
