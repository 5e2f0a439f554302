#include "sparqlopt/termination.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace sparqlopt {

PositionSet positions_of(const std::vector<Atom>& atoms) {
    PositionSet out;
    for (const Atom& a : atoms)
        for (size_t i = 0; i < a.args.size(); ++i)
            out.insert({a.rel, static_cast<int>(i) + 1});
    return out;
}

PositionSet positions_of_var(const std::vector<Atom>& atoms, const std::string& var) {
    PositionSet out;
    for (const Atom& a : atoms)
        for (size_t i = 0; i < a.args.size(); ++i)
            if (a.args[i].is_var() && a.args[i].name == var)
                out.insert({a.rel, static_cast<int>(i) + 1});
    return out;
}

PositionSet body_positions(const Constraint& c) { return positions_of(c.body); }

PositionSet body_positions(const Sigma& sigma) {
    PositionSet out;
    for (const Constraint& c : sigma) {
        auto p = body_positions(c);
        out.insert(p.begin(), p.end());
    }
    return out;
}

int PositionGraph::index_of(const Position& p) const {
    auto it = std::find(vertices.begin(), vertices.end(), p);
    return it == vertices.end() ? -1 : static_cast<int>(it - vertices.begin());
}

std::string SpecialCycle::render() const {
    if (!found) return "no cycle through a special edge";
    std::string s = "special-edge cycle:";
    for (const Position& p : cycle) s += " " + p.render();
    return s;
}

namespace {

bool subset_of(const PositionSet& a, const PositionSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Shared edge-construction for dep and prop. `only_affected`, when set,
// requires the universal variable to occur only in affected body positions.
void add_tgd_edges(const Constraint& c, PositionGraph& g,
                   const std::function<int(const Position&)>& vertex,
                   const PositionSet* only_affected) {
    if (!c.is_tgd()) return;
    std::set<std::string> ex(c.existentials.begin(), c.existentials.end());
    // existential positions in the head (shared targets of special edges)
    PositionSet ex_positions;
    for (const Atom& a : c.head)
        for (size_t i = 0; i < a.args.size(); ++i)
            if (a.args[i].is_var() && ex.count(a.args[i].name))
                ex_positions.insert({a.rel, static_cast<int>(i) + 1});

    std::set<std::string> head_universals;
    for (const Atom& a : c.head)
        for (const Arg& x : a.args)
            if (x.is_var() && !ex.count(x.name)) head_universals.insert(x.name);

    for (const std::string& x : head_universals) {
        PositionSet body_pos = positions_of_var(c.body, x);
        if (only_affected && !subset_of(body_pos, *only_affected)) continue;
        PositionSet head_pos = positions_of_var(c.head, x);
        for (const Position& p1 : body_pos) {
            int u = vertex(p1);
            if (u < 0) continue;
            for (const Position& p2 : head_pos) {
                int v = vertex(p2);
                if (v < 0) continue;
                g.edges.insert({u, v});
            }
            for (const Position& p2 : ex_positions) {
                int v = vertex(p2);
                if (v < 0) continue;
                g.edges.insert({u, v});
                g.special.insert({u, v});
            }
        }
    }
}

PositionGraph build_graph(const Sigma& sigma, const PositionSet& vertices,
                          const PositionSet* only_affected) {
    PositionGraph g;
    g.vertices.assign(vertices.begin(), vertices.end());
    auto vertex = [&](const Position& p) { return g.index_of(p); };
    for (const Constraint& c : sigma) add_tgd_edges(c, g, vertex, only_affected);
    return g;
}

}  // namespace

PositionGraph dependency_graph(const Sigma& sigma) {
    PositionSet verts;
    for (const Constraint& c : sigma) {
        if (!c.is_tgd()) continue;
        auto b = positions_of(c.body);
        auto h = positions_of(c.head);
        verts.insert(b.begin(), b.end());
        verts.insert(h.begin(), h.end());
    }
    return build_graph(sigma, verts, nullptr);
}

PositionSet affected_positions(const Sigma& sigma) {
    PositionSet aff;
    for (const Constraint& c : sigma) {
        if (!c.is_tgd()) continue;
        std::set<std::string> ex(c.existentials.begin(), c.existentials.end());
        for (const Atom& a : c.head)
            for (size_t i = 0; i < a.args.size(); ++i)
                if (a.args[i].is_var() && ex.count(a.args[i].name))
                    aff.insert({a.rel, static_cast<int>(i) + 1});
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Constraint& c : sigma) {
            if (!c.is_tgd()) continue;
            std::set<std::string> ex(c.existentials.begin(), c.existentials.end());
            for (const Atom& a : c.head)
                for (size_t i = 0; i < a.args.size(); ++i) {
                    const Arg& x = a.args[i];
                    if (!x.is_var() || ex.count(x.name)) continue;
                    PositionSet body_pos = positions_of_var(c.body, x.name);
                    if (body_pos.empty() || !subset_of(body_pos, aff)) continue;
                    Position p{a.rel, static_cast<int>(i) + 1};
                    if (aff.insert(p).second) changed = true;
                }
        }
    }
    return aff;
}

PositionGraph propagation_graph(const Sigma& sigma) {
    PositionSet aff = affected_positions(sigma);
    return build_graph(sigma, aff, &aff);
}

SpecialCycle find_special_cycle(const PositionGraph& g) {
    SpecialCycle out;
    size_t n = g.vertices.size();
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : g.edges) adj[u].push_back(v);
    for (auto [su, sv] : g.special) {
        // a cycle through (su, sv) exists iff su is reachable from sv
        std::vector<int> prev(n, -2);
        std::vector<int> stack{sv};
        prev[sv] = -1;
        bool reach = (sv == su);
        while (!stack.empty() && !reach) {
            int cur = stack.back();
            stack.pop_back();
            for (int nxt : adj[cur]) {
                if (prev[nxt] != -2) continue;
                prev[nxt] = cur;
                if (nxt == su) {
                    reach = true;
                    break;
                }
                stack.push_back(nxt);
            }
        }
        if (reach) {
            out.found = true;
            std::vector<int> path;
            if (sv != su) {
                for (int cur = su; cur != -1; cur = prev[cur]) path.push_back(cur);
                std::reverse(path.begin(), path.end());
            } else {
                path.push_back(su);
            }
            for (int v : path) out.cycle.push_back(g.vertices[v]);
            out.cycle.push_back(g.vertices[sv]);
            return out;
        }
    }
    return out;
}

bool is_weakly_acyclic(const Sigma& sigma) {
    return !find_special_cycle(dependency_graph(sigma)).found;
}

bool is_safe(const Sigma& sigma) {
    return !find_special_cycle(propagation_graph(sigma)).found;
}

// ---------------------------------------------------------------------------
// The fires relations (precedence between constraints)
// ---------------------------------------------------------------------------

namespace {

// Bounded witness search for alpha fires(_P) beta over candidate instances
// assembled from homomorphic images of the two bodies. Fresh values are
// enumerated up to renaming (restricted growth), split into constant and
// labeled-null flavors when the distinction matters. Beta's variables are
// renamed apart so the two assignments never collide (alpha and beta may be
// the same constraint).
class FiresSearch {
public:
    FiresSearch(const Constraint& alpha, const Constraint& beta, const PositionSet* p)
        : alpha_(alpha), beta_(rename_apart(beta)), p_(p) {
        for (const std::string& c : constants_of({alpha, beta}))
            fixed_.push_back(Arg::constant(c));
        std::set<std::string> av = alpha_.body_vars();
        std::set<std::string> bv = beta_.body_vars();
        va_.assign(av.begin(), av.end());
        vb_.assign(bv.begin(), bv.end());
        size_t k = va_.size() + vb_.size();
        for (size_t i = 1; i <= k; ++i) fc_pool_.push_back(Arg::constant("\x01f" + std::to_string(i)));
        bool nulls_matter = p_ != nullptr || alpha.is_egd();
        if (nulls_matter)
            for (size_t i = 1; i <= k; ++i) nl_pool_.push_back(Arg::null(static_cast<long>(i)));
        step_null_base_ = static_cast<long>(k) + 1;
    }

    bool run() {
        // P = empty forbids nulls in the pre-step instance, so an EGD step
        // could only equate two constants, which fails rather than fires
        if (p_ && p_->empty() && alpha_.is_egd()) return false;
        // beta must be able to place a null into its head at all
        if (p_ && beta_.is_tgd() && beta_.existentials.empty()) {
            bool head_universals = false;
            for (const Atom& a : beta_.head)
                for (const Arg& x : a.args)
                    if (x.is_var()) head_universals = true;
            if (!head_universals) return false;
            if (p_->empty() && alpha_.is_tgd() && alpha_.existentials.empty()) return false;
        }
        bool found = false;
        enumerate(va_, 0, &alpha_.body, {}, [&]() {
            if (alpha_.is_tgd() ? tgd_alpha_case() : egd_alpha_case()) {
                found = true;
                return false;
            }
            return true;
        });
        return found;
    }

private:
    static Constraint rename_apart(const Constraint& c) {
        Constraint out = c;
        auto rename = [](std::vector<Atom>& atoms) {
            for (Atom& a : atoms)
                for (Arg& x : a.args)
                    if (x.is_var()) x.name = "b$" + x.name;
        };
        rename(out.body);
        rename(out.head);
        for (std::string& y : out.existentials) y = "b$" + y;
        if (out.is_egd()) {
            out.eq_left = "b$" + out.eq_left;
            out.eq_right = "b$" + out.eq_right;
        }
        return out;
    }

    // Enumerates assignments for vars[i..) into h_; when `null_positions` is
    // set and a P-restriction is active, a variable may take a null only if
    // all its positions in those atoms lie in P. `extra` holds step-created
    // nulls available to beta's assignment.
    bool enumerate(const std::vector<std::string>& vars, size_t i,
                   const std::vector<Atom>* null_positions, const std::vector<Arg>& extra,
                   const std::function<bool()>& done) {
        if (i == vars.size()) return done();
        Arg key = Arg::var(vars[i]);
        auto tryv = [&](const Arg& val) {
            h_[key] = val;
            bool keep = enumerate(vars, i + 1, null_positions, extra, done);
            h_.erase(key);
            return keep;
        };
        for (const Arg& v : fixed_) if (!tryv(v)) return false;
        for (const Arg& v : extra) if (!tryv(v)) return false;
        for (size_t j = 0; j < fc_used_; ++j) if (!tryv(fc_pool_[j])) return false;
        if (fc_used_ < fc_pool_.size()) {
            ++fc_used_;
            bool keep = tryv(fc_pool_[fc_used_ - 1]);
            --fc_used_;
            if (!keep) return false;
        }
        bool null_ok = !nl_pool_.empty();
        if (null_ok && p_ && null_positions)
            null_ok = subset_of(positions_of_var(*null_positions, vars[i]), *p_);
        if (null_ok) {
            for (size_t j = 0; j < nl_used_; ++j) if (!tryv(nl_pool_[j])) return false;
            if (nl_used_ < nl_pool_.size()) {
                ++nl_used_;
                bool keep = tryv(nl_pool_[nl_used_ - 1]);
                --nl_used_;
                if (!keep) return false;
            }
        }
        return true;
    }

    static Instance image(const std::vector<Atom>& atoms, const Homomorphism& h) {
        Instance out;
        for (const Atom& a : atoms) out.insert(apply_hom(h, a));
        return out;
    }

    static bool mentions_step_null(const Atom& a, long base) {
        return std::any_of(a.args.begin(), a.args.end(),
                           [&](const Arg& x) { return x.is_null() && x.null_id >= base; });
    }

    bool nulls_confined(const Instance& inst) const {
        if (!p_) return true;
        for (const Atom& a : inst)
            for (size_t i = 0; i < a.args.size(); ++i)
                if (a.args[i].is_null() &&
                    !p_->count({a.rel, static_cast<int>(i) + 1}))
                    return false;
        return true;
    }

    bool head_ext(const Constraint& c, const Homomorphism& base, const Instance& inst) const {
        return find_homomorphism(c.head, inst, base).has_value();
    }

    // Checks bullets shared by both alpha cases for a candidate beta
    // homomorphism g over instance pair (I, J).
    bool beta_bullets(const Homomorphism& g, const Instance& i_inst, const Instance& j_inst) const {
        // beta violated on J at g
        if (beta_.is_tgd()) {
            if (head_ext(beta_, g, j_inst)) return false;
        } else {
            if (apply_hom(g, Arg::var(beta_.eq_left)) == apply_hom(g, Arg::var(beta_.eq_right)))
                return false;
        }
        // beta not applicable on I at g
        Instance needed = image(beta_.body, g);
        bool body_in_i = std::all_of(needed.begin(), needed.end(),
                                     [&](const Atom& a) { return i_inst.count(a) != 0; });
        if (body_in_i) {
            if (beta_.is_tgd()) {
                if (!head_ext(beta_, g, i_inst)) return false;  // already violated in I
            } else {
                return false;  // values differ (checked above), so violated in I
            }
        }
        // restricted relation: the enabled firing must place a labeled null
        // into beta's head, either copied from the post-step instance or
        // fresh from an existential variable
        if (p_) {
            bool introduces = false;
            if (beta_.is_tgd()) {
                introduces = !beta_.existentials.empty();
                std::set<std::string> ex(beta_.existentials.begin(), beta_.existentials.end());
                for (const Atom& a : beta_.head)
                    for (const Arg& x : a.args)
                        if (x.is_var() && !ex.count(x.name) && apply_hom(g, x).is_null())
                            introduces = true;
            } else {
                introduces = apply_hom(g, Arg::var(beta_.eq_left)).is_null() ||
                             apply_hom(g, Arg::var(beta_.eq_right)).is_null();
            }
            if (!introduces) return false;
        }
        return true;
    }

    bool tgd_alpha_case() {
        Homomorphism h1 = h_;
        Instance i0 = image(alpha_.body, h1);
        if (p_ && !nulls_confined(i0)) return false;
        // the step's fresh nulls
        Homomorphism nu = h1;
        long id = step_null_base_;
        std::vector<Arg> step_nulls;
        for (const std::string& y : alpha_.existentials) {
            Arg n = Arg::null(id++);
            nu[Arg::var(y)] = n;
            step_nulls.push_back(n);
        }
        Instance new_atoms = image(alpha_.head, nu);

        bool found = false;
        enumerate(vb_, 0, /*null_positions=*/nullptr, step_nulls, [&]() {
            Instance needed = image(beta_.body, h_);
            Instance t_extra;
            for (const Atom& a : needed) {
                if (i0.count(a) || new_atoms.count(a)) continue;
                if (mentions_step_null(a, step_null_base_)) return true;  // cannot pre-exist
                t_extra.insert(a);
            }
            if (p_) {
                for (const Atom& a : t_extra)
                    for (size_t i = 0; i < a.args.size(); ++i)
                        if (a.args[i].is_null() && !p_->count({a.rel, static_cast<int>(i) + 1}))
                            return true;
            }
            Instance i_inst = i0;
            i_inst.insert(t_extra.begin(), t_extra.end());
            // alpha applicable at h1 on I
            if (head_ext(alpha_, h1, i_inst)) return true;
            Instance j_inst = i_inst;
            j_inst.insert(new_atoms.begin(), new_atoms.end());
            if (beta_bullets(h_, i_inst, j_inst)) {
                found = true;
                return false;
            }
            return true;
        });
        return found;
    }

    bool egd_alpha_case() {
        Homomorphism h1 = h_;
        Arg u = apply_hom(h1, Arg::var(alpha_.eq_left));
        Arg v = apply_hom(h1, Arg::var(alpha_.eq_right));
        if (u == v) return false;
        if (u.is_const() && v.is_const()) return false;  // the step would fail, not fire
        Instance i0 = image(alpha_.body, h1);
        Arg loser = v.is_null() ? v : u;
        Arg survivor = v.is_null() ? u : v;

        bool found = false;
        enumerate(vb_, 0, /*null_positions=*/nullptr, {}, [&]() {
            Instance img = image(beta_.body, h_);
            std::vector<Atom> img_vec(img.begin(), img.end());
            size_t m = img_vec.size();
            for (size_t mask = 0; mask < (size_t{1} << m); ++mask) {
                Instance i_inst = i0;
                for (size_t b = 0; b < m; ++b)
                    if (mask & (size_t{1} << b)) i_inst.insert(img_vec[b]);
                if (p_ && !nulls_confined(i_inst)) continue;
                // the substitution step
                Instance j_inst;
                for (const Atom& a : i_inst) {
                    Atom b = a;
                    for (Arg& x : b.args)
                        if (x == loser) x = survivor;
                    j_inst.insert(std::move(b));
                }
                bool hit = false;
                for_each_homomorphism(beta_.body, j_inst, {}, [&](const Homomorphism& g) {
                    if (beta_bullets(g, i_inst, j_inst)) {
                        hit = true;
                        return false;
                    }
                    return true;
                });
                if (hit) {
                    found = true;
                    return false;
                }
            }
            return true;
        });
        return found;
    }

    const Constraint& alpha_;
    const Constraint beta_;  // renamed-apart copy
    const PositionSet* p_;
    std::vector<std::string> va_, vb_;
    std::vector<Arg> fixed_;  // constants of alpha and beta
    std::vector<Arg> fc_pool_, nl_pool_;
    size_t fc_used_ = 0, nl_used_ = 0;
    long step_null_base_ = 1;
    Homomorphism h_;
};

}  // namespace

bool fires(const Constraint& alpha, const Constraint& beta) {
    return FiresSearch(alpha, beta, nullptr).run();
}

bool fires_restricted(const Constraint& alpha, const Constraint& beta, const PositionSet& p) {
    return FiresSearch(alpha, beta, &p).run();
}

PositionSet aff_cl(const Constraint& tgd, const PositionSet& p) {
    if (!tgd.is_tgd()) throw std::invalid_argument("aff-cl is defined for TGDs");
    std::set<std::string> ex(tgd.existentials.begin(), tgd.existentials.end());
    PositionSet out;
    for (const Atom& a : tgd.head)
        for (size_t i = 0; i < a.args.size(); ++i) {
            const Arg& x = a.args[i];
            if (!x.is_var()) continue;
            Position pos{a.rel, static_cast<int>(i) + 1};
            if (ex.count(x.name)) {
                out.insert(pos);
            } else if (subset_of(positions_of_var(tgd.body, x.name), p)) {
                out.insert(pos);
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Constraint graphs, stratification, restriction systems
// ---------------------------------------------------------------------------

std::vector<std::vector<size_t>> ConstraintGraph::sccs() const {
    // Kosaraju
    std::vector<std::vector<size_t>> fwd(n), bwd(n);
    for (auto [u, v] : edges) {
        fwd[u].push_back(v);
        bwd[v].push_back(u);
    }
    std::vector<bool> seen(n, false);
    std::vector<size_t> order;
    std::function<void(size_t)> dfs1 = [&](size_t u) {
        seen[u] = true;
        for (size_t v : fwd[u])
            if (!seen[v]) dfs1(v);
        order.push_back(u);
    };
    for (size_t u = 0; u < n; ++u)
        if (!seen[u]) dfs1(u);
    std::vector<int> comp(n, -1);
    int nc = 0;
    std::function<void(size_t)> dfs2 = [&](size_t u) {
        comp[u] = nc;
        for (size_t v : bwd[u])
            if (comp[v] < 0) dfs2(v);
    };
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (comp[*it] < 0) {
            dfs2(*it);
            ++nc;
        }
    std::vector<std::vector<size_t>> out(nc);
    for (size_t u = 0; u < n; ++u) out[comp[u]].push_back(u);
    for (auto& scc : out) std::sort(scc.begin(), scc.end());
    return out;
}

bool ConstraintGraph::has_cycle(const std::vector<size_t>& scc) const {
    if (scc.size() > 1) return true;
    return !scc.empty() && edges.count({scc[0], scc[0]}) != 0;
}

ConstraintGraph chase_graph(const Sigma& sigma) {
    ConstraintGraph g;
    g.n = sigma.size();
    for (size_t i = 0; i < sigma.size(); ++i)
        for (size_t j = 0; j < sigma.size(); ++j)
            if (fires(sigma[i], sigma[j])) g.edges.insert({i, j});
    return g;
}

namespace {

Sigma subset_sigma(const Sigma& sigma, const std::vector<size_t>& idx) {
    Sigma out;
    for (size_t i : idx) out.push_back(sigma[i]);
    return out;
}

std::string scc_to_string(const std::vector<size_t>& scc) {
    std::string s = "{";
    for (size_t i = 0; i < scc.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(scc[i]);
    }
    return s + "}";
}

// Every component containing a cycle must satisfy `cond` on its constraint
// set; returns the first failing component rendered, or empty.
std::string check_cyclic_components(const Sigma& sigma, const ConstraintGraph& g,
                                    const std::function<bool(const Sigma&)>& cond) {
    for (const auto& scc : g.sccs()) {
        if (!g.has_cycle(scc)) continue;
        if (!cond(subset_sigma(sigma, scc))) return scc_to_string(scc);
    }
    return {};
}

}  // namespace

bool is_stratified(const Sigma& sigma) {
    return check_cyclic_components(sigma, chase_graph(sigma), [](const Sigma& s) {
               return is_weakly_acyclic(s);
           })
        .empty();
}

bool is_safely_stratified(const Sigma& sigma) {
    return check_cyclic_components(sigma, chase_graph(sigma), [](const Sigma& s) {
               return is_safe(s);
           })
        .empty();
}

std::string RestrictionSystem::render(const Sigma& sigma) const {
    std::ostringstream out;
    out << "edges:";
    if (graph.edges.empty()) out << " (none)";
    for (auto [u, v] : graph.edges) out << " (" << u << "," << v << ")";
    out << "; f:";
    for (size_t i = 0; i < f.size(); ++i) {
        out << " " << i << "->{";
        bool first = true;
        for (const Position& p : f[i]) {
            if (!first) out << ",";
            first = false;
            out << p.render();
        }
        out << "}";
    }
    (void)sigma;
    return out.str();
}

RestrictionSystem minimal_restriction_system(const Sigma& sigma) {
    RestrictionSystem rs;
    rs.graph.n = sigma.size();
    rs.f.assign(sigma.size(), {});

    // memoize the NP-subroutine per (i, j, f(i)); f grows monotonically
    std::map<std::tuple<size_t, size_t, PositionSet>, bool> memo;
    auto prec = [&](size_t i, size_t j) {
        auto key = std::make_tuple(i, j, rs.f[i]);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool r = fires_restricted(sigma[i], sigma[j], rs.f[i]);
        memo.emplace(key, r);
        return r;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < sigma.size(); ++i)
            for (size_t j = 0; j < sigma.size(); ++j) {
                if (rs.graph.edges.count({i, j})) continue;
                if (prec(i, j)) {
                    rs.graph.edges.insert({i, j});
                    changed = true;
                }
            }
        for (auto [i, j] : rs.graph.edges) {
            PositionSet need = sigma[i].is_tgd() ? aff_cl(sigma[i], rs.f[i]) : rs.f[i];
            PositionSet target = body_positions(sigma[j]);
            PositionSet add;
            std::set_intersection(need.begin(), need.end(), target.begin(), target.end(),
                                  std::inserter(add, add.begin()));
            for (const Position& p : add)
                if (rs.f[j].insert(p).second) changed = true;
        }
    }
    return rs;
}

bool is_restriction_system(const Sigma& sigma, const RestrictionSystem& rs) {
    if (rs.graph.n != sigma.size() || rs.f.size() != sigma.size()) return false;
    for (auto [i, j] : rs.graph.edges) {
        PositionSet need = sigma[i].is_tgd() ? aff_cl(sigma[i], rs.f[i]) : rs.f[i];
        PositionSet target = body_positions(sigma[j]);
        for (const Position& p : need)
            if (target.count(p) && !rs.f[j].count(p)) return false;
    }
    for (size_t i = 0; i < sigma.size(); ++i)
        for (size_t j = 0; j < sigma.size(); ++j)
            if (!rs.graph.edges.count({i, j}) && fires_restricted(sigma[i], sigma[j], rs.f[i]))
                return false;
    return true;
}

bool is_safely_restricted(const Sigma& sigma) {
    RestrictionSystem rs = minimal_restriction_system(sigma);
    return check_cyclic_components(sigma, rs.graph, [](const Sigma& s) { return is_safe(s); })
        .empty();
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

std::string TerminationReport::classification() const {
    if (weakly_acyclic) return "weakly acyclic";
    if (safe && stratified) return "safe and stratified";
    if (safe) return "safe";
    if (stratified) return "stratified";
    if (safely_stratified) return "safely stratified";
    if (safely_restricted) return "safely restricted";
    return "no termination guarantee";
}

std::string TerminationReport::render() const {
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::ostringstream out;
    out << "weakly-acyclic: " << yn(weakly_acyclic);
    if (!weakly_acyclic) out << " (" << weak_acyclicity_witness << ")";
    out << "\nsafe: " << yn(safe);
    if (!safe) out << " (" << safety_witness << ")";
    out << "\nstratified: " << yn(stratified);
    if (!stratified) out << " (offending component " << stratification_witness << ")";
    out << "\nsafely-stratified: " << yn(safely_stratified);
    if (!safely_stratified) out << " (offending component " << safe_stratification_witness << ")";
    out << "\nsafely-restricted: " << yn(safely_restricted);
    out << (safely_restricted ? " (" : " (offending component ") << safe_restriction_witness
        << ")";
    out << "\nclass: " << classification();
    return out.str();
}

TerminationReport analyze(const Sigma& sigma) {
    TerminationReport r;
    SpecialCycle dep_cycle = find_special_cycle(dependency_graph(sigma));
    r.weakly_acyclic = !dep_cycle.found;
    if (dep_cycle.found) r.weak_acyclicity_witness = dep_cycle.render();

    SpecialCycle prop_cycle = find_special_cycle(propagation_graph(sigma));
    r.safe = !prop_cycle.found;
    if (prop_cycle.found) r.safety_witness = prop_cycle.render();

    ConstraintGraph g = chase_graph(sigma);
    r.stratification_witness = check_cyclic_components(
        sigma, g, [](const Sigma& s) { return is_weakly_acyclic(s); });
    r.stratified = r.stratification_witness.empty();
    r.safe_stratification_witness =
        check_cyclic_components(sigma, g, [](const Sigma& s) { return is_safe(s); });
    r.safely_stratified = r.safe_stratification_witness.empty();

    RestrictionSystem rs = minimal_restriction_system(sigma);
    std::string bad =
        check_cyclic_components(sigma, rs.graph, [](const Sigma& s) { return is_safe(s); });
    r.safely_restricted = bad.empty();
    r.safe_restriction_witness =
        bad.empty() ? "minimal restriction system: " + rs.render(sigma) : bad;

    // Figure-2 containments must hold between the verdicts
    auto implies = [](bool a, bool b) { return !a || b; };
    if (!implies(r.weakly_acyclic, r.safe) || !implies(r.weakly_acyclic, r.stratified) ||
        !implies(r.safe, r.safely_stratified) ||
        !implies(r.stratified, r.safely_restricted) ||
        !implies(r.safely_stratified, r.safely_restricted))
        throw std::logic_error("termination condition containments violated; checker bug");
    return r;
}

long safety_budget(const Sigma& sigma, size_t instance_values, long c) {
    PositionSet all;
    for (const Constraint& cst : sigma) {
        auto b = positions_of(cst.body);
        all.insert(b.begin(), b.end());
        if (cst.is_tgd()) {
            auto h = positions_of(cst.head);
            all.insert(h.begin(), h.end());
        }
    }
    double p = static_cast<double>(all.size());
    double bound = c * std::pow(std::max<double>(2, static_cast<double>(instance_values)), p + 1);
    double capped = std::min(bound, 5e7);
    return std::max<long>(10000, static_cast<long>(capped));
}

}  // namespace sparqlopt
