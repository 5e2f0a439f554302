#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sparqlopt/relational.hpp"

namespace sparqlopt {

/// A position in a relation, 1-based: R^2 is {"R", 2}.
struct Position {
    std::string rel;
    int index = 0;

    std::string render() const { return rel + "^" + std::to_string(index); }
    auto operator<=>(const Position&) const = default;
};

using PositionSet = std::set<Position>;

/// All positions the atoms mention.
PositionSet positions_of(const std::vector<Atom>& atoms);
/// Positions at which the variable occurs in the atoms.
PositionSet positions_of_var(const std::vector<Atom>& atoms, const std::string& var);
/// pos(Sigma): the positions occurring in constraint bodies.
PositionSet body_positions(const Sigma& sigma);
PositionSet body_positions(const Constraint& c);

/// A directed graph over positions with a special-edge subset.
struct PositionGraph {
    std::vector<Position> vertices;
    std::set<std::pair<int, int>> edges;    // includes special edges
    std::set<std::pair<int, int>> special;

    int index_of(const Position& p) const;
};

struct SpecialCycle {
    bool found = false;
    std::vector<Position> cycle;  // a cycle through at least one special edge

    std::string render() const;
};

/// dep(Sigma): copy edges and special edges from the TGDs.
PositionGraph dependency_graph(const Sigma& sigma);
/// aff(Sigma): least fixpoint of the affected-position rules (TGDs only).
PositionSet affected_positions(const Sigma& sigma);
/// prop(Sigma): the dependency edges restricted to variables that occur only
/// in affected body positions; vertices are the affected positions.
PositionGraph propagation_graph(const Sigma& sigma);

SpecialCycle find_special_cycle(const PositionGraph& g);

bool is_weakly_acyclic(const Sigma& sigma);
bool is_safe(const Sigma& sigma);

/// alpha fires beta: some chase step with alpha can newly enable beta.
/// Decided by a bounded search over candidate instances built from
/// homomorphic images of the two bodies.
bool fires(const Constraint& alpha, const Constraint& beta);

/// The P-restricted refinement: nulls in the pre-step instance are confined
/// to positions in P and the enabled firing of beta must place a labeled
/// null into beta's head (copied from the post-step instance, or fresh from
/// an existential variable).
bool fires_restricted(const Constraint& alpha, const Constraint& beta, const PositionSet& p);

/// Head positions of the TGD whose variable is confined to P in the body,
/// plus all existential positions.
PositionSet aff_cl(const Constraint& tgd, const PositionSet& p);

/// A graph over the constraints of Sigma (by index).
struct ConstraintGraph {
    size_t n = 0;
    std::set<std::pair<size_t, size_t>> edges;

    /// Strongly connected components, each sorted; singletons without a
    /// self-loop are cycle-free.
    std::vector<std::vector<size_t>> sccs() const;
    bool has_cycle(const std::vector<size_t>& scc) const;
};

ConstraintGraph chase_graph(const Sigma& sigma);

bool is_stratified(const Sigma& sigma);

struct RestrictionSystem {
    ConstraintGraph graph;
    std::vector<PositionSet> f;  // one position set per constraint

    std::string render(const Sigma& sigma) const;
};

/// The unique minimal restriction system, computed by fixpoint iteration
/// from the empty graph and the empty assignment.
RestrictionSystem minimal_restriction_system(const Sigma& sigma);

/// True if the restriction system satisfies the three closure conditions.
bool is_restriction_system(const Sigma& sigma, const RestrictionSystem& rs);

bool is_safely_restricted(const Sigma& sigma);
bool is_safely_stratified(const Sigma& sigma);

struct TerminationReport {
    bool weakly_acyclic = false;
    bool safe = false;
    bool stratified = false;
    bool safely_stratified = false;
    bool safely_restricted = false;

    std::string weak_acyclicity_witness;    // special cycle when not weakly acyclic
    std::string safety_witness;             // special cycle in prop when not safe
    std::string stratification_witness;     // offending component
    std::string safe_stratification_witness;
    std::string safe_restriction_witness;   // offending component or certifying system

    /// The most specific label on the condition lattice.
    std::string classification() const;
    std::string render() const;
};

/// Runs all five checks and cross-validates the containment relations
/// between the conditions (throws std::logic_error if they are violated).
TerminationReport analyze(const Sigma& sigma);

/// Step bound used when a termination condition certifies Sigma:
/// max(10^4, c * n^(p+1)) with p the number of positions in Sigma.
long safety_budget(const Sigma& sigma, size_t instance_values, long c = 4);

}  // namespace sparqlopt
