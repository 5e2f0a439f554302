#pragma once

#include <string>
#include <vector>

#include "sparqlopt/relational.hpp"

namespace sparqlopt {

struct ChaseOptions {
    long budget = 10000;
    /// RoundRobin fires constraints cyclically with the least homomorphism;
    /// ReversePriority scans constraints last-to-first with the greatest
    /// homomorphism. Any fair order is admissible; two are provided so order
    /// independence is testable.
    enum class Order { RoundRobin, ReversePriority } order = Order::RoundRobin;
    bool keep_trace = false;
};

struct ChaseTraceLine {
    long step;
    size_t constraint;
    std::string witness;
    std::string action;

    std::string render() const;
};

struct ChaseOutcome {
    enum class Status { Terminated, Failed, BudgetExceeded };

    Status status = Status::Terminated;
    Instance instance;  // final instance (Terminated) or snapshot (BudgetExceeded)
    long steps = 0;
    std::pair<Arg, Arg> clash;  // Failed: the two clashing constants
    std::vector<ChaseTraceLine> trace;

    /// Cumulative null substitution applied by EGD steps, in order.
    std::vector<std::pair<Arg, Arg>> merges;

    /// Follows the recorded merges: the surviving value for `a`.
    Arg resolve(Arg a) const;
};

/// Runs the chase to a fixpoint, a failure or the step budget, firing
/// applicable constraints under the deterministic order in `opt`.
ChaseOutcome chase(const Instance& start, const Sigma& sigma, const ChaseOptions& opt = {});

/// One TGD step: adds the head instantiated with `h` plus fresh nulls for
/// the existential variables. Throws RewriteError-like logic errors are not
/// used here; inapplicability raises std::invalid_argument.
Instance tgd_step(const Instance& i, const Constraint& tgd, const Homomorphism& h,
                  long& null_counter);

struct EgdStepResult {
    bool failed = false;
    Instance instance;
    std::pair<Arg, Arg> clash;       // when failed
    std::pair<Arg, Arg> substituted; // loser -> survivor otherwise
};

EgdStepResult egd_step(const Instance& i, const Constraint& egd, const Homomorphism& h);

/// Direct model check I |= sigma.
bool models(const Instance& i, const Sigma& sigma);
bool models(const Instance& i, const Constraint& c);

enum class Tri { Yes, No, Unknown };

struct ContainmentResult {
    Tri value = Tri::Unknown;
    /// True when containment holds vacuously because the canonical chase of
    /// the left query failed (the query has no models under sigma).
    bool vacuous = false;
};

/// Chase-based containment q subseteq_Sigma q2: chases the frozen canonical
/// instance of q and looks for a homomorphism from q2's body that hits q's
/// frozen head tuple. Unknown when the chase exceeds the budget.
ContainmentResult contained_in(const CQ& q, const CQ& q2, const Sigma& sigma, long budget);

struct PlanResult {
    enum class Status { Ok, Unknown, Unsatisfiable };
    Status status = Status::Ok;
    CQ plan;
};

/// The universal plan U(q): q with its body chased under sigma, surviving
/// labeled nulls turned back into fresh variables.
PlanResult universal_plan(const CQ& q, const Sigma& sigma, long budget);

struct CbResult {
    enum class Status { Ok, Unknown, Unsatisfiable, AtomCapExceeded };
    Status status = Status::Ok;
    std::vector<CQ> rewrites;
    std::string note;
};

/// Chase & Backchase: enumerates the sub-bodies of U(q), keeps those
/// Sigma-equivalent to q, and returns the minimum-size representatives up
/// to isomorphism.
CbResult cb(const CQ& q, const Sigma& sigma, long budget, int atom_cap = 20);

/// True if the two CQs are isomorphic (a bijective variable renaming maps
/// one onto the other, heads included).
bool isomorphic(const CQ& a, const CQ& b);

}  // namespace sparqlopt
