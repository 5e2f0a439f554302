#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sparqlopt/algebra.hpp"

namespace sparqlopt {

/// One identifier per equivalence in the catalog: Figure-1 groups I-VI,
/// the minus/left-join rules, bnd-negation extraction and the weak filter
/// pushing variant for conjunctions of atomic equalities.
enum class RuleId {
    UIdem, JIdem, LIdem, Inv,
    UAss, JAss,
    UComm, JComm,
    JUDistR, JUDistL, MUDistR, LUDistR,
    SUPush, SDecompI, SDecompII, SReord,
    BndI, BndII, BndIII, BndIV, BndV,
    SJPush, SMPush, SLPush,
    MReord, MMUCorr, MJ, LJ,
    NegBndMinus,
    WeakFilterPush,
};

enum class Direction { Forward, Backward };

const char* rule_name(RuleId r);
std::vector<RuleId> all_rules();

class RewriteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A path of child indices from the root (left/only child 0, right child 1).
using TreePos = std::vector<int>;

AlgPtr subtree_at(const AlgPtr& root, const TreePos& pos);
AlgPtr replace_at(const AlgPtr& root, const TreePos& pos, AlgPtr replacement);

struct RewriteStep {
    RuleId rule;
    Direction dir;
    TreePos pos;
    AlgPtr before;  // replaced subtree
    AlgPtr after;   // replacement subtree

    std::string render() const;
};

/// An ordered application log; replaying it from the source reproduces the
/// target exactly.
using RewriteTrace = std::vector<RewriteStep>;

/// All positions where the rule matches in the given direction and its side
/// condition holds. Directions that would require synthesizing a fresh
/// subexpression or parameter (e.g. the reverse of Inv or of the Bnd
/// eliminations) are not enumerable and yield no sites.
std::vector<TreePos> applicable_sites(RuleId rule, Direction dir, const AlgPtr& root);

/// Replaces the matched subtree at `pos`; throws RewriteError if the rule is
/// not applicable there.
AlgPtr apply_rule(RuleId rule, Direction dir, const AlgPtr& root, const TreePos& pos);

/// Fixpoint strategy: split filter conjunctions, push the pieces down over
/// union/join/minus/left join, and run the bnd eliminations. Leftmost
/// innermost site first; deterministic.
std::pair<AlgPtr, RewriteTrace> normalize_filters(const AlgPtr& root);

/// Makes simulated negation explicit: drops redundant joins under left
/// joins (LJ right-to-left) and turns not-bound filters over left joins
/// into minus where the side conditions hold.
std::pair<AlgPtr, RewriteTrace> extract_negation(const AlgPtr& root);

/// Replays a trace against its source; throws RewriteError on any mismatch.
AlgPtr replay(const AlgPtr& source, const RewriteTrace& trace);

}  // namespace sparqlopt
