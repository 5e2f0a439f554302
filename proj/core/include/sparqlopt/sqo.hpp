#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sparqlopt/algebra.hpp"
#include "sparqlopt/chase.hpp"
#include "sparqlopt/cq.hpp"
#include "sparqlopt/rewrite.hpp"

namespace sparqlopt {

struct SqoOptions {
    long budget = 10000;      // chase step budget when no condition certifies termination
    int backchase_cap = 20;   // hard cap on universal-plan atoms for the backchase
    int verify_docs = 0;      // extra model-based verification documents
    unsigned long seed = 1;
};

struct SemanticStep {
    std::string kind;  // "elim-opt-1", "elim-opt-2", "filter-1", "filter-2", "filter-3"
    TreePos pos;
    AlgPtr before, after;
    std::string note;

    std::string render() const;
};

struct SqoReport {
    SparqlQuery input;
    bool c1_defined = false;
    bool c2_defined = false;
    bool sigma_prime_applicable = false;  // C2 defined and |sigma'| = |sigma|
    std::string scheme_used;              // "c1" or "c2"
    std::string chase_status;             // terminated | budget-exceeded | unsatisfiable | cap-exceeded | skipped
    bool certified = false;               // a termination condition holds for sigma (or sigma')
    std::string certificate;
    bool complete = false;  // C1^-1(U(C1(Q))) stayed inside the And-only fragment
    bool unknown = false;
    std::vector<SparqlQuery> rewrites;       // minimal And-only rewrites
    std::vector<SemanticStep> semantic_steps;
    AlgPtr rewritten;                        // algebra after the semantic steps (non-BGP inputs)
    std::vector<std::string> notes;

    std::string render() const;
    std::string render_structured() const;
};

/// C&B-based optimization of an And-only query: chases C1(Q), enumerates the
/// minimal Sigma-equivalent sub-queries and maps them back through C1^-1.
/// When the C2 scheme applies, its constraint image can certify termination
/// for the C1 chase as well. Throws std::invalid_argument if the query body
/// is not And-only.
SqoReport optimize_bgp(const SparqlQuery& q, const Sigma& sigma, const SqoOptions& opt,
                       const std::string& scheme = "auto");

/// Full pipeline: And-only queries run through optimize_bgp; other queries
/// get the semantic Opt/Filter rewrites applied site by site.
SqoReport optimize(const SparqlQuery& q, const Sigma& sigma, const SqoOptions& opt,
                   const std::string& scheme = "auto");

struct OptRewrite {
    bool applicable = false;
    ExprPtr result;
    std::string note;
};

/// Q1 Opt Q2 to Q1 And Q2 when Q1 is Sigma-equivalent to
/// Select_{vars(Q1)}(Q1 And Q2). Both sides must be And-only for the
/// precondition to be decidable through the translation schemes.
OptRewrite elim_opt_to_and(const ExprPtr& q1, const ExprPtr& q2, const Sigma& sigma,
                           const SqoOptions& opt);

/// (Q1 Opt (Q2 And Q3)) to Q1 Opt Q3 when Q1 is Sigma-equivalent to
/// Q1 And Q2; requires vars(Q2) inside vars(Q1) for the unprojected
/// equivalence to be possible.
OptRewrite elim_opt_redundant_bgp(const ExprPtr& q1, const ExprPtr& q2, const ExprPtr& q3,
                                  const Sigma& sigma, const SqoOptions& opt);

struct FilterRewriteResult {
    AlgPtr original;
    AlgPtr rewritten;
    std::vector<SemanticStep> steps;
};

/// The three filter eliminations: not-bound filters over implied Opt sides
/// and (in)equality filters under an equality implied by the constraints.
/// Empty-result replacements use the reserved EMPTY algebra constant.
FilterRewriteResult filter_rewrites(const SparqlQuery& q, const Sigma& sigma,
                                    const SqoOptions& opt);

/// Generates up to `count` documents satisfying sigma by chasing random
/// small ternary instances; failures and budget blowups are resampled away.
std::vector<Document> generate_sigma_models(const Sigma& sigma, int count, std::mt19937_64& rng,
                                            long budget = 2000);

}  // namespace sparqlopt
