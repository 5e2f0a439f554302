#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sparqlopt/algebra.hpp"
#include "sparqlopt/chase.hpp"
#include "sparqlopt/cq.hpp"
#include "sparqlopt/parser.hpp"
#include "sparqlopt/rdf_io.hpp"
#include "sparqlopt/reductions.hpp"
#include "sparqlopt/rewrite.hpp"
#include "sparqlopt/sqo.hpp"
#include "sparqlopt/termination.hpp"

namespace {

using namespace sparqlopt;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void print_mappings(const MappingSet& set, const std::string& format) {
    if (format == "structured") {
        std::cout << "count=" << set.size() << "\n";
        size_t i = 0;
        for (const Mapping& mu : set) {
            std::cout << "mapping." << i++ << "=";
            bool first = true;
            for (auto& [v, t] : mu.bindings()) {
                if (!first) std::cout << " ";
                first = false;
                std::cout << "?" << v << "=" << t.render();
            }
            std::cout << "\n";
        }
    } else {
        for (const Mapping& mu : set) std::cout << mu.render() << "\n";
    }
}

AlgPtr load_query_algebra(const std::string& path) {
    ParsedQuery q = parse(slurp(path));
    return q.is_query() ? translate(q.query()) : translate(*q.body);
}

int run(int argc, char** argv) {
    CLI::App app{"SPARQL set-semantics evaluator, algebraic rewriter and "
                 "constraint-based optimizer"};
    app.require_subcommand(1);

    std::string data_file, query_file, constraint_file, cq_file, mapping_arg;
    std::string format = "pretty", scheme = "auto", check, strategy = "both";
    std::string formula_file, fragment = "afo", out_prefix = "reduction";
    long budget = 10000;
    unsigned long seed = 1;
    int verify_docs = 0;
    bool trace = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "pretty|structured")
            ->check(CLI::IsMember({"pretty", "structured"}));
        cmd->add_option("--budget", budget, "chase step budget");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_flag("--trace", trace, "print the chase trace");
    };

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a query on a document");
    eval_cmd->add_option("--data", data_file)->required();
    eval_cmd->add_option("--query", query_file)->required();
    add_common(eval_cmd);

    CLI::App* member_cmd =
        app.add_subcommand("member", "decide whether a mapping is in the result");
    member_cmd->add_option("--data", data_file)->required();
    member_cmd->add_option("--query", query_file)->required();
    member_cmd->add_option("--mapping", mapping_arg, "inline {?x -> v} or a file")->required();
    add_common(member_cmd);

    CLI::App* rewrite_cmd = app.add_subcommand("rewrite", "run the algebraic rewrite strategies");
    rewrite_cmd->add_option("--query", query_file)->required();
    rewrite_cmd->add_option("--strategy", strategy, "normalize-filters|extract-negation|both")
        ->check(CLI::IsMember({"normalize-filters", "extract-negation", "both"}));
    add_common(rewrite_cmd);

    CLI::App* optimize_cmd =
        app.add_subcommand("optimize", "semantic optimization under constraints");
    optimize_cmd->add_option("--query", query_file)->required();
    optimize_cmd->add_option("--constraints", constraint_file)->required();
    optimize_cmd->add_option("--scheme", scheme, "c1|c2|auto")
        ->check(CLI::IsMember({"c1", "c2", "auto"}));
    optimize_cmd->add_option("--verify-docs", verify_docs,
                             "verify rewrites on this many random models");
    add_common(optimize_cmd);

    CLI::App* translate_cmd =
        app.add_subcommand("translate", "run the C1/C2 translations or sigma-prime");
    translate_cmd->add_option("--query", query_file);
    translate_cmd->add_option("--cq", cq_file);
    translate_cmd->add_option("--constraints", constraint_file);
    translate_cmd->add_option("--scheme", scheme, "c1|c2|c1-inverse|c2-inverse|sigma-prime")
        ->required()
        ->check(CLI::IsMember({"c1", "c2", "c1-inverse", "c2-inverse", "sigma-prime"}));
    add_common(translate_cmd);

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "chase termination analysis of a constraint set");
    analyze_cmd->add_option("--constraints", constraint_file)->required();
    analyze_cmd->add_option(
        "--check", check,
        "weakly-acyclic|safe|stratified|safely-stratified|safely-restricted");
    add_common(analyze_cmd);

    CLI::App* gen_cmd = app.add_subcommand("gen", "generate reduction instances");
    gen_cmd->require_subcommand(1);
    CLI::App* gen_qbf = gen_cmd->add_subcommand("qbf", "QBF to SPARQL");
    gen_qbf->add_option("--fragment", fragment, "afo|ao|o")
        ->check(CLI::IsMember({"afo", "ao", "o"}));
    gen_qbf->add_option("--formula", formula_file)->required();
    gen_qbf->add_option("--out", out_prefix, "output prefix for .doc and .q files");
    CLI::App* gen_sat = gen_cmd->add_subcommand("3sat", "3SAT to SPARQL");
    gen_sat->add_option("--formula", formula_file)->required();
    gen_sat->add_option("--out", out_prefix, "output prefix for .doc and .q files");

    CLI11_PARSE(app, argc, argv);

    if (eval_cmd->parsed()) {
        Document d = parse_document(slurp(data_file));
        MappingSet result = evaluate(*load_query_algebra(query_file), d);
        print_mappings(result, format);
        return 0;
    }

    if (member_cmd->parsed()) {
        Document d = parse_document(slurp(data_file));
        std::string mtext = mapping_arg;
        if (mtext.find('{') == std::string::npos) mtext = slurp(mapping_arg);
        Mapping mu = Mapping::parse(mtext);
        bool in = evaluate(*load_query_algebra(query_file), d).count(mu) != 0;
        std::cout << (in ? "yes" : "no") << "\n";
        return in ? 0 : 1;
    }

    if (rewrite_cmd->parsed()) {
        AlgPtr a = load_query_algebra(query_file);
        RewriteTrace all;
        AlgPtr cur = a;
        if (strategy == "normalize-filters" || strategy == "both") {
            auto [next, t] = normalize_filters(cur);
            cur = next;
            all.insert(all.end(), t.begin(), t.end());
        }
        if (strategy == "extract-negation" || strategy == "both") {
            auto [next, t] = extract_negation(cur);
            cur = next;
            all.insert(all.end(), t.begin(), t.end());
        }
        for (size_t i = 0; i < all.size(); ++i)
            std::cout << (i + 1) << ". " << all[i].render() << "\n";
        std::cout << "result: " << cur->render() << "\n";
        return 0;
    }

    if (optimize_cmd->parsed()) {
        SparqlQuery q = parse_query(slurp(query_file));
        Sigma sigma = parse_constraints(slurp(constraint_file));
        SqoOptions opt;
        opt.budget = budget;
        opt.verify_docs = verify_docs;
        opt.seed = seed;
        SqoReport rep = optimize(q, sigma, opt, scheme);
        if (trace) {
            CqTranslation c1 = c1_translate(q);
            if (c1.defined) {
                Instance frozen;  // re-run the universal-plan chase with tracing
                ChaseOptions copt;
                copt.budget = budget;
                copt.keep_trace = true;
                // freeze variables to nulls the same way universal_plan does
                // (rendered through the trace lines only)
                long next = 0;
                std::map<std::string, long> ids;
                for (const Atom& a : c1.cq.body) {
                    Atom g;
                    g.rel = a.rel;
                    for (const Arg& x : a.args) {
                        if (x.is_var()) {
                            auto it = ids.find(x.name);
                            if (it == ids.end()) it = ids.emplace(x.name, ++next).first;
                            g.args.push_back(Arg::null(it->second));
                        } else {
                            g.args.push_back(x);
                        }
                    }
                    frozen.insert(std::move(g));
                }
                ChaseOutcome res = chase(frozen, sigma, copt);
                for (const ChaseTraceLine& line : res.trace)
                    std::cout << line.render() << "\n";
            }
        }
        if (verify_docs > 0 && !rep.rewrites.empty()) {
            std::mt19937_64 rng(seed);
            auto docs = generate_sigma_models(sigma, verify_docs, rng);
            MappingSet want;
            size_t mismatches = 0;
            for (const Document& d : docs) {
                want = evaluate(q, d);
                for (const SparqlQuery& r : rep.rewrites)
                    if (evaluate(r, d) != want) ++mismatches;
            }
            rep.notes.push_back("model verification on " + std::to_string(docs.size()) +
                                " documents: " +
                                (mismatches ? std::to_string(mismatches) + " mismatches"
                                            : "all rewrites agree"));
        }
        std::cout << (format == "structured" ? rep.render_structured() : rep.render());
        return rep.unknown ? 1 : 0;
    }

    if (translate_cmd->parsed()) {
        if (scheme == "c1" || scheme == "c2") {
            if (query_file.empty()) throw std::runtime_error("--query required for " + scheme);
            SparqlQuery q = parse_query(slurp(query_file));
            CqTranslation t = scheme == "c1" ? c1_translate(q) : c2_translate(q);
            if (!t.defined) {
                std::cout << "undefined: " << t.reason << "\n";
                return 1;
            }
            std::cout << t.cq.render() << "\n";
            return 0;
        }
        if (scheme == "c1-inverse" || scheme == "c2-inverse") {
            if (cq_file.empty()) throw std::runtime_error("--cq required for " + scheme);
            CQ q = parse_cq(slurp(cq_file));
            QueryTranslation t = scheme == "c1-inverse" ? c1_inverse(q) : c2_inverse(q);
            if (!t.defined) {
                std::cout << "undefined: " << t.reason << "\n";
                return 1;
            }
            std::cout << t.query.render() << "\n";
            return 0;
        }
        if (constraint_file.empty()) throw std::runtime_error("--constraints required");
        Sigma sigma = parse_constraints(slurp(constraint_file));
        Sigma sp = sigma_prime(sigma);
        if (sp.empty() && !sigma.empty()) {
            std::cout << "sigma-prime is empty (the translation is not applicable)\n";
            return 1;
        }
        std::cout << render(sp);
        return 0;
    }

    if (analyze_cmd->parsed()) {
        Sigma sigma = parse_constraints(slurp(constraint_file));
        if (!check.empty()) {
            bool verdict;
            if (check == "weakly-acyclic") verdict = is_weakly_acyclic(sigma);
            else if (check == "safe") verdict = is_safe(sigma);
            else if (check == "stratified") verdict = is_stratified(sigma);
            else if (check == "safely-stratified") verdict = is_safely_stratified(sigma);
            else if (check == "safely-restricted") verdict = is_safely_restricted(sigma);
            else throw std::runtime_error("unknown condition " + check);
            std::cout << check << ": " << (verdict ? "yes" : "no") << "\n";
            return verdict ? 0 : 1;
        }
        TerminationReport rep = analyze(sigma);
        if (format == "structured") {
            std::cout << "weakly_acyclic=" << rep.weakly_acyclic << "\n"
                      << "safe=" << rep.safe << "\n"
                      << "stratified=" << rep.stratified << "\n"
                      << "safely_stratified=" << rep.safely_stratified << "\n"
                      << "safely_restricted=" << rep.safely_restricted << "\n"
                      << "class=" << rep.classification() << "\n";
        } else {
            std::cout << rep.render() << "\n";
        }
        return 0;
    }

    if (gen_qbf->parsed()) {
        Qbf phi = parse_qbf(slurp(formula_file));
        QbfEncoding enc = fragment == "afo"  ? encode_qbf_afo(phi)
                          : fragment == "ao" ? encode_qbf_ao(phi)
                                             : encode_qbf_o(phi);
        write_file(out_prefix + ".doc", serialize_document(enc.doc));
        write_file(out_prefix + ".q", enc.expr->render() + "\n");
        std::cout << "target: " << enc.target.render() << "\n";
        return 0;
    }
    if (gen_sat->parsed()) {
        Cnf3 psi = parse_dimacs3(slurp(formula_file));
        SatEncoding enc = encode_3sat(psi);
        write_file(out_prefix + ".doc", serialize_document(enc.doc));
        write_file(out_prefix + ".q", enc.query.render() + "\n");
        std::cout << "target: " << enc.target.render() << "\n";
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
