#include <benchmark/benchmark.h>

#include "sparqlopt/algebra.hpp"
#include "sparqlopt/chase.hpp"
#include "sparqlopt/parser.hpp"
#include "sparqlopt/rdf_io.hpp"
#include "sparqlopt/reductions.hpp"
#include "sparqlopt/rewrite.hpp"
#include "sparqlopt/termination.hpp"

using namespace sparqlopt;

static void BM_evaluate_erratum(benchmark::State& state) {
    Document d = parse_document("(0, c, 1)\n");
    ExprPtr e = parse_expr("((0,c,?a) OPT ((?a,c,1) UNION (0,c,?b)))");
    AlgPtr a = translate(*e);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(*a, d));
}
BENCHMARK(BM_evaluate_erratum);

static void BM_evaluate_qbf_o(benchmark::State& state) {
    Qbf phi = parse_qbf("forall x1 exists y1 : (x1 | !y1) & (!x1 | y1)");
    QbfEncoding enc = encode_qbf_o(phi);
    AlgPtr a = translate(*enc.expr);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(*a, enc.doc));
}
BENCHMARK(BM_evaluate_qbf_o);

static void BM_normalize_filters(benchmark::State& state) {
    ExprPtr e = parse_expr(
        "(((?x,p,?y) AND (?y,q,?z)) UNION ((?x,p,?z) AND (?z,q,?y))) FILTER (?x = c && ?y = ?z)");
    AlgPtr a = translate(*e);
    for (auto _ : state) benchmark::DoNotOptimize(normalize_filters(a));
}
BENCHMARK(BM_normalize_filters);

static void BM_chase_safe_example(benchmark::State& state) {
    Sigma sigma = parse_constraints("R(x1,x2,x3), S(x2) -> exists y . R(x2,y,x1)\n");
    Instance inst;
    for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
        inst.insert(Atom{"R", {Arg::constant("a" + std::to_string(i)),
                               Arg::constant("b" + std::to_string(i)),
                               Arg::constant("c" + std::to_string(i))}});
        inst.insert(Atom{"S", {Arg::constant("b" + std::to_string(i))}});
    }
    for (auto _ : state) benchmark::DoNotOptimize(chase(inst, sigma));
}
BENCHMARK(BM_chase_safe_example)->Range(1, 8);

static void BM_analyze_golden_pair(benchmark::State& state) {
    Sigma sigma = parse_constraints(
        "S(x2,x3), R(x1,x2,x3) -> exists y . R(x2,y,x1)\n"
        "R(x1,x2,x3) -> S(x1,x3)\n");
    for (auto _ : state) benchmark::DoNotOptimize(analyze(sigma));
}
BENCHMARK(BM_analyze_golden_pair);

BENCHMARK_MAIN();
