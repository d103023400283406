#include <benchmark/benchmark.h>

#include "symcon/dirac.hpp"
#include "symcon/symplectic.hpp"

#include <sstream>

namespace {

using namespace symcon;

/// Hypersphere model text for a given dimension, mirroring models/hypersphere.model.
std::string hypersphere_text(int n) {
    std::ostringstream out;
    out << "[variables]\n";
    out << "q[1.." << n << "] : coordinate\n";
    out << "p[1.." << n << "] : momentum\n";
    out << "[one_form]\n";
    for (int i = 1; i <= n; ++i) out << "q_" << i << " = p_" << i << "\n";
    out << "[potential]\n(";
    for (int i = 1; i <= n; ++i) out << (i > 1 ? " + " : "") << "p_" << i << "^2";
    out << ")/2\n";
    out << "[constraints]\nOmega1 : (";
    for (int i = 1; i <= n; ++i) out << (i > 1 ? " + " : "") << "q_" << i << "^2";
    out << " - 1)/2 [ad-hoc]\n";
    return out.str();
}

void bm_build_f(benchmark::State& state) {
    Model m = parse_model(hypersphere_text(static_cast<int>(state.range(0))), "hypersphere");
    for (auto _ : state) benchmark::DoNotOptimize(build_f(m));
}
BENCHMARK(bm_build_f)->Arg(3)->Arg(5)->Arg(8);

void bm_determinant(benchmark::State& state) {
    Model m = parse_model(hypersphere_text(static_cast<int>(state.range(0))), "hypersphere");
    AnalysisReport r = run_modified_bw(m);
    const ExprMatrix& f = r.levels.back().f.entries;
    for (auto _ : state) benchmark::DoNotOptimize(determinant(f));
}
BENCHMARK(bm_determinant)->Arg(2)->Arg(3)->Arg(5);

void bm_inverse(benchmark::State& state) {
    Model m = parse_model(hypersphere_text(static_cast<int>(state.range(0))), "hypersphere");
    AnalysisReport r = run_modified_bw(m);
    const ExprMatrix& f = r.levels.back().f.entries;
    for (auto _ : state) benchmark::DoNotOptimize(inverse(f));
}
BENCHMARK(bm_inverse)->Arg(2)->Arg(3)->Arg(5);

void bm_modified_bw(benchmark::State& state) {
    Model m = parse_model(hypersphere_text(static_cast<int>(state.range(0))), "hypersphere");
    for (auto _ : state) benchmark::DoNotOptimize(run_modified_bw(m));
}
BENCHMARK(bm_modified_bw)->Arg(2)->Arg(3)->Arg(5);

void bm_poly_gcd(benchmark::State& state) {
    SymbolTable table;
    Symbol x = table.declare("x", SymbolKind::Coordinate);
    Symbol y = table.declare("y", SymbolKind::Coordinate);
    Symbol z = table.declare("z", SymbolKind::Coordinate);
    Expr g = (Expr::var(x) + Expr::var(y) * Expr::var(z)).pow(3);
    Expr a = g * (Expr::var(x) - Expr::var(z)).pow(2);
    Expr b = g * (Expr::var(y) + Expr::from_int(2)).pow(2);
    for (auto _ : state) benchmark::DoNotOptimize(poly_gcd(a.num(), b.num()));
}
BENCHMARK(bm_poly_gcd);

} // namespace

BENCHMARK_MAIN();
