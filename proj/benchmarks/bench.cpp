#include <benchmark/benchmark.h>

#include <cmath>

#include "qarena/bachet.hpp"
#include "qarena/chess.hpp"
#include "qarena/formula.hpp"
#include "qarena/game.hpp"
#include "qarena/limits.hpp"
#include "qarena/mate_game.hpp"

using namespace qarena;

static void BM_Perft(benchmark::State& state) {
    const auto root = chess::parse_fen(chess::kStartFen);
    const int depth = static_cast<int>(state.range(0));
    std::uint64_t nodes = 0;
    for (auto _ : state) {
        nodes = chess::perft(root, depth);
        benchmark::DoNotOptimize(nodes);
    }
    state.counters["nodes/s"] = benchmark::Counter(double(nodes), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Perft)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_SolveMate(benchmark::State& state) {
    const auto root = chess::parse_fen(state.range(0) == 1 ? "4k3/1R6/R7/8/8/8/8/4K3 w - - 0 20"
                                                           : "4k3/R7/R7/8/8/8/8/4K3 w - - 0 20");
    const auto g = chess::MateGame::for_position(root);
    for (auto _ : state) benchmark::DoNotOptimize(game::solve(g, root, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SolveMate)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

static void BM_SolveBachet(benchmark::State& state) {
    const bachet::BachetGame g;
    const bachet::BachetState s{static_cast<int>(state.range(0)), game::Player::Verifier};
    for (auto _ : state) benchmark::DoNotOptimize(game::solve(g, s, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SolveBachet)->Arg(10)->Arg(30)->Arg(100);

static void BM_VerifyDelta(benchmark::State& state) {
    limits::LimitProblem p{limits::ProblemKind::FunctionLimitAtPoint, limits::parse_expr("x^2"), 3, 9};
    const double eps = 1.0 / double(state.range(0));
    const double delta = 0.99 * (std::sqrt(9 + eps) - 3);
    for (auto _ : state) benchmark::DoNotOptimize(limits::verify_delta(p, eps, delta));
}
BENCHMARK(BM_VerifyDelta)->Arg(1)->Arg(1000)->Arg(1000000);

static void BM_VerifyDeltaSingularity(benchmark::State& state) {
    limits::LimitProblem p{limits::ProblemKind::FunctionLimitAtPoint, limits::parse_expr("(x^2 - 9)/(x - 3)"), 3, 6};
    for (auto _ : state) benchmark::DoNotOptimize(limits::verify_delta(p, 0.5, 0.4));
}
BENCHMARK(BM_VerifyDeltaSingularity);

static void BM_Negate(benchmark::State& state) {
    const auto f = formula::parse_formula(
        "exists a. forall eps>0. exists M. forall x. (x >= M) -> abs(f(x) - a) < eps");
    for (auto _ : state) benchmark::DoNotOptimize(formula::negate(f, {.absorb_bounds = true}));
}
BENCHMARK(BM_Negate);

static void BM_ParseFormula(benchmark::State& state) {
    const char* text = "exists a. forall eps>0. exists delta>0. forall x. (0 < abs(x - 3) and abs(x - 3) < delta) -> "
                       "abs(f(x) - a) < eps";
    for (auto _ : state) benchmark::DoNotOptimize(formula::parse_formula(text));
}
BENCHMARK(BM_ParseFormula);

BENCHMARK_MAIN();
