#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "stdl/search.hpp"
#include "stdl/translate.hpp"

using namespace stdl;

namespace {

TBox load(const std::string& name) {
    std::ifstream in(std::string(STDL_FIXTURES) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tbox(ss.str());
}

const std::vector<std::pair<const char*, const char*>> kExamples = {
    {"flight_cda.tbox", "B_A"}, {"two_subscenes_rcc8.tbox", "B_i"}, {"branching_rcc8.tbox", "B_i"}, {"robot_cyct_chain.tbox", "B_1"}};

void BM_Closure(benchmark::State& st) {
    auto [file, name] = kExamples[st.range(0)];
    TBox t = load(file);
    Concept c = parse_concept(name, t);
    for (auto _ : st) benchmark::DoNotOptimize(close_tbox(t, c));
    st.SetLabel(file);
}
BENCHMARK(BM_Closure)->DenseRange(0, 3);

void BM_Decide(benchmark::State& st) {
    auto [file, name] = kExamples[st.range(0)];
    TBox t = load(file);
    Automaton a = build_automaton(close_tbox(t, parse_concept(name, t)));
    SearchOptions opts;
    opts.propagation = st.range(1) ? Propagation::Eager : Propagation::Lazy;
    for (auto _ : st) benchmark::DoNotOptimize(decide(a, opts));
    st.SetLabel(std::string(file) + (st.range(1) ? " eager" : " lazy"));
}
BENCHMARK(BM_Decide)->ArgsProduct({{0, 1, 2, 3}, {0, 1}});

void BM_Pltl(benchmark::State& st) {
    const char* fs[] = {"(and (F p) (G (not p)))", "(and (G (F p)) (G (F (not p))))",
                        "(U p (and q (X (G (not p)))))"};
    Formula f = parse_formula(fs[st.range(0)]);
    for (auto _ : st) {
        Translation tr = pltl_to_tbox(f);
        benchmark::DoNotOptimize(decide_sat(tr.tbox, Concept::name(tr.root, true)));
    }
}
BENCHMARK(BM_Pltl)->DenseRange(0, 2);

// Random dense networks, about half of each relation's atoms allowed.
void BM_SolveScenario(benchmark::State& st) {
    AlgebraId alg = st.range(0) == 0 ? AlgebraId::RCC8 : AlgebraId::CDA;
    int n = int(st.range(1));
    std::mt19937 rng(7);
    std::vector<Qsp> nets;
    for (int k = 0; k < 32; ++k) {
        Qsp q(alg);
        for (int i = 0; i < n; ++i) q.var("v" + std::to_string(i));
        std::uniform_int_distribution<int> pick(0, atom_count(alg) - 1);
        std::bernoulli_distribution coin(0.5);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                Relation r = Relation::atom(alg, pick(rng));
                for (int x = 0; x < atom_count(alg); ++x)
                    if (coin(rng)) r = r | Relation::atom(alg, x);
                q.constrain(i, j, r);
            }
        nets.push_back(std::move(q));
    }
    size_t i = 0;
    for (auto _ : st) benchmark::DoNotOptimize(solve_scenario(nets[i++ % nets.size()]));
}
BENCHMARK(BM_SolveScenario)->ArgsProduct({{0, 1}, {6, 10, 16}});

}  // namespace

BENCHMARK_MAIN();
