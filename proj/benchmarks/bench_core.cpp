#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include <benchmark/benchmark.h>

#include "qsense/advantage.hpp"
#include "qsense/branch_sim.hpp"
#include "qsense/linprog.hpp"
#include "qsense/probe_designer.hpp"
#include "qsense/statevector_oracle.hpp"

namespace {

using namespace qsense;

double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Matrix random_rows(std::mt19937_64& rng, int rows, int cols) {
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            m(r, c) = 2.0 * unit(rng) - 1.0;
        }
    }
    return m;
}

void bm_simplex(benchmark::State& state) {
    const int sites = static_cast<int>(state.range(0));
    std::mt19937_64 rng(17);
    const Matrix rows = random_rows(rng, sites / 2, sites);
    const Vector objective = rows.row(0).transpose() + Vector::Ones(sites);
    const Vector bounds = Vector::Constant(sites, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            maximize_over_box(objective, rows, Vector::Zero(rows.rows()), bounds));
    }
}
BENCHMARK(bm_simplex)->Arg(8)->Arg(16)->Arg(32);

void bm_twirl_pipeline(benchmark::State& state) {
    const int sites = static_cast<int>(state.range(0));
    std::mt19937_64 rng(29);
    // A GHZ-like probe plus scattered extra branches keeps several blocks in
    // play.
    std::vector<Branch> branches;
    std::set<std::vector<double>> seen;
    const int count = 16;
    while (static_cast<int>(branches.size()) < count) {
        Vector eig(sites);
        for (int j = 0; j < sites; ++j) {
            eig[j] = static_cast<double>((rng() % 3)) - 1.0;
        }
        if (!seen.insert({eig.data(), eig.data() + eig.size()}).second) {
            continue;
        }
        branches.push_back({Complex(0.25, 0.0), eig});
    }
    const BranchState base = BranchState::from_branches(branches);
    const Matrix rows = random_rows(rng, 4, sites);
    const CoefficientMatrix coeffs{rows};
    const EvolutionParams params{Vector::Constant(4, 0.25)};
    const std::vector<int> noise = {1, 2};
    for (auto _ : state) {
        const BranchState evolved = evolve(base, params, coeffs);
        const BlockDecomposition blocks = twirl(evolved, coeffs, noise);
        benchmark::DoNotOptimize(qfi_mixed(blocks, coeffs.row(0)));
    }
}
BENCHMARK(bm_twirl_pipeline)->Arg(6)->Arg(12);

void bm_advantage_samples(benchmark::State& state) {
    const AlternatingScenario scenario = build_alternating(8);
    const int samples = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(product_advantage_sweep(scenario, samples));
    }
    state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(bm_advantage_samples)->Arg(1024)->Arg(8192);

void bm_statevector_oracle(benchmark::State& state) {
    const int sites = static_cast<int>(state.range(0));
    std::vector<int> counts(static_cast<std::size_t>(sites), 1);
    Vector up = Vector::Ones(sites);
    Vector alt(sites);
    for (int j = 0; j < sites; ++j) {
        alt[j] = (j % 2 == 0) ? 1.0 : -1.0;
    }
    const BranchState probe = probe_state({up, alt, 0.0});
    std::mt19937_64 rng(41);
    const CoefficientMatrix coeffs{random_rows(rng, 3, sites)};
    const EvolutionParams params{Vector::Constant(3, 0.25)};
    const std::vector<int> noise = {1, 2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(statevector_oracle(probe, counts, coeffs, params, 0, noise));
    }
}
BENCHMARK(bm_statevector_oracle)->Arg(8)->Arg(10)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
