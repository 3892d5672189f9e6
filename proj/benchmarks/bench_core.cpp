#include <benchmark/benchmark.h>

#include <random>

#include "p1glue/glue.hpp"

using namespace p1glue;

namespace {

RingPtr ring_for(int which) {
    switch (which) {
        case 0:
            return Ring::prime_field(5);
        case 1:
            return Ring::integers_mod(8);
        default:
            return Ring::dual(Ring::prime_field(2), 2);
    }
}

TruncatedSeries random_window(const RingPtr& ring, int width, std::mt19937_64& rng) {
    std::vector<RingElement> cs;
    cs.reserve(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) cs.push_back(random_element(ring, rng));
    return TruncatedSeries::window(ring, 0, std::move(cs), width);
}

void BM_window_mul(benchmark::State& state) {
    const auto ring = ring_for(static_cast<int>(state.range(1)));
    std::mt19937_64 rng(42);
    const int width = static_cast<int>(state.range(0));
    const auto a = random_window(ring, width, rng);
    const auto b = random_window(ring, width, rng);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
    state.SetComplexityN(width);
}
BENCHMARK(BM_window_mul)->ArgsProduct({{16, 32, 64, 128}, {0, 1, 2}});

void BM_invert_in_b(benchmark::State& state) {
    const auto ring = ring_for(static_cast<int>(state.range(0)));
    std::mt19937_64 rng(7);
    // fixed fixture: nilpotent tail + unit-led polynomial over a denominator
    LaurentPoly num = LaurentPoly::monomial(random_unit(ring, rng), 0);
    num = num + LaurentPoly::monomial(random_nilpotent(ring, rng), -2);
    num = num + LaurentPoly::monomial(random_element(ring, rng), 3);
    LaurentPoly den = LaurentPoly::constant(random_unit(ring, rng));
    den = den + LaurentPoly::monomial(random_element(ring, rng), 1);
    const BFraction f(num, den);
    for (auto _ : state) benchmark::DoNotOptimize(invert_in_b(f));
}
BENCHMARK(BM_invert_in_b)->Arg(0)->Arg(1)->Arg(2);

void BM_factorize(benchmark::State& state) {
    const auto ring = ring_for(0);
    const int n = static_cast<int>(state.range(0));
    const auto sample = random_product(ring, n, 32, 11);
    for (auto _ : state) benchmark::DoNotOptimize(factorize(sample.gamma, 32));
}
BENCHMARK(BM_factorize)->Arg(1)->Arg(2)->Arg(3);

void BM_sections(benchmark::State& state) {
    const auto ring = ring_for(0);
    std::mt19937_64 rng(3);
    MatPoly m(ring, 2);
    m.at(0, 0) = LaurentPoly::monomial(RingElement::one(ring), 1);
    m.at(0, 1) = LaurentPoly::one(ring);
    m.at(1, 1) = LaurentPoly::monomial(RingElement::one(ring), 1);
    const auto g = TransitionDatum::certify(to_fractions(m));
    const int twist = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(global_sections(g, twist).dimension);
}
BENCHMARK(BM_sections)->Arg(0)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
