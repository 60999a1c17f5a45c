#include <benchmark/benchmark.h>

#include <random>

#include "mut/fastscheme.hpp"
#include "mut/scheme.hpp"

using namespace mut;

namespace {

std::vector<std::pair<NodeId, NodeId>> queries(std::size_t n, std::size_t q, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<NodeId, NodeId>> out(q);
    for (auto& [u, v] : out) {
        u = static_cast<NodeId>(rng() % n);
        v = static_cast<NodeId>(rng() % n);
    }
    return out;
}

void BM_DecodeFast(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    std::mt19937_64 rng(1);
    const auto enc = encode_fast(random_tree(n, rng), 2);
    const auto qs = queries(n, 4096, 2);
    std::size_t i = 0;
    for (auto _ : st) {
        const auto& [u, v] = qs[i++ & 4095];
        benchmark::DoNotOptimize(decode_fast(enc.labels[u], enc.labels[v]));
    }
}
BENCHMARK(BM_DecodeFast)->RangeMultiplier(4)->Range(256, 65536);

void BM_NcaIndex(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    std::mt19937_64 rng(1);
    const auto t = random_tree(n, rng);
    const NcaIndex idx(t);
    const auto qs = queries(n, 4096, 2);
    std::size_t i = 0;
    for (auto _ : st) {
        const auto& [u, v] = qs[i++ & 4095];
        benchmark::DoNotOptimize(idx.query(u, v));
    }
}
BENCHMARK(BM_NcaIndex)->RangeMultiplier(4)->Range(256, 65536);

void BM_DecodeSimple(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    std::mt19937_64 rng(1);
    const SchemeInstance inst(UniversalSpec::make(Kind::binary, n));
    const auto labels = inst.encode(random_tree(n, rng, 2));
    const auto qs = queries(n, 4096, 2);
    std::size_t i = 0;
    for (auto _ : st) {
        const auto& [u, v] = qs[i++ & 4095];
        benchmark::DoNotOptimize(inst.decode_nca(labels[u], labels[v]));
    }
}
BENCHMARK(BM_DecodeSimple)->RangeMultiplier(4)->Range(64, 4096);

void BM_EncodeFast(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    std::mt19937_64 rng(1);
    const auto t = random_tree(n, rng);
    for (auto _ : st) benchmark::DoNotOptimize(encode_fast(t, 2));
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n));
}
BENCHMARK(BM_EncodeFast)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
