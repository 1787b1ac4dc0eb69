// Benchmark: serial reference r-collision grouping vs the OpenMP-parallel
// kernel, on a synthetic corpus with planted nonce-reuse pairs.  Verifies
// that both produce identical groups before reporting timings.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecdsalab/attacks.hpp"
#include "ecdsalab/ecdsa.hpp"

using namespace ecdsalab;
using clock_type = std::chrono::steady_clock;

namespace {

std::vector<SignedMessage> make_corpus(const CurveParams& c, std::size_t count,
                                       std::size_t planted_pairs, std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<SignedMessage> corpus;
    corpus.reserve(count + 2 * planted_pairs);
    KeyPair kp = keygen(c, rng);
    Signer signer(c, kp, rng);
    for (std::size_t i = 0; i < count; ++i)
        corpus.push_back(signer.sign_hash(rng.scalar(c.n), NoncePolicy::uniform()));
    for (std::size_t i = 0; i < planted_pairs; ++i) {
        std::string tag = "pair-" + std::to_string(i);
        corpus.push_back(signer.sign_hash(rng.scalar(c.n), NoncePolicy::reuse(tag)));
        corpus.push_back(signer.sign_hash(rng.scalar(c.n), NoncePolicy::reuse(tag)));
    }
    return corpus;
}

template <typename F> double best_ms(F&& f, int iters) {
    double best = 1e300;
    for (int i = 0; i < iters; ++i) {
        auto t0 = clock_type::now();
        f();
        auto t1 = clock_type::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark the corpus scanner: serial reference vs OpenMP kernel"};
    std::size_t records = 20000, planted = 5;
    int iters = 3;
    std::uint64_t seed = 42;
    std::string curve_id = "toy32";
    app.add_option("--records", records, "Uniform-nonce records to generate");
    app.add_option("--plant", planted, "Planted nonce-reuse pairs");
    app.add_option("--iters", iters, "Timing repetitions (best-of)");
    app.add_option("--seed", seed, "PRNG seed");
    app.add_option("--curve", curve_id, "Curve id")->envname("ECDSALAB_CURVE");
    CLI11_PARSE(app, argc, argv);

    const CurveParams& c = registry_get(curve_id);
    std::cerr << "generating " << records << " records (+" << 2 * planted
              << " planted) on " << c.id << "...\n";
    std::vector<SignedMessage> corpus = make_corpus(c, records, planted, seed);

    std::vector<DuplicateGroup> serial_groups, parallel_groups;
    double serial_ms = best_ms([&] { serial_groups = detect_duplicate_r(corpus); }, iters);
    double parallel_ms =
        best_ms([&] { parallel_groups = detect_duplicate_r_parallel(corpus); }, iters);

    bool identical = serial_groups == parallel_groups;
    std::cout << "records:   " << corpus.size() << "\n";
    std::cout << "groups:    " << serial_groups.size() << "\n";
    std::cout << "serial:    " << serial_ms << " ms\n";
    std::cout << "parallel:  " << parallel_ms << " ms\n";
    std::cout << "speedup:   " << (parallel_ms > 0 ? serial_ms / parallel_ms : 0.0) << "x\n";
    std::cout << "identical: " << (identical ? "yes" : "NO") << "\n";
    return identical ? 0 : 1;
}
