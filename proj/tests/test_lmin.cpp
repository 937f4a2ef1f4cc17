#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "discmark/lmin.hpp"

using namespace discmark;

namespace {
constexpr std::size_t kVocabBits = 16;   // ceil(log2 50272)
constexpr int64_t kChunk = 240;          // 3 * 5 tokens * 16 bits
constexpr std::size_t kH = 5 * kVocabBits;
}  // namespace

TEST_CASE("closed-form f1 and the no-init approximation example") {
    // f1(1e-3, 1e-3) = sqrt(2 ln 500) + sqrt(4.4 ln 500)
    CHECK(lmin_f1(1e-3, 1e-3) == doctest::Approx(8.7547).epsilon(1e-4));
    const auto sol = lmin_no_init(0.5, 1e-3, 1e-3, kVocabBits);
    CHECK(sol.approx_bits == doctest::Approx(306.58).epsilon(2e-3));
    CHECK(sol.chunk_bits == 0);
    CHECK(sol.exact_bits_whole_token % kVocabBits == 0);
    CHECK(sol.exact_bits_whole_token >= sol.exact_bits);
    CHECK(sol.exact_bits_whole_token - sol.exact_bits < static_cast<int64_t>(kVocabBits));
    CHECK(sol.exact_tokens == sol.exact_bits_whole_token / static_cast<int64_t>(kVocabBits));
}

TEST_CASE("beta reduces to the plain FPR at one hypothesis") {
    // 1 - (1-FPR)^{1/(L-h)} at L-h = 1.
    CHECK(-std::expm1(std::log1p(-0.01) / 1.0) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("exact solvers are minimal: the bound fails one step earlier") {
    for (double zeta : {0.3, 0.5}) {
        const auto noinit = lmin_no_init(zeta, 1e-3, 1e-3, kVocabBits);
        CHECK(lmin_no_init_fn_bound(noinit.exact_bits, zeta, 1e-3) <= 1e-3);
        CHECK(lmin_no_init_fn_bound(noinit.exact_bits - 1, zeta, 1e-3) > 1e-3);

        const auto init = lmin_with_init(zeta, 1e-3, 1e-3, kVocabBits, kChunk);
        CHECK(lmin_with_init_fn_bound(init.exact_bits, zeta, 1e-3, kH, kChunk) <= 1e-3);
        CHECK(lmin_with_init_fn_bound(init.exact_bits - 1, zeta, 1e-3, kH, kChunk) > 1e-3);

        const auto disc = disc_lmin(zeta, 1e-3, 1e-3, kVocabBits, kChunk, 10);
        CHECK(disc_lmin_fn_bound(disc.exact_bits, zeta, 1e-3, kH, kChunk, 10) <= 1e-3);
        CHECK(disc_lmin_fn_bound(disc.exact_bits - 1, zeta, 1e-3, kH, kChunk, 10) > 1e-3);
    }
}

TEST_CASE("higher entropy needs fewer tokens") {
    const auto lo = lmin_no_init(0.3, 1e-3, 1e-3, kVocabBits);
    const auto hi = lmin_no_init(0.6, 1e-3, 1e-3, kVocabBits);
    CHECK(hi.exact_bits < lo.exact_bits);
    CHECK(hi.approx_bits < lo.approx_bits);
}

TEST_CASE("random initialization and payload both increase the requirement") {
    for (double zeta : {0.3, 0.5, 0.693}) {
        const auto noinit = lmin_no_init(zeta, 1e-3, 1e-3, kVocabBits);
        const auto init = lmin_with_init(zeta, 1e-3, 1e-3, kVocabBits, kChunk);
        const auto disc = disc_lmin(zeta, 1e-3, 1e-3, kVocabBits, kChunk, 10);
        CHECK(init.exact_watermarked_bits > noinit.exact_watermarked_bits);
        CHECK(disc.exact_watermarked_bits > init.exact_watermarked_bits);
    }
}

TEST_CASE("approximation stays within a factor two of the exact answer") {
    for (double zeta : {0.2, 0.3, 0.45, 0.6, 0.693}) {
        const auto noinit = lmin_no_init(zeta, 1e-3, 1e-3, kVocabBits);
        const auto init = lmin_with_init(zeta, 1e-3, 1e-3, kVocabBits, kChunk);
        const auto disc = disc_lmin(zeta, 1e-3, 1e-3, kVocabBits, kChunk, 10);
        for (const auto* sol : {&noinit, &init, &disc}) {
            const double ratio =
                sol->approx_watermarked_bits / static_cast<double>(sol->exact_watermarked_bits);
            CHECK(ratio > 0.5);
            CHECK(ratio < 2.0);
        }
    }
}

TEST_CASE("disc approximation solves its fixed point at the worked example") {
    // zeta_b = 0.5, fpr = fnr = 1e-3, |M| = 2^10: f1(fpr/(|M| L), fnr) is
    // about 11.49, giving roughly 528 watermarked binary tokens.
    const auto sol = disc_lmin(0.5, 1e-3, 1e-3, kVocabBits, kChunk, 10);
    CHECK(sol.approx_watermarked_bits == doctest::Approx(528.0).epsilon(0.02));
    const double f = lmin_f1(1e-3 / (1024.0 * sol.approx_bits), 1e-3);
    CHECK(sol.approx_watermarked_bits == doctest::Approx(f * f / 0.25).epsilon(1e-6));
}

TEST_CASE("payload 0 collapses disc_lmin to the with-init solver") {
    const auto init = lmin_with_init(0.4, 1e-3, 1e-3, kVocabBits, kChunk);
    const auto disc = disc_lmin(0.4, 1e-3, 1e-3, kVocabBits, kChunk, 0);
    CHECK(disc.exact_bits == init.exact_bits);
    CHECK(disc.approx_bits == doctest::Approx(init.approx_bits).epsilon(1e-9));
}

TEST_CASE("requirement grows with the payload width") {
    int64_t prev = 0;
    for (unsigned m : {0u, 4u, 8u, 12u}) {
        const auto sol = disc_lmin(0.5, 1e-3, 1e-3, kVocabBits, kChunk, m);
        CHECK(sol.exact_bits >= prev);
        prev = sol.exact_bits;
    }
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(lmin_no_init(0.0, 1e-3, 1e-3, kVocabBits), std::domain_error);
    CHECK_THROWS_AS(lmin_no_init(0.9, 1e-3, 1e-3, kVocabBits), std::domain_error);
    CHECK_THROWS_AS(lmin_no_init(0.5, 0.6, 1e-3, kVocabBits), std::domain_error);
    CHECK_THROWS_AS(lmin_no_init(0.5, 1e-3, 0.0, kVocabBits), std::domain_error);
    CHECK_THROWS_AS(lmin_with_init(0.5, 1e-3, 1e-3, kVocabBits, -1), std::domain_error);
}
