// Minimum-length solvers: the smallest text length whose false-negative
// bound stays under FNR while thresholds hold the false-positive rate, for
// all three scheme variants, plus the closed-form approximations.
#pragma once

#include <cstdint>

namespace discmark {

struct lmin_solution {
    // Exact iterative solution, binary tokens. `exact_bits` is the total
    // length L*; the watermarked count excludes the initial chunk.
    int64_t exact_bits = 0;
    int64_t exact_watermarked_bits = 0;
    int64_t exact_bits_whole_token = 0;  // vocab_bits * ceil(L* / vocab_bits)
    int64_t exact_tokens = 0;

    // Closed-form approximation, same conventions.
    double approx_bits = 0.0;
    double approx_watermarked_bits = 0.0;
    double approx_tokens = 0.0;

    int64_t chunk_bits = 0;  // n
};

// f1(FPR, FNR) = sqrt(2 ln 1/(2 FPR)) + sqrt(4.4 ln 1/(2 FNR)).
double lmin_f1(double fpr, double fnr);

lmin_solution lmin_no_init(double zeta_b, double fpr, double fnr, std::size_t vocab_bits);

lmin_solution lmin_with_init(double zeta_b, double fpr, double fnr, std::size_t vocab_bits,
                             int64_t chunk_len);

lmin_solution disc_lmin(double zeta_b, double fpr, double fnr, std::size_t vocab_bits,
                        int64_t chunk_len, unsigned payload_bits);

// False-negative bounds at a candidate length, exposed for the minimality
// self-checks (the exact solver returns the smallest L with bound <= fnr).
double lmin_no_init_fn_bound(int64_t length_bits, double zeta_b, double fpr);
double lmin_with_init_fn_bound(int64_t length_bits, double zeta_b, double fpr,
                               std::size_t context_bits, int64_t chunk_len);
double disc_lmin_fn_bound(int64_t length_bits, double zeta_b, double fpr,
                          std::size_t context_bits, int64_t chunk_len, unsigned payload_bits);

}  // namespace discmark
