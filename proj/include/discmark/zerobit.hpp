// Zero-bit distortion-free watermark: encoders (with and without the random
// initial chunk), the exponential score, and the matching detectors.
//
// Encoding maps the keyed uniform draw y_i through the half-open interval
// rule: bit = 1 iff y_i < p_i(1). Detection sums s(w, y) = ln 1/y (w=1) or
// ln 1/(1-y) (w=0) over deduplicated context||bit ngrams; under the null the
// deduplicated sum is Erlang(K, 1).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "discmark/bits.hpp"
#include "discmark/keyed_randomness.hpp"
#include "discmark/model.hpp"
#include "discmark/special_functions.hpp"

namespace discmark {

inline double default_entropy_threshold(std::size_t context_bits) {
    return 4.0 * std::log(2.0) * static_cast<double>(context_bits);
}

struct encoder_config {
    std::size_t context_bits = 85;  // h, binary tokens; 5 tokens of 17 bits
    double entropy_threshold = default_entropy_threshold(85);
    std::size_t max_bits = std::size_t{1} << 20;
};

struct watermarked_text {
    bit_string bits;
    std::size_t initial_chunk_len = 0;  // n; 0 for the no-init variant
    // False when the entropy gate never tripped before max_bits / the source
    // ran out; such text carries no watermark.
    bool watermark_applied = true;
    std::vector<double> per_bit_probabilities;  // diagnostic record of p_i(1)
};

struct detection_report {
    bool is_watermarked = false;
    double global_p_value = 1.0;
    std::size_t n_star = 0;     // estimated initial-chunk length
    double best_score = 0.0;    // C at the winning hypothesis
    std::size_t dedup_count = 0;  // |A_m| at the winning hypothesis
};

struct text_too_short_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class exec_policy : uint8_t { serial, parallel };

// Score of one (bit, draw) pair; Exp(1) under the null.
inline double score_bit(uint8_t w, double y) {
    return w ? log_inverse(y) : log_inverse(1.0 - y);
}

// Interval threshold for "y < p" on the integer draw: z < p * 2^64.
inline uint64_t probability_to_z(double p1) {
    if (p1 >= 1.0) return ~uint64_t{0};
    if (p1 <= 0.0) return 0;
    return static_cast<uint64_t>(std::ldexp(p1, 64));
}

watermarked_text encode_no_init(const bit_distribution_source& source, const secret_key& key,
                                const encoder_config& cfg);

watermarked_text encode_with_init(const bit_distribution_source& source, const secret_key& key,
                                  const encoder_config& cfg, std::mt19937_64& rng);

detection_report detect_no_init(const bit_string& bits, const secret_key& key,
                                const encoder_config& cfg, double fpr);

detection_report detect_with_init(const bit_string& bits, const secret_key& key,
                                  const encoder_config& cfg, double fpr,
                                  exec_policy exec = exec_policy::parallel);

// Multiple-testing correction over L-h chunk hypotheses: 1 - (1-p)^(L-h).
double global_p_value_from_best(double p_best, std::size_t hypotheses);

namespace detail {

// One deduplicated scoreable position: its bit and integer draw.
struct scored_position {
    uint8_t w;
    uint64_t z;
};

// C(W, Y; delta): blocked sum of score_bit over the positions with the draw
// shifted by delta_z. Factors are multiplied 15 at a time before taking one
// log; every in-range factor is >= 2^-64, so a block cannot underflow.
// Draws that at double precision land on 0 or 1 take the clamped score out
// of line.
inline double score_sum(const std::vector<scored_position>& positions, uint64_t delta_z) {
    const double clamp_score = log_inverse(0.0);
    double total = 0.0;
    const std::size_t n = positions.size();
    std::size_t i = 0;
    while (i < n) {
        const std::size_t end = std::min(n, i + 15);
        double prod = 1.0;
        for (; i < end; ++i) {
            const double y = unit_from_z(positions[i].z - delta_z);
            const double v = positions[i].w ? y : 1.0 - y;
            if (v <= 0.0) {
                total += clamp_score;
                continue;
            }
            prod *= v;
        }
        total -= std::log(prod);
    }
    return total;
}

// Collects the deduplicated positions for chunk hypothesis m: scoring starts
// at bit index `first_scored` and runs to the end, dedup key is the
// (h+1)-bit context||bit ngram (left-zero-padded near the text start).
std::vector<scored_position> gather_scored_positions(const bit_string& bits,
                                                     const keyed_uniform_generator& gen,
                                                     std::size_t first_scored, std::size_t h_bits);

// Shared encoder control flow (Eq.-(6) rule shifted by delta_z; zero-bit is
// delta_z = 0). rng may be null when with_init is false.
watermarked_text encode_core(const bit_distribution_source& source, const secret_key& key,
                             const encoder_config& cfg, uint64_t delta_z, bool with_init,
                             std::mt19937_64* rng);

}  // namespace detail

}  // namespace discmark
