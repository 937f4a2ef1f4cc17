// Distribution Interval Shift Coding: the message-dependent cyclic shift of
// the zero-bit mapping rule, its encoder, and the exhaustive / coarse-to-fine
// decoders.
//
// Message M in [0, 2^m) shifts the 1-interval start to delta_M = M / 2^m.
// Shifts are held as 64-bit fixed-point fractions so every interval test is
// an exact integer comparison; the scores are plain doubles on the shifted
// draw.
#pragma once

#include <cstdint>

#include "discmark/zerobit.hpp"

namespace discmark {

struct disc_config {
    unsigned payload_bits = 0;  // m; message space size 2^m, 0 = zero-bit
    bool fast_enabled = true;
    std::size_t coarse_grid_size = 16;  // clamped to the message space size
    std::size_t refine_radius = 1;      // coarse cells on each side

    uint64_t message_space() const { return uint64_t{1} << payload_bits; }
};

struct disc_detection_report : detection_report {
    uint64_t m_star = 0;       // decoded message index M*
    double delta_star = 0.0;   // delta_{M*}
    uint64_t search_evaluations = 0;  // number of (m, M') score-sum computations
    // Validity floor of the disjoint-events reading of the message union.
    // Above it (p_floor_active) the |M|-corrected value is still a sound
    // upper bound on the p-value, just conservative rather than tight.
    double p_floor = 1.0;
    bool p_floor_active = false;
};

// 64-bit fixed-point shift for message M: M * 2^(64-m).
inline uint64_t delta_z_for(uint64_t message, unsigned payload_bits) {
    return payload_bits == 0 ? 0 : message << (64 - payload_bits);
}

// Mapping rule Eqs.: bit = 1 iff y lies in the length-p1 interval starting at
// delta_m, cyclically. Equivalent to un-shifting y and applying the zero-bit
// rule.
inline uint8_t disc_map_bit(double p1, double delta_m, double y) {
    if (p1 >= 1.0) return 1;
    if (p1 <= 0.0) return 0;
    double shifted = y - delta_m;
    if (shifted < 0.0) shifted += 1.0;
    return shifted < p1 ? 1 : 0;
}

// Score against hypothesis shift delta_mprime; reduces to score_bit at 0.
inline double disc_score_bit(uint8_t w, double y, double delta_mprime) {
    double shifted = y - delta_mprime;
    if (shifted < 0.0) shifted += 1.0;
    return score_bit(w, shifted);
}

watermarked_text disc_encode(const bit_distribution_source& source, const secret_key& key,
                             const encoder_config& cfg, const disc_config& disc, uint64_t message,
                             std::mt19937_64& rng);

// No-initial-chunk variant: every bit is keyed, contexts are zero-padded near
// the start. This is the encoder of the simulation experiments, where the
// decoder assumes chunk length 0.
watermarked_text disc_encode_no_init(const bit_distribution_source& source, const secret_key& key,
                                     const encoder_config& cfg, const disc_config& disc,
                                     uint64_t message);

disc_detection_report disc_decode_exhaustive(const bit_string& bits, const secret_key& key,
                                             const encoder_config& cfg, const disc_config& disc,
                                             double fpr, exec_policy exec = exec_policy::parallel);

disc_detection_report disc_decode_fast(const bit_string& bits, const secret_key& key,
                                       const encoder_config& cfg, const disc_config& disc,
                                       double fpr, exec_policy exec = exec_policy::parallel);

// Single-hypothesis decode at a known chunk length (0 for texts encoded
// without initialization). Scoring starts at the chunk end and uses padded
// contexts, mirroring disc_encode_no_init. The global p-value carries the
// message-space union bound only.
disc_detection_report disc_decode_fixed_chunk(const bit_string& bits, const secret_key& key,
                                              const encoder_config& cfg, const disc_config& disc,
                                              double fpr, std::size_t chunk_len);

// Validity floor of the |M|-union global p-value: min over the candidate
// shapes k of Q(k, k * m * ln 2). Decoders report global p = 1 when the best
// per-hypothesis p-value exceeds this floor.
double disc_pvalue_floor(std::size_t length_bits, std::size_t context_bits, unsigned payload_bits);

}  // namespace discmark
