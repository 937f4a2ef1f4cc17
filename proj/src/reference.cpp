#include "discmark/reference.hpp"

#include <string>
#include <unordered_set>
#include <vector>

namespace discmark::reference {

namespace {

std::string ngram_key(const bit_string& bits, std::size_t t, std::size_t h) {
    // (h+1)-bit context||bit ngram ending at t, as text.
    std::string s(h + 1, '0');
    const std::size_t take = std::min(t + 1, h + 1);
    for (std::size_t j = 0; j < take; ++j)
        s[h + 1 - take + j] = static_cast<char>('0' + bits[t + 1 - take + j]);
    return s;
}

bit_string window_before(const bit_string& bits, std::size_t t, std::size_t h) {
    bit_string history = bits.prefix(t);
    return history.window(h);
}

}  // namespace

detection_report detect_no_init(const bit_string& bits, const secret_key& key,
                                const encoder_config& cfg, double fpr) {
    const std::size_t h = cfg.context_bits;
    if (bits.size() <= h) throw text_too_short_error("reference detect_no_init: need more than h bits");

    std::unordered_set<std::string> seen;
    std::vector<detail::scored_position> positions;
    for (std::size_t t = h; t < bits.size(); ++t) {
        if (!seen.insert(ngram_key(bits, t, h)).second) continue;
        positions.push_back({bits[t], uniform_draw_z(key, bit_string{}, window_before(bits, t, h))});
    }
    const double score = detail::score_sum(positions, 0);
    const std::size_t count = positions.size();

    detection_report rep;
    rep.n_star = 0;
    rep.dedup_count = count;
    rep.best_score = score;
    rep.global_p_value = regularized_gamma_q(static_cast<int64_t>(count), score);
    rep.is_watermarked = score >= regularized_gamma_q_inverse(static_cast<int64_t>(count), fpr);
    return rep;
}

detection_report detect_with_init(const bit_string& bits, const secret_key& key,
                                  const encoder_config& cfg, double fpr) {
    const std::size_t h = cfg.context_bits;
    const std::size_t L = bits.size();
    if (L <= h + 1) throw text_too_short_error("reference detect_with_init: need more than h+1 bits");

    double best_p = 2.0, best_score = 0.0;
    std::size_t best_m = 0, best_count = 0;
    for (std::size_t m = h; m < L; ++m) {
        const bit_string chunk = bits.prefix(m);
        std::unordered_set<std::string> seen;
        std::vector<detail::scored_position> positions;
        for (std::size_t t = m; t < L; ++t) {
            if (!seen.insert(ngram_key(bits, t, h)).second) continue;
            positions.push_back({bits[t], uniform_draw_z(key, chunk, window_before(bits, t, h))});
        }
        const double score = detail::score_sum(positions, 0);
        const std::size_t count = positions.size();
        const double p = regularized_gamma_q(static_cast<int64_t>(count), score);
        if (p < best_p) {
            best_p = p;
            best_m = m;
            best_score = score;
            best_count = count;
        }
    }

    detection_report rep;
    rep.n_star = best_m;
    rep.best_score = best_score;
    rep.dedup_count = best_count;
    rep.global_p_value = global_p_value_from_best(best_p, L - h);
    rep.is_watermarked = rep.global_p_value <= fpr;
    return rep;
}

disc_detection_report disc_decode_exhaustive(const bit_string& bits, const secret_key& key,
                                             const encoder_config& cfg, const disc_config& disc,
                                             double fpr) {
    const std::size_t h = cfg.context_bits;
    const std::size_t L = bits.size();
    if (L <= h + 1) throw text_too_short_error("reference disc_decode: need more than h+1 bits");
    const uint64_t msz = disc.message_space();

    double best_p = 2.0, best_score = 0.0;
    std::size_t best_m = 0, best_count = 0;
    uint64_t best_message = 0, evaluations = 0;
    for (std::size_t m = h; m < L; ++m) {
        const bit_string chunk = bits.prefix(m);
        std::unordered_set<std::string> seen;
        std::vector<detail::scored_position> positions;
        for (std::size_t t = m; t < L; ++t) {
            if (!seen.insert(ngram_key(bits, t, h)).second) continue;
            positions.push_back({bits[t], uniform_draw_z(key, chunk, window_before(bits, t, h))});
        }
        // Within a hypothesis the dedup count is shared, so the smallest
        // p-value is the largest score sum; comparing scores directly also
        // stays well-defined when Q underflows.
        double m_best_score = 0.0;
        uint64_t m_best_message = 0;
        for (uint64_t M = 0; M < msz; ++M) {
            const double score = detail::score_sum(positions, delta_z_for(M, disc.payload_bits));
            ++evaluations;
            if (M == 0 || score > m_best_score) {
                m_best_score = score;
                m_best_message = M;
            }
        }
        const double p = regularized_gamma_q(static_cast<int64_t>(positions.size()), m_best_score);
        if (p < best_p) {
            best_p = p;
            best_m = m;
            best_message = m_best_message;
            best_score = m_best_score;
            best_count = positions.size();
        }
    }

    disc_detection_report rep;
    rep.n_star = best_m;
    rep.best_score = best_score;
    rep.dedup_count = best_count;
    rep.m_star = best_message;
    rep.delta_star = static_cast<double>(best_message) / static_cast<double>(msz);
    rep.search_evaluations = evaluations;
    rep.p_floor = disc_pvalue_floor(L, h, disc.payload_bits);
    rep.p_floor_active = best_p > rep.p_floor;
    rep.global_p_value =
        global_p_value_from_best(std::min(1.0, static_cast<double>(msz) * best_p), L - h);
    rep.is_watermarked = rep.global_p_value <= fpr;
    return rep;
}

}  // namespace discmark::reference
