#include "discmark/zerobit.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace discmark {

namespace detail {

watermarked_text encode_core(const bit_distribution_source& source, const secret_key& key,
                             const encoder_config& cfg, uint64_t delta_z, bool with_init,
                             std::mt19937_64* rng) {
    if (with_init && rng == nullptr)
        throw std::invalid_argument("encode_core: with-init encoding needs an RNG");

    std::size_t limit = cfg.max_bits;
    if (const auto fixed = source.fixed_length()) limit = std::min(limit, *fixed);

    watermarked_text out;
    out.per_bit_probabilities.reserve(limit);

    bool keyed = !with_init;
    double acc_entropy = 0.0;
    keyed_uniform_generator gen(key, bit_string{});

    while (out.bits.size() < limit) {
        const double p1 = source.next_bit_probability(out.bits);
        out.per_bit_probabilities.push_back(p1);
        if (!keyed) {
            const uint8_t w = sample_plain_bit(p1, *rng);
            out.bits.push_back(w);
            acc_entropy += log_inverse(w ? p1 : 1.0 - p1);
            if (acc_entropy >= cfg.entropy_threshold && out.bits.size() >= cfg.context_bits) {
                out.initial_chunk_len = out.bits.size();
                gen = keyed_uniform_generator(key, out.bits);
                keyed = true;
            }
        } else {
            const uint64_t z = gen.draw_z_at(out.bits, out.bits.size(), cfg.context_bits);
            const uint64_t shifted = z - delta_z;  // wraps mod 2^64
            out.bits.push_back(shifted < probability_to_z(p1) ? 1 : 0);
        }
    }

    out.watermark_applied = keyed;
    if (!keyed) out.initial_chunk_len = out.bits.size();
    return out;
}

std::vector<scored_position> gather_scored_positions(const bit_string& bits,
                                                     const keyed_uniform_generator& gen,
                                                     std::size_t first_scored, std::size_t h_bits) {
    std::vector<scored_position> out;
    const std::size_t L = bits.size();
    if (first_scored >= L) return out;
    out.reserve(L - first_scored);

    std::unordered_set<std::string> seen;
    seen.reserve(2 * (L - first_scored));
    std::string ngram((h_bits + 1 + 7) / 8, '\0');
    for (std::size_t t = first_scored; t < L; ++t) {
        // (h+1)-bit ngram over [t-h, t], zero-padded when t < h.
        std::fill(ngram.begin(), ngram.end(), '\0');
        const std::size_t take = std::min(t + 1, h_bits + 1);
        const std::size_t pad = h_bits + 1 - take;
        for (std::size_t j = 0; j < take; ++j) {
            const std::size_t k = pad + j;
            ngram[k / 8] = static_cast<char>(static_cast<uint8_t>(ngram[k / 8]) |
                                             (bits[t + 1 - take + j] << (7 - k % 8)));
        }
        if (!seen.insert(ngram).second) continue;
        out.push_back({bits[t], gen.draw_z_at(bits, t, h_bits)});
    }
    return out;
}

}  // namespace detail

watermarked_text encode_no_init(const bit_distribution_source& source, const secret_key& key,
                                const encoder_config& cfg) {
    return detail::encode_core(source, key, cfg, 0, false, nullptr);
}

watermarked_text encode_with_init(const bit_distribution_source& source, const secret_key& key,
                                  const encoder_config& cfg, std::mt19937_64& rng) {
    return detail::encode_core(source, key, cfg, 0, true, &rng);
}

double global_p_value_from_best(double p_best, std::size_t hypotheses) {
    const double p = std::clamp(p_best, 0.0, 1.0);
    if (p >= 1.0) return 1.0;
    // 1 - (1-p)^N without cancellation for small p.
    const double g = -std::expm1(static_cast<double>(hypotheses) * std::log1p(-p));
    return std::clamp(g, 0.0, 1.0);
}

detection_report detect_no_init(const bit_string& bits, const secret_key& key,
                                const encoder_config& cfg, double fpr) {
    const std::size_t h = cfg.context_bits;
    if (bits.size() <= h) throw text_too_short_error("detect_no_init: need more than h bits");

    keyed_uniform_generator gen(key, bit_string{});
    const auto positions = detail::gather_scored_positions(bits, gen, h, h);
    const double score = detail::score_sum(positions, 0);

    detection_report rep;
    rep.n_star = 0;
    rep.dedup_count = positions.size();
    rep.best_score = score;
    rep.global_p_value = regularized_gamma_q(static_cast<int64_t>(positions.size()), score);
    const double theta = regularized_gamma_q_inverse(static_cast<int64_t>(positions.size()), fpr);
    rep.is_watermarked = score >= theta;
    return rep;
}

detection_report detect_with_init(const bit_string& bits, const secret_key& key,
                                  const encoder_config& cfg, double fpr, exec_policy exec) {
    const std::size_t h = cfg.context_bits;
    const std::size_t L = bits.size();
    if (L <= h + 1) throw text_too_short_error("detect_with_init: need more than h+1 bits");

    const std::size_t n_hyp = L - h;  // m = h .. L-1
    std::vector<double> pvals(n_hyp), scores(n_hyp);
    std::vector<std::size_t> kcounts(n_hyp);

    const bool parallel = exec == exec_policy::parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (std::ptrdiff_t mi = 0; mi < static_cast<std::ptrdiff_t>(n_hyp); ++mi) {
        const std::size_t m = h + static_cast<std::size_t>(mi);
        keyed_uniform_generator gen(key, bits.prefix(m));
        const auto positions = detail::gather_scored_positions(bits, gen, m, h);
        const double score = detail::score_sum(positions, 0);
        scores[static_cast<std::size_t>(mi)] = score;
        kcounts[static_cast<std::size_t>(mi)] = positions.size();
        pvals[static_cast<std::size_t>(mi)] =
            regularized_gamma_q(static_cast<int64_t>(positions.size()), score);
    }
    (void)parallel;

    std::size_t best = 0;
    for (std::size_t mi = 1; mi < n_hyp; ++mi)
        if (pvals[mi] < pvals[best]) best = mi;  // ties keep the smallest m

    detection_report rep;
    rep.n_star = h + best;
    rep.best_score = scores[best];
    rep.dedup_count = kcounts[best];
    rep.global_p_value = global_p_value_from_best(pvals[best], n_hyp);
    rep.is_watermarked = rep.global_p_value <= fpr;
    return rep;
}

}  // namespace discmark
