#include "discmark/disc.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace discmark {

namespace {

// Floor of the union-bound validity region when the candidate Erlang shapes
// run 1..kmax. Q(k, k x) with x = m ln 2 is increasing in k for x < 1 and
// decreasing for x > 1, so the minimum sits at an endpoint.
double pvalue_floor_for_max_shape(int64_t kmax, unsigned payload_bits) {
    if (payload_bits == 0) return 1.0;
    const double x = static_cast<double>(payload_bits) * std::log(2.0);
    if (x <= 1.0) return regularized_gamma_q(1, x);
    return regularized_gamma_q(kmax, static_cast<double>(kmax) * x);
}

double score_sum_at_shift(const std::vector<detail::scored_position>& positions, uint64_t delta_z) {
    return detail::score_sum(positions, delta_z);
}

struct shift_search_result {
    uint64_t best_message = 0;
    double best_score = 0.0;
    uint64_t evaluations = 0;
};

shift_search_result search_exhaustive(const std::vector<detail::scored_position>& positions,
                                      const disc_config& disc) {
    shift_search_result res;
    const uint64_t msz = disc.message_space();
    res.best_score = score_sum_at_shift(positions, 0);
    res.evaluations = 1;
    for (uint64_t M = 1; M < msz; ++M) {
        const double c = score_sum_at_shift(positions, delta_z_for(M, disc.payload_bits));
        ++res.evaluations;
        if (c > res.best_score) {
            res.best_score = c;
            res.best_message = M;
        }
    }
    return res;
}

// Coarse pass over equally spaced shifts, then a fine pass over every shift
// within +/- refine_radius coarse cells of the coarse winner. The score
// curve over the shift is a single broad peak, so the window search finds
// the global maximum unless noise moves it more than a coarse cell away.
shift_search_result search_coarse_fine(const std::vector<detail::scored_position>& positions,
                                       const disc_config& disc) {
    const uint64_t msz = disc.message_space();
    const uint64_t grid = std::min<uint64_t>(std::max<std::size_t>(disc.coarse_grid_size, 1), msz);
    if (grid == msz) return search_exhaustive(positions, disc);

    shift_search_result res;
    std::set<uint64_t> visited;
    auto eval = [&](uint64_t M) {
        if (!visited.insert(M).second) return;
        const double c = score_sum_at_shift(positions, delta_z_for(M, disc.payload_bits));
        ++res.evaluations;
        if (res.evaluations == 1 || c > res.best_score ||
            (c == res.best_score && M < res.best_message)) {
            res.best_score = c;
            res.best_message = M;
        }
    };

    uint64_t coarse_best = 0;
    double coarse_best_score = 0.0;
    for (uint64_t j = 0; j < grid; ++j) {
        const uint64_t M = j * msz / grid;
        const double c = score_sum_at_shift(positions, delta_z_for(M, disc.payload_bits));
        ++res.evaluations;
        visited.insert(M);
        if (j == 0 || c > coarse_best_score) {
            coarse_best_score = c;
            coarse_best = M;
        }
        if (res.evaluations == 1 || c > res.best_score) {
            res.best_score = c;
            res.best_message = M;
        }
    }

    const uint64_t cell = msz / grid;
    const uint64_t span = cell * static_cast<uint64_t>(disc.refine_radius);
    for (uint64_t d = 1; d <= span; ++d) {
        eval((coarse_best + d) % msz);
        eval((coarse_best + msz - d % msz) % msz);
    }
    return res;
}

shift_search_result search_shifts(const std::vector<detail::scored_position>& positions,
                                  const disc_config& disc, bool exhaustive) {
    if (exhaustive || !disc.fast_enabled) return search_exhaustive(positions, disc);
    return search_coarse_fine(positions, disc);
}

disc_detection_report decode_scan(const bit_string& bits, const secret_key& key,
                                  const encoder_config& cfg, const disc_config& disc, double fpr,
                                  bool exhaustive, exec_policy exec) {
    const std::size_t h = cfg.context_bits;
    const std::size_t L = bits.size();
    if (L <= h + 1) throw text_too_short_error("disc decode: need more than h+1 bits");

    const std::size_t n_hyp = L - h;
    std::vector<double> pvals(n_hyp), scores(n_hyp);
    std::vector<std::size_t> kcounts(n_hyp);
    std::vector<uint64_t> messages(n_hyp), evals(n_hyp);

    const bool parallel = exec == exec_policy::parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (std::ptrdiff_t mi = 0; mi < static_cast<std::ptrdiff_t>(n_hyp); ++mi) {
        const std::size_t i = static_cast<std::size_t>(mi);
        const std::size_t m = h + i;
        keyed_uniform_generator gen(key, bits.prefix(m));
        const auto positions = detail::gather_scored_positions(bits, gen, m, h);
        const auto found = search_shifts(positions, disc, exhaustive);
        scores[i] = found.best_score;
        messages[i] = found.best_message;
        evals[i] = found.evaluations;
        kcounts[i] = positions.size();
        pvals[i] = regularized_gamma_q(static_cast<int64_t>(positions.size()), found.best_score);
    }
    (void)parallel;

    std::size_t best = 0;
    for (std::size_t i = 1; i < n_hyp; ++i)
        if (pvals[i] < pvals[best]) best = i;

    disc_detection_report rep;
    rep.n_star = h + best;
    rep.best_score = scores[best];
    rep.dedup_count = kcounts[best];
    rep.m_star = messages[best];
    rep.delta_star = static_cast<double>(rep.m_star) / static_cast<double>(disc.message_space());
    for (std::size_t i = 0; i < n_hyp; ++i) rep.search_evaluations += evals[i];

    rep.p_floor = disc_pvalue_floor(L, h, disc.payload_bits);
    rep.p_floor_active = pvals[best] > rep.p_floor;
    // |M| p* is a union *bound* on the per-hypothesis p-value at every
    // threshold, so the corrected global value stays conservative even
    // outside the disjoint-events regime the floor marks.
    const double corrected = std::min(1.0, static_cast<double>(disc.message_space()) * pvals[best]);
    rep.global_p_value = global_p_value_from_best(corrected, n_hyp);
    rep.is_watermarked = rep.global_p_value <= fpr;
    return rep;
}

}  // namespace

watermarked_text disc_encode(const bit_distribution_source& source, const secret_key& key,
                             const encoder_config& cfg, const disc_config& disc, uint64_t message,
                             std::mt19937_64& rng) {
    if (message >= disc.message_space()) throw std::invalid_argument("disc_encode: message out of range");
    return detail::encode_core(source, key, cfg, delta_z_for(message, disc.payload_bits), true, &rng);
}

watermarked_text disc_encode_no_init(const bit_distribution_source& source, const secret_key& key,
                                     const encoder_config& cfg, const disc_config& disc,
                                     uint64_t message) {
    if (message >= disc.message_space())
        throw std::invalid_argument("disc_encode_no_init: message out of range");
    return detail::encode_core(source, key, cfg, delta_z_for(message, disc.payload_bits), false,
                               nullptr);
}

disc_detection_report disc_decode_exhaustive(const bit_string& bits, const secret_key& key,
                                             const encoder_config& cfg, const disc_config& disc,
                                             double fpr, exec_policy exec) {
    return decode_scan(bits, key, cfg, disc, fpr, true, exec);
}

disc_detection_report disc_decode_fast(const bit_string& bits, const secret_key& key,
                                       const encoder_config& cfg, const disc_config& disc,
                                       double fpr, exec_policy exec) {
    return decode_scan(bits, key, cfg, disc, fpr, false, exec);
}

disc_detection_report disc_decode_fixed_chunk(const bit_string& bits, const secret_key& key,
                                              const encoder_config& cfg, const disc_config& disc,
                                              double fpr, std::size_t chunk_len) {
    const std::size_t L = bits.size();
    if (chunk_len >= L) throw text_too_short_error("disc_decode_fixed_chunk: chunk consumes the text");

    keyed_uniform_generator gen(key, bits.prefix(chunk_len));
    const auto positions = detail::gather_scored_positions(bits, gen, chunk_len, cfg.context_bits);
    if (positions.empty()) throw text_too_short_error("disc_decode_fixed_chunk: nothing to score");
    const auto found = search_shifts(positions, disc, !disc.fast_enabled);

    disc_detection_report rep;
    rep.n_star = chunk_len;
    rep.best_score = found.best_score;
    rep.dedup_count = positions.size();
    rep.m_star = found.best_message;
    rep.delta_star = static_cast<double>(rep.m_star) / static_cast<double>(disc.message_space());
    rep.search_evaluations = found.evaluations;

    const double p = regularized_gamma_q(static_cast<int64_t>(positions.size()), found.best_score);
    rep.p_floor = pvalue_floor_for_max_shape(static_cast<int64_t>(positions.size()), disc.payload_bits);
    rep.p_floor_active = p > rep.p_floor;
    rep.global_p_value = std::min(1.0, static_cast<double>(disc.message_space()) * p);
    rep.is_watermarked = rep.global_p_value <= fpr;
    return rep;
}

double disc_pvalue_floor(std::size_t length_bits, std::size_t context_bits, unsigned payload_bits) {
    if (length_bits <= context_bits) throw std::invalid_argument("disc_pvalue_floor: need L > h");
    return pvalue_floor_for_max_shape(static_cast<int64_t>(length_bits - context_bits), payload_bits);
}

}  // namespace discmark
