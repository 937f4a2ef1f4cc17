#include "discmark/lmin.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "discmark/special_functions.hpp"

namespace discmark {

namespace {

constexpr int64_t kMaxLength = 1 << 24;

void validate_rates(double zeta_b, double fpr, double fnr) {
    if (!(zeta_b > 0.0) || zeta_b > std::log(2.0) + 1e-12)
        throw std::domain_error("lmin: zeta_b must be in (0, ln 2]");
    if (!(fpr > 0.0) || fpr >= 0.5) throw std::domain_error("lmin: fpr must be in (0, 0.5)");
    if (!(fnr > 0.0) || fnr >= 0.5) throw std::domain_error("lmin: fnr must be in (0, 0.5)");
}

// Smallest L >= start with bound(L) <= fnr. The bound decreases in L in the
// operating range; a doubling bracket plus binary search finds the edge and
// the caller re-verifies minimality. Falls back to a linear scan if the
// predicate turns out non-monotone around the edge.
int64_t smallest_passing_length(int64_t start, double fnr, const std::function<double(int64_t)>& bound) {
    if (bound(start) <= fnr) return start;
    int64_t lo = start;       // bound(lo) > fnr
    int64_t hi = 2 * start + 16;
    while (bound(hi) > fnr) {
        lo = hi;
        hi *= 2;
        if (hi > kMaxLength) throw std::runtime_error("lmin: no length satisfies the bounds");
    }
    while (hi - lo > 1) {
        const int64_t mid = lo + (hi - lo) / 2;
        if (bound(mid) > fnr)
            lo = mid;
        else
            hi = mid;
    }
    if (bound(hi) <= fnr && bound(hi - 1) > fnr) return hi;
    for (int64_t L = start + 1;; ++L) {
        if (bound(L) <= fnr) return L;
        if (L > kMaxLength) throw std::runtime_error("lmin: no length satisfies the bounds");
    }
}

int64_t whole_token_bits(int64_t bits, std::size_t vocab_bits) {
    const int64_t vb = static_cast<int64_t>(vocab_bits);
    return vb * ((bits + vb - 1) / vb);
}

void fill_exact(lmin_solution& sol, int64_t exact_bits, int64_t chunk, std::size_t vocab_bits) {
    sol.exact_bits = exact_bits;
    sol.exact_watermarked_bits = exact_bits - chunk;
    sol.exact_bits_whole_token = whole_token_bits(exact_bits, vocab_bits);
    sol.exact_tokens = sol.exact_bits_whole_token / static_cast<int64_t>(vocab_bits);
    sol.chunk_bits = chunk;
}

// Default context length: five tokens' worth of binary tokens.
std::size_t default_context_bits(std::size_t vocab_bits) { return 5 * vocab_bits; }

}  // namespace

double lmin_f1(double fpr, double fnr) {
    return std::sqrt(2.0 * std::log(1.0 / (2.0 * fpr))) +
           std::sqrt(4.4 * std::log(1.0 / (2.0 * fnr)));
}

double lmin_no_init_fn_bound(int64_t L, double zeta_b, double fpr) {
    const double theta = regularized_gamma_q_inverse(L, fpr);
    const double mean = static_cast<double>(L) * (1.0 + zeta_b);
    return gaussian_tail_q((mean - theta) / (1.5 * std::sqrt(static_cast<double>(L))));
}

double lmin_with_init_fn_bound(int64_t L, double zeta_b, double fpr, std::size_t h, int64_t n) {
    const double Lh = static_cast<double>(L - static_cast<int64_t>(h));
    const double beta = -std::expm1(std::log1p(-fpr) / Lh);
    const int64_t k = L - n;
    const double theta = regularized_gamma_q_inverse(k, beta);
    const double mean = static_cast<double>(k) * (1.0 + zeta_b);
    const double miss = gaussian_tail_q((mean - theta) / (1.5 * std::sqrt(static_cast<double>(k))));
    return std::pow(1.0 - fpr, (Lh - 1.0) / Lh) * miss;
}

double disc_lmin_fn_bound(int64_t L, double zeta_b, double fpr, std::size_t h, int64_t n,
                          unsigned payload_bits) {
    const double msz = std::ldexp(1.0, static_cast<int>(payload_bits));
    const double Lh = static_cast<double>(L - static_cast<int64_t>(h));
    const double beta = -std::expm1(std::log1p(-fpr) / Lh) / msz;
    const int64_t k = L - n;
    const double theta = regularized_gamma_q_inverse(k, beta);
    const double mean = static_cast<double>(k) * (1.0 + zeta_b);
    const double corner_mass = (msz - 1.0) * static_cast<double>(k) * std::exp2(-static_cast<double>(k));
    // While the corner term is non-negligible the union amplification of the
    // detection probability is not a probability and the bound certifies
    // nothing. Past it, clamping the amplified value biases the bound by at
    // most 1e-9, far below any usable FNR target.
    if (corner_mass > 1e-9) return 1.0;
    const double detect = std::min(
        1.0, (corner_mass + 1.0) *
                 gaussian_tail_q((theta - mean) / (1.5 * std::sqrt(static_cast<double>(k)))));
    return std::pow(1.0 - fpr, (Lh - 1.0) / Lh) * (1.0 - detect);
}

lmin_solution lmin_no_init(double zeta_b, double fpr, double fnr, std::size_t vocab_bits) {
    validate_rates(zeta_b, fpr, fnr);
    if (vocab_bits < 1) throw std::domain_error("lmin: vocab_bits must be >= 1");

    lmin_solution sol;
    const int64_t exact = smallest_passing_length(
        1, fnr, [&](int64_t L) { return lmin_no_init_fn_bound(L, zeta_b, fpr); });
    fill_exact(sol, exact, 0, vocab_bits);

    const double f = lmin_f1(fpr, fnr);
    sol.approx_bits = f * f / (zeta_b * zeta_b);
    sol.approx_watermarked_bits = sol.approx_bits;
    sol.approx_tokens = sol.approx_bits / static_cast<double>(vocab_bits);
    return sol;
}

lmin_solution lmin_with_init(double zeta_b, double fpr, double fnr, std::size_t vocab_bits,
                             int64_t chunk_len) {
    validate_rates(zeta_b, fpr, fnr);
    if (vocab_bits < 1) throw std::domain_error("lmin: vocab_bits must be >= 1");
    if (chunk_len < 0) throw std::domain_error("lmin: chunk_len must be >= 0");
    const std::size_t h = default_context_bits(vocab_bits);

    lmin_solution sol;
    const int64_t start = std::max<int64_t>(chunk_len + 1, static_cast<int64_t>(h) + 2);
    const int64_t exact = smallest_passing_length(start, fnr, [&](int64_t L) {
        return lmin_with_init_fn_bound(L, zeta_b, fpr, h, chunk_len);
    });
    fill_exact(sol, exact, chunk_len, vocab_bits);

    // Fixed point of (L - n) = f1(fpr / L, fnr)^2 / zeta^2.
    double x = lmin_f1(fpr, fnr);
    x = x * x / (zeta_b * zeta_b);
    for (int it = 0; it < 200; ++it) {
        const double f = lmin_f1(fpr / (static_cast<double>(chunk_len) + x), fnr);
        const double next = f * f / (zeta_b * zeta_b);
        if (std::abs(next - x) < 1e-9 * next) {
            x = next;
            break;
        }
        x = next;
    }
    sol.approx_watermarked_bits = x;
    sol.approx_bits = static_cast<double>(chunk_len) + x;
    sol.approx_tokens = sol.approx_bits / static_cast<double>(vocab_bits);
    return sol;
}

lmin_solution disc_lmin(double zeta_b, double fpr, double fnr, std::size_t vocab_bits,
                        int64_t chunk_len, unsigned payload_bits) {
    validate_rates(zeta_b, fpr, fnr);
    if (vocab_bits < 1) throw std::domain_error("lmin: vocab_bits must be >= 1");
    if (chunk_len < 0) throw std::domain_error("lmin: chunk_len must be >= 0");
    if (payload_bits > 60) throw std::domain_error("lmin: payload_bits too large");
    const std::size_t h = default_context_bits(vocab_bits);
    const double msz = std::ldexp(1.0, static_cast<int>(payload_bits));

    lmin_solution sol;
    const int64_t start = std::max<int64_t>(chunk_len + 1, static_cast<int64_t>(h) + 2);
    const int64_t exact = smallest_passing_length(start, fnr, [&](int64_t L) {
        return disc_lmin_fn_bound(L, zeta_b, fpr, h, chunk_len, payload_bits);
    });
    fill_exact(sol, exact, chunk_len, vocab_bits);

    // Fixed point of (L - n) = f1(fpr / (|M| L), fnr)^2 / zeta^2.
    double x = lmin_f1(fpr, fnr);
    x = x * x / (zeta_b * zeta_b);
    for (int it = 0; it < 200; ++it) {
        const double f = lmin_f1(fpr / (msz * (static_cast<double>(chunk_len) + x)), fnr);
        const double next = f * f / (zeta_b * zeta_b);
        if (std::abs(next - x) < 1e-9 * next) {
            x = next;
            break;
        }
        x = next;
    }
    sol.approx_watermarked_bits = x;
    sol.approx_bits = static_cast<double>(chunk_len) + x;
    sol.approx_tokens = sol.approx_bits / static_cast<double>(vocab_bits);
    return sol;
}

}  // namespace discmark
