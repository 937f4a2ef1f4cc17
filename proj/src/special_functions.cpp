#include "discmark/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace discmark {

double log_inverse(double y) {
    return -std::log(std::max(y, kLogClampFloor));
}

double regularized_gamma_q(int64_t shape, double x) {
    if (shape < 1) throw std::domain_error("regularized_gamma_q: shape must be >= 1");
    if (x < 0.0 || std::isnan(x)) throw std::domain_error("regularized_gamma_q: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;

    // log-sum-exp over t_j = -x + j ln x - lgamma(j+1), j = 0..shape-1.
    // Terms increase while j < x and decrease after, so the running maximum
    // is found on the fly.
    const double lx = std::log(x);
    double tmax = -x;  // j = 0 term
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(shape));
    double lgamma_acc = 0.0;  // lgamma(j+1) built incrementally
    for (int64_t j = 0; j < shape; ++j) {
        if (j > 0) lgamma_acc += std::log(static_cast<double>(j));
        const double t = -x + static_cast<double>(j) * lx - lgamma_acc;
        terms.push_back(t);
        if (t > tmax) tmax = t;
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - tmax);
    const double lq = tmax + std::log(acc);
    return lq >= 0.0 ? 1.0 : std::exp(lq);
}

namespace {

// Erlang(shape, 1) density, evaluated in log space.
double erlang_pdf(int64_t shape, double x) {
    if (x <= 0.0) return shape == 1 ? std::exp(-x) : 0.0;
    return std::exp(static_cast<double>(shape - 1) * std::log(x) - x -
                    std::lgamma(static_cast<double>(shape)));
}

}  // namespace

double regularized_gamma_q_inverse(int64_t shape, double p) {
    if (shape < 1) throw std::domain_error("regularized_gamma_q_inverse: shape must be >= 1");
    if (!(p > 0.0) || p > 1.0) throw std::domain_error("regularized_gamma_q_inverse: p must be in (0, 1]");
    if (p == 1.0) return 0.0;

    const double s = static_cast<double>(shape);
    double lo = 0.0;
    double hi = s + 40.0 * std::sqrt(s) + 40.0;
    while (regularized_gamma_q(shape, hi) > p) hi *= 2.0;  // unreachable for p >= 1e-300; kept for safety

    // Bisect to a tight bracket, then polish with Newton steps that are
    // rejected whenever they leave the bracket.
    for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (regularized_gamma_q(shape, mid) > p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * std::max(1.0, lo)) break;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 6; ++it) {
        const double q = regularized_gamma_q(shape, x);
        const double f = erlang_pdf(shape, x);
        if (f <= 0.0) break;
        const double step = (q - p) / f;  // dQ/dx = -pdf
        double next = x + step;
        if (!(next > lo) || !(next < hi)) break;
        x = next;
        if (std::abs(step) <= 1e-15 * std::max(1.0, x)) break;
    }
    return x;
}

double gaussian_tail_q(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double binary_entropy(double p) {
    if (!(p >= 0.0) || p > 1.0) throw std::domain_error("binary_entropy: p must be in [0, 1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
    return h;
}

double second_moment_g(double p) {
    if (!(p >= 0.0) || p > 1.0) throw std::domain_error("second_moment_g: p must be in [0, 1]");
    double g = 0.0;
    if (p > 0.0) {
        const double l = std::log(p);
        g += p * l * l;
    }
    if (p < 1.0) {
        const double l = std::log(1.0 - p);
        g += (1.0 - p) * l * l;
    }
    return g;
}

}  // namespace discmark
