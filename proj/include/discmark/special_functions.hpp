// Statistical special functions backing every detector and L_min solver.
//
// The Erlang tail Q(k, x) is evaluated as the Poisson partial sum
// Q(k, x) = exp(-x) * sum_{j<k} x^j / j!, accumulated in log space so the
// result stays accurate far into the tail. Shapes are integer token counts
// throughout; no general real-shape incomplete gamma is needed.
#pragma once

#include <cstdint>

namespace discmark {

// Smallest argument fed to a logarithm anywhere in the scoring stack. Keeps
// score values finite when a uniform draw lands exactly on 0 or 1.
inline constexpr double kLogClampFloor = 1e-300;

// -ln(max(y, clamp)); finite for all y >= 0.
double log_inverse(double y);

// Erlang(shape, rate 1) tail probability Q(shape, x) = Gamma(shape, x)/Gamma(shape).
// Throws std::domain_error for shape < 1 or x < 0.
double regularized_gamma_q(int64_t shape, double x);

// Inverse of the above in x: returns x with Q(shape, x) = p, p in (0, 1].
double regularized_gamma_q_inverse(int64_t shape, double p);

// Standard normal upper tail.
double gaussian_tail_q(double x);

// Natural-log binary entropy H^b(p) = -p ln p - (1-p) ln(1-p), H^b(0)=H^b(1)=0.
double binary_entropy(double p);

// Second-moment companion G(p) = p ln^2 p + (1-p) ln^2(1-p).
double second_moment_g(double p);

}  // namespace discmark
