// Timing comparison: naive serial reference detectors vs the optimized
// kernels (midstate-cached hashing, OpenMP over chunk hypotheses).
//
//   ./discmark_bench [tokens] [repeats]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "discmark/disc.hpp"
#include "discmark/harness.hpp"
#include "discmark/reference.hpp"
#include "discmark/zerobit.hpp"

using namespace discmark;

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t tokens = argc > 1 ? static_cast<std::size_t>(std::atoi(argv[1])) : 14;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
    const std::size_t bits = tokens * 17;

    encoder_config cfg;
    cfg.context_bits = 85;
    cfg.max_bits = bits;

    simulated_model_spec mspec;
    mspec.seed = 42;
    mspec.length_bits = bits;
    const simulated_binary_lm model(mspec);
    const secret_key key = secret_key::from_seed(7);

    const watermarked_text text = encode_no_init(model, key, cfg);
    disc_config disc;
    disc.payload_bits = 8;

    int max_threads = 1;
#ifdef _OPENMP
    max_threads = omp_get_max_threads();
#endif
    std::printf("text: %zu tokens (%zu bits), h = %zu, repeats = %d, max threads = %d\n",
                tokens, bits, cfg.context_bits, repeats, max_threads);

    const double t_ref = time_ms([&] { reference::detect_with_init(text.bits, key, cfg, 0.01); }, repeats);
    const double t_serial = time_ms(
        [&] { detect_with_init(text.bits, key, cfg, 0.01, exec_policy::serial); }, repeats);
    const double t_parallel = time_ms(
        [&] { detect_with_init(text.bits, key, cfg, 0.01, exec_policy::parallel); }, repeats);
    std::printf("zerobit scan  reference %9.2f ms | serial %9.2f ms (%.2fx) | parallel %9.2f ms (%.2fx)\n",
                t_ref, t_serial, t_ref / t_serial, t_parallel, t_ref / t_parallel);

    const double d_ref = time_ms(
        [&] { reference::disc_decode_exhaustive(text.bits, key, cfg, disc, 0.01); }, repeats);
    const double d_serial = time_ms(
        [&] { disc_decode_exhaustive(text.bits, key, cfg, disc, 0.01, exec_policy::serial); }, repeats);
    const double d_parallel = time_ms(
        [&] { disc_decode_exhaustive(text.bits, key, cfg, disc, 0.01, exec_policy::parallel); },
        repeats);
    const double d_fast = time_ms(
        [&] { disc_decode_fast(text.bits, key, cfg, disc, 0.01, exec_policy::parallel); }, repeats);
    std::printf("disc decode   reference %9.2f ms | serial %9.2f ms (%.2fx) | parallel %9.2f ms (%.2fx)\n",
                d_ref, d_serial, d_ref / d_serial, d_parallel, d_ref / d_parallel);
    std::printf("disc fast     %9.2f ms (%.2fx vs exhaustive parallel)\n", d_fast, d_parallel / d_fast);
    return 0;
}
