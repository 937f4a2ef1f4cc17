// Monte Carlo experiment harness: BER sweeps, L_min curves and FPR
// calibration on the simulated binary model, with reproducible per-trial
// seed streams and CSV output that is byte-identical across reruns and
// worker counts.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "discmark/lmin.hpp"
#include "discmark/model.hpp"

namespace discmark {

struct experiment_spec {
    std::string kind;  // ber_sweep | lmin_curve | fpr_calibration | roundtrip
    uint64_t trials = 10000;
    uint64_t seed = 1;
    int parallelism = 0;  // worker count; 0 = all available

    std::size_t bits_per_token = 17;
    probability_law law = probability_law::uniform01;
    double law_a = 1.0, law_b = 1.0;

    double fpr = 1e-2;
    double fnr = 1e-3;

    std::size_t context_bits = 85;
    double entropy_threshold = 0.0;  // 0 = default for context_bits

    // ber_sweep / roundtrip
    std::vector<unsigned> payload_bits_list = {1, 2, 3, 4};
    std::vector<std::size_t> token_lengths = {1, 2, 4, 6, 10, 14, 20};
    std::string decode_mode = "fixed";  // fixed | scan | both
    bool exhaustive = false;

    // fpr_calibration
    std::vector<double> nominal_fprs = {0.1, 0.01, 0.001};
    std::size_t text_tokens = 10;

    // lmin_curve
    std::vector<double> zeta_grid = {0.20, 0.25, 0.30, 0.35, 0.40, 0.45,
                                     0.50, 0.55, 0.60, 0.65, 0.693147};
    std::size_t vocab_size = 50272;
    unsigned lmin_payload_bits = 10;
    int64_t chunk_tokens = 15;  // n = chunk_tokens * ceil(log2 |V|); paper uses 3h with h = 5 tokens
};

struct harness_assertion_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ber_row {
    unsigned payload_bits;
    std::size_t token_length;
    std::string mode;
    uint64_t trials;
    double detection_rate;
    double ber_decode_only;       // argmax errors over all trials, detection aside
    double ber_worst;             // misses count as all bits wrong
    double ber_excluding_misses;  // over detected texts only
    double mean_search_evaluations;
};

struct lmin_row {
    double zeta_b;
    double zeta;
    std::string scheme;  // zerobit-noinit | zerobit-init | disc
    lmin_solution solution;
};

struct fpr_row {
    std::string scheme;
    double nominal_fpr;
    uint64_t trials;
    uint64_t flagged;
    double empirical_rate;
    double bound;  // nominal + 3 binomial sigma
};

struct roundtrip_row {
    std::string scheme;
    uint64_t trials;
    double detection_rate;
    double n_star_exact_rate;  // among detected texts
    double message_ber;        // disc only; worst-case convention
};

std::vector<ber_row> run_ber_sweep(const experiment_spec& spec);
std::vector<lmin_row> run_lmin_curve(const experiment_spec& spec);
std::vector<fpr_row> run_fpr_calibration(const experiment_spec& spec);
std::vector<roundtrip_row> run_roundtrip(const experiment_spec& spec);

// True when every row respects its nominal + 3 sigma bound.
bool fpr_rows_within_bounds(const std::vector<fpr_row>& rows);

std::string to_csv(const std::vector<ber_row>& rows);
std::string to_csv(const std::vector<lmin_row>& rows);
std::string to_csv(const std::vector<fpr_row>& rows);
std::string to_csv(const std::vector<roundtrip_row>& rows);

nlohmann::json to_json(const experiment_spec& spec);
experiment_spec experiment_spec_from_json(const nlohmann::json& j);

// Deterministic stream derivation for trial-level RNG and keys.
uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c);

// Locale-independent shortest-roundtrip formatting used by all CSV output.
std::string format_double(double v);

extern const char* const kVersionString;

}  // namespace discmark
