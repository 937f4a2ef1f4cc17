#include "discmark/harness.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "discmark/artifact.hpp"
#include "discmark/disc.hpp"
#include "discmark/zerobit.hpp"

namespace discmark {

#ifndef DISCMARK_VERSION
#define DISCMARK_VERSION "0.1.0"
#endif
const char* const kVersionString = "discmark " DISCMARK_VERSION;

namespace {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

int resolve_threads(int parallelism) {
    if (parallelism > 0) return parallelism;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::size_t ceil_log2(std::size_t n) {
    std::size_t w = 0, c = 1;
    while (c < n) {
        c <<= 1;
        ++w;
    }
    return w == 0 ? 1 : w;
}

double resolve_threshold(const experiment_spec& spec) {
    return spec.entropy_threshold > 0.0 ? spec.entropy_threshold
                                        : default_entropy_threshold(spec.context_bits);
}

simulated_model_spec model_for(const experiment_spec& spec, std::size_t length_bits, uint64_t seed) {
    simulated_model_spec m;
    m.seed = seed;
    m.length_bits = length_bits;
    m.law = spec.law;
    m.law_a = spec.law_a;
    m.law_b = spec.law_b;
    return m;
}

bit_string random_bits(uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    bit_string out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<uint8_t>(rng() & 1u));
    return out;
}

struct ber_trial_result {
    bool encoded = false;   // entropy gate tripped (always true in fixed mode)
    bool detected = false;
    unsigned bit_errors = 0;
    uint64_t evaluations = 0;
};

struct ber_cell_accumulator {
    uint64_t detected = 0;
    uint64_t decode_errors = 0;
    uint64_t worst_errors = 0;
    uint64_t detected_errors = 0;
    uint64_t evaluations = 0;
};

}  // namespace

uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
    uint64_t s = a ^ (0xD1B54A32D192ED03ull * (b + 1)) ^ (0x8CB92BA72F3D8DD7ull * (c + 1));
    uint64_t v = splitmix64(s);
    return v ^ splitmix64(s);
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<ber_row> run_ber_sweep(const experiment_spec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("ber_sweep: trials must be >= 1");
    if (spec.payload_bits_list.empty() || spec.token_lengths.empty())
        throw std::invalid_argument("ber_sweep: empty payload or length list");
    for (unsigned m : spec.payload_bits_list)
        if (m < 1 || m > 24) throw std::invalid_argument("ber_sweep: payload_bits must be in 1..24");
    std::vector<std::string> modes;
    if (spec.decode_mode == "fixed" || spec.decode_mode == "both") modes.push_back("fixed");
    if (spec.decode_mode == "scan" || spec.decode_mode == "both") modes.push_back("scan");
    if (modes.empty()) throw std::invalid_argument("ber_sweep: decode_mode must be fixed, scan or both");

    const int threads = resolve_threads(spec.parallelism);
    const int64_t trials = static_cast<int64_t>(spec.trials);

    std::vector<ber_row> rows;
    uint64_t cell_id = 0;
    for (const std::string& mode : modes) {
        for (unsigned payload : spec.payload_bits_list) {
            for (std::size_t tokens : spec.token_lengths) {
                // In fixed mode the text is a plain-sampled chunk of exactly
                // h bits followed by `tokens` tokens of watermarked bits, and
                // the decoder is told the chunk length: every watermarked
                // position then sees a fresh keyed draw, which is the
                // simulation experiments' setting. Scan mode runs the full
                // gate-and-scan pipeline on texts of `tokens` tokens total.
                const std::size_t length_bits = tokens * spec.bits_per_token;
                const bool scan = mode == "scan";
                encoder_config cfg;
                cfg.context_bits = spec.context_bits;
                cfg.entropy_threshold = scan ? resolve_threshold(spec) : 0.0;
                cfg.max_bits = scan ? length_bits : spec.context_bits + length_bits;
                disc_config disc;
                disc.payload_bits = payload;
                disc.fast_enabled = !spec.exhaustive;
                const uint64_t msz = disc.message_space();
                ++cell_id;

                std::vector<ber_trial_result> results(spec.trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
                for (int64_t t = 0; t < trials; ++t) {
                    const uint64_t base = mix_seed(spec.seed, cell_id, static_cast<uint64_t>(t));
                    const simulated_binary_lm model(
                        model_for(spec, length_bits, mix_seed(base, 1, 0)));
                    const secret_key key = secret_key::from_seed(mix_seed(base, 2, 0));
                    const uint64_t message = mix_seed(base, 3, 0) % msz;

                    ber_trial_result res;
                    if (scan) {
                        std::mt19937_64 rng(mix_seed(base, 4, 0));
                        const watermarked_text text = disc_encode(model, key, cfg, disc, message, rng);
                        res.encoded = text.watermark_applied;
                        if (res.encoded && text.bits.size() > cfg.context_bits + 1) {
                            const auto rep =
                                spec.exhaustive
                                    ? disc_decode_exhaustive(text.bits, key, cfg, disc, spec.fpr,
                                                             exec_policy::serial)
                                    : disc_decode_fast(text.bits, key, cfg, disc, spec.fpr,
                                                       exec_policy::serial);
                            res.detected = rep.is_watermarked;
                            res.bit_errors = static_cast<unsigned>(
                                std::popcount(rep.m_star ^ message));
                            res.evaluations = rep.search_evaluations;
                        }
                    } else {
                        const prompt_prefixed_source source(cfg.context_bits, model);
                        std::mt19937_64 rng(mix_seed(base, 4, 0));
                        const watermarked_text text = disc_encode(source, key, cfg, disc, message, rng);
                        res.encoded = true;
                        const auto rep = disc_decode_fixed_chunk(text.bits, key, cfg, disc, spec.fpr,
                                                                 cfg.context_bits);
                        res.detected = rep.is_watermarked;
                        res.bit_errors =
                            static_cast<unsigned>(std::popcount(rep.m_star ^ message));
                        res.evaluations = rep.search_evaluations;
                    }
                    results[static_cast<std::size_t>(t)] = res;
                }

                ber_cell_accumulator acc;
                for (const auto& res : results) {
                    acc.evaluations += res.evaluations;
                    acc.decode_errors += res.encoded ? res.bit_errors : payload;
                    if (res.detected) {
                        acc.detected += 1;
                        acc.worst_errors += res.bit_errors;
                        acc.detected_errors += res.bit_errors;
                    } else {
                        acc.worst_errors += payload;
                    }
                }

                ber_row row;
                row.payload_bits = payload;
                row.token_length = tokens;
                row.mode = mode;
                row.trials = spec.trials;
                row.detection_rate =
                    static_cast<double>(acc.detected) / static_cast<double>(spec.trials);
                row.ber_decode_only =
                    static_cast<double>(acc.decode_errors) /
                    (static_cast<double>(payload) * static_cast<double>(spec.trials));
                row.ber_worst = static_cast<double>(acc.worst_errors) /
                                (static_cast<double>(payload) * static_cast<double>(spec.trials));
                row.ber_excluding_misses =
                    acc.detected == 0 ? 0.0
                                      : static_cast<double>(acc.detected_errors) /
                                            (static_cast<double>(payload) *
                                             static_cast<double>(acc.detected));
                row.mean_search_evaluations =
                    static_cast<double>(acc.evaluations) / static_cast<double>(spec.trials);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<lmin_row> run_lmin_curve(const experiment_spec& spec) {
    if (spec.zeta_grid.empty()) throw std::invalid_argument("lmin_curve: empty zeta grid");
    const std::size_t vocab_bits = ceil_log2(spec.vocab_size);
    const int64_t chunk = spec.chunk_tokens * static_cast<int64_t>(vocab_bits);

    std::vector<lmin_row> rows;
    for (double zeta_b : spec.zeta_grid) {
        const lmin_solution noinit = lmin_no_init(zeta_b, spec.fpr, spec.fnr, vocab_bits);
        const lmin_solution init = lmin_with_init(zeta_b, spec.fpr, spec.fnr, vocab_bits, chunk);
        const lmin_solution disc =
            disc_lmin(zeta_b, spec.fpr, spec.fnr, vocab_bits, chunk, spec.lmin_payload_bits);
        const double zeta = zeta_b * static_cast<double>(vocab_bits);
        rows.push_back({zeta_b, zeta, "zerobit-noinit", noinit});
        rows.push_back({zeta_b, zeta, "zerobit-init", init});
        rows.push_back({zeta_b, zeta, "disc", disc});

        for (const auto* sol : {&noinit, &init, &disc}) {
            if (sol->exact_bits < 1) throw harness_assertion_error("lmin_curve: exact length below 1");
            const double ratio = sol->approx_watermarked_bits /
                                 static_cast<double>(sol->exact_watermarked_bits);
            if (!(ratio > 0.3 && ratio < 3.0))
                throw harness_assertion_error("lmin_curve: approx/exact ratio outside (0.3, 3)");
        }
    }
    return rows;
}

std::vector<fpr_row> run_fpr_calibration(const experiment_spec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("fpr_calibration: trials must be >= 1");
    const std::size_t length_bits = spec.text_tokens * spec.bits_per_token;
    encoder_config cfg;
    cfg.context_bits = spec.context_bits;
    cfg.entropy_threshold = resolve_threshold(spec);
    disc_config disc;
    disc.payload_bits = spec.payload_bits_list.empty() ? 4 : spec.payload_bits_list.front();
    disc.fast_enabled = !spec.exhaustive;

    if (length_bits <= cfg.context_bits + 1)
        throw std::invalid_argument("fpr_calibration: text too short for the context length");

    const int threads = resolve_threads(spec.parallelism);
    const int64_t trials = static_cast<int64_t>(spec.trials);

    // One p-value per scheme per trial; every nominal threshold reuses them.
    std::vector<double> p_noinit(spec.trials), p_init(spec.trials), p_disc(spec.trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int64_t t = 0; t < trials; ++t) {
        const uint64_t base = mix_seed(spec.seed, 0xF0, static_cast<uint64_t>(t));
        const bit_string bits = random_bits(mix_seed(base, 1, 0), length_bits);
        const secret_key key = secret_key::from_seed(mix_seed(base, 2, 0));
        const std::size_t i = static_cast<std::size_t>(t);
        p_noinit[i] = detect_no_init(bits, key, cfg, spec.fpr).global_p_value;
        p_init[i] = detect_with_init(bits, key, cfg, spec.fpr, exec_policy::serial).global_p_value;
        p_disc[i] =
            disc_decode_fast(bits, key, cfg, disc, spec.fpr, exec_policy::serial).global_p_value;
    }

    std::vector<fpr_row> rows;
    const auto add_rows = [&](const std::string& scheme, const std::vector<double>& pvals) {
        for (double nominal : spec.nominal_fprs) {
            fpr_row row;
            row.scheme = scheme;
            row.nominal_fpr = nominal;
            row.trials = spec.trials;
            row.flagged = static_cast<uint64_t>(
                std::count_if(pvals.begin(), pvals.end(), [&](double p) { return p <= nominal; }));
            row.empirical_rate =
                static_cast<double>(row.flagged) / static_cast<double>(spec.trials);
            row.bound = nominal >= 1.0
                            ? 1.0
                            : nominal + 3.0 * std::sqrt(nominal * (1.0 - nominal) /
                                                        static_cast<double>(spec.trials));
            rows.push_back(std::move(row));
        }
    };
    add_rows("zerobit-noinit", p_noinit);
    add_rows("zerobit-init", p_init);
    add_rows("disc", p_disc);
    return rows;
}

namespace {

// P(Binomial(n, p) >= k), summed in linear space with a term-ratio recurrence.
double binomial_tail_geq(uint64_t n, uint64_t k, double p) {
    if (k == 0) return 1.0;
    if (k > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    double log_term = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) +
                      kd * std::log(p) + (nd - kd) * std::log1p(-p);
    double term = std::exp(log_term);
    double sum = term;
    for (uint64_t j = k; j < n; ++j) {
        term *= (static_cast<double>(n - j) / static_cast<double>(j + 1)) * (p / (1.0 - p));
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return std::min(sum, 1.0);
}

}  // namespace

bool fpr_rows_within_bounds(const std::vector<fpr_row>& rows) {
    // The nominal + 3 sigma column is a normal approximation; at small trial
    // counts and tiny nominals its discreteness rejects well-calibrated
    // detectors, so a row only counts as a violation when the exact binomial
    // tail of the observed count is below the matching one-sided level.
    constexpr double kThreeSigmaOneSided = 1.349898e-3;
    for (const auto& row : rows) {
        if (row.empirical_rate <= row.bound) continue;
        if (binomial_tail_geq(row.trials, row.flagged, row.nominal_fpr) < kThreeSigmaOneSided)
            return false;
    }
    return true;
}

std::vector<roundtrip_row> run_roundtrip(const experiment_spec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("roundtrip: trials must be >= 1");
    const std::size_t length_bits =
        (spec.token_lengths.empty() ? 20 : spec.token_lengths.front()) * spec.bits_per_token;
    encoder_config cfg;
    cfg.context_bits = spec.context_bits;
    cfg.entropy_threshold = resolve_threshold(spec);
    cfg.max_bits = length_bits;
    disc_config disc;
    disc.payload_bits = spec.payload_bits_list.empty() ? 4 : spec.payload_bits_list.front();
    disc.fast_enabled = !spec.exhaustive;
    const uint64_t msz = disc.message_space();

    const int threads = resolve_threads(spec.parallelism);
    const int64_t trials = static_cast<int64_t>(spec.trials);

    struct trial_out {
        bool init_detected = false, init_n_exact = false;
        bool disc_detected = false, disc_n_exact = false;
        unsigned disc_errors = 0;
    };
    std::vector<trial_out> results(spec.trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int64_t t = 0; t < trials; ++t) {
        const uint64_t base = mix_seed(spec.seed, 0xAB, static_cast<uint64_t>(t));
        const simulated_binary_lm model(model_for(spec, length_bits, mix_seed(base, 1, 0)));
        const secret_key key = secret_key::from_seed(mix_seed(base, 2, 0));
        trial_out out;

        std::mt19937_64 rng_zero(mix_seed(base, 3, 0));
        const watermarked_text zero_text = encode_with_init(model, key, cfg, rng_zero);
        if (zero_text.watermark_applied && zero_text.bits.size() > cfg.context_bits + 1) {
            const auto rep =
                detect_with_init(zero_text.bits, key, cfg, spec.fpr, exec_policy::serial);
            out.init_detected = rep.is_watermarked;
            out.init_n_exact = rep.is_watermarked && rep.n_star == zero_text.initial_chunk_len;
        }

        std::mt19937_64 rng_disc(mix_seed(base, 4, 0));
        const uint64_t message = mix_seed(base, 5, 0) % msz;
        const watermarked_text disc_text = disc_encode(model, key, cfg, disc, message, rng_disc);
        if (disc_text.watermark_applied && disc_text.bits.size() > cfg.context_bits + 1) {
            const auto rep = spec.exhaustive
                                 ? disc_decode_exhaustive(disc_text.bits, key, cfg, disc, spec.fpr,
                                                          exec_policy::serial)
                                 : disc_decode_fast(disc_text.bits, key, cfg, disc, spec.fpr,
                                                    exec_policy::serial);
            out.disc_detected = rep.is_watermarked;
            out.disc_n_exact = rep.is_watermarked && rep.n_star == disc_text.initial_chunk_len;
            out.disc_errors = rep.is_watermarked
                                  ? static_cast<unsigned>(std::popcount(rep.m_star ^ message))
                                  : disc.payload_bits;
        } else {
            out.disc_errors = disc.payload_bits;
        }
        results[static_cast<std::size_t>(t)] = out;
    }

    uint64_t init_det = 0, init_exact = 0, disc_det = 0, disc_exact = 0, disc_errs = 0;
    for (const auto& out : results) {
        init_det += out.init_detected;
        init_exact += out.init_n_exact;
        disc_det += out.disc_detected;
        disc_exact += out.disc_n_exact;
        disc_errs += out.disc_errors;
    }
    const double n = static_cast<double>(spec.trials);
    std::vector<roundtrip_row> rows;
    rows.push_back({"zerobit-init", spec.trials, static_cast<double>(init_det) / n,
                    init_det == 0 ? 0.0 : static_cast<double>(init_exact) / static_cast<double>(init_det),
                    0.0});
    rows.push_back({"disc", spec.trials, static_cast<double>(disc_det) / n,
                    disc_det == 0 ? 0.0 : static_cast<double>(disc_exact) / static_cast<double>(disc_det),
                    static_cast<double>(disc_errs) / (n * disc.payload_bits)});
    return rows;
}

std::string to_csv(const std::vector<ber_row>& rows) {
    std::string out =
        "payload_bits,token_length,mode,trials,detection_rate,ber_decode_only,ber_worst,"
        "ber_excluding_misses,mean_search_evaluations\n";
    for (const auto& r : rows) {
        out += std::to_string(r.payload_bits) + ',' + std::to_string(r.token_length) + ',' + r.mode +
               ',' + std::to_string(r.trials) + ',' + format_double(r.detection_rate) + ',' +
               format_double(r.ber_decode_only) + ',' + format_double(r.ber_worst) + ',' +
               format_double(r.ber_excluding_misses) + ',' + format_double(r.mean_search_evaluations) +
               '\n';
    }
    return out;
}

std::string to_csv(const std::vector<lmin_row>& rows) {
    std::string out =
        "zeta_b,zeta,scheme,exact_bits,exact_watermarked_bits,exact_whole_token_bits,exact_tokens,"
        "approx_bits,approx_watermarked_bits\n";
    for (const auto& r : rows) {
        const auto& s = r.solution;
        out += format_double(r.zeta_b) + ',' + format_double(r.zeta) + ',' + r.scheme + ',' +
               std::to_string(s.exact_bits) + ',' + std::to_string(s.exact_watermarked_bits) + ',' +
               std::to_string(s.exact_bits_whole_token) + ',' + std::to_string(s.exact_tokens) +
               ',' + format_double(s.approx_bits) + ',' + format_double(s.approx_watermarked_bits) +
               '\n';
    }
    return out;
}

std::string to_csv(const std::vector<fpr_row>& rows) {
    std::string out = "scheme,nominal_fpr,trials,flagged,empirical_rate,bound\n";
    for (const auto& r : rows) {
        out += r.scheme + ',' + format_double(r.nominal_fpr) + ',' + std::to_string(r.trials) +
               ',' + std::to_string(r.flagged) + ',' + format_double(r.empirical_rate) + ',' +
               format_double(r.bound) + '\n';
    }
    return out;
}

std::string to_csv(const std::vector<roundtrip_row>& rows) {
    std::string out = "scheme,trials,detection_rate,n_star_exact_rate,message_ber\n";
    for (const auto& r : rows) {
        out += r.scheme + ',' + std::to_string(r.trials) + ',' + format_double(r.detection_rate) +
               ',' + format_double(r.n_star_exact_rate) + ',' + format_double(r.message_ber) + '\n';
    }
    return out;
}

nlohmann::json to_json(const experiment_spec& spec) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = spec.kind;
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["parallelism"] = spec.parallelism;
    j["bits_per_token"] = spec.bits_per_token;
    j["law"] = law_name(spec.law);
    j["law_params"] = nlohmann::json::array({spec.law_a, spec.law_b});
    j["fpr"] = spec.fpr;
    j["fnr"] = spec.fnr;
    j["context_bits"] = spec.context_bits;
    j["entropy_threshold"] = spec.entropy_threshold;
    j["payload_bits_list"] = spec.payload_bits_list;
    j["token_lengths"] = spec.token_lengths;
    j["decode_mode"] = spec.decode_mode;
    j["exhaustive"] = spec.exhaustive;
    j["nominal_fprs"] = spec.nominal_fprs;
    j["text_tokens"] = spec.text_tokens;
    j["zeta_grid"] = spec.zeta_grid;
    j["vocab_size"] = spec.vocab_size;
    j["lmin_payload_bits"] = spec.lmin_payload_bits;
    j["chunk_tokens"] = spec.chunk_tokens;
    return j;
}

experiment_spec experiment_spec_from_json(const nlohmann::json& j) {
    experiment_spec spec;
    spec.kind = j.value("kind", std::string{});
    spec.trials = j.value("trials", spec.trials);
    spec.seed = j.value("seed", spec.seed);
    spec.parallelism = j.value("parallelism", spec.parallelism);
    spec.bits_per_token = j.value("bits_per_token", spec.bits_per_token);
    if (j.contains("law")) spec.law = law_from_name(j.at("law").get<std::string>());
    if (j.contains("law_params")) {
        const auto& params = j.at("law_params");
        if (params.size() > 0) spec.law_a = params.at(0).get<double>();
        if (params.size() > 1) spec.law_b = params.at(1).get<double>();
    }
    spec.fpr = j.value("fpr", spec.fpr);
    spec.fnr = j.value("fnr", spec.fnr);
    spec.context_bits = j.value("context_bits", spec.context_bits);
    spec.entropy_threshold = j.value("entropy_threshold", spec.entropy_threshold);
    if (j.contains("payload_bits_list"))
        spec.payload_bits_list = j.at("payload_bits_list").get<std::vector<unsigned>>();
    if (j.contains("token_lengths"))
        spec.token_lengths = j.at("token_lengths").get<std::vector<std::size_t>>();
    spec.decode_mode = j.value("decode_mode", spec.decode_mode);
    spec.exhaustive = j.value("exhaustive", spec.exhaustive);
    if (j.contains("nominal_fprs")) spec.nominal_fprs = j.at("nominal_fprs").get<std::vector<double>>();
    spec.text_tokens = j.value("text_tokens", spec.text_tokens);
    if (j.contains("zeta_grid")) spec.zeta_grid = j.at("zeta_grid").get<std::vector<double>>();
    spec.vocab_size = j.value("vocab_size", spec.vocab_size);
    spec.lmin_payload_bits = j.value("lmin_payload_bits", spec.lmin_payload_bits);
    spec.chunk_tokens = j.value("chunk_tokens", spec.chunk_tokens);
    return spec;
}

}  // namespace discmark
