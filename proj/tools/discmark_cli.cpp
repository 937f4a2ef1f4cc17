// discmark command-line tool: embed/detect single texts and run the
// simulation experiments. Exit codes: 0 success, 1 config or I/O error,
// 2 experiment assertion failure.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "discmark/artifact.hpp"
#include "discmark/disc.hpp"
#include "discmark/harness.hpp"
#include "discmark/reference.hpp"
#include "discmark/zerobit.hpp"

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void emit(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

struct experiment_io {
    std::string spec_path;
    std::string out_dir = ".";
    bool quick = false;
    std::optional<uint64_t> trials;
    std::optional<uint64_t> seed;
    std::optional<int> parallelism;
};

void add_experiment_options(CLI::App* cmd, experiment_io& io) {
    cmd->add_option("--spec", io.spec_path, "experiment spec JSON file");
    cmd->add_option("--out", io.out_dir, "output directory for CSV/JSON artifacts");
    cmd->add_flag("--quick", io.quick, "reduced trial count for CI (500 trials)");
    cmd->add_option_function<uint64_t>(
        "--trials", [&io](uint64_t v) { io.trials = v; }, "override trial count");
    cmd->add_option_function<uint64_t>(
        "--seed", [&io](uint64_t v) { io.seed = v; }, "override master seed");
    cmd->add_option_function<int>(
        "-j,--parallelism", [&io](int v) { io.parallelism = v; }, "worker count (0 = all)");
}

discmark::experiment_spec resolve_spec(const experiment_io& io, const std::string& kind) {
    discmark::experiment_spec spec;
    if (!io.spec_path.empty()) spec = discmark::experiment_spec_from_json(load_json_file(io.spec_path));
    if (spec.kind.empty()) spec.kind = kind;
    if (spec.kind != kind)
        throw std::runtime_error("spec kind '" + spec.kind + "' does not match subcommand '" + kind + "'");
    if (io.quick) spec.trials = 500;
    if (io.trials) spec.trials = *io.trials;
    if (io.seed) spec.seed = *io.seed;
    if (io.parallelism) spec.parallelism = *io.parallelism;
    return spec;
}

void write_experiment_outputs(const experiment_io& io, const discmark::experiment_spec& spec,
                              const std::string& csv_name, const std::string& csv) {
    std::filesystem::create_directories(io.out_dir);
    const auto csv_path = std::filesystem::path(io.out_dir) / csv_name;
    write_text_file(csv_path.string(), csv);
    json sidecar;
    sidecar["schema_version"] = discmark::kSchemaVersion;
    sidecar["version"] = discmark::kVersionString;
    sidecar["spec"] = discmark::to_json(spec);
    const auto meta_path =
        std::filesystem::path(io.out_dir) / (csv_name.substr(0, csv_name.rfind('.')) + ".meta.json");
    write_text_file(meta_path.string(), sidecar.dump(2) + "\n");
    std::cout << "wrote " << csv_path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discmark: multi-bit distortion-free watermark toolkit"};
    app.require_subcommand(1);

    // --- embed ---
    auto* embed = app.add_subcommand("embed", "embed a watermark into simulated text");
    std::string embed_key, embed_scheme = "zerobit-init", embed_spec_path, embed_out;
    uint64_t embed_model_seed = 1, embed_message = 0, embed_rng_seed = 1;
    std::size_t embed_tokens = 40, embed_bits_per_token = 17;
    unsigned embed_payload = 4;
    std::string embed_law = "uniform01";
    double embed_law_a = 1.0, embed_law_b = 1.0;
    std::size_t embed_context = 85;
    double embed_threshold = 0.0;
    embed->add_option("--key-hex", embed_key, "secret key, 64 hex chars")->required();
    embed->add_option("--scheme", embed_scheme, "zerobit-noinit | zerobit-init | disc");
    embed->add_option("--spec", embed_spec_path, "JSON with a simulated-model spec under 'model'");
    embed->add_option("--model-seed", embed_model_seed, "simulated model seed");
    embed->add_option("--tokens", embed_tokens, "text length in tokens");
    embed->add_option("--bits-per-token", embed_bits_per_token, "binary tokens per token");
    embed->add_option("--law", embed_law, "uniform01 | beta | fixed");
    embed->add_option("--law-a", embed_law_a, "law parameter a");
    embed->add_option("--law-b", embed_law_b, "law parameter b");
    embed->add_option("--payload-bits", embed_payload, "disc payload width m");
    embed->add_option("--message", embed_message, "disc message in [0, 2^m)");
    embed->add_option("--rng-seed", embed_rng_seed, "sampler RNG seed for the initial chunk");
    embed->add_option("--context-bits", embed_context, "context length h in binary tokens");
    embed->add_option("--entropy-threshold", embed_threshold, "entropy gate (0 = default for h)");
    embed->add_option("--out", embed_out, "output artifact path (default stdout)");

    // --- detect ---
    auto* detect = app.add_subcommand("detect", "detect a watermark in a text artifact");
    std::string detect_in, detect_key, detect_out;
    double detect_fpr = 1e-2;
    int64_t detect_fixed_chunk = -1;
    bool detect_exhaustive = false;
    std::size_t detect_context = 85;
    detect->add_option("--in", detect_in, "text artifact JSON")->required();
    detect->add_option("--key-hex", detect_key, "secret key, 64 hex chars")->required();
    detect->add_option("--fpr", detect_fpr, "false positive rate budget");
    detect->add_option("--fixed-chunk", detect_fixed_chunk,
                       "assume this chunk length instead of scanning (disc only)");
    detect->add_flag("--exhaustive", detect_exhaustive, "exhaustive message search");
    detect->add_option("--context-bits", detect_context, "context length h in binary tokens");
    detect->add_option("--out", detect_out, "output report path (default stdout)");

    // --- experiments ---
    experiment_io ber_io, lmin_io, fpr_io, rt_io;
    auto* ber = app.add_subcommand("ber-sweep", "BER vs token count on the simulated model");
    add_experiment_options(ber, ber_io);
    std::string ber_mode;
    bool ber_exhaustive = false;
    ber->add_option("--mode", ber_mode, "decode mode: fixed | scan | both");
    ber->add_flag("--exhaustive", ber_exhaustive, "exhaustive message search");

    auto* lmin = app.add_subcommand("lmin-curve", "L_min curves for the three schemes");
    add_experiment_options(lmin, lmin_io);

    auto* fprc = app.add_subcommand("fpr-calibrate", "empirical FPR of all detectors");
    add_experiment_options(fprc, fpr_io);

    auto* rt = app.add_subcommand("roundtrip", "encode/decode round-trip statistics");
    add_experiment_options(rt, rt_io);

    CLI11_PARSE(app, argc, argv);

    try {
        if (embed->parsed()) {
            const auto key = discmark::secret_key::from_hex(embed_key);
            discmark::simulated_model_spec model_spec;
            if (!embed_spec_path.empty()) {
                const json j = load_json_file(embed_spec_path);
                model_spec = discmark::simulated_model_spec_from_json(
                    j.contains("model") ? j.at("model") : j);
            } else {
                model_spec.seed = embed_model_seed;
                model_spec.length_bits = embed_tokens * embed_bits_per_token;
                model_spec.law = discmark::law_from_name(embed_law);
                model_spec.law_a = embed_law_a;
                model_spec.law_b = embed_law_b;
            }
            const discmark::simulated_binary_lm model(model_spec);
            discmark::encoder_config cfg;
            cfg.context_bits = embed_context;
            cfg.entropy_threshold =
                embed_threshold > 0.0 ? embed_threshold : discmark::default_entropy_threshold(embed_context);
            cfg.max_bits = model_spec.length_bits;

            discmark::text_artifact artifact;
            artifact.scheme = embed_scheme;
            // The sampler stream must stay decoupled from the model's p-stream
            // even when the two seed flags are numerically equal.
            const uint64_t sampler_seed = discmark::mix_seed(embed_rng_seed, 0xE7C0DEull, 0);
            if (embed_scheme == "zerobit-noinit") {
                artifact.text = discmark::encode_no_init(model, key, cfg);
            } else if (embed_scheme == "zerobit-init") {
                std::mt19937_64 rng(sampler_seed);
                artifact.text = discmark::encode_with_init(model, key, cfg, rng);
            } else if (embed_scheme == "disc") {
                discmark::disc_config disc;
                disc.payload_bits = embed_payload;
                std::mt19937_64 rng(sampler_seed);
                artifact.text = discmark::disc_encode(model, key, cfg, disc, embed_message, rng);
                artifact.payload_bits = embed_payload;
                artifact.has_message = true;
                artifact.message = embed_message;
            } else {
                throw std::runtime_error("unknown scheme: " + embed_scheme);
            }
            emit(discmark::to_json(artifact), embed_out);
        } else if (detect->parsed()) {
            const auto key = discmark::secret_key::from_hex(detect_key);
            const auto artifact = discmark::text_artifact_from_json(load_json_file(detect_in));
            discmark::encoder_config cfg;
            cfg.context_bits = detect_context;
            if (artifact.scheme == "zerobit-noinit") {
                emit(discmark::to_json(
                         discmark::detect_no_init(artifact.text.bits, key, cfg, detect_fpr)),
                     detect_out);
            } else if (artifact.scheme == "zerobit-init") {
                emit(discmark::to_json(
                         discmark::detect_with_init(artifact.text.bits, key, cfg, detect_fpr)),
                     detect_out);
            } else if (artifact.scheme == "disc") {
                discmark::disc_config disc;
                disc.payload_bits = artifact.payload_bits;
                disc.fast_enabled = !detect_exhaustive;
                discmark::disc_detection_report rep;
                if (detect_fixed_chunk >= 0) {
                    rep = discmark::disc_decode_fixed_chunk(
                        artifact.text.bits, key, cfg, disc, detect_fpr,
                        static_cast<std::size_t>(detect_fixed_chunk));
                } else if (detect_exhaustive) {
                    rep = discmark::disc_decode_exhaustive(artifact.text.bits, key, cfg, disc,
                                                           detect_fpr);
                } else {
                    rep = discmark::disc_decode_fast(artifact.text.bits, key, cfg, disc, detect_fpr);
                }
                emit(discmark::to_json(rep), detect_out);
            } else {
                throw std::runtime_error("unknown scheme in artifact: " + artifact.scheme);
            }
        } else if (ber->parsed()) {
            auto spec = resolve_spec(ber_io, "ber_sweep");
            if (!ber_mode.empty()) spec.decode_mode = ber_mode;
            if (ber_exhaustive) spec.exhaustive = true;
            const auto rows = discmark::run_ber_sweep(spec);
            write_experiment_outputs(ber_io, spec, "ber.csv", discmark::to_csv(rows));
        } else if (lmin->parsed()) {
            const auto spec = resolve_spec(lmin_io, "lmin_curve");
            const auto rows = discmark::run_lmin_curve(spec);
            write_experiment_outputs(lmin_io, spec, "lmin.csv", discmark::to_csv(rows));
        } else if (fprc->parsed()) {
            const auto spec = resolve_spec(fpr_io, "fpr_calibration");
            const auto rows = discmark::run_fpr_calibration(spec);
            write_experiment_outputs(fpr_io, spec, "fpr.csv", discmark::to_csv(rows));
            if (!discmark::fpr_rows_within_bounds(rows)) {
                std::cerr << "fpr-calibrate: empirical rate exceeded nominal + 3 sigma\n";
                return 2;
            }
        } else if (rt->parsed()) {
            const auto spec = resolve_spec(rt_io, "roundtrip");
            const auto rows = discmark::run_roundtrip(spec);
            write_experiment_outputs(rt_io, spec, "roundtrip.csv", discmark::to_csv(rows));
        }
    } catch (const discmark::harness_assertion_error& e) {
        std::cerr << "assertion failed: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
