// Binarized language-model layer: fixed-width token encodings, conditional
// bit probabilities derived from a token distribution, the simulated binary
// model used by the experiments, and entropy estimators.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "discmark/bits.hpp"

namespace discmark {

// Fixed-width binary encoding of a token set. Token index v maps to the
// bits_per_token-bit big-endian representation of v; codes above `size`
// are unused and carry zero probability.
struct vocabulary {
    std::size_t size;
    std::size_t bits_per_token;

    explicit vocabulary(std::size_t vocab_size);
    vocabulary(std::size_t vocab_size, std::size_t width);

    uint8_t code_bit(std::size_t token, std::size_t k) const {
        return static_cast<uint8_t>((token >> (bits_per_token - 1 - k)) & 1u);
    }
};

struct degenerate_prefix_error : std::domain_error {
    using std::domain_error::domain_error;
};

// p(next bit = 1 | prefix) for a token distribution `dist` under `vocab`'s
// encoding: mass of codes extending prefix||1 over mass of codes extending
// prefix. Throws degenerate_prefix_error when the conditioning mass is zero.
double binarize_distribution(const std::vector<double>& dist, const bit_string& prefix_bits,
                             const vocabulary& vocab);

// Abstract provider of p_i(1) given the binary history. Implementations must
// be deterministic in the history and safe for concurrent read-only queries.
class bit_distribution_source {
public:
    virtual ~bit_distribution_source() = default;
    virtual double next_bit_probability(const bit_string& history) const = 0;
    // Number of bits a fixed-length source generates; nullopt when open-ended.
    virtual std::optional<std::size_t> fixed_length() const { return std::nullopt; }
};

enum class probability_law : uint8_t { uniform01, beta, fixed };

struct simulated_model_spec {
    uint64_t seed = 1;
    std::size_t length_bits = 0;
    probability_law law = probability_law::uniform01;
    double law_a = 1.0;  // beta alpha, or the value for `fixed`
    double law_b = 1.0;  // beta beta
};

// Simulated binary LM: one independent p_i(1) per position, drawn at
// construction from the configured law; immutable afterwards.
class simulated_binary_lm final : public bit_distribution_source {
public:
    explicit simulated_binary_lm(const simulated_model_spec& spec);

    double next_bit_probability(const bit_string& history) const override;
    std::optional<std::size_t> fixed_length() const override { return probs_.size(); }

    const std::vector<double>& probabilities() const { return probs_; }
    const simulated_model_spec& spec() const { return spec_; }

private:
    simulated_model_spec spec_;
    std::vector<double> probs_;
};

// Emits i.i.d. tokens from a fixed distribution, binarized on the fly.
// Used by tests that exercise the chain rule against a token-level oracle.
class static_token_model final : public bit_distribution_source {
public:
    static_token_model(std::vector<double> dist, vocabulary vocab);

    double next_bit_probability(const bit_string& history) const override;

    const vocabulary& vocab() const { return vocab_; }

private:
    std::vector<double> dist_;
    vocabulary vocab_;
};

// Prepends `prompt_bits` fair-coin positions to another source's stream.
// With the entropy gate at zero this realizes a random initial chunk of
// exactly `prompt_bits` binary tokens: the chunk populates the context
// windows (and the keyed generator's chunk input), so every later position
// sees a fresh draw. A cold start instead repeats the all-zero window while
// the leading bits are zero.
class prompt_prefixed_source final : public bit_distribution_source {
public:
    prompt_prefixed_source(std::size_t prompt_bits, const bit_distribution_source& inner)
        : prompt_bits_(prompt_bits), inner_(inner) {}

    double next_bit_probability(const bit_string& history) const override;
    std::optional<std::size_t> fixed_length() const override;

    std::size_t prompt_bits() const { return prompt_bits_; }

private:
    std::size_t prompt_bits_;
    const bit_distribution_source& inner_;
};

// Samples one bit: 1 with probability p1 under `rng`. Only the plain-sampled
// initial chunk uses this; watermarked bits come from the keyed draws.
uint8_t sample_plain_bit(double p1, std::mt19937_64& rng);

struct entropy_estimate {
    double zeta_b = 0.0;  // per-binary-token average conditional entropy
    double zeta = 0.0;    // per-token: bits_per_token * zeta_b
    std::size_t n_samples = 0;
};

entropy_estimate estimate_zeta_from_chunk(const std::vector<double>& probabilities,
                                          const bit_string& observed_bits,
                                          std::size_t bits_per_token);

}  // namespace discmark
