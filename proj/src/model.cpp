#include "discmark/model.hpp"

#include <cmath>

#include "discmark/special_functions.hpp"

namespace discmark {

namespace {

std::size_t width_for(std::size_t vocab_size) {
    std::size_t w = 0;
    std::size_t capacity = 1;
    while (capacity < vocab_size) {
        capacity <<= 1;
        ++w;
    }
    return w == 0 ? 1 : w;
}

// Portable 53-bit uniform in [0, 1); uniform_real_distribution is not
// bit-reproducible across standard libraries.
double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

vocabulary::vocabulary(std::size_t vocab_size) : vocabulary(vocab_size, width_for(vocab_size)) {}

vocabulary::vocabulary(std::size_t vocab_size, std::size_t width) : size(vocab_size), bits_per_token(width) {
    if (size < 2) throw std::invalid_argument("vocabulary: size must be >= 2");
    if (width < width_for(vocab_size))
        throw std::invalid_argument("vocabulary: width too small for vocabulary size");
    if (width > 63) throw std::invalid_argument("vocabulary: width must be <= 63");
}

double binarize_distribution(const std::vector<double>& dist, const bit_string& prefix_bits,
                             const vocabulary& vocab) {
    if (dist.size() != vocab.size) throw std::invalid_argument("binarize_distribution: size mismatch");
    if (prefix_bits.size() >= vocab.bits_per_token)
        throw std::invalid_argument("binarize_distribution: prefix must be shorter than the code width");

    const std::size_t k = prefix_bits.size();
    double mass_prefix = 0.0;
    double mass_one = 0.0;
    for (std::size_t v = 0; v < dist.size(); ++v) {
        bool extends = true;
        for (std::size_t j = 0; j < k; ++j) {
            if (vocab.code_bit(v, j) != prefix_bits[j]) {
                extends = false;
                break;
            }
        }
        if (!extends) continue;
        mass_prefix += dist[v];
        if (vocab.code_bit(v, k) == 1) mass_one += dist[v];
    }
    if (mass_prefix <= 0.0)
        throw degenerate_prefix_error("binarize_distribution: conditioning on a zero-probability prefix");
    return mass_one / mass_prefix;
}

simulated_binary_lm::simulated_binary_lm(const simulated_model_spec& spec) : spec_(spec) {
    std::mt19937_64 rng(spec.seed);
    probs_.resize(spec.length_bits);
    switch (spec.law) {
        case probability_law::uniform01:
            for (auto& p : probs_) p = unit_draw(rng);
            break;
        case probability_law::fixed:
            for (auto& p : probs_) p = spec.law_a;
            break;
        case probability_law::beta: {
            // Beta(a, b) via two gammas (Marsaglia-Tsang would need normals;
            // Johnk is fine here since a, b are O(1) in the sweeps).
            for (auto& p : probs_) {
                double x, y;
                do {
                    x = std::pow(unit_draw(rng), 1.0 / spec.law_a);
                    y = std::pow(unit_draw(rng), 1.0 / spec.law_b);
                } while (x + y > 1.0 || x + y == 0.0);
                p = x / (x + y);
            }
            break;
        }
    }
}

double simulated_binary_lm::next_bit_probability(const bit_string& history) const {
    if (history.size() >= probs_.size())
        throw std::out_of_range("simulated_binary_lm: history past fixed length");
    return probs_[history.size()];
}

static_token_model::static_token_model(std::vector<double> dist, vocabulary vocab)
    : dist_(std::move(dist)), vocab_(vocab) {
    if (dist_.size() != vocab_.size) throw std::invalid_argument("static_token_model: size mismatch");
}

double static_token_model::next_bit_probability(const bit_string& history) const {
    const std::size_t k = history.size() % vocab_.bits_per_token;
    const bit_string prefix = history.slice(history.size() - k, k);
    return binarize_distribution(dist_, prefix, vocab_);
}

double prompt_prefixed_source::next_bit_probability(const bit_string& history) const {
    if (history.size() < prompt_bits_) return 0.5;
    const bit_string tail = history.slice(prompt_bits_, history.size() - prompt_bits_);
    return inner_.next_bit_probability(tail);
}

std::optional<std::size_t> prompt_prefixed_source::fixed_length() const {
    if (const auto inner_len = inner_.fixed_length()) return prompt_bits_ + *inner_len;
    return std::nullopt;
}

uint8_t sample_plain_bit(double p1, std::mt19937_64& rng) {
    return unit_draw(rng) < p1 ? 1 : 0;
}

entropy_estimate estimate_zeta_from_chunk(const std::vector<double>& probabilities,
                                          const bit_string& observed_bits,
                                          std::size_t bits_per_token) {
    if (probabilities.empty()) throw std::invalid_argument("estimate_zeta_from_chunk: empty chunk");
    if (probabilities.size() != observed_bits.size())
        throw std::invalid_argument("estimate_zeta_from_chunk: length mismatch");
    double acc = 0.0;
    for (double p : probabilities) acc += binary_entropy(p);
    entropy_estimate est;
    est.n_samples = probabilities.size();
    est.zeta_b = acc / static_cast<double>(probabilities.size());
    est.zeta = est.zeta_b * static_cast<double>(bits_per_token);
    return est;
}

}  // namespace discmark
