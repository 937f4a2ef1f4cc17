#include "discmark/keyed_randomness.hpp"

#include <random>
#include <stdexcept>

namespace discmark {

secret_key secret_key::from_hex(const std::string& hex) {
    const auto bytes = hex_to_bytes(hex);
    if (bytes.size() != kKeyBytes) throw std::invalid_argument("secret_key: expected 32 bytes of hex");
    secret_key key;
    std::copy(bytes.begin(), bytes.end(), key.bytes.begin());
    return key;
}

secret_key secret_key::from_seed(uint64_t seed) {
    std::mt19937_64 rng(seed);
    secret_key key;
    for (std::size_t i = 0; i < kKeyBytes; i += 8) {
        const uint64_t v = rng();
        for (std::size_t j = 0; j < 8; ++j) key.bytes[i + j] = static_cast<uint8_t>(v >> (8 * j));
    }
    return key;
}

keyed_uniform_generator::keyed_uniform_generator(const secret_key& key, const bit_string& initial_chunk)
    : hmac_(key.bytes.data(), key.bytes.size()), inner_with_prefix_(hmac_.inner_state()) {
    uint8_t len_be[8];
    const uint64_t rlen = initial_chunk.size();
    for (int i = 0; i < 8; ++i) len_be[i] = static_cast<uint8_t>(rlen >> (56 - 8 * i));
    inner_with_prefix_.update(len_be, 8);
    const auto packed = initial_chunk.packed_msb_first();
    inner_with_prefix_.update(packed.data(), packed.size());
}

uint64_t keyed_uniform_generator::draw_z(const bit_string& context_window) const {
    sha256 inner = inner_with_prefix_;
    const auto packed = context_window.packed_msb_first();
    inner.update(packed.data(), packed.size());
    const auto digest = hmac_.finish(inner);
    uint64_t z = 0;
    for (int i = 0; i < 8; ++i) z = (z << 8) | digest[static_cast<std::size_t>(i)];
    return z;
}

uint64_t keyed_uniform_generator::draw_z_at(const bit_string& bits, std::size_t pos, std::size_t h_bits) const {
    sha256 inner = inner_with_prefix_;
    // Pack the window without materializing a bit_string: positions
    // [pos-h, pos), left-padded with zeros when pos < h.
    const std::size_t nbytes = (h_bits + 7) / 8;
    uint8_t stack_buf[128] = {0};
    std::vector<uint8_t> heap_buf;
    uint8_t* packed = stack_buf;
    if (nbytes > sizeof(stack_buf)) {
        heap_buf.assign(nbytes, 0);
        packed = heap_buf.data();
    }
    const std::size_t take = pos < h_bits ? pos : h_bits;
    const std::size_t pad = h_bits - take;
    for (std::size_t j = 0; j < take; ++j) {
        const std::size_t k = pad + j;
        packed[k / 8] = static_cast<uint8_t>(packed[k / 8] | (bits[pos - take + j] << (7 - k % 8)));
    }
    inner.update(packed, nbytes);
    const auto digest = hmac_.finish(inner);
    uint64_t z = 0;
    for (int i = 0; i < 8; ++i) z = (z << 8) | digest[static_cast<std::size_t>(i)];
    return z;
}

uint64_t uniform_draw_z(const secret_key& key, const bit_string& initial_chunk,
                        const bit_string& context_window) {
    return keyed_uniform_generator(key, initial_chunk).draw_z(context_window);
}

double uniform_draw(const secret_key& key, const bit_string& initial_chunk,
                    const bit_string& context_window) {
    return unit_from_z(uniform_draw_z(key, initial_chunk, context_window));
}

}  // namespace discmark
