// Keyed generation of the per-position uniform draws.
//
// The draw for position i is HMAC-SHA256(key, msg) with
//   msg = len(R) as 8-byte big-endian || R packed MSB-first || S packed MSB-first,
// where R is the initial chunk (possibly empty) and S the h-bit context
// window, left-zero-padded when the history is shorter than h. The first 8
// digest bytes, read big-endian, give z; the unit draw is z / 2^64.
//
// This message layout is the cross-implementation compatibility contract
// pinned by the known-answer vectors in tests/data/prf_kat.jsonl.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "discmark/bits.hpp"
#include "discmark/sha256.hpp"

namespace discmark {

struct secret_key {
    static constexpr std::size_t kKeyBytes = 32;  // lambda = 256

    std::array<uint8_t, kKeyBytes> bytes{};

    static secret_key from_hex(const std::string& hex);
    static secret_key from_seed(uint64_t seed);  // test/harness convenience, not for production keys
};

struct context_window_config {
    std::size_t h_bits;  // context length in binary tokens
};

// Converts a 64-bit integer draw to a double in [0, 1]. Scaling by 2^-64 is
// exact, so this matches z / 2^64 rounded to nearest.
inline double unit_from_z(uint64_t z) {
    return static_cast<double>(z) * 0x1.0p-64;
}

// Uniform draws keyed on (secret key, initial chunk). The chunk-dependent
// message prefix is absorbed once at construction; each draw only hashes the
// h-bit context suffix.
class keyed_uniform_generator {
public:
    keyed_uniform_generator(const secret_key& key, const bit_string& initial_chunk);

    uint64_t draw_z(const bit_string& context_window) const;
    double draw(const bit_string& context_window) const { return unit_from_z(draw_z(context_window)); }

    // Draw for position `pos` (0-based) of `bits`: context = window of the
    // h last bits before pos, zero-padded on the left.
    uint64_t draw_z_at(const bit_string& bits, std::size_t pos, std::size_t h_bits) const;

private:
    hmac_sha256 hmac_;
    sha256 inner_with_prefix_;
};

// Free-function form of the draw, matching the wire contract directly.
uint64_t uniform_draw_z(const secret_key& key, const bit_string& initial_chunk,
                        const bit_string& context_window);
double uniform_draw(const secret_key& key, const bit_string& initial_chunk,
                    const bit_string& context_window);

}  // namespace discmark
