// Self-contained SHA-256 (FIPS 180-4) and HMAC-SHA256 (RFC 2104).
//
// The streaming state is a plain copyable value so callers can absorb a
// fixed message prefix once and fork the state per suffix; the detectors
// lean on that to amortize the keyed-hash cost across context windows.
#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace discmark {

class sha256 {
public:
    static constexpr std::size_t kDigestSize = 32;
    static constexpr std::size_t kBlockSize = 64;

    sha256() { reset(); }

    void reset();
    void update(const uint8_t* data, std::size_t len);
    void update(const std::vector<uint8_t>& data) { update(data.data(), data.size()); }

    // Destructive: pads, emits the digest and leaves the state spent.
    void finalize(uint8_t digest[kDigestSize]);
    // Finalizes into `digest` without disturbing *this (works on a copy).
    void finalize_copy(uint8_t digest[kDigestSize]) const;

    static std::array<uint8_t, kDigestSize> hash(const uint8_t* data, std::size_t len);

private:
    void compress(const uint8_t block[kBlockSize]);

    uint32_t state_[8];
    uint64_t total_len_ = 0;
    uint8_t buffer_[kBlockSize];
    std::size_t buffer_len_ = 0;
};

class hmac_sha256 {
public:
    hmac_sha256(const uint8_t* key, std::size_t key_len);

    // One-shot MAC of (prefix already absorbed in `inner`) is handled by the
    // caller via fork(); this computes HMAC over a single message.
    std::array<uint8_t, sha256::kDigestSize> mac(const uint8_t* msg, std::size_t len) const;

    // Streaming interface: start from the keyed inner state, absorb, finish.
    sha256 inner_state() const { return inner_; }
    std::array<uint8_t, sha256::kDigestSize> finish(sha256 inner) const;

private:
    sha256 inner_;  // keyed with key XOR ipad
    sha256 outer_;  // keyed with key XOR opad
};

}  // namespace discmark
