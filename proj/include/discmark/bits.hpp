// Bit-string type shared by the encoder, detectors and wire formats.
#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace discmark {

// A sequence of binary tokens. Stored unpacked (one byte per bit) because the
// hot loops index single bits; packing happens only at hashing and I/O
// boundaries, always MSB-first.
class bit_string {
public:
    bit_string() = default;
    explicit bit_string(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
        for (uint8_t b : bits_)
            if (b > 1) throw std::invalid_argument("bit_string: values must be 0 or 1");
    }

    static bit_string from_string01(const std::string& s);
    static bit_string from_packed(const std::vector<uint8_t>& bytes, std::size_t nbits);

    void push_back(uint8_t bit) { bits_.push_back(bit & 1u); }
    uint8_t operator[](std::size_t i) const { return bits_[i]; }
    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    bit_string prefix(std::size_t n) const;
    bit_string slice(std::size_t start, std::size_t len) const;

    // Last h bits of the string, left-padded with zeros when shorter than h.
    bit_string window(std::size_t h) const;

    // Bit 0 goes to the MSB of byte 0; trailing byte is zero-padded low.
    std::vector<uint8_t> packed_msb_first() const;
    // Packs bits [start, start+len) without copying into a temporary string.
    void pack_range_msb_first(std::size_t start, std::size_t len, std::vector<uint8_t>& out) const;

    std::string to_string01() const;

    bool operator==(const bit_string& o) const { return bits_ == o.bits_; }

    const std::vector<uint8_t>& raw() const { return bits_; }

private:
    std::vector<uint8_t> bits_;
};

std::string base64_encode(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> base64_decode(const std::string& text);

std::string bytes_to_hex(const uint8_t* data, std::size_t len);
std::vector<uint8_t> hex_to_bytes(const std::string& hex);

}  // namespace discmark
