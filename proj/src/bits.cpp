#include "discmark/bits.hpp"

#include <array>

namespace discmark {

bit_string bit_string::from_string01(const std::string& s) {
    bit_string out;
    out.bits_.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit_string: expected '0' or '1'");
        out.bits_.push_back(static_cast<uint8_t>(c - '0'));
    }
    return out;
}

bit_string bit_string::from_packed(const std::vector<uint8_t>& bytes, std::size_t nbits) {
    if (bytes.size() * 8 < nbits) throw std::invalid_argument("bit_string: packed buffer too short");
    bit_string out;
    out.bits_.reserve(nbits);
    for (std::size_t i = 0; i < nbits; ++i)
        out.bits_.push_back((bytes[i / 8] >> (7 - i % 8)) & 1u);
    return out;
}

bit_string bit_string::prefix(std::size_t n) const { return slice(0, n); }

bit_string bit_string::slice(std::size_t start, std::size_t len) const {
    if (start + len > bits_.size()) throw std::out_of_range("bit_string::slice");
    bit_string out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(start),
                     bits_.begin() + static_cast<std::ptrdiff_t>(start + len));
    return out;
}

bit_string bit_string::window(std::size_t h) const {
    bit_string out;
    out.bits_.assign(h, 0);
    const std::size_t take = bits_.size() < h ? bits_.size() : h;
    for (std::size_t i = 0; i < take; ++i)
        out.bits_[h - take + i] = bits_[bits_.size() - take + i];
    return out;
}

std::vector<uint8_t> bit_string::packed_msb_first() const {
    std::vector<uint8_t> out;
    pack_range_msb_first(0, bits_.size(), out);
    return out;
}

void bit_string::pack_range_msb_first(std::size_t start, std::size_t len, std::vector<uint8_t>& out) const {
    if (start + len > bits_.size()) throw std::out_of_range("bit_string::pack_range_msb_first");
    out.assign((len + 7) / 8, 0);
    for (std::size_t i = 0; i < len; ++i)
        out[i / 8] = static_cast<uint8_t>(out[i / 8] | (bits_[start + i] << (7 - i % 8)));
}

std::string bit_string::to_string01() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
    return s;
}

namespace {
constexpr char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
}  // namespace

std::string base64_encode(const std::vector<uint8_t>& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 3 <= bytes.size()) {
        uint32_t b = (uint32_t(bytes[i]) << 16) | (uint32_t(bytes[i + 1]) << 8) | bytes[i + 2];
        out += kB64Alphabet[(b >> 18) & 63];
        out += kB64Alphabet[(b >> 12) & 63];
        out += kB64Alphabet[(b >> 6) & 63];
        out += kB64Alphabet[b & 63];
        i += 3;
    }
    const std::size_t rem = bytes.size() - i;
    if (rem == 1) {
        uint32_t b = uint32_t(bytes[i]) << 16;
        out += kB64Alphabet[(b >> 18) & 63];
        out += kB64Alphabet[(b >> 12) & 63];
        out += "==";
    } else if (rem == 2) {
        uint32_t b = (uint32_t(bytes[i]) << 16) | (uint32_t(bytes[i + 1]) << 8);
        out += kB64Alphabet[(b >> 18) & 63];
        out += kB64Alphabet[(b >> 12) & 63];
        out += kB64Alphabet[(b >> 6) & 63];
        out += '=';
    }
    return out;
}

std::vector<uint8_t> base64_decode(const std::string& text) {
    std::vector<uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    uint32_t acc = 0;
    int nbits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        const int v = b64_value(c);
        if (v < 0) throw std::invalid_argument("base64_decode: invalid character");
        acc = (acc << 6) | static_cast<uint32_t>(v);
        nbits += 6;
        if (nbits >= 8) {
            nbits -= 8;
            out.push_back(static_cast<uint8_t>((acc >> nbits) & 0xFF));
        }
    }
    return out;
}

std::string bytes_to_hex(const uint8_t* data, std::size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string out(len * 2, '0');
    for (std::size_t i = 0; i < len; ++i) {
        out[2 * i] = digits[data[i] >> 4];
        out[2 * i + 1] = digits[data[i] & 0xF];
    }
    return out;
}

std::vector<uint8_t> hex_to_bytes(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex_to_bytes: odd length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("hex_to_bytes: invalid digit");
    };
    std::vector<uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    return out;
}

}  // namespace discmark
