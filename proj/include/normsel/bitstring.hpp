// Packed finite binary words and the bitfile/text formats they travel in.
//
// Indexing on the public surface is 1-based: bit(1) is the first symbol,
// matching the usual x_1 x_2 ... notation. Storage is LSB-first inside
// 64-bit words, which lines up with the packed file format (LSB-first
// bytes) so that I/O is a straight copy.
#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "normsel/errors.hpp"

namespace normsel {

class BitString {
 public:
  BitString() = default;

  static BitString zeros(uint64_t n) {
    BitString x;
    x.n_ = n;
    x.words_.assign(word_count(n), 0);
    return x;
  }

  static BitString ones(uint64_t n) {
    BitString x;
    x.n_ = n;
    x.words_.assign(word_count(n), ~uint64_t{0});
    x.mask_tail();
    return x;
  }

  uint64_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  // 1-based: bit(i) is x_i for 1 <= i <= size().
  bool bit(uint64_t i) const {
    assert(i >= 1 && i <= n_);
    const uint64_t j = i - 1;
    return (words_[j >> 6] >> (j & 63)) & 1;
  }

  void push_back(bool b) {
    if ((n_ & 63) == 0) words_.push_back(0);
    if (b) words_.back() |= uint64_t{1} << (n_ & 63);
    ++n_;
  }

  // 1-based in-place write; values are otherwise treated as immutable
  // once shared, so this is for local construction only.
  void set(uint64_t i, bool b) {
    assert(i >= 1 && i <= n_);
    const uint64_t j = i - 1;
    const uint64_t m = uint64_t{1} << (j & 63);
    if (b)
      words_[j >> 6] |= m;
    else
      words_[j >> 6] &= ~m;
  }

  void append(const BitString& other) {
    for (uint64_t i = 1; i <= other.n_; ++i) push_back(other.bit(i));
  }

  BitString prefix(uint64_t m) const {
    if (m > n_) throw domain_error("prefix length exceeds string length");
    BitString x;
    x.n_ = m;
    x.words_.assign(words_.begin(), words_.begin() + word_count(m));
    x.mask_tail();
    return x;
  }

  uint64_t count_ones() const {
    uint64_t c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  // Ones among the first n symbols.
  uint64_t count_ones_prefix(uint64_t n) const {
    assert(n <= n_);
    uint64_t c = 0;
    const uint64_t full = n >> 6;
    for (uint64_t wi = 0; wi < full; ++wi) c += std::popcount(words_[wi]);
    const unsigned rem = n & 63;
    if (rem) c += std::popcount(words_[full] & ((uint64_t{1} << rem) - 1));
    return c;
  }

  // Word wi (0-based, 64 bits per word), zero beyond the end.
  uint64_t word(uint64_t wi) const { return wi < words_.size() ? words_[wi] : 0; }
  uint64_t word_size() const { return words_.size(); }

  bool operator==(const BitString& o) const { return n_ == o.n_ && words_ == o.words_; }
  bool operator!=(const BitString& o) const { return !(*this == o); }

 private:
  static uint64_t word_count(uint64_t n) { return (n + 63) >> 6; }

  void mask_tail() {
    const unsigned rem = n_ & 63;
    if (rem && !words_.empty()) words_.back() &= (uint64_t{1} << rem) - 1;
  }

  // Invariant: bits past n_ in the last word are zero.
  std::vector<uint64_t> words_;
  uint64_t n_ = 0;
};

inline BitString from_text(std::string_view s) {
  BitString x;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '0')
      x.push_back(false);
    else if (s[i] == '1')
      x.push_back(true);
    else
      throw parse_error("invalid bit character at position " + std::to_string(i + 1));
  }
  return x;
}

inline std::string to_text(const BitString& x) {
  std::string s;
  s.reserve(x.size());
  for (uint64_t i = 1; i <= x.size(); ++i) s += x.bit(i) ? '1' : '0';
  return s;
}

// Packed bitfile: 8-byte little-endian bit count, then ceil(n/8) payload
// bytes, LSB-first. Padding bits in the final byte must be zero.
inline void write_bitfile(const std::filesystem::path& path, const BitString& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  const uint64_t n = x.size();
  unsigned char header[8];
  for (int i = 0; i < 8; ++i) header[i] = static_cast<unsigned char>((n >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(header), 8);
  const uint64_t bytes = (n + 7) / 8;
  for (uint64_t j = 0; j < bytes; ++j) {
    const unsigned char b = static_cast<unsigned char>((x.word(j >> 3) >> (8 * (j & 7))) & 0xFF);
    out.put(static_cast<char>(b));
  }
  if (!out) throw io_error("write failed: " + path.string());
}

inline BitString read_bitstream(std::istream& in, const std::string& name) {
  unsigned char header[8];
  in.read(reinterpret_cast<char*>(header), 8);
  if (in.gcount() != 8) throw io_error("malformed header (shorter than 8 bytes): " + name);
  uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= uint64_t{header[i]} << (8 * i);
  const uint64_t bytes = (n + 7) / 8;
  std::string payload(bytes, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(bytes));
  if (static_cast<uint64_t>(in.gcount()) != bytes)
    throw io_error("truncated payload (header says " + std::to_string(n) + " bits): " + name);
  BitString x = BitString::zeros(n);
  for (uint64_t i = 0; i < n; ++i) {
    const unsigned char b = static_cast<unsigned char>(payload[i >> 3]);
    if ((b >> (i & 7)) & 1) x.set(i + 1, true);
  }
  if (n & 7) {
    const unsigned char last = static_cast<unsigned char>(payload[bytes - 1]);
    if (last >> (n & 7)) throw io_error("nonzero padding bits in final byte: " + name);
  }
  return x;
}

inline BitString read_bitfile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path.string());
  BitString x = read_bitstream(in, path.string());
  // Reject trailing garbage after the declared payload.
  in.peek();
  if (!in.eof()) throw io_error("trailing bytes after payload: " + path.string());
  return x;
}

}  // namespace normsel
