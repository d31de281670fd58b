// Copyright 2026 The Bonsai Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bonsai/bits.hpp"

#include <bit>

#include "bonsai/error.hpp"

namespace bonsai {

std::string Codeword::to_string() const {
  std::string s;
  for (unsigned i = length; i-- > 0;) s.push_back(((bits >> i) & 1u) ? '1' : '0');
  return s;
}

BitString BitString::from_bytes(std::vector<std::uint8_t> bytes, std::size_t bit_count) {
  if (bytes.size() != (bit_count + 7) / 8) {
    fail(ErrorKind::kDecode, "bit string of " + std::to_string(bit_count) +
                                 " bits cannot occupy " + std::to_string(bytes.size()) +
                                 " bytes");
  }
  if (bit_count % 8 != 0) {
    const auto pad_mask = static_cast<std::uint8_t>(0xFFu >> (bit_count % 8));
    if (bytes.back() & pad_mask) fail(ErrorKind::kDecode, "nonzero bit-string padding");
  }
  BitString b;
  b.bytes_ = std::move(bytes);
  b.bit_count_ = bit_count;
  return b;
}

BitString BitString::from_text(std::string_view text) {
  BitString b;
  for (char c : text) {
    if (c != '0' && c != '1') fail(ErrorKind::kParameter, "bit text must be 0/1");
    b.push_bit(c == '1');
  }
  return b;
}

void BitString::push_bit(bool bit) {
  if (bit_count_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count_ % 8));
  ++bit_count_;
}

void BitString::append_bits(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) push_bit((value >> i) & 1u);
}

void BitString::append(const Codeword& code) { append_bits(code.bits, code.length); }

void BitString::append(const BitString& other) {
  for (std::size_t i = 0; i < other.size(); ++i) push_bit(other.bit(i));
}

void BitString::set_bit(std::size_t i, bool value) {
  const auto mask = static_cast<std::uint8_t>(0x80u >> (i % 8));
  if (value) {
    bytes_[i / 8] |= mask;
  } else {
    bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
  }
}

std::size_t BitString::popcount() const {
  std::size_t n = 0;
  for (auto b : bytes_) n += static_cast<std::size_t>(std::popcount(b));
  return n;
}

std::string BitString::to_text() const {
  std::string s;
  s.reserve(bit_count_);
  for (std::size_t i = 0; i < bit_count_; ++i) s.push_back(bit(i) ? '1' : '0');
  return s;
}

bool BitReader::read_bit() {
  if (pos_ >= bits_.size()) fail(ErrorKind::kDecode, "bit string overrun");
  return bits_.bit(pos_++);
}

std::uint64_t BitReader::read_bits(unsigned width) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v = (v << 1) | (read_bit() ? 1u : 0u);
  return v;
}

unsigned ceil_log2(std::uint64_t n) {
  if (n <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(n - 1));
}

}  // namespace bonsai
