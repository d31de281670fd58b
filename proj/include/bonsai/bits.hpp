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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bonsai {

// A prefix codeword: the low `length` bits of `bits`, most significant first.
struct Codeword {
  std::uint64_t bits = 0;
  unsigned length = 0;

  std::string to_string() const;
  bool operator==(const Codeword&) const = default;
};

// Growable bit string, most-significant-bit first within each byte, zero
// padded to the byte boundary.
class BitString {
 public:
  BitString() = default;
  static BitString from_bytes(std::vector<std::uint8_t> bytes, std::size_t bit_count);
  // Parses a string of '0'/'1' characters.
  static BitString from_text(std::string_view text);

  void push_bit(bool bit);
  void append(const Codeword& code);
  void append_bits(std::uint64_t value, unsigned width);
  void append(const BitString& other);

  bool bit(std::size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1u; }
  void set_bit(std::size_t i, bool value);

  std::size_t size() const { return bit_count_; }
  bool empty() const { return bit_count_ == 0; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::size_t popcount() const;
  std::string to_text() const;

  bool operator==(const BitString&) const = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_count_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const BitString& bits) : bits_(bits) {}

  bool read_bit();
  std::uint64_t read_bits(unsigned width);
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bits_.size() - pos_; }
  bool done() const { return pos_ == bits_.size(); }

 private:
  const BitString& bits_;
  std::size_t pos_ = 0;
};

// ceil(log2(n)) for n >= 1; 0 for n <= 1.
unsigned ceil_log2(std::uint64_t n);

}  // namespace bonsai
