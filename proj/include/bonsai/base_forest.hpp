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
#include <optional>
#include <span>
#include <vector>

#include "bonsai/alphabet.hpp"
#include "bonsai/swap_sort.hpp"

namespace bonsai {

// Trie over sorted bases of fixed length n_b. Roots are first symbols, each
// child holds the next symbol, and every depth-n_b node is a leaf carrying
// the base's pointer. Children are kept ordered by symbol.
//
// Single writer, many readers: callers serialise insert() against search()
// and get_base().
class BaseForest {
 public:
  enum class PointerLookup {
    kIndex,  // pointer -> leaf side table, O(n_b)
    kScan,   // linear scan over leaves, O(#bases + n_b)
  };

  struct Lookup {
    std::optional<BasePointer> pointer;
    std::size_t nodes_touched = 0;
  };

  struct InsertResult {
    BasePointer pointer;
    bool was_new = false;
    std::size_t nodes_touched = 0;
  };

  explicit BaseForest(std::size_t n_b);

  Lookup search(std::span<const std::uint8_t> base) const;
  // Idempotent: an existing base returns its pointer with was_new = false.
  InsertResult insert(std::span<const std::uint8_t> base);
  BaseString get_base(BasePointer pointer, PointerLookup mode = PointerLookup::kIndex) const;

  std::size_t n_b() const { return n_b_; }
  std::size_t node_count() const { return nodes_.size() - 1; }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t root_count() const;

  // Accounting model: node_count * (bid_bits + 8) + leaf_count * pointer_bits.
  std::uint64_t size_bits(unsigned bid_bits, unsigned pointer_bits) const;

  // Snapshot: u32 n_b, u64 next pointer, u32 root count, then a preorder walk
  // with (symbol u8, child_count u8, has_leaf u8 [, pointer u64]) per node.
  std::vector<std::uint8_t> serialize() const;
  static BaseForest deserialize(std::span<const std::uint8_t> bytes);

 private:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

  struct Node {
    std::uint32_t first_child = kNone;
    std::uint32_t next_sibling = kNone;
    std::uint32_t parent = kNone;
    std::uint32_t pointer = kNone;  // leaf pointer, kNone for interior nodes
    std::uint8_t symbol = 0;
  };

  void check_base(std::span<const std::uint8_t> base) const;
  std::uint32_t find_child(std::uint32_t node, std::uint8_t symbol) const;
  std::uint32_t add_child(std::uint32_t node, std::uint8_t symbol);

  std::size_t n_b_;
  std::vector<Node> nodes_;                 // nodes_[0] is a virtual super-root
  std::vector<std::uint32_t> leaves_;       // leaf nodes in creation order
  std::vector<std::uint32_t> leaf_of_ptr_;  // pointer value -> leaf node
};

}  // namespace bonsai
