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

#include "bonsai/base_forest.hpp"

#include <string>

#include "bonsai/byte_io.hpp"
#include "bonsai/error.hpp"
#include "bonsai/instrument.hpp"

namespace bonsai {

BaseForest::BaseForest(std::size_t n_b) : n_b_(n_b), nodes_(1) {
  if (n_b == 0) fail(ErrorKind::kParameter, "bases must have at least one symbol");
}

void BaseForest::check_base(std::span<const std::uint8_t> base) const {
  if (base.size() != n_b_) {
    fail(ErrorKind::kParameter, "base has " + std::to_string(base.size()) +
                                    " symbols, forest stores n_b=" + std::to_string(n_b_));
  }
  for (std::size_t i = 1; i < base.size(); ++i) {
    if (base[i] < base[i - 1]) fail(ErrorKind::kParameter, "base is not sorted");
  }
}

std::uint32_t BaseForest::find_child(std::uint32_t node, std::uint8_t symbol) const {
  for (std::uint32_t c = nodes_[node].first_child; c != kNone; c = nodes_[c].next_sibling) {
    if (nodes_[c].symbol == symbol) return c;
    if (nodes_[c].symbol > symbol) break;
  }
  return kNone;
}

std::uint32_t BaseForest::add_child(std::uint32_t node, std::uint8_t symbol) {
  if (nodes_.size() >= kNone) fail(ErrorKind::kCapacity, "forest node limit reached");
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  Node fresh;
  fresh.parent = node;
  fresh.symbol = symbol;
  std::uint32_t* link = &nodes_[node].first_child;
  while (*link != kNone && nodes_[*link].symbol < symbol) link = &nodes_[*link].next_sibling;
  fresh.next_sibling = *link;
  *link = id;
  nodes_.push_back(fresh);
  return id;
}

BaseForest::Lookup BaseForest::search(std::span<const std::uint8_t> base) const {
  check_base(base);
  Lookup r;
  std::uint32_t node = 0;
  for (std::uint8_t s : base) {
    node = find_child(node, s);
    if (node == kNone) break;
    ++r.nodes_touched;
  }
  if (node != kNone) r.pointer = BasePointer{nodes_[node].pointer};
  instrument::tick(r.nodes_touched);
  return r;
}

BaseForest::InsertResult BaseForest::insert(std::span<const std::uint8_t> base) {
  check_base(base);
  InsertResult r;
  std::uint32_t node = 0;
  std::size_t depth = 0;
  for (; depth < base.size(); ++depth) {
    const std::uint32_t next = find_child(node, base[depth]);
    if (next == kNone) break;
    node = next;
    ++r.nodes_touched;
  }
  if (depth == base.size()) {
    r.pointer = BasePointer{nodes_[node].pointer};
    instrument::tick(r.nodes_touched);
    return r;
  }
  for (; depth < base.size(); ++depth) {
    node = add_child(node, base[depth]);
    ++r.nodes_touched;
  }
  const auto ptr = static_cast<std::uint32_t>(leaf_of_ptr_.size());
  nodes_[node].pointer = ptr;
  leaves_.push_back(node);
  leaf_of_ptr_.push_back(node);
  r.pointer = BasePointer{ptr};
  r.was_new = true;
  instrument::tick(r.nodes_touched);
  return r;
}

BaseString BaseForest::get_base(BasePointer pointer, PointerLookup mode) const {
  std::uint32_t leaf = kNone;
  if (mode == PointerLookup::kIndex) {
    if (pointer.value < leaf_of_ptr_.size()) leaf = leaf_of_ptr_[pointer.value];
  } else {
    for (std::uint32_t candidate : leaves_) {
      instrument::tick();
      if (nodes_[candidate].pointer == pointer.value) {
        leaf = candidate;
        break;
      }
    }
  }
  if (leaf == kNone) fail(ErrorKind::kNotFound, "unknown base pointer " + std::to_string(pointer.value));
  BaseString base(n_b_);
  std::uint32_t node = leaf;
  for (std::size_t i = n_b_; i-- > 0;) {
    base[i] = nodes_[node].symbol;
    node = nodes_[node].parent;
  }
  instrument::tick(n_b_);
  return base;
}

std::size_t BaseForest::root_count() const {
  std::size_t n = 0;
  for (std::uint32_t c = nodes_[0].first_child; c != kNone; c = nodes_[c].next_sibling) ++n;
  return n;
}

std::uint64_t BaseForest::size_bits(unsigned bid_bits, unsigned pointer_bits) const {
  return std::uint64_t{node_count()} * (bid_bits + 8) + std::uint64_t{leaf_count()} * pointer_bits;
}

std::vector<std::uint8_t> BaseForest::serialize() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(n_b_));
  w.u64(leaf_of_ptr_.size());
  w.u32(static_cast<std::uint32_t>(root_count()));
  // Iterative preorder: push children in reverse so they pop in order.
  std::vector<std::uint32_t> stack;
  std::vector<std::uint32_t> kids;
  auto push_children = [&](std::uint32_t node) {
    kids.clear();
    for (std::uint32_t c = nodes_[node].first_child; c != kNone; c = nodes_[c].next_sibling) {
      kids.push_back(c);
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    return kids.size();
  };
  push_children(0);
  while (!stack.empty()) {
    const std::uint32_t node = stack.back();
    stack.pop_back();
    std::size_t children = 0;
    for (std::uint32_t c = nodes_[node].first_child; c != kNone; c = nodes_[c].next_sibling) ++children;
    if (children > 0xFF) fail(ErrorKind::kCapacity, "node has more than 255 children");
    w.u8(nodes_[node].symbol);
    w.u8(static_cast<std::uint8_t>(children));
    const bool leaf = nodes_[node].pointer != kNone;
    w.u8(leaf ? 1 : 0);
    if (leaf) w.u64(nodes_[node].pointer);
    push_children(node);
  }
  return w.take();
}

BaseForest BaseForest::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const std::size_t n_b = r.u32();
  const std::uint64_t pointer_count = r.u64();
  const std::size_t roots = r.u32();
  BaseForest f(n_b);
  f.leaf_of_ptr_.assign(pointer_count, kNone);

  struct Frame {
    std::uint32_t node;
    std::size_t depth;
    std::size_t children_left;
  };
  std::vector<Frame> stack{{0, 0, roots}};
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.children_left == 0) {
      stack.pop_back();
      continue;
    }
    --top.children_left;
    const std::uint32_t parent = top.node;
    const std::size_t depth = top.depth + 1;
    const std::uint8_t symbol = r.u8();
    const std::size_t children = r.u8();
    const std::uint8_t has_leaf = r.u8();
    if (depth > n_b) fail(ErrorKind::kDecode, "forest path longer than n_b");
    if (parent != 0 && symbol < f.nodes_[parent].symbol) {
      fail(ErrorKind::kDecode, "forest path is not sorted");
    }
    if (f.find_child(parent, symbol) != kNone) fail(ErrorKind::kDecode, "duplicate forest child");
    const std::uint32_t node = f.add_child(parent, symbol);
    if (has_leaf > 1) fail(ErrorKind::kDecode, "leaf flag must be 0 or 1");
    if ((has_leaf == 1) != (depth == n_b) || (depth == n_b && children != 0)) {
      fail(ErrorKind::kDecode, "leaves must sit exactly at depth n_b");
    }
    if (has_leaf) {
      const std::uint64_t ptr = r.u64();
      if (ptr >= pointer_count || f.leaf_of_ptr_[ptr] != kNone) {
        fail(ErrorKind::kDecode, "invalid or repeated base pointer");
      }
      f.nodes_[node].pointer = static_cast<std::uint32_t>(ptr);
      f.leaf_of_ptr_[ptr] = node;
    } else if (children == 0) {
      fail(ErrorKind::kDecode, "interior forest node without children");
    }
    stack.push_back({node, depth, children});
  }
  if (!r.done()) fail(ErrorKind::kDecode, "trailing bytes after forest snapshot");
  for (auto leaf : f.leaf_of_ptr_) {
    if (leaf == kNone) fail(ErrorKind::kDecode, "forest snapshot is missing a pointer");
  }
  // Restore creation order so scan lookups behave as before the snapshot.
  f.leaves_ = f.leaf_of_ptr_;
  return f;
}

}  // namespace bonsai
