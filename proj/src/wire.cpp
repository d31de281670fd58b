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

#include "bonsai/wire.hpp"

#include <string>

#include "bonsai/byte_io.hpp"
#include "bonsai/error.hpp"

namespace bonsai {
namespace {

constexpr std::uint8_t kMagic[4] = {'B', 'N', 'S', 'I'};

bool known_type(std::uint8_t t) { return t >= 0x01 && t <= 0x06; }

// Validates a header and returns the payload length.
std::uint32_t check_header(std::span<const std::uint8_t> h) {
  for (int i = 0; i < 4; ++i) {
    if (h[i] != kMagic[i]) fail(ErrorKind::kProtocol, "bad frame magic");
  }
  if (h[4] != kWireVersion) {
    fail(ErrorKind::kProtocol, "unsupported protocol version " + std::to_string(h[4]));
  }
  if (!known_type(h[5])) fail(ErrorKind::kProtocol, "unknown message type " + std::to_string(h[5]));
  const std::uint32_t len = std::uint32_t{h[6]} | std::uint32_t{h[7]} << 8 |
                            std::uint32_t{h[8]} << 16 | std::uint32_t{h[9]} << 24;
  if (len > kMaxPayload) fail(ErrorKind::kProtocol, "payload of " + std::to_string(len) + " bytes exceeds limit");
  return len;
}

void expect(const Frame& f, MsgType type) {
  if (f.type != type) {
    fail(ErrorKind::kProtocol, "unexpected message type " +
                                   std::to_string(static_cast<int>(f.type)));
  }
}

void check_k(unsigned k) {
  if (k < 1 || k > 8) fail(ErrorKind::kProtocol, "symbol width k=" + std::to_string(k) + " out of range");
}

void finish(const ByteReader& r) {
  if (!r.done()) fail(ErrorKind::kProtocol, "trailing bytes in message payload");
}

Outsource read_symbols(ByteReader& r, std::size_t count, unsigned k) {
  const auto packed = r.bytes(packed_size(count, k));
  SymbolString symbols;
  try {
    symbols = unpack_symbols(packed, count, k);
  } catch (const Error& e) {
    fail(ErrorKind::kProtocol, e.what());
  }
  // Unused pad bits must be zero so every outsource has one encoding.
  if (pack_symbols(symbols, k) != std::vector<std::uint8_t>(packed.begin(), packed.end())) {
    fail(ErrorKind::kProtocol, "nonzero padding in packed symbols");
  }
  return symbols;
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
  if (frame.payload.size() > kMaxPayload) fail(ErrorKind::kCapacity, "payload exceeds frame limit");
  ByteWriter w;
  w.bytes(kMagic);
  w.u8(kWireVersion);
  w.u8(static_cast<std::uint8_t>(frame.type));
  w.u32(static_cast<std::uint32_t>(frame.payload.size()));
  w.bytes(frame.payload);
  return w.take();
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderSize) fail(ErrorKind::kProtocol, "short frame header");
  const std::uint32_t len = check_header(bytes.first(kFrameHeaderSize));
  if (bytes.size() != kFrameHeaderSize + len) {
    fail(ErrorKind::kProtocol, "frame length does not match payload_len");
  }
  Frame f;
  f.type = static_cast<MsgType>(bytes[5]);
  f.payload.assign(bytes.begin() + kFrameHeaderSize, bytes.end());
  return f;
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  if (start_ > 0 && start_ * 2 >= buffer_.size()) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(start_));
    start_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<Frame> FrameDecoder::next() {
  const std::size_t avail = buffer_.size() - start_;
  if (avail < kFrameHeaderSize) {
    // Reject garbage as early as the magic allows.
    for (std::size_t i = 0; i < avail && i < 4; ++i) {
      if (buffer_[start_ + i] != kMagic[i]) fail(ErrorKind::kProtocol, "bad frame magic");
    }
    return std::nullopt;
  }
  const std::span<const std::uint8_t> view(buffer_.data() + start_, avail);
  const std::uint32_t len = check_header(view.first(kFrameHeaderSize));
  if (avail < kFrameHeaderSize + len) return std::nullopt;
  Frame f;
  f.type = static_cast<MsgType>(view[5]);
  f.payload.assign(view.begin() + kFrameHeaderSize, view.begin() + kFrameHeaderSize + len);
  start_ += kFrameHeaderSize + len;
  if (start_ == buffer_.size()) {
    buffer_.clear();
    start_ = 0;
  }
  return f;
}

Policy PolicyMsg::to_policy() const {
  if (counts.size() != (std::size_t{1} << k)) {
    fail(ErrorKind::kProtocol, "policy histogram does not cover the alphabet");
  }
  return Policy{SymbolDistribution::laplace_smoothed(counts), n_b, 0};
}

Frame encode(const UploadMsg& msg) {
  ByteWriter w;
  w.u64(msg.file_id.value);
  w.u32(static_cast<std::uint32_t>(msg.outsource.size()));
  w.u8(static_cast<std::uint8_t>(msg.k));
  w.bytes(pack_symbols(msg.outsource, msg.k));
  return {MsgType::kUpload, w.take()};
}

Frame encode(const UploadAck& msg) {
  ByteWriter w;
  w.u64(msg.file_id.value);
  w.u8(static_cast<std::uint8_t>(msg.status));
  return {MsgType::kUploadAck, w.take()};
}

Frame encode(const GetMsg& msg) {
  ByteWriter w;
  w.u64(msg.file_id.value);
  return {MsgType::kGet, w.take()};
}

Frame encode(const GetResp& msg, unsigned k) {
  ByteWriter w;
  w.u64(msg.file_id.value);
  w.u8(static_cast<std::uint8_t>(msg.status));
  if (msg.status == GetStatus::kOk) {
    w.u32(static_cast<std::uint32_t>(msg.outsource.size()));
    w.bytes(pack_symbols(msg.outsource, k));
  }
  return {MsgType::kGetResp, w.take()};
}

Frame encode_get_policy() { return {MsgType::kGetPolicy, {}}; }

Frame encode(const PolicyMsg& msg) {
  ByteWriter w;
  w.u32(msg.n_b);
  w.u8(static_cast<std::uint8_t>(msg.k));
  for (auto c : msg.counts) w.u64(c);
  return {MsgType::kPolicy, w.take()};
}

UploadMsg decode_upload(const Frame& frame) {
  expect(frame, MsgType::kUpload);
  ByteReader r(frame.payload, ErrorKind::kProtocol);
  UploadMsg m;
  m.file_id = FileId{r.u64()};
  const std::size_t n_b = r.u32();
  m.k = r.u8();
  check_k(m.k);
  if (packed_size(n_b, m.k) != r.remaining()) {
    fail(ErrorKind::kProtocol, "upload payload does not hold n_b packed symbols");
  }
  m.outsource = read_symbols(r, n_b, m.k);
  finish(r);
  return m;
}

UploadAck decode_upload_ack(const Frame& frame) {
  expect(frame, MsgType::kUploadAck);
  ByteReader r(frame.payload, ErrorKind::kProtocol);
  UploadAck a;
  a.file_id = FileId{r.u64()};
  const std::uint8_t s = r.u8();
  if (s > 2) fail(ErrorKind::kProtocol, "unknown upload status " + std::to_string(s));
  a.status = static_cast<UploadStatus>(s);
  finish(r);
  return a;
}

GetMsg decode_get(const Frame& frame) {
  expect(frame, MsgType::kGet);
  ByteReader r(frame.payload, ErrorKind::kProtocol);
  GetMsg g{FileId{r.u64()}};
  finish(r);
  return g;
}

GetResp decode_get_resp(const Frame& frame, unsigned k) {
  expect(frame, MsgType::kGetResp);
  check_k(k);
  ByteReader r(frame.payload, ErrorKind::kProtocol);
  GetResp g;
  g.file_id = FileId{r.u64()};
  const std::uint8_t s = r.u8();
  if (s > 1) fail(ErrorKind::kProtocol, "unknown get status " + std::to_string(s));
  g.status = static_cast<GetStatus>(s);
  if (g.status == GetStatus::kOk) {
    const std::size_t n_b = r.u32();
    if (packed_size(n_b, k) != r.remaining()) {
      fail(ErrorKind::kProtocol, "get response does not hold n_b packed symbols");
    }
    g.outsource = read_symbols(r, n_b, k);
  }
  finish(r);
  return g;
}

void decode_get_policy(const Frame& frame) {
  expect(frame, MsgType::kGetPolicy);
  if (!frame.payload.empty()) fail(ErrorKind::kProtocol, "GET_POLICY carries no payload");
}

PolicyMsg decode_policy(const Frame& frame) {
  expect(frame, MsgType::kPolicy);
  ByteReader r(frame.payload, ErrorKind::kProtocol);
  PolicyMsg p;
  p.n_b = r.u32();
  p.k = r.u8();
  check_k(p.k);
  p.counts.resize(std::size_t{1} << p.k);
  for (auto& c : p.counts) c = r.u64();
  finish(r);
  return p;
}

}  // namespace bonsai
