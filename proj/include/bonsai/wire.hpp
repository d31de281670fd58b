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

namespace bonsai {

// Frame: "BNSI", version u8, msg_type u8, payload_len u32 LE, payload.
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kFrameHeaderSize = 10;
inline constexpr std::uint32_t kMaxPayload = 64u << 20;

enum class MsgType : std::uint8_t {
  kUpload = 0x01,
  kUploadAck = 0x02,
  kGet = 0x03,
  kGetResp = 0x04,
  kGetPolicy = 0x05,
  kPolicy = 0x06,
};

struct Frame {
  MsgType type = MsgType::kUpload;
  std::vector<std::uint8_t> payload;

  bool operator==(const Frame&) const = default;
};

std::vector<std::uint8_t> encode_frame(const Frame& frame);
// Exactly one frame; anything short, long or malformed is a protocol error.
Frame decode_frame(std::span<const std::uint8_t> bytes);

// Incremental decoder for a byte stream. A malformed header throws and the
// decoder must then be discarded along with the connection.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  std::optional<Frame> next();
  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::vector<std::uint8_t> buffer_;
  std::size_t start_ = 0;
};

enum class UploadStatus : std::uint8_t { kOk = 0, kDuplicate = 1, kBadLength = 2 };
enum class GetStatus : std::uint8_t { kOk = 0, kNotFound = 1 };

struct UploadMsg {
  FileId file_id;
  unsigned k = 8;
  Outsource outsource;
  bool operator==(const UploadMsg&) const = default;
};

struct UploadAck {
  FileId file_id;
  UploadStatus status = UploadStatus::kOk;
  bool operator==(const UploadAck&) const = default;
};

struct GetMsg {
  FileId file_id;
  bool operator==(const GetMsg&) const = default;
};

// n_b and the packed symbols are present iff status is ok.
struct GetResp {
  FileId file_id;
  GetStatus status = GetStatus::kOk;
  Outsource outsource;
  bool operator==(const GetResp&) const = default;
};

// The histogram the active policy was built from; receivers apply the same
// Laplace smoothing as the cloud.
struct PolicyMsg {
  std::uint32_t n_b = 0;
  unsigned k = 8;
  std::vector<std::uint64_t> counts;
  bool operator==(const PolicyMsg&) const = default;

  Policy to_policy() const;
};

Frame encode(const UploadMsg& msg);
Frame encode(const UploadAck& msg);
Frame encode(const GetMsg& msg);
// `k` is the sender's symbol width, needed to pack the outsource.
Frame encode(const GetResp& msg, unsigned k);
Frame encode_get_policy();
Frame encode(const PolicyMsg& msg);

UploadMsg decode_upload(const Frame& frame);
UploadAck decode_upload_ack(const Frame& frame);
GetMsg decode_get(const Frame& frame);
GetResp decode_get_resp(const Frame& frame, unsigned k);
void decode_get_policy(const Frame& frame);
PolicyMsg decode_policy(const Frame& frame);

}  // namespace bonsai
