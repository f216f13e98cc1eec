// Copyright 2026 The credweak Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run manifests: what was run, on which inputs, and what it produced.
// Requires OpenSSL (libcrypto) for SHA-256.

#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "credweak/common.hpp"
#include "credweak/io.hpp"

namespace credweak {

inline constexpr std::string_view kToolVersion = "1.0.0";

inline std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

// nlohmann::json keeps object keys sorted, so the compact dump is canonical
// and the hash ignores key order in the source file.
inline std::string config_hash(const nlohmann::json& config) { return sha256_hex(config.dump()); }

inline std::string iso8601_utc(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct InputDigest {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string tool_version{kToolVersion};
  std::string command;
  std::string config_hash;
  std::vector<InputDigest> inputs;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::string started;
  std::string finished;

  void add_input(const std::filesystem::path& path) { inputs.push_back({path.string(), sha256_hex(read_file(path))}); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = tool_version;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["inputs"] = nlohmann::ordered_json::array();
    for (const InputDigest& d : inputs) j["inputs"].push_back({{"path", d.path}, {"sha256", d.sha256}});
    j["seed"] = seed;
    j["outputs"] = outputs;
    j["started"] = started;
    j["finished"] = finished;
    return j;
  }
};

}  // namespace credweak
