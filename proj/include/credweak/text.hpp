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

// Language-agnostic tokenization and per-review keyword selection.

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "credweak/common.hpp"

namespace credweak {

namespace utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at text[pos] and advances pos. Malformed
// sequences decode to U+FFFD and consume a single byte.
inline char32_t decode(std::string_view text, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  int extra = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((lead & 0xE0) == 0xC0) {
    extra = 1, cp = lead & 0x1F, min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2, cp = lead & 0x0F, min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3, cp = lead & 0x07, min = 0x10000;
  } else {
    ++pos;
    return kReplacement;
  }
  if (pos + extra >= text.size()) {
    ++pos;
    return kReplacement;
  }
  for (int i = 1; i <= extra; ++i) {
    const unsigned char c = byte(pos + i);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return kReplacement;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kReplacement;
  }
  pos += extra + 1;
  return cp;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Number of code points; malformed bytes count as one each.
inline std::size_t length(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < text.size(); ++n) decode(text, pos);
  return n;
}

}  // namespace utf8

// Word characters: ASCII letters and digits, plus any non-ASCII code point
// outside the common punctuation, symbol and space blocks. Hangul, CJK,
// Cyrillic, accented Latin and so on are word characters.
inline bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9');
  }
  if (cp == utf8::kReplacement) return false;
  if (cp >= 0x80 && cp <= 0xBF) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE6F) return false;  // CJK compatibility forms
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;  // fullwidth punctuation
  if (cp >= 0xFF1A && cp <= 0xFF20) return false;
  if (cp >= 0xFF3B && cp <= 0xFF40) return false;
  if (cp >= 0xFF5B && cp <= 0xFF65) return false;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji and pictographs
  if (cp == 0xFEFF) return false;
  return true;
}

// Simple lowercase mapping for ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic capitals. Scripts without case pass through.
inline char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp < 0x80) return cp;
  if ((cp >= 0xC0 && cp <= 0xDE) && cp != 0xD7) return cp + 32;
  // Latin Extended-A alternates upper/lower case in pairs.
  if (cp >= 0x100 && cp <= 0x137 && cp != 0x130) return cp % 2 == 0 ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return cp % 2 == 1 ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp % 2 == 0 ? cp + 1 : cp;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return cp % 2 == 1 ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  return cp;
}

// Splits on non-word boundaries and lowercases. Empty input gives an empty
// list; every returned token is non-empty.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::decode(text, pos);
    if (is_word_char(cp)) {
      utf8::append(current, to_lower(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

inline constexpr std::size_t kDefaultKeywordCount = 20;

// Up to K distinct keywords of one review with their in-review frequencies.
// keywords[i] occurs counts[i] times in the source token list.
struct TokenizedReview {
  std::string review_id;
  std::vector<std::string> keywords;
  std::vector<std::uint32_t> counts;

  bool operator==(const TokenizedReview&) const = default;
};

// Top-k tokens by frequency; ties go to the token that occurred first.
// Returns the keywords and their counts, in rank order.
inline TokenizedReview select_keywords(const std::vector<std::string>& tokens,
                                       std::size_t k) {
  if (k < 1) throw ValidationError("keyword count must be >= 1");
  struct Entry {
    std::string_view token;
    std::uint32_t count;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto [it, inserted] = index.try_emplace(tokens[i], entries.size());
    if (inserted) {
      entries.push_back({tokens[i], 1});
    } else {
      ++entries[it->second].count;
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.count > b.count;
  });
  TokenizedReview out;
  const std::size_t n = std::min(k, entries.size());
  out.keywords.reserve(n);
  out.counts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.keywords.emplace_back(entries[i].token);
    out.counts.push_back(entries[i].count);
  }
  return out;
}

inline TokenizedReview extract_keywords(std::string review_id, std::string_view text,
                                        std::size_t k = kDefaultKeywordCount) {
  TokenizedReview doc = select_keywords(tokenize(text), k);
  doc.review_id = std::move(review_id);
  return doc;
}

}  // namespace credweak
