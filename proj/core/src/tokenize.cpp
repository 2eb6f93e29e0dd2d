#include "fixread/tokenize.hpp"

#include <cctype>
#include <cstdint>

#include "fixread/errors.hpp"

namespace fixread {
namespace {

// Decodes one UTF-8 codepoint at s[i]; advances i. Invalid bytes are
// treated as Latin-1 so tokenization never throws on odd input.
std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  std::uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return b0;
  }
  if (i + len > s.size()) {
    ++i;
    return b0;
  }
  for (int k = 1; k < len; ++k) {
    const auto bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xC0) != 0x80) {
      ++i;
      return b0;
    }
    cp = (cp << 6) | (bk & 0x3F);
  }
  i += len;
  return cp;
}

// Punctuation stripped at token edges: ASCII punctuation plus the common
// Unicode punctuation found in English corpora (curly quotes, dashes,
// ellipsis, guillemets...). Word-internal occurrences are kept.
bool is_edge_punct(std::uint32_t cp) {
  if (cp < 0x80) {
    return std::ispunct(static_cast<int>(cp)) != 0;
  }
  if (cp >= 0x2010 && cp <= 0x2027) return true;  // hyphens, dashes, quotes
  if (cp >= 0x2030 && cp <= 0x205E) return true;  // general punctuation
  switch (cp) {
    case 0x00A1:  // inverted exclamation
    case 0x00A7:  // section sign
    case 0x00AB:  // left guillemet
    case 0x00B6:
    case 0x00B7:
    case 0x00BB:  // right guillemet
    case 0x00BF:  // inverted question
      return true;
    default:
      return false;
  }
}

std::vector<std::pair<std::uint32_t, std::string_view>> codepoints(std::string_view s) {
  std::vector<std::pair<std::uint32_t, std::string_view>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t start = i;
    const std::uint32_t cp = decode_utf8(s, i);
    out.emplace_back(cp, s.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::string normalize_word(std::string_view surface) {
  auto cps = codepoints(surface);
  std::size_t lo = 0;
  std::size_t hi = cps.size();
  while (lo < hi && is_edge_punct(cps[lo].first)) ++lo;
  while (hi > lo && is_edge_punct(cps[hi - 1].first)) --hi;
  std::string out;
  for (std::size_t k = lo; k < hi; ++k) {
    if (cps[k].first < 0x80) {
      out.push_back(static_cast<char>(
          std::tolower(static_cast<int>(cps[k].first))));
    } else {
      out.append(cps[k].second);
    }
  }
  return out;
}

std::vector<WordToken> tokenize(std::string_view text, SentenceId sentence_id) {
  if (text.empty()) {
    throw error("tokenize: empty text");
  }
  std::vector<WordToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) {
      WordToken t;
      t.sentence_id = sentence_id;
      t.token_index = static_cast<int>(tokens.size());
      t.surface = std::string{text.substr(start, i - start)};
      t.normalized = normalize_word(t.surface);
      tokens.push_back(std::move(t));
    }
  }
  return tokens;
}

}  // namespace fixread
