#include "cpcer/textnorm.hpp"

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/uscript.h>
#include <unicode/utypes.h>

#include <vector>

namespace cpcer {

namespace {

constexpr char32_t kMaxScalar = 0x10FFFF;

bool is_surrogate(char32_t cp) { return cp >= 0xD800 && cp <= 0xDFFF; }

// Decodes one scalar starting at `pos`; returns false on any malformed
// sequence without advancing.
bool decode_one(std::string_view bytes, std::size_t& pos, char32_t& out) {
  const auto b = [&](std::size_t k) { return static_cast<unsigned char>(bytes[pos + k]); };
  const unsigned char lead = b(0);
  if (lead < 0x80) {
    out = lead;
    pos += 1;
    return true;
  }
  std::size_t len;
  char32_t cp;
  char32_t min_cp;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
    min_cp = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
    min_cp = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
    min_cp = 0x10000;
  } else {
    return false;
  }
  if (pos + len > bytes.size()) return false;
  for (std::size_t k = 1; k < len; ++k) {
    const unsigned char cont = b(k);
    if ((cont & 0xC0) != 0x80) return false;
    cp = (cp << 6) | (cont & 0x3F);
  }
  if (cp < min_cp || cp > kMaxScalar || is_surrogate(cp)) return false;
  out = cp;
  pos += len;
  return true;
}

std::u16string to_utf16(TokenView scalars) {
  std::u16string out;
  out.reserve(scalars.size());
  for (char32_t cp : scalars) {
    if (cp < 0x10000) {
      out.push_back(static_cast<char16_t>(cp));
    } else {
      cp -= 0x10000;
      out.push_back(static_cast<char16_t>(0xD800 + (cp >> 10)));
      out.push_back(static_cast<char16_t>(0xDC00 + (cp & 0x3FF)));
    }
  }
  return out;
}

TokenSeq from_utf16(const std::u16string& units) {
  TokenSeq out;
  out.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    const char16_t u = units[i];
    if (u >= 0xD800 && u <= 0xDBFF && i + 1 < units.size()) {
      const char16_t lo = units[i + 1];
      if (lo >= 0xDC00 && lo <= 0xDFFF) {
        out.push_back(0x10000 + ((static_cast<char32_t>(u) - 0xD800) << 10) + (lo - 0xDC00));
        ++i;
        continue;
      }
    }
    out.push_back(u);
  }
  return out;
}

TokenSeq nfkc(TokenView scalars) {
  UErrorCode ec = U_ZERO_ERROR;
  const UNormalizer2* norm = unorm2_getNFKCInstance(&ec);
  if (U_FAILURE(ec)) throw std::runtime_error("ICU NFKC instance unavailable");

  const std::u16string src = to_utf16(scalars);
  std::u16string dst(src.size() + 16, u'\0');
  for (;;) {
    ec = U_ZERO_ERROR;
    const int32_t len = unorm2_normalize(norm, src.data(), static_cast<int32_t>(src.size()),
                                         dst.data(), static_cast<int32_t>(dst.size()), &ec);
    if (ec == U_BUFFER_OVERFLOW_ERROR) {
      dst.resize(static_cast<std::size_t>(len) + 1);
      continue;
    }
    if (U_FAILURE(ec)) throw std::runtime_error("ICU normalization failed");
    dst.resize(static_cast<std::size_t>(len));
    break;
  }
  return from_utf16(dst);
}

bool is_latin(char32_t cp) {
  UErrorCode ec = U_ZERO_ERROR;
  return uscript_getScript(static_cast<UChar32>(cp), &ec) == USCRIPT_LATIN && U_SUCCESS(ec);
}

TokenSeq normalize_pass(TokenView in, const NormalizationConfig& cfg) {
  TokenSeq work(in);
  if (cfg.apply_compatibility_normalization) work = nfkc(work);
  if (cfg.case_fold_latin) {
    for (auto& cp : work) {
      if (is_latin(cp)) cp = static_cast<char32_t>(u_foldCase(static_cast<UChar32>(cp), U_FOLD_CASE_DEFAULT));
    }
  }
  TokenSeq out;
  out.reserve(work.size());
  for (char32_t cp : work) {
    if (cfg.strip_whitespace && u_isUWhiteSpace(static_cast<UChar32>(cp))) continue;
    if (cfg.strip_punctuation && u_ispunct(static_cast<UChar32>(cp))) continue;
    out.push_back(cp);
  }
  return out;
}

}  // namespace

TokenSeq decode_utf8(std::string_view bytes) {
  TokenSeq out;
  out.reserve(bytes.size());
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    char32_t cp;
    if (!decode_one(bytes, pos, cp)) throw InvalidEncoding(pos);
    out.push_back(cp);
  }
  return out;
}

std::string encode_utf8(TokenView scalars) {
  std::string out;
  out.reserve(scalars.size() * 3);
  for (char32_t cp : scalars) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool is_valid_utf8(std::string_view bytes) {
  std::size_t pos = 0;
  char32_t cp;
  while (pos < bytes.size()) {
    if (!decode_one(bytes, pos, cp)) return false;
  }
  return true;
}

std::string normalize(std::string_view text, const NormalizationConfig& cfg) {
  TokenSeq cur = decode_utf8(text);
  // Iterate to a fixed point; converges immediately for ordinary transcripts.
  for (int round = 0; round < 8; ++round) {
    TokenSeq next = normalize_pass(cur, cfg);
    if (next == cur) break;
    cur = std::move(next);
  }
  return encode_utf8(cur);
}

TokenSeq tokenize(std::string_view text) { return decode_utf8(text); }

}  // namespace cpcer
