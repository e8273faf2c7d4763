#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cpcer/errors.hpp"

namespace cpcer {

// One token per Unicode scalar value. Character error rates over Mandarin
// text are defined on this unit, not on grapheme clusters or words.
using TokenSeq = std::u32string;
using TokenView = std::u32string_view;

struct NormalizationConfig {
  bool apply_compatibility_normalization = true;  // NFKC; folds full-width Latin/digits
  bool strip_whitespace = true;
  bool strip_punctuation = false;
  bool case_fold_latin = false;

  bool operator==(const NormalizationConfig&) const = default;
};

// Strict UTF-8 decoding: rejects overlong forms, surrogates, values past
// U+10FFFF and truncated sequences. Throws InvalidEncoding with the byte
// offset of the first bad sequence.
TokenSeq decode_utf8(std::string_view bytes);
std::string encode_utf8(TokenView scalars);
bool is_valid_utf8(std::string_view bytes);

// Canonicalizes transcript text: compatibility normalization, optional Latin
// case folding, whitespace removal, punctuation removal, applied in that
// order. The pass is repeated until the string is stable; stripping can
// expose new composition pairs and NFKC itself may emit whitespace
// (U+00A8 normalizes to space + combining diaeresis), so one pass is not
// always idempotent.
std::string normalize(std::string_view text, const NormalizationConfig& cfg = {});

// Splits normalized text into one token per Unicode scalar value.
TokenSeq tokenize(std::string_view text);

}  // namespace cpcer
