#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fixread/types.hpp"

namespace fixread {

// Lowercase with punctuation stripped from both edges. Internal hyphens
// and apostrophes survive ("state-of-the-art", "O'Brien"). Idempotent.
std::string normalize_word(std::string_view surface);

// Whitespace split; token_index is the position in the sentence.
// Empty text is an error.
std::vector<WordToken> tokenize(std::string_view text, SentenceId sentence_id = 0);

}  // namespace fixread
