#include "doctest.h"

#include "fixread/errors.hpp"
#include "fixread/tokenize.hpp"

using fixread::normalize_word;
using fixread::tokenize;

TEST_CASE("tokenize splits on whitespace and normalizes edges") {
  const auto tokens = tokenize("In 1923, the inaugural prize.", 7);
  REQUIRE(tokens.size() == 5);
  CHECK(tokens[0].surface == "In");
  CHECK(tokens[1].surface == "1923,");
  CHECK(tokens[4].surface == "prize.");
  CHECK(tokens[0].normalized == "in");
  CHECK(tokens[1].normalized == "1923");
  CHECK(tokens[2].normalized == "the");
  CHECK(tokens[3].normalized == "inaugural");
  CHECK(tokens[4].normalized == "prize");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    CHECK(tokens[i].sentence_id == 7);
    CHECK(tokens[i].token_index == static_cast<int>(i));
  }
}

TEST_CASE("multiword name tokenizes to one token per word") {
  CHECK(tokenize("Bucher Memorial Prize").size() == 3);
}

TEST_CASE("empty text is an error") {
  CHECK_THROWS_AS(tokenize(""), fixread::error);
}

TEST_CASE("normalization keeps internal hyphens and apostrophes") {
  CHECK(normalize_word("state-of-the-art") == "state-of-the-art");
  CHECK(normalize_word("O'Brien,") == "o'brien");
  CHECK(normalize_word("'quoted'") == "quoted");
  CHECK(normalize_word("(1923)") == "1923");
  CHECK(normalize_word("--") == "");
}

TEST_CASE("normalization strips common unicode punctuation") {
  CHECK(normalize_word("“word”") == "word");   // curly double quotes
  CHECK(normalize_word("word…") == "word");          // ellipsis
  CHECK(normalize_word("—dash—") == "dash");    // em dash
}

TEST_CASE("normalization is idempotent") {
  const char* samples[] = {"In",     "1923,",  "prize.",  "O'Brien,", "--",
                           "(a-b)",  "“x”", "don't.", "A.B.",     "hello"};
  for (const char* s : samples) {
    const auto once = normalize_word(s);
    CHECK(normalize_word(once) == once);
  }
}
