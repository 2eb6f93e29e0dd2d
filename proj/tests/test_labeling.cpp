#include <algorithm>
#include <filesystem>

#include "doctest.h"

#include "fixread/labeling.hpp"
#include "fixread/rng.hpp"
#include "fixread/synth.hpp"
#include "fixread/tokenize.hpp"

using namespace fixread;
using namespace fixread::labeling;

namespace {

SentenceRecord award_sentence() {
  SentenceRecord s;
  s.sentence_id = 1;
  s.text = "In 1923, the inaugural Bucher Memorial Prize was awarded by the American "
           "Mathematical Society.";
  s.relation = Relation::Award;
  s.ground_truth = 1;
  return s;
}

SessionBundle labeling_bundle(std::uint64_t seed, int sentences = 10) {
  SynthConfig config;
  config.n_sentences = sentences;
  config.words_per_sentence = 8;
  config.channels = 2;
  config.seed = seed;
  config.emit_frp = false;
  return synth_session(config).bundle;
}

LabelOptions fast_options() {
  LabelOptions options;
  options.backoff_base_s = 0.0;  // tests never sleep
  return options;
}

}  // namespace

TEST_CASE("natural prompt substitutes sentence and relation") {
  const auto sentence = award_sentence();
  const auto prompt = build_natural_prompt(sentence, Relation::Award);
  CHECK(prompt.kind == PromptText::Kind::Natural);
  CHECK(prompt.body.find("For this sentence, ['" + sentence.text + "']") !=
        std::string::npos);
  CHECK(prompt.body.find("does this sentence contain ['AWARD'] relation?") !=
        std::string::npos);
  CHECK(prompt.body.find("high relevance to the keyword ['AWARD']") != std::string::npos);
  CHECK(prompt.body.find("group the words in the sentence into two groups") !=
        std::string::npos);
  CHECK(prompt.body.find("Must follow example output format") != std::string::npos);
  // substitution is pure
  CHECK(build_natural_prompt(sentence, Relation::Award).body == prompt.body);
}

TEST_CASE("natural prompt rejects a mismatched relation") {
  CHECK_THROWS_AS(build_natural_prompt(award_sentence(), Relation::Wife), fixread::error);
}

TEST_CASE("forced prompt carries the ground-truth label") {
  CHECK(build_forced_prompt(1).body.find("the correct answer is [1]") != std::string::npos);
  CHECK(build_forced_prompt(0).body.find("the correct answer is [0]") != std::string::npos);
  CHECK(build_forced_prompt(1).kind == PromptText::Kind::Forced);
  CHECK_THROWS_AS(build_forced_prompt(2), fixread::error);
}

TEST_CASE("parse_grouping handles the documented sample reply") {
  const auto sentence = award_sentence();
  const auto tokens = tokenize(sentence.text, sentence.sentence_id);
  const std::string raw =
      "[1] First group (high-relevance words to 'AWARD'): awarded, Bucher Memorial "
      "Prize, American Mathematical Society. The second group (low-relevance words to "
      "'AWARD'): In, 1923, the, inaugural, by.";
  const auto response = parse_grouping(raw, tokens, Relation::Award);

  REQUIRE(response.answer.has_value());
  CHECK(*response.answer == 1);
  CHECK(response.unmatched.empty());

  std::set<int> expected;
  for (const auto& t : tokens) {
    for (const char* w :
         {"awarded", "bucher", "memorial", "prize", "american", "mathematical",
          "society"}) {
      if (t.normalized == w) expected.insert(t.token_index);
    }
  }
  CHECK(response.hrw_indices == expected);
  for (int idx : response.hrw_indices) CHECK(!response.lrw_indices.count(idx));
}

TEST_CASE("parse errors carry distinct kinds") {
  const auto tokens = tokenize(award_sentence().text);

  CHECK_THROWS_WITH_AS(
      parse_grouping("First group (x): prize. The second group (y): the.", tokens,
                     Relation::Award),
      "reply lacks a leading [0]/[1] answer", parse_error);

  try {
    parse_grouping("[1] nothing here", tokens, Relation::Award);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.kind() == parse_fail::missing_group_header);
  }

  try {
    parse_grouping(
        "[1] First group (high): Nobel. The second group (low): the, inaugural.",
        tokens, Relation::Award);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.kind() == parse_fail::no_hrw_match);
  }
}

TEST_CASE("unmatched phrases are recorded and dropped") {
  const auto tokens = tokenize(award_sentence().text);
  const std::string raw =
      "[1] First group (high): awarded, Nobel. The second group (low): the.";
  const auto response = parse_grouping(raw, tokens, Relation::Award);
  REQUIRE(response.unmatched.size() == 1);
  CHECK(response.unmatched[0] == "Nobel.");  // recorded verbatim from the reply
  CHECK(response.hrw_indices.size() == 1);
}

TEST_CASE("truthful mock output always parses with zero unmatched phrases") {
  const auto bundle = labeling_bundle(77);
  for (const auto& sentence : bundle.sentences) {
    std::vector<WordToken> tokens;
    std::vector<std::string> normalized;
    for (const auto* t : bundle.sentence_tokens(sentence.sentence_id)) {
      tokens.push_back(*t);
      normalized.push_back(t->normalized);
    }
    const auto raw = mock_response(sentence, normalized, 77, MockBehavior::truthful());
    const auto response = parse_grouping(raw, tokens, sentence.relation);
    CHECK(*response.answer == sentence.ground_truth);
    CHECK(response.unmatched.empty());
  }
}

TEST_CASE("label_corpus with a truthful mock: all sentences, no mistakes") {
  const auto bundle = labeling_bundle(12, 10);
  MockProvider provider(bundle, 12, MockBehavior::truthful());
  const auto result = label_corpus(provider, bundle, fast_options());
  CHECK(result.groupings.size() + result.failed.size() == 10);
  CHECK(result.groupings.size() == 10);
  CHECK(result.mistakes.empty());
  for (const auto& g : result.groupings) {
    CHECK(!g.forced);
    CHECK(!g.mistake);
    // every token ends up in exactly one group
    const auto tokens = bundle.sentence_tokens(g.sentence_id);
    CHECK(g.hrw.size() + g.lrw.size() == tokens.size());
  }
  CHECK(result.condition_accuracy_mean == doctest::Approx(1.0));
}

TEST_CASE("truthful mock with matching seed reproduces the ground truth") {
  SynthConfig config;
  config.n_sentences = 8;
  config.words_per_sentence = 8;
  config.channels = 2;
  config.seed = 21;
  config.emit_frp = false;
  const auto synth = synth_session(config);

  MockBehavior behavior = MockBehavior::truthful();
  behavior.hrw_fraction = config.hrw_fraction;
  MockProvider provider(synth.bundle, config.seed, behavior);
  const auto result = label_corpus(provider, synth.bundle, fast_options());
  REQUIRE(result.groupings.size() == synth.ground_truth.size());
  for (std::size_t i = 0; i < result.groupings.size(); ++i) {
    CHECK(result.groupings[i].hrw == synth.ground_truth[i].hrw);
    CHECK(result.groupings[i].lrw == synth.ground_truth[i].lrw);
  }
}

TEST_CASE("adversarial mock triggers the forced branch exactly once") {
  const auto bundle = labeling_bundle(5, 10);
  const SentenceId k = bundle.sentences[3].sentence_id;
  MockProvider provider(bundle, 5, MockBehavior::adversarial(k));
  const auto result = label_corpus(provider, bundle, fast_options());
  REQUIRE(result.mistakes.size() == 1);
  CHECK(result.mistakes[0].sentence_id == k);
  CHECK(result.mistakes[0].phase == "natural");
  int forced = 0;
  for (const auto& g : result.groupings) {
    if (g.forced) {
      ++forced;
      CHECK(g.sentence_id == k);
      CHECK(g.mistake);
    }
  }
  CHECK(forced == 1);
  CHECK(result.groupings.size() == 10);
}

TEST_CASE("noisy mock: retry count over 100 sentences stays in the binomial range") {
  const auto bundle = labeling_bundle(900, 100);
  MockProvider provider(bundle, 900, MockBehavior::noisy(0.2));
  LabelOptions options = fast_options();
  options.max_retries = 8;
  const auto result = label_corpus(provider, bundle, options);
  CHECK(result.failed.empty());
  // first-attempt failures are Binomial(100, 0.2); retried retries add the
  // geometric tail, so the documented 20 +/- 8 window is checked as-is
  CHECK(result.retries_used >= 12);
  CHECK(result.retries_used <= 28);
}

TEST_CASE("exhausted provider marks sentences failed, never defaulted") {
  const auto bundle = labeling_bundle(33, 6);
  MockProvider provider(bundle, 33, MockBehavior::noisy(1.0));
  LabelOptions options = fast_options();
  options.max_retries = 2;
  const auto result = label_corpus(provider, bundle, options);
  CHECK(result.groupings.empty());
  CHECK(result.failed.size() == 6);
}

TEST_CASE("joint_select intersects HRW and fills LRW with the rest") {
  WordGrouping a, b;
  a.sentence_id = b.sentence_id = 4;
  a.relation = b.relation = Relation::Education;
  a.hrw = {2, 3, 5};
  b.hrw = {3, 5, 7};
  for (int i = 0; i < 10; ++i) {
    if (!a.hrw.count(i)) a.lrw.insert(i);
    if (!b.hrw.count(i)) b.lrw.insert(i);
  }
  const auto joint = joint_select(a, b);
  CHECK(joint.hrw == std::set<int>{3, 5});
  CHECK(joint.lrw.size() == 8);
  for (int i = 0; i < 10; ++i) {
    CHECK((joint.hrw.count(i) + joint.lrw.count(i)) == 1);
  }
  CHECK(joint.source == GroupingSource::Joint);

  // commutativity and idempotence
  const auto swapped = joint_select(b, a);
  CHECK(swapped.hrw == joint.hrw);
  CHECK(swapped.lrw == joint.lrw);
  const auto self = joint_select(a, a);
  CHECK(self.hrw == a.hrw);

  // disjoint HRW sets degenerate
  WordGrouping c = b;
  c.hrw = {0, 1};
  c.lrw.clear();
  for (int i = 2; i < 10; ++i) c.lrw.insert(i);
  const auto degenerate = joint_select(a, c);
  CHECK(degenerate.hrw.empty());
  CHECK(degenerate.degenerate());

  WordGrouping other = b;
  other.sentence_id = 99;
  CHECK_THROWS_AS(joint_select(a, other), fixread::error);
}

TEST_CASE("joint_select properties over random grouping pairs") {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(10));
    WordGrouping a, b;
    a.sentence_id = b.sentence_id = trial;
    a.relation = b.relation = Relation::Founder;
    for (int i = 0; i < n; ++i) {
      (rng.bernoulli(0.4) ? a.hrw : a.lrw).insert(i);
      (rng.bernoulli(0.4) ? b.hrw : b.lrw).insert(i);
    }
    const auto ab = joint_select(a, b);
    const auto ba = joint_select(b, a);
    CHECK(ab.hrw == ba.hrw);
    CHECK(ab.lrw == ba.lrw);
    CHECK(ab.hrw.size() <= std::min(a.hrw.size(), b.hrw.size()));
    CHECK(ab.hrw.size() + ab.lrw.size() == static_cast<std::size_t>(n));
    const auto aa = joint_select(a, a);
    CHECK(aa.hrw == a.hrw);
  }
}

TEST_CASE("groupings round-trip through jsonl") {
  const auto bundle = labeling_bundle(66, 5);
  MockProvider provider(bundle, 66, MockBehavior::truthful());
  const auto result = label_corpus(provider, bundle, fast_options());
  const auto path = std::filesystem::temp_directory_path() / "fixread_groupings_test.jsonl";
  save_groupings(result.groupings, path.string());
  const auto loaded = load_groupings(path.string());
  REQUIRE(loaded.size() == result.groupings.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].sentence_id == result.groupings[i].sentence_id);
    CHECK(loaded[i].hrw == result.groupings[i].hrw);
    CHECK(loaded[i].lrw == result.groupings[i].lrw);
    CHECK(loaded[i].source == result.groupings[i].source);
  }
  std::filesystem::remove(path);
}

TEST_CASE("five-run averaging reports condition accuracy") {
  const auto bundle = labeling_bundle(14, 8);
  MockProvider provider(bundle, 14, MockBehavior::truthful());
  LabelOptions options = fast_options();
  options.repeats = 5;
  const auto result = label_corpus(provider, bundle, options);
  CHECK(result.repeats == 5);
  CHECK(result.condition_accuracy_mean == doctest::Approx(1.0));
  CHECK(result.condition_accuracy_sd == doctest::Approx(0.0));
  CHECK(result.groupings.size() == 8);  // groupings come from run 1 only
}
