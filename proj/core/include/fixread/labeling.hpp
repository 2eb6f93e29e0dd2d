#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fixread/grouping.hpp"
#include "fixread/provider.hpp"
#include "fixread/types.hpp"

namespace fixread::labeling {

struct PromptText {
  enum class Kind { Natural, Forced };

  std::string body;
  Kind kind = Kind::Natural;
};

// The querying prompt, verbatim, with the sentence and relation
// substituted in. `relation` must match the sentence's task relation.
PromptText build_natural_prompt(const SentenceRecord& sentence, Relation relation);

// The corrective follow-up carrying the ground-truth label (0 or 1).
PromptText build_forced_prompt(int ground_truth);

struct ModelResponse {
  std::string raw_text;
  std::optional<int> answer;
  std::vector<std::string> hrw_phrases;  // order preserved from the reply
  std::vector<std::string> lrw_phrases;
  std::set<int> hrw_indices;
  std::set<int> lrw_indices;
  std::vector<std::string> unmatched;  // phrases matching no corpus token
};

// Parses the mandated reply format: leading [0]/[1] answer, then the two
// group sections. Phrases are comma-separated and matched to corpus
// tokens case-insensitively on normalized forms; a multiword phrase
// claims each constituent token, leftmost untaken match first. Tokens
// claimed as HRW cannot be reclaimed as LRW. Missing answer marker,
// missing group header and zero matched HRW tokens raise parse_error with
// distinct kinds.
ModelResponse parse_grouping(const std::string& raw, const std::vector<WordToken>& tokens,
                             Relation relation);

struct MistakeRecord {
  SentenceId sentence_id = 0;
  std::string model;
  std::string phase;  // prompt phase where the wrong answer occurred
};

struct LabelOptions {
  std::vector<Relation> relations;  // empty = all
  GroupingSource source = GroupingSource::ModelA;
  int repeats = 1;      // extra natural-prompt runs for condition accuracy
  int max_retries = 3;  // per prompt, on transport or parse failure
  double backoff_base_s = 1.0;
};

struct LabelRunResult {
  std::vector<WordGrouping> groupings;
  std::vector<MistakeRecord> mistakes;
  std::vector<SentenceId> failed;  // provider exhausted; excluded downstream
  int retries_used = 0;            // failed attempts that were retried
  double condition_accuracy_mean = 0.0;
  double condition_accuracy_sd = 0.0;
  int repeats = 1;
};

// One pass of the word-grouping protocol over the corpus: query each
// sentence with the natural prompt; when the condition answer disagrees
// with ground truth, log a mistake and re-query with the forced follow-up
// (the follow-up is appended to the natural prompt so the transport stays
// a single stateless call). Groupings from corrected replies are marked
// forced. Tokens mentioned in neither group default to LRW. Sentences
// that exhaust retries are excluded and reported, never defaulted.
LabelRunResult label_corpus(Provider& provider, const SessionBundle& bundle,
                            const LabelOptions& options = {});

// hrw = a.hrw intersect b.hrw; every other token of the sentence goes to
// lrw. Empty intersections yield a degenerate grouping.
WordGrouping joint_select(const WordGrouping& a, const WordGrouping& b);

void save_mistakes(const std::vector<MistakeRecord>& mistakes, const std::string& path);
std::vector<MistakeRecord> load_mistakes(const std::string& path);

}  // namespace fixread::labeling
