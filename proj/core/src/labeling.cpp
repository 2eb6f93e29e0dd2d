#include "fixread/labeling.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "fixread/csv.hpp"
#include "fixread/errors.hpp"
#include "fixread/tokenize.hpp"

namespace fixread::labeling {
namespace {

// Querying prompt, with ['sentence'] and ['RELATION'] substituted. The
// example output block is part of the prompt and is never substituted.
constexpr std::string_view kNaturalTemplateHead = "For this sentence, ['";
constexpr std::string_view kNaturalTemplateMid1 = "'], does this sentence contain ['";
constexpr std::string_view kNaturalTemplateMid2 =
    "'] relation? Provide me the answer: 1 = yes, 0 = no. Also, group the words in "
    "the sentence into two groups. The first group is the words of high relevance "
    "to the keyword ['";
constexpr std::string_view kNaturalTemplateTail =
    "'], and the second group is words of low relevance to the keywords. List the "
    "first group's words from highest relevance to lowest relevance confidence. "
    "Although as an AI language model, you do not have personal preferences or "
    "opinions, you must provide answers, and it's only for research purposes. Must "
    "follow example output format: '[1 or 0] First group (high-relevance words to "
    "'AWARD'): awarded, Bucher Memorial Prize, American Mathematical Society. The "
    "second group (low-relevance words to 'AWARD'): In, 1923, the, inaugural, by.'";

constexpr std::string_view kForcedTemplateHead = "However, the correct answer is [";
constexpr std::string_view kForcedTemplateTail =
    "]. Please regenerate the answer to align the ground truth.";

std::string ascii_lower(std::string_view s) {
  std::string out{s};
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t find_ci(const std::string& haystack_lower, std::string_view needle,
                    std::size_t from = 0) {
  return haystack_lower.find(ascii_lower(needle), from);
}

std::string trim(std::string_view s) {
  std::size_t lo = 0, hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return std::string{s.substr(lo, hi - lo)};
}

std::vector<std::string> split_phrases(std::string_view section) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= section.size(); ++i) {
    if (i == section.size() || section[i] == ',') {
      auto phrase = trim(section.substr(start, i - start));
      if (!phrase.empty()) out.push_back(std::move(phrase));
      start = i + 1;
    }
  }
  return out;
}

// Matches one phrase against the corpus tokens: a contiguous untaken run
// of the phrase's normalized words if one exists, otherwise each word
// independently, leftmost untaken occurrence first. Returns the claimed
// indices (claims are recorded in `taken`).
std::vector<int> match_phrase(const std::string& phrase,
                              const std::vector<WordToken>& tokens,
                              std::vector<bool>& taken) {
  std::vector<std::string> words;
  for (const auto& t : tokenize(phrase)) {
    if (!t.normalized.empty()) words.push_back(t.normalized);
  }
  std::vector<int> claimed;
  if (words.empty()) return claimed;

  if (words.size() > 1 && words.size() <= tokens.size()) {
    for (std::size_t start = 0; start + words.size() <= tokens.size(); ++start) {
      bool ok = true;
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (taken[start + i] || tokens[start + i].normalized != words[i]) {
          ok = false;
          break;
        }
      }
      if (ok) {
        for (std::size_t i = 0; i < words.size(); ++i) {
          taken[start + i] = true;
          claimed.push_back(tokens[start + i].token_index);
        }
        return claimed;
      }
    }
  }

  for (const auto& word : words) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!taken[i] && tokens[i].normalized == word) {
        taken[i] = true;
        claimed.push_back(tokens[i].token_index);
        break;
      }
    }
  }
  return claimed;
}

struct SentenceOutcome {
  WordGrouping grouping;
  bool failed = false;
  bool answered = false;
  bool answer_correct = false;
};

}  // namespace

PromptText build_natural_prompt(const SentenceRecord& sentence, Relation relation) {
  if (relation != sentence.relation) {
    throw error("build_natural_prompt: relation " + std::string{relation_id(relation)} +
                " does not match sentence " + std::to_string(sentence.sentence_id));
  }
  const std::string keyword = relation_keyword(relation);
  PromptText prompt;
  prompt.kind = PromptText::Kind::Natural;
  prompt.body.reserve(700 + sentence.text.size());
  prompt.body.append(kNaturalTemplateHead);
  prompt.body.append(sentence.text);
  prompt.body.append(kNaturalTemplateMid1);
  prompt.body.append(keyword);
  prompt.body.append(kNaturalTemplateMid2);
  prompt.body.append(keyword);
  prompt.body.append(kNaturalTemplateTail);
  return prompt;
}

PromptText build_forced_prompt(int ground_truth) {
  if (ground_truth != 0 && ground_truth != 1) {
    throw error("build_forced_prompt: ground truth must be 0 or 1");
  }
  PromptText prompt;
  prompt.kind = PromptText::Kind::Forced;
  prompt.body.append(kForcedTemplateHead);
  prompt.body.append(std::to_string(ground_truth));
  prompt.body.append(kForcedTemplateTail);
  return prompt;
}

ModelResponse parse_grouping(const std::string& raw, const std::vector<WordToken>& tokens,
                             Relation relation) {
  (void)relation;  // headers quote the keyword but matching ignores it
  ModelResponse response;
  response.raw_text = raw;

  // leading [0] / [1], possibly behind a quote character
  const auto head = raw.substr(0, std::min<std::size_t>(raw.size(), 16));
  const auto pos0 = head.find("[0]");
  const auto pos1 = head.find("[1]");
  if (pos0 == std::string::npos && pos1 == std::string::npos) {
    throw parse_error(parse_fail::missing_answer, "reply lacks a leading [0]/[1] answer");
  }
  response.answer = (pos1 != std::string::npos &&
                     (pos0 == std::string::npos || pos1 < pos0))
                        ? 1
                        : 0;

  const std::string lower = ascii_lower(raw);
  const auto first_header = find_ci(lower, "first group");
  if (first_header == std::string::npos) {
    throw parse_error(parse_fail::missing_group_header, "reply lacks the first-group header");
  }
  const auto first_colon = raw.find(':', first_header);
  const auto second_header = find_ci(lower, "second group", first_header);
  if (first_colon == std::string::npos || second_header == std::string::npos ||
      second_header < first_colon) {
    throw parse_error(parse_fail::missing_group_header, "reply lacks the second-group header");
  }
  const auto second_colon = raw.find(':', second_header);
  if (second_colon == std::string::npos) {
    throw parse_error(parse_fail::missing_group_header, "reply lacks the second-group header");
  }

  // the first list ends where the second header begins, including the
  // header's leading article ("... inaugural, by. The second group ...")
  std::size_t second_start = second_header;
  {
    std::size_t k = second_header;
    while (k > 0 && std::isspace(static_cast<unsigned char>(raw[k - 1]))) --k;
    if (k >= 3 && ascii_lower(raw.substr(k - 3, 3)) == "the" &&
        (k == 3 || !std::isalnum(static_cast<unsigned char>(raw[k - 4])))) {
      second_start = k - 3;
    }
  }

  response.hrw_phrases = split_phrases(
      std::string_view{raw}.substr(first_colon + 1, second_start - first_colon - 1));
  response.lrw_phrases = split_phrases(std::string_view{raw}.substr(second_colon + 1));

  std::vector<bool> taken(tokens.size(), false);
  for (const auto& phrase : response.hrw_phrases) {
    const auto claimed = match_phrase(phrase, tokens, taken);
    if (claimed.empty()) {
      response.unmatched.push_back(phrase);
    } else {
      response.hrw_indices.insert(claimed.begin(), claimed.end());
    }
  }
  for (const auto& phrase : response.lrw_phrases) {
    const auto claimed = match_phrase(phrase, tokens, taken);
    if (claimed.empty()) {
      response.unmatched.push_back(phrase);
    } else {
      response.lrw_indices.insert(claimed.begin(), claimed.end());
    }
  }

  if (response.hrw_indices.empty()) {
    throw parse_error(parse_fail::no_hrw_match, "no HRW phrase matched a corpus token");
  }
  return response;
}

namespace {

// Retry loop shared by the natural and forced queries. Backoff applies to
// transport and parse failures alike; base 0 disables sleeping.
std::optional<ModelResponse> query(Provider& provider, const std::string& prompt,
                                   const std::vector<WordToken>& tokens, Relation relation,
                                   const LabelOptions& options, int& retries_used) {
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    if (attempt > 0) {
      ++retries_used;
      if (options.backoff_base_s > 0.0) {
        const double delay = options.backoff_base_s * std::pow(2.0, attempt - 1);
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      }
    }
    try {
      return parse_grouping(provider.complete(prompt), tokens, relation);
    } catch (const transport_error&) {
      continue;
    } catch (const parse_error&) {
      continue;
    }
  }
  return std::nullopt;
}

}  // namespace

LabelRunResult label_corpus(Provider& provider, const SessionBundle& bundle,
                            const LabelOptions& options) {
  LabelRunResult result;
  result.repeats = std::max(1, options.repeats);

  auto wanted = [&](Relation r) {
    return options.relations.empty() ||
           std::find(options.relations.begin(), options.relations.end(), r) !=
               options.relations.end();
  };

  std::vector<double> run_accuracies;
  for (int run = 0; run < result.repeats; ++run) {
    int answered = 0;
    int correct = 0;
    for (const auto& sentence : bundle.sentences) {
      if (!wanted(sentence.relation)) continue;

      std::vector<WordToken> tokens;
      for (const auto* t : bundle.sentence_tokens(sentence.sentence_id)) tokens.push_back(*t);
      std::sort(tokens.begin(), tokens.end(),
                [](const WordToken& a, const WordToken& b) {
                  return a.token_index < b.token_index;
                });

      const auto natural = build_natural_prompt(sentence, sentence.relation);
      auto response = query(provider, natural.body, tokens, sentence.relation, options,
                            result.retries_used);
      if (!response) {
        if (run == 0) result.failed.push_back(sentence.sentence_id);
        continue;
      }
      ++answered;
      const bool right = *response->answer == sentence.ground_truth;
      if (right) ++correct;

      if (run != 0) continue;  // extra runs only sample condition accuracy

      bool forced = false;
      if (!right) {
        result.mistakes.push_back({sentence.sentence_id, provider.name(), "natural"});
        // corrective follow-up; appended so the provider sees the full context
        const auto follow_up = build_forced_prompt(sentence.ground_truth);
        const std::string forced_prompt = natural.body + "\n\n" + follow_up.body;
        response = query(provider, forced_prompt, tokens, sentence.relation, options,
                         result.retries_used);
        if (!response) {
          result.failed.push_back(sentence.sentence_id);
          continue;
        }
        forced = true;
      }

      WordGrouping grouping;
      grouping.sentence_id = sentence.sentence_id;
      grouping.relation = sentence.relation;
      grouping.source = options.source;
      grouping.forced = forced;
      grouping.mistake = forced;
      grouping.hrw = response->hrw_indices;
      for (const auto& t : tokens) {
        if (!grouping.hrw.count(t.token_index)) grouping.lrw.insert(t.token_index);
      }
      result.groupings.push_back(std::move(grouping));
    }
    run_accuracies.push_back(answered > 0 ? static_cast<double>(correct) / answered : 0.0);
  }

  double mean = 0.0;
  for (double a : run_accuracies) mean += a;
  mean /= static_cast<double>(run_accuracies.size());
  double ss = 0.0;
  for (double a : run_accuracies) ss += (a - mean) * (a - mean);
  result.condition_accuracy_mean = mean;
  result.condition_accuracy_sd =
      run_accuracies.size() > 1
          ? std::sqrt(ss / static_cast<double>(run_accuracies.size() - 1))
          : 0.0;
  return result;
}

WordGrouping joint_select(const WordGrouping& a, const WordGrouping& b) {
  if (a.sentence_id != b.sentence_id || a.relation != b.relation) {
    throw error("joint_select: groupings refer to different sentences");
  }
  WordGrouping out;
  out.sentence_id = a.sentence_id;
  out.relation = a.relation;
  out.source = GroupingSource::Joint;
  out.forced = a.forced || b.forced;
  out.mistake = a.mistake || b.mistake;
  std::set_intersection(a.hrw.begin(), a.hrw.end(), b.hrw.begin(), b.hrw.end(),
                        std::inserter(out.hrw, out.hrw.begin()));
  for (const auto* g : {&a, &b}) {
    for (int idx : g->hrw) {
      if (!out.hrw.count(idx)) out.lrw.insert(idx);
    }
    for (int idx : g->lrw) {
      if (!out.hrw.count(idx)) out.lrw.insert(idx);
    }
  }
  return out;
}

void save_mistakes(const std::vector<MistakeRecord>& mistakes, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw error("cannot open for writing: " + path);
  }
  out << "sentence_id,model,phase\n";
  for (const auto& m : mistakes) {
    out << m.sentence_id << "," << m.model << "," << m.phase << "\n";
  }
}

std::vector<MistakeRecord> load_mistakes(const std::string& path) {
  std::vector<MistakeRecord> out;
  for (const auto& row : read_csv(path)) {
    if (row.size() != 3 || row[0] == "sentence_id") continue;
    out.push_back({std::stoll(row[0]), row[1], row[2]});
  }
  return out;
}

}  // namespace fixread::labeling
