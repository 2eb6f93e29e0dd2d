#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fixread/relation.hpp"

namespace fixread {

using SentenceId = std::int64_t;
using EpochId = std::int64_t;

struct SentenceRecord {
  SentenceId sentence_id = 0;
  std::string text;
  Relation relation = Relation::Award;
  int ground_truth = 0;  // 1 = the relation is present in the sentence
};

struct WordToken {
  SentenceId sentence_id = 0;
  int token_index = 0;  // 0-based, contiguous within a sentence
  std::string surface;
  std::string normalized;  // lowercase, edge punctuation stripped
};

// Per-word reading measures, all in milliseconds. A word with zero
// fixations carries no durations.
struct FixationRecord {
  SentenceId sentence_id = 0;
  int token_index = 0;
  int fixation_count = 0;
  std::optional<double> gd_ms;      // gaze duration
  std::optional<double> trt_ms;     // total reading time
  std::optional<double> ffd_ms;     // first fixation duration
  std::optional<double> sfd_ms;     // single fixation duration
  std::optional<double> gopast_ms;  // go-past time
};

// One fixation-locked EEG segment, row-major channels x samples,
// microvolts, stored in 32-bit floats.
struct EegEpoch {
  EpochId epoch_id = 0;
  SentenceId sentence_id = 0;
  int token_index = 0;
  int channels = 0;
  int samples = 0;
  double rate_hz = 500.0;
  std::vector<float> data;

  std::span<const float> channel(int c) const {
    return {data.data() + static_cast<std::size_t>(c) * samples,
            static_cast<std::size_t>(samples)};
  }
  float at(int c, int t) const {
    return data[static_cast<std::size_t>(c) * samples + t];
  }
};

// Wider window around the same fixation: 100 ms before onset to 400 ms
// after, at 500 Hz. epoch_id matches the word epoch it extends.
struct FrpEpoch {
  static constexpr int kSamples = 250;
  static constexpr int kOnsetIndex = 50;

  EpochId epoch_id = 0;
  SentenceId sentence_id = 0;
  int token_index = 0;
  int channels = 0;
  std::vector<float> data;  // channels x 250, row-major

  std::span<const float> channel(int c) const {
    return {data.data() + static_cast<std::size_t>(c) * kSamples,
            static_cast<std::size_t>(kSamples)};
  }
};

// Everything recorded for one subject, keyed consistently: epochs and
// fixations resolve to tokens, tokens to sentences.
struct SessionBundle {
  std::string subject_id;
  int channels = 0;
  double rate_hz = 500.0;
  std::vector<SentenceRecord> sentences;
  std::vector<WordToken> tokens;
  std::vector<FixationRecord> fixations;
  std::vector<EegEpoch> epochs;
  std::vector<FrpEpoch> frp_epochs;  // optional, may be empty

  const SentenceRecord* find_sentence(SentenceId id) const {
    for (const auto& s : sentences) {
      if (s.sentence_id == id) return &s;
    }
    return nullptr;
  }
  std::vector<const WordToken*> sentence_tokens(SentenceId id) const {
    std::vector<const WordToken*> out;
    for (const auto& t : tokens) {
      if (t.sentence_id == id) out.push_back(&t);
    }
    return out;
  }
};

// EEG band order used throughout: delta, theta, alpha, beta, gamma.
inline constexpr int kBandCount = 5;

// Knobs for the synthetic session generator. class_effect multiplies the
// power of each band's component in high-relevance epochs, so a value of
// 4.0 on gamma means HRW gamma band power is 4x LRW's.
struct SynthConfig {
  int n_sentences = 40;
  int words_per_sentence = 9;
  int channels = 105;
  double rate_hz = 500.0;
  std::uint64_t seed = 1;
  std::array<double, kBandCount> class_effect = {1.0, 1.0, 1.0, 1.0, 1.0};
  double hrw_fraction = 0.25;
  double hrw_fixation_mean = 1.5;
  double lrw_fixation_mean = 0.66;
  int min_epoch_samples = 60;   // 120 ms at 500 Hz
  int max_epoch_samples = 90;   // 180 ms
  bool emit_frp = true;
  std::string subject_id = "S01";

  void validate() const;
};

}  // namespace fixread
