#include "fixread/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fixread/bands.hpp"
#include "fixread/bundle.hpp"
#include "fixread/errors.hpp"
#include "fixread/parallel.hpp"
#include "fixread/rng.hpp"
#include "fixread/tokenize.hpp"

namespace fixread {
namespace {

// Distinct lowercase vocabulary; sentences sample without replacement so a
// normalized word identifies a unique token, which is what lets the
// truthful mock reproduce the generator's assignment exactly.
constexpr const char* kVocabulary[] = {
    "the",       "a",          "of",        "in",         "and",
    "was",       "by",         "for",       "with",       "his",
    "her",       "to",         "at",        "from",       "award",
    "prize",     "university", "graduated", "founded",    "company",
    "president", "minister",   "party",     "citizen",    "nation",
    "married",   "wife",       "mathematician", "physicist", "novelist",
    "actor",     "director",   "society",   "academy",    "medal",
    "honor",     "degree",     "college",   "institute",  "chairman",
    "professor", "elected",    "republic",  "democratic", "national",
    "american",  "british",    "french",    "german",     "received",
    "studied",   "worked",     "served",    "leader",     "author",
    "born",      "career",     "history",   "science",    "literature",
    "music",     "film",       "engineer",  "lawyer",     "editor",
    "journal",   "committee",  "council",   "union",      "league",
    "festival",  "theatre",    "museum",    "library",    "foundation",
    "laboratory", "research",  "gold",      "winner",     "ceremony",
};
constexpr std::size_t kVocabularySize = std::size(kVocabulary);

constexpr int kTonesPerBand = 4;

struct EpochPlan {
  EpochId epoch_id;
  SentenceId sentence_id;
  int token_index;
  bool hrw;
};

// Band-limited Gaussian noise: per band, kTonesPerBand random in-band
// frequencies shared across channels, with independent N(0,1) quadrature
// coefficients per channel. Every band component has unit variance at each
// sample; the hrw scale multiplies amplitudes by sqrt(class_effect[b]).
void fill_epoch(Rng& rng, int channels, int samples, double rate_hz,
                const std::array<double, kBandCount>& class_effect, bool hrw,
                std::vector<float>& out) {
  const double two_pi = 2.0 * std::numbers::pi;
  std::array<std::array<double, kTonesPerBand>, kBandCount> freqs;
  for (int b = 0; b < kBandCount; ++b) {
    const double width = kBands[b].high_hz - kBands[b].low_hz;
    // keep tones off the band edges; spectral leakage at short epoch
    // lengths would otherwise bleed into the neighbouring band
    const double lo = kBands[b].low_hz + 0.1 * width;
    const double hi = kBands[b].high_hz - 0.1 * width;
    for (int k = 0; k < kTonesPerBand; ++k) {
      freqs[b][k] = rng.uniform(lo, hi);
    }
  }

  // trig tables per (band, tone, t)
  std::vector<double> cos_t(kBandCount * kTonesPerBand * samples);
  std::vector<double> sin_t(kBandCount * kTonesPerBand * samples);
  for (int b = 0; b < kBandCount; ++b) {
    for (int k = 0; k < kTonesPerBand; ++k) {
      const double w = two_pi * freqs[b][k] / rate_hz;
      const std::size_t base = (static_cast<std::size_t>(b) * kTonesPerBand + k) * samples;
      for (int t = 0; t < samples; ++t) {
        cos_t[base + t] = std::cos(w * t);
        sin_t[base + t] = std::sin(w * t);
      }
    }
  }

  std::array<double, kBandCount> scale;
  for (int b = 0; b < kBandCount; ++b) {
    scale[b] = (hrw ? std::sqrt(class_effect[b]) : 1.0) /
               std::sqrt(static_cast<double>(kTonesPerBand));
  }

  out.assign(static_cast<std::size_t>(channels) * samples, 0.0f);
  std::vector<double> row(samples);
  for (int c = 0; c < channels; ++c) {
    std::fill(row.begin(), row.end(), 0.0);
    for (int b = 0; b < kBandCount; ++b) {
      for (int k = 0; k < kTonesPerBand; ++k) {
        const double g_cos = rng.normal() * scale[b];
        const double g_sin = rng.normal() * scale[b];
        const std::size_t base =
            (static_cast<std::size_t>(b) * kTonesPerBand + k) * samples;
        for (int t = 0; t < samples; ++t) {
          row[t] += g_cos * cos_t[base + t] + g_sin * sin_t[base + t];
        }
      }
    }
    for (int t = 0; t < samples; ++t) {
      out[static_cast<std::size_t>(c) * samples + t] = static_cast<float>(row[t]);
    }
  }
}

void add_frp_deflection(std::vector<float>& data, int channels) {
  // small positive deflection ~200 ms after fixation onset, HRW only;
  // gives the FRP plots and significance masks something to show
  constexpr double kAmplitude = 1.0;
  constexpr double kCenter = FrpEpoch::kOnsetIndex + 100.0;  // +200 ms
  constexpr double kSigma = 25.0;                            // 50 ms
  for (int t = 0; t < FrpEpoch::kSamples; ++t) {
    const double d = (t - kCenter) / kSigma;
    const float bump = static_cast<float>(kAmplitude * std::exp(-0.5 * d * d));
    for (int c = 0; c < channels; ++c) {
      data[static_cast<std::size_t>(c) * FrpEpoch::kSamples + t] += bump;
    }
  }
}

double clamp_min(double v, double lo) { return v < lo ? lo : v; }

}  // namespace

void SynthConfig::validate() const {
  if (n_sentences <= 0 || words_per_sentence <= 0 || channels <= 0) {
    throw config_error("synth: counts must be positive");
  }
  if (!(hrw_fraction > 0.0 && hrw_fraction < 1.0)) {
    throw config_error("synth: hrw_fraction must lie in (0,1)");
  }
  if (rate_hz <= 0.0) {
    throw config_error("synth: rate must be positive");
  }
  if (min_epoch_samples < 16 || max_epoch_samples < min_epoch_samples) {
    throw config_error("synth: epoch sample range invalid (min 16)");
  }
  if (hrw_fixation_mean <= 0.0 || lrw_fixation_mean <= 0.0) {
    throw config_error("synth: fixation means must be positive");
  }
  for (double e : class_effect) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw config_error("synth: class_effect entries must be positive finite");
    }
  }
  if (static_cast<std::size_t>(words_per_sentence) > kVocabularySize) {
    throw config_error("synth: words_per_sentence exceeds vocabulary size");
  }
}

std::vector<bool> assign_hrw(std::uint64_t seed, Relation relation,
                             const std::vector<std::string>& normalized_words,
                             double hrw_fraction) {
  std::vector<bool> hrw(normalized_words.size(), false);
  std::vector<std::uint64_t> hashes(normalized_words.size());
  bool any = false;
  for (std::size_t i = 0; i < normalized_words.size(); ++i) {
    std::uint64_t h = fnv1a64(normalized_words[i], fnv1a64(relation_id(relation)));
    h = splitmix64(h ^ seed);
    hashes[i] = h;
    const double bucket = static_cast<double>(h >> 11) * 0x1.0p-53;
    if (!normalized_words[i].empty() && bucket < hrw_fraction) {
      hrw[i] = true;
      any = true;
    }
  }
  if (!any) {
    // guarantee a non-empty HRW group per sentence, deterministically
    std::size_t best = normalized_words.size();
    for (std::size_t i = 0; i < normalized_words.size(); ++i) {
      if (normalized_words[i].empty()) continue;
      if (best == normalized_words.size() || hashes[i] > hashes[best]) best = i;
    }
    if (best < normalized_words.size()) hrw[best] = true;
  }
  return hrw;
}

SynthResult synth_session(const SynthConfig& config, int jobs) {
  config.validate();

  SynthResult result;
  SessionBundle& bundle = result.bundle;
  bundle.subject_id = config.subject_id;
  bundle.channels = config.channels;
  bundle.rate_hz = config.rate_hz;

  const std::uint64_t subject_seed =
      derive_seed(config.seed, "subject", fnv1a64(config.subject_id));

  std::vector<EpochPlan> plan;
  for (int sid = 0; sid < config.n_sentences; ++sid) {
    // sentence text and ground truth depend on the corpus seed only, so
    // every subject generated from one seed reads the same corpus
    Rng rng(derive_seed(config.seed, "sentence", static_cast<std::uint64_t>(sid)));
    const Relation relation = kAllRelations[sid % kRelationCount];

    auto picks = rng.sample_indices(kVocabularySize,
                                    static_cast<std::size_t>(config.words_per_sentence));
    std::string text;
    for (std::size_t i = 0; i < picks.size(); ++i) {
      std::string word = kVocabulary[picks[i]];
      if (i == 0) word[0] = static_cast<char>(std::toupper(word[0]));
      if (i + 1 == picks.size()) {
        word += '.';
      } else if (rng.bernoulli(0.15)) {
        word += ',';
      }
      if (i) text += ' ';
      text += word;
    }

    SentenceRecord sentence;
    sentence.sentence_id = sid;
    sentence.text = text;
    sentence.relation = relation;
    sentence.ground_truth = rng.bernoulli(0.7) ? 1 : 0;
    bundle.sentences.push_back(sentence);

    auto tokens = tokenize(text, sid);
    std::vector<std::string> normalized;
    normalized.reserve(tokens.size());
    for (const auto& t : tokens) normalized.push_back(t.normalized);

    const auto hrw = assign_hrw(config.seed, relation, normalized, config.hrw_fraction);

    WordGrouping grouping;
    grouping.sentence_id = sid;
    grouping.relation = relation;
    grouping.source = GroupingSource::GroundTruth;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      (hrw[i] ? grouping.hrw : grouping.lrw).insert(static_cast<int>(i));
    }
    result.ground_truth.push_back(std::move(grouping));

    Rng fix_rng(derive_seed(subject_seed, "fixation", static_cast<std::uint64_t>(sid)));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      FixationRecord f;
      f.sentence_id = sid;
      f.token_index = static_cast<int>(i);
      const double mean = hrw[i] ? config.hrw_fixation_mean : config.lrw_fixation_mean;
      f.fixation_count = fix_rng.poisson(mean);
      if (f.fixation_count > 0) {
        // duration magnitudes follow the reading-measure ranges seen in
        // real corpora; HRW runs longer except for SFD
        const double gd = clamp_min(fix_rng.normal(hrw[i] ? 133.0 : 125.0, 23.0), 30.0);
        f.gd_ms = gd;
        f.trt_ms = gd + fix_rng.exponential(hrw[i] ? 50.0 : 35.0);
        f.ffd_ms = clamp_min(std::min(gd, fix_rng.normal(hrw[i] ? 113.0 : 110.0, 14.0)), 20.0);
        f.sfd_ms = clamp_min(fix_rng.normal(hrw[i] ? 71.5 : 79.5, 7.0), 20.0);
        f.gopast_ms = *f.trt_ms + fix_rng.exponential(hrw[i] ? 26.0 : 47.0);
      }
      bundle.fixations.push_back(f);

      for (int k = 0; k < f.fixation_count; ++k) {
        plan.push_back(EpochPlan{static_cast<EpochId>(plan.size()), sid,
                                 static_cast<int>(i), static_cast<bool>(hrw[i])});
      }
    }

    for (auto& t : tokens) bundle.tokens.push_back(std::move(t));
  }

  bundle.epochs.resize(plan.size());
  if (config.emit_frp) bundle.frp_epochs.resize(plan.size());

  parallel_for(plan.size(), jobs, [&](std::size_t i) {
    const EpochPlan& p = plan[i];

    Rng rng(derive_seed(subject_seed, "epoch", static_cast<std::uint64_t>(p.epoch_id)));
    EegEpoch& e = bundle.epochs[i];
    e.epoch_id = p.epoch_id;
    e.sentence_id = p.sentence_id;
    e.token_index = p.token_index;
    e.channels = config.channels;
    e.rate_hz = config.rate_hz;
    e.samples = config.min_epoch_samples +
                static_cast<int>(rng.below(static_cast<std::uint64_t>(
                    config.max_epoch_samples - config.min_epoch_samples + 1)));
    fill_epoch(rng, config.channels, e.samples, config.rate_hz, config.class_effect,
               p.hrw, e.data);

    if (config.emit_frp) {
      Rng frp_rng(derive_seed(subject_seed, "frp", static_cast<std::uint64_t>(p.epoch_id)));
      FrpEpoch& fe = bundle.frp_epochs[i];
      fe.epoch_id = p.epoch_id;
      fe.sentence_id = p.sentence_id;
      fe.token_index = p.token_index;
      fe.channels = config.channels;
      fill_epoch(frp_rng, config.channels, FrpEpoch::kSamples, config.rate_hz,
                 config.class_effect, p.hrw, fe.data);
      if (p.hrw) add_frp_deflection(fe.data, config.channels);
    }
  });

  validate_bundle(bundle);
  return result;
}

}  // namespace fixread
