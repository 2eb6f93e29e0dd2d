#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fixread/grouping.hpp"
#include "fixread/types.hpp"

namespace fixread {

// Deterministic word-relevance assignment shared by the generator and the
// truthful mock provider: a word is HRW iff its (seed, relation, word)
// hash bucket falls below hrw_fraction. If a sentence would end up with no
// HRW at all, the word with the largest hash becomes HRW so that every
// sentence has a non-empty high-relevance group.
std::vector<bool> assign_hrw(std::uint64_t seed, Relation relation,
                             const std::vector<std::string>& normalized_words,
                             double hrw_fraction);

struct SynthResult {
  SessionBundle bundle;
  std::vector<WordGrouping> ground_truth;
};

// Seeded synthetic session. Epochs are sums of five band-limited Gaussian
// noise components with unit per-band variance; HRW epochs scale band b's
// amplitude by sqrt(class_effect[b]), so class_effect reads directly as a
// band-power ratio. Fixation counts are Poisson with the configured group
// means; zero-fixation words get no epochs. Bit-reproducible for a given
// seed, independent of jobs.
SynthResult synth_session(const SynthConfig& config, int jobs = 1);

}  // namespace fixread
