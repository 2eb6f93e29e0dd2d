#pragma once

#include <string>

#include "fixread/types.hpp"

namespace fixread {

// On-disk layout of a session bundle (one directory per subject):
//   meta.json        subject_id, channels, rate, format_version
//   sentences.jsonl  one SentenceRecord per line
//   tokens.jsonl     one WordToken per line
//   fixations.jsonl  one FixationRecord per line
//   epochs.bin       concatenated C x T row-major float32 LE payloads
//   epochs.idx       epoch_id,sentence_id,token_index,offset_bytes,C,T
//   frp.bin/frp.idx  same scheme for the optional 500 ms FRP windows
inline constexpr int kBundleFormatVersion = 1;

// Validates every bundle invariant; throws invariant_violation_error
// naming the first offending record.
void validate_bundle(const SessionBundle& bundle);

void save_bundle(const SessionBundle& bundle, const std::string& dir);

// Loads and validates. Malformed records, invariant violations and
// truncated payloads raise distinct error types.
SessionBundle load_bundle(const std::string& dir);

}  // namespace fixread
