#pragma once

#include <set>
#include <string>
#include <vector>

#include "fixread/types.hpp"

namespace fixread {

enum class GroupingSource {
  ModelA,
  ModelB,
  Joint,
  GroundTruth,
};

std::string_view grouping_source_id(GroupingSource s);
GroupingSource parse_grouping_source(std::string_view s);

// Per-sentence partition of token indices into high- and low-relevance
// words. hrw and lrw are disjoint; indices not in either set are
// unassigned (the labeler defaults them to lrw before persisting).
struct WordGrouping {
  SentenceId sentence_id = 0;
  Relation relation = Relation::Award;
  std::set<int> hrw;
  std::set<int> lrw;
  GroupingSource source = GroupingSource::GroundTruth;
  bool forced = false;   // grouping came from the corrective re-query
  bool mistake = false;  // model's first condition answer was wrong

  // Empty HRW after joint selection; excluded from classification.
  bool degenerate() const { return hrw.empty(); }
};

// groupings.jsonl round-trip.
void save_groupings(const std::vector<WordGrouping>& groupings, const std::string& path);
std::vector<WordGrouping> load_groupings(const std::string& path);

}  // namespace fixread
