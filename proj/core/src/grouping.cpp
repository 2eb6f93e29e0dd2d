#include "fixread/grouping.hpp"

#include <fstream>

#include "json.hpp"

#include "fixread/errors.hpp"

namespace fixread {

using nlohmann::json;

std::string_view grouping_source_id(GroupingSource s) {
  switch (s) {
    case GroupingSource::ModelA: return "modelA";
    case GroupingSource::ModelB: return "modelB";
    case GroupingSource::Joint: return "joint";
    case GroupingSource::GroundTruth: return "ground_truth";
  }
  return "";
}

GroupingSource parse_grouping_source(std::string_view s) {
  if (s == "modelA") return GroupingSource::ModelA;
  if (s == "modelB") return GroupingSource::ModelB;
  if (s == "joint") return GroupingSource::Joint;
  if (s == "ground_truth") return GroupingSource::GroundTruth;
  throw error("unknown grouping source: '" + std::string{s} + "'");
}

void save_groupings(const std::vector<WordGrouping>& groupings, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw error("cannot open for writing: " + path);
  }
  for (const auto& g : groupings) {
    json j;
    j["sentence_id"] = g.sentence_id;
    j["relation"] = relation_id(g.relation);
    j["hrw"] = g.hrw;
    j["lrw"] = g.lrw;
    j["source"] = grouping_source_id(g.source);
    j["forced"] = g.forced;
    j["mistake"] = g.mistake;
    out << j.dump() << "\n";
  }
}

std::vector<WordGrouping> load_groupings(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw error("cannot open: " + path);
  }
  std::vector<WordGrouping> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw malformed_record_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    WordGrouping g;
    g.sentence_id = j.at("sentence_id").get<SentenceId>();
    g.relation = parse_relation(j.at("relation").get<std::string>());
    for (int idx : j.at("hrw")) g.hrw.insert(idx);
    for (int idx : j.at("lrw")) g.lrw.insert(idx);
    g.source = parse_grouping_source(j.at("source").get<std::string>());
    g.forced = j.at("forced").get<bool>();
    g.mistake = j.at("mistake").get<bool>();
    for (int idx : g.hrw) {
      if (g.lrw.count(idx)) {
        throw invariant_violation_error(
            path + ": sentence " + std::to_string(g.sentence_id) +
            ": token " + std::to_string(idx) + " in both hrw and lrw");
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace fixread
