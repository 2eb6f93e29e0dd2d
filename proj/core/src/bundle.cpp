#include "fixread/bundle.hpp"

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "fixread/csv.hpp"
#include "fixread/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "epoch payloads are little-endian float32; big-endian hosts unsupported");
static_assert(sizeof(float) == 4);

namespace fixread {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_json_line(const std::string& path, std::size_t lineno, const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw malformed_record_error(path + ":" + std::to_string(lineno) + ": " + e.what());
  }
}

void write_optional(json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

struct BinWriter {
  std::ofstream bin;
  std::ofstream idx;
  std::uint64_t offset = 0;

  BinWriter(const fs::path& bin_path, const fs::path& idx_path)
      : bin(bin_path, std::ios::binary), idx(idx_path) {
    if (!bin || !idx) {
      throw error("cannot open epoch files for writing in " + bin_path.parent_path().string());
    }
  }

  void append(EpochId epoch_id, SentenceId sentence_id, int token_index,
              int channels, int samples, const std::vector<float>& data) {
    idx << epoch_id << "," << sentence_id << "," << token_index << ","
        << offset << "," << channels << "," << samples << "\n";
    bin.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(float)));
    offset += data.size() * sizeof(float);
  }
};

struct IdxRow {
  EpochId epoch_id;
  SentenceId sentence_id;
  int token_index;
  std::uint64_t offset;
  int channels;
  int samples;
};

std::vector<IdxRow> read_idx(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw error("cannot open: " + path.string());
  }
  std::vector<IdxRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 6) {
      throw malformed_record_error(path.string() + ":" + std::to_string(lineno) +
                                   ": expected 6 fields, got " + std::to_string(fields.size()));
    }
    try {
      rows.push_back(IdxRow{std::stoll(fields[0]), std::stoll(fields[1]),
                            std::stoi(fields[2]), std::stoull(fields[3]),
                            std::stoi(fields[4]), std::stoi(fields[5])});
    } catch (const std::exception&) {
      throw malformed_record_error(path.string() + ":" + std::to_string(lineno) +
                                   ": non-numeric field");
    }
  }
  return rows;
}

std::vector<float> read_payload(std::ifstream& bin, const fs::path& path,
                                const IdxRow& row, std::uintmax_t file_size) {
  const std::uint64_t bytes =
      static_cast<std::uint64_t>(row.channels) * row.samples * sizeof(float);
  if (row.offset + bytes > file_size) {
    throw truncated_payload_error(
        path.string() + ": epoch " + std::to_string(row.epoch_id) + " needs " +
        std::to_string(bytes) + " bytes at offset " + std::to_string(row.offset) +
        " but file has " + std::to_string(file_size));
  }
  std::vector<float> data(static_cast<std::size_t>(row.channels) * row.samples);
  bin.seekg(static_cast<std::streamoff>(row.offset));
  bin.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
  if (!bin) {
    throw truncated_payload_error(path.string() + ": short read for epoch " +
                                  std::to_string(row.epoch_id));
  }
  return data;
}

}  // namespace

void validate_bundle(const SessionBundle& bundle) {
  std::set<SentenceId> sentence_ids;
  for (const auto& s : bundle.sentences) {
    if (s.text.empty()) {
      throw invariant_violation_error("sentence " + std::to_string(s.sentence_id) +
                                      ": empty text");
    }
    if (!sentence_ids.insert(s.sentence_id).second) {
      throw invariant_violation_error("duplicate sentence_id " +
                                      std::to_string(s.sentence_id));
    }
  }

  // token_index contiguous and 0-based per sentence
  std::map<SentenceId, std::set<int>> token_index;
  for (const auto& t : bundle.tokens) {
    if (!sentence_ids.count(t.sentence_id)) {
      throw invariant_violation_error("token (" + std::to_string(t.sentence_id) + "," +
                                      std::to_string(t.token_index) +
                                      "): unknown sentence_id");
    }
    if (!token_index[t.sentence_id].insert(t.token_index).second) {
      throw invariant_violation_error("duplicate token (" + std::to_string(t.sentence_id) +
                                      "," + std::to_string(t.token_index) + ")");
    }
  }
  for (const auto& [sid, idxs] : token_index) {
    if (!idxs.empty() && (*idxs.begin() != 0 ||
                          *idxs.rbegin() != static_cast<int>(idxs.size()) - 1)) {
      throw invariant_violation_error("sentence " + std::to_string(sid) +
                                      ": token indices not contiguous from 0");
    }
  }

  auto has_token = [&](SentenceId sid, int idx) {
    auto it = token_index.find(sid);
    return it != token_index.end() && it->second.count(idx) > 0;
  };

  std::map<std::pair<SentenceId, int>, int> fixation_counts;
  for (const auto& f : bundle.fixations) {
    const std::string key =
        "(" + std::to_string(f.sentence_id) + "," + std::to_string(f.token_index) + ")";
    if (!has_token(f.sentence_id, f.token_index)) {
      throw invariant_violation_error("fixation " + key + ": no such token");
    }
    if (f.fixation_count < 0) {
      throw invariant_violation_error("fixation " + key + ": negative count");
    }
    const bool any_duration = f.gd_ms || f.trt_ms || f.ffd_ms || f.sfd_ms || f.gopast_ms;
    if (f.fixation_count == 0 && any_duration) {
      throw invariant_violation_error("fixation " + key +
                                      ": durations present with zero fixations");
    }
    if (f.gd_ms && f.trt_ms && *f.gd_ms > *f.trt_ms + 1e-9) {
      throw invariant_violation_error("fixation " + key + ": GD exceeds TRT");
    }
    if (!fixation_counts.emplace(std::make_pair(f.sentence_id, f.token_index),
                                 f.fixation_count).second) {
      throw invariant_violation_error("duplicate fixation record " + key);
    }
  }

  std::set<EpochId> epoch_ids;
  std::map<std::pair<SentenceId, int>, int> epochs_per_token;
  for (const auto& e : bundle.epochs) {
    if (!epoch_ids.insert(e.epoch_id).second) {
      throw invariant_violation_error("duplicate epoch_id " + std::to_string(e.epoch_id));
    }
    if (!has_token(e.sentence_id, e.token_index)) {
      throw invariant_violation_error("epoch " + std::to_string(e.epoch_id) +
                                      ": no token (" + std::to_string(e.sentence_id) + "," +
                                      std::to_string(e.token_index) + ")");
    }
    if (e.samples < 2) {
      throw invariant_violation_error("epoch " + std::to_string(e.epoch_id) +
                                      ": fewer than 2 samples");
    }
    if (e.channels != bundle.channels) {
      throw invariant_violation_error("epoch " + std::to_string(e.epoch_id) +
                                      ": channel count differs from bundle");
    }
    if (e.data.size() != static_cast<std::size_t>(e.channels) * e.samples) {
      throw invariant_violation_error("epoch " + std::to_string(e.epoch_id) +
                                      ": payload size mismatch");
    }
    for (float v : e.data) {
      if (!std::isfinite(v)) {
        throw invariant_violation_error("epoch " + std::to_string(e.epoch_id) +
                                        ": non-finite sample");
      }
    }
    epochs_per_token[{e.sentence_id, e.token_index}]++;
  }

  // number of epochs per token equals that token's fixation_count
  for (const auto& [key, count] : fixation_counts) {
    auto it = epochs_per_token.find(key);
    const int epochs = it == epochs_per_token.end() ? 0 : it->second;
    if (!bundle.epochs.empty() && epochs != count) {
      throw invariant_violation_error(
          "token (" + std::to_string(key.first) + "," + std::to_string(key.second) +
          "): fixation_count " + std::to_string(count) + " but " +
          std::to_string(epochs) + " epochs");
    }
  }
  for (const auto& [key, count] : epochs_per_token) {
    if (!fixation_counts.count(key) && count > 0) {
      throw invariant_violation_error("token (" + std::to_string(key.first) + "," +
                                      std::to_string(key.second) +
                                      "): epochs without a fixation record");
    }
  }

  std::set<EpochId> frp_ids;
  for (const auto& e : bundle.frp_epochs) {
    if (!frp_ids.insert(e.epoch_id).second) {
      throw invariant_violation_error("duplicate FRP epoch_id " + std::to_string(e.epoch_id));
    }
    if (!has_token(e.sentence_id, e.token_index)) {
      throw invariant_violation_error("FRP epoch " + std::to_string(e.epoch_id) +
                                      ": no such token");
    }
    if (e.data.size() != static_cast<std::size_t>(e.channels) * FrpEpoch::kSamples) {
      throw invariant_violation_error("FRP epoch " + std::to_string(e.epoch_id) +
                                      ": payload must be C x 250");
    }
    if (!bundle.epochs.empty() && !epoch_ids.count(e.epoch_id)) {
      throw invariant_violation_error("FRP epoch " + std::to_string(e.epoch_id) +
                                      ": no matching word epoch");
    }
  }
}

void save_bundle(const SessionBundle& bundle, const std::string& dir) {
  validate_bundle(bundle);
  fs::create_directories(dir);
  const fs::path root{dir};

  {
    json meta;
    meta["subject_id"] = bundle.subject_id;
    meta["channels"] = bundle.channels;
    meta["rate"] = bundle.rate_hz;
    meta["format_version"] = kBundleFormatVersion;
    std::ofstream out(root / "meta.json");
    out << meta.dump(2) << "\n";
  }
  {
    std::ofstream out(root / "sentences.jsonl");
    for (const auto& s : bundle.sentences) {
      json j;
      j["sentence_id"] = s.sentence_id;
      j["text"] = s.text;
      j["relation"] = relation_id(s.relation);
      j["ground_truth"] = s.ground_truth;
      out << j.dump() << "\n";
    }
  }
  {
    std::ofstream out(root / "tokens.jsonl");
    for (const auto& t : bundle.tokens) {
      json j;
      j["sentence_id"] = t.sentence_id;
      j["token_index"] = t.token_index;
      j["surface"] = t.surface;
      j["normalized"] = t.normalized;
      out << j.dump() << "\n";
    }
  }
  {
    std::ofstream out(root / "fixations.jsonl");
    for (const auto& f : bundle.fixations) {
      json j;
      j["sentence_id"] = f.sentence_id;
      j["token_index"] = f.token_index;
      j["fixation_count"] = f.fixation_count;
      write_optional(j, "gd_ms", f.gd_ms);
      write_optional(j, "trt_ms", f.trt_ms);
      write_optional(j, "ffd_ms", f.ffd_ms);
      write_optional(j, "sfd_ms", f.sfd_ms);
      write_optional(j, "gopast_ms", f.gopast_ms);
      out << j.dump() << "\n";
    }
  }
  {
    BinWriter w(root / "epochs.bin", root / "epochs.idx");
    for (const auto& e : bundle.epochs) {
      w.append(e.epoch_id, e.sentence_id, e.token_index, e.channels, e.samples, e.data);
    }
  }
  if (!bundle.frp_epochs.empty()) {
    BinWriter w(root / "frp.bin", root / "frp.idx");
    for (const auto& e : bundle.frp_epochs) {
      w.append(e.epoch_id, e.sentence_id, e.token_index, e.channels,
               FrpEpoch::kSamples, e.data);
    }
  }
}

SessionBundle load_bundle(const std::string& dir) {
  const fs::path root{dir};
  if (!fs::exists(root / "meta.json")) {
    throw error("not a session bundle (missing meta.json): " + dir);
  }

  SessionBundle bundle;
  {
    std::ifstream in(root / "meta.json");
    std::stringstream ss;
    ss << in.rdbuf();
    json meta = parse_json_line((root / "meta.json").string(), 1, ss.str());
    bundle.subject_id = meta.at("subject_id").get<std::string>();
    bundle.channels = meta.at("channels").get<int>();
    bundle.rate_hz = meta.at("rate").get<double>();
    const int version = meta.at("format_version").get<int>();
    if (version != kBundleFormatVersion) {
      throw malformed_record_error("unsupported bundle format_version " +
                                   std::to_string(version));
    }
  }

  auto for_each_line = [&](const char* name, auto&& fn) {
    const fs::path path = root / name;
    std::ifstream in(path);
    if (!in) {
      throw error("cannot open: " + path.string());
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      fn(parse_json_line(path.string(), lineno, line), path.string(), lineno);
    }
  };

  for_each_line("sentences.jsonl", [&](const json& j, const std::string& path, std::size_t n) {
    try {
      SentenceRecord s;
      s.sentence_id = j.at("sentence_id").get<SentenceId>();
      s.text = j.at("text").get<std::string>();
      s.relation = parse_relation(j.at("relation").get<std::string>());
      s.ground_truth = j.at("ground_truth").get<int>();
      bundle.sentences.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw malformed_record_error(path + ":" + std::to_string(n) + ": " + e.what());
    }
  });
  for_each_line("tokens.jsonl", [&](const json& j, const std::string& path, std::size_t n) {
    try {
      WordToken t;
      t.sentence_id = j.at("sentence_id").get<SentenceId>();
      t.token_index = j.at("token_index").get<int>();
      t.surface = j.at("surface").get<std::string>();
      t.normalized = j.at("normalized").get<std::string>();
      bundle.tokens.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw malformed_record_error(path + ":" + std::to_string(n) + ": " + e.what());
    }
  });
  for_each_line("fixations.jsonl", [&](const json& j, const std::string& path, std::size_t n) {
    try {
      FixationRecord f;
      f.sentence_id = j.at("sentence_id").get<SentenceId>();
      f.token_index = j.at("token_index").get<int>();
      f.fixation_count = j.at("fixation_count").get<int>();
      f.gd_ms = read_optional(j, "gd_ms");
      f.trt_ms = read_optional(j, "trt_ms");
      f.ffd_ms = read_optional(j, "ffd_ms");
      f.sfd_ms = read_optional(j, "sfd_ms");
      f.gopast_ms = read_optional(j, "gopast_ms");
      bundle.fixations.push_back(std::move(f));
    } catch (const json::exception& e) {
      throw malformed_record_error(path + ":" + std::to_string(n) + ": " + e.what());
    }
  });

  auto load_bin = [&](const char* bin_name, const char* idx_name, auto&& push) {
    const fs::path bin_path = root / bin_name;
    const fs::path idx_path = root / idx_name;
    if (!fs::exists(idx_path)) return;
    auto rows = read_idx(idx_path);
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) {
      throw error("cannot open: " + bin_path.string());
    }
    const std::uintmax_t size = fs::file_size(bin_path);
    for (const auto& row : rows) {
      push(row, read_payload(bin, bin_path, row, size));
    }
  };

  load_bin("epochs.bin", "epochs.idx", [&](const IdxRow& row, std::vector<float> data) {
    EegEpoch e;
    e.epoch_id = row.epoch_id;
    e.sentence_id = row.sentence_id;
    e.token_index = row.token_index;
    e.channels = row.channels;
    e.samples = row.samples;
    e.rate_hz = bundle.rate_hz;
    e.data = std::move(data);
    bundle.epochs.push_back(std::move(e));
  });
  load_bin("frp.bin", "frp.idx", [&](const IdxRow& row, std::vector<float> data) {
    if (row.samples != FrpEpoch::kSamples) {
      throw malformed_record_error("FRP epoch " + std::to_string(row.epoch_id) +
                                   ": expected 250 samples, got " +
                                   std::to_string(row.samples));
    }
    FrpEpoch e;
    e.epoch_id = row.epoch_id;
    e.sentence_id = row.sentence_id;
    e.token_index = row.token_index;
    e.channels = row.channels;
    e.data = std::move(data);
    bundle.frp_epochs.push_back(std::move(e));
  });

  validate_bundle(bundle);
  return bundle;
}

}  // namespace fixread
