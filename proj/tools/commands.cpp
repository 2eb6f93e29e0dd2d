#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"

#include "fixread/analysis.hpp"
#include "fixread/bundle.hpp"
#include "fixread/classify.hpp"
#include "fixread/csv.hpp"
#include "fixread/errors.hpp"
#include "fixread/features.hpp"
#include "fixread/labeling.hpp"
#include "fixread/parallel.hpp"
#include "fixread/svg.hpp"
#include "fixread/synth.hpp"

namespace fixread::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int GlobalOptions_effective_jobs(const GlobalOptions& g) {
  return g.jobs > 0 ? g.jobs : default_jobs();
}

void ensure_out_dir(const std::string& out, bool force) {
  if (out.empty()) {
    throw config_error("--out is required");
  }
  const fs::path path{out};
  if (fs::exists(path) && !fs::is_empty(path) && !force) {
    throw config_error("output directory '" + out + "' is not empty (use --force)");
  }
  fs::create_directories(path);
}

SessionBundle load_bundle_checked(const std::string& path, const char* needed_by) {
  if (path.empty()) {
    throw config_error(std::string{"--bundle is required for "} + needed_by);
  }
  if (!fs::exists(fs::path{path} / "meta.json")) {
    throw missing_artifact_error("bundle '" + path +
                                 "' not found; run `fixread synth` (or point --bundle at "
                                 "an existing session bundle)");
  }
  return load_bundle(path);
}

std::vector<WordGrouping> load_groupings_checked(const std::string& path) {
  if (path.empty()) {
    throw config_error("--groupings is required");
  }
  if (!fs::exists(path)) {
    throw missing_artifact_error("groupings file '" + path +
                                 "' not found; run `fixread label` first");
  }
  return load_groupings(path);
}

std::array<double, kBandCount> parse_class_effect(const std::string& spec) {
  std::array<double, kBandCount> out{};
  std::stringstream ss(spec);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= kBandCount) {
      throw config_error("--class-effect takes exactly 5 comma-separated values");
    }
    try {
      out[i++] = std::stod(item);
    } catch (const std::exception&) {
      throw config_error("--class-effect: '" + item + "' is not a number");
    }
  }
  if (i != kBandCount) {
    throw config_error("--class-effect takes exactly 5 comma-separated values");
  }
  return out;
}

labeling::MockBehavior parse_mock(const MockSpec& spec, double hrw_fraction) {
  labeling::MockBehavior behavior;
  const auto colon = spec.behavior.find(':');
  const std::string kind = spec.behavior.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? "" : spec.behavior.substr(colon + 1);
  if (kind == "truthful") {
    behavior = labeling::MockBehavior::truthful();
  } else if (kind == "adversarial") {
    if (arg.empty()) {
      throw config_error("adversarial mock needs a sentence id: adversarial:K");
    }
    behavior = labeling::MockBehavior::adversarial(std::stoll(arg));
  } else if (kind == "noisy") {
    if (arg.empty()) {
      throw config_error("noisy mock needs a probability: noisy:P");
    }
    behavior = labeling::MockBehavior::noisy(std::stod(arg));
  } else {
    throw config_error("unknown mock behavior '" + spec.behavior + "'");
  }
  behavior.hrw_fraction = hrw_fraction;
  return behavior;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
               ? c
               : '_';
  }
  return out;
}

std::vector<Relation> parse_relations(const std::vector<std::string>& names) {
  std::vector<Relation> out;
  for (const auto& n : names) out.push_back(parse_relation(n));
  return out;
}

features::FeatureTag tag_from_name(const std::string& name) {
  return features::parse_feature_tag(name);
}

struct LabeledEpochIndex {
  std::map<std::pair<SentenceId, int>, int> label_of;  // 1 hrw / 0 lrw
};

LabeledEpochIndex index_groupings(const std::vector<WordGrouping>& groupings) {
  LabeledEpochIndex idx;
  for (const auto& g : groupings) {
    if (g.degenerate()) continue;
    for (int t : g.hrw) idx.label_of[{g.sentence_id, t}] = 1;
    for (int t : g.lrw) idx.label_of[{g.sentence_id, t}] = 0;
  }
  return idx;
}

void write_feature_csv(const std::string& path, std::uint64_t seed,
                       const std::vector<EpochId>& ids, const std::vector<int>& labels,
                       const RowMatrix& values) {
  CsvWriter csv(path, seed);
  std::vector<std::string> header{"epoch_id", "label"};
  for (std::size_t j = 0; j < values.cols; ++j) header.push_back("v" + std::to_string(j));
  csv.row(header);
  for (std::size_t i = 0; i < values.rows; ++i) {
    std::vector<std::string> row{std::to_string(ids[i]), std::to_string(labels[i])};
    for (std::size_t j = 0; j < values.cols; ++j) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.9g", values.at(i, j));
      row.emplace_back(buf);
    }
    csv.row(row);
  }
}

}  // namespace

int GlobalOptions::effective_jobs() const { return GlobalOptions_effective_jobs(*this); }

int cmd_synth(const GlobalOptions& g, const SynthOptions& o) {
  ensure_out_dir(g.out, g.force);

  SynthConfig config;
  config.n_sentences = o.sentences;
  config.words_per_sentence = o.words;
  config.channels = o.channels;
  config.rate_hz = o.rate;
  config.seed = g.seed;
  config.hrw_fraction = o.hrw_fraction;
  config.class_effect = parse_class_effect(o.class_effect);
  config.emit_frp = !o.no_frp;
  if (o.subjects < 1) {
    throw config_error("--subjects must be >= 1");
  }

  for (int s = 0; s < o.subjects; ++s) {
    char name[16];
    std::snprintf(name, sizeof(name), "S%02d", s + 1);
    config.subject_id = name;
    const auto result = synth_session(config, g.effective_jobs());
    const auto dir = fs::path{g.out} / name;
    save_bundle(result.bundle, dir.string());
    if (s == 0) {
      // corpus-level ground truth, identical for every subject
      save_groupings(result.ground_truth,
                     (fs::path{g.out} / "groundtruth_groupings.jsonl").string());
    }
    std::printf("wrote %s: %zu sentences, %zu epochs%s\n", dir.string().c_str(),
                result.bundle.sentences.size(), result.bundle.epochs.size(),
                config.emit_frp ? " (+frp)" : "");
  }
  return 0;
}

namespace {

void write_label_outputs(const std::string& out, std::uint64_t seed,
                         const std::string& name,
                         const labeling::LabelRunResult& result,
                         std::vector<labeling::MistakeRecord>& all_mistakes,
                         json& summary) {
  const auto path = fs::path{out} / ("groupings_" + sanitize(name) + ".jsonl");
  save_groupings(result.groupings, path.string());
  all_mistakes.insert(all_mistakes.end(), result.mistakes.begin(), result.mistakes.end());

  json model;
  model["model"] = name;
  model["groupings"] = path.filename().string();
  model["sentences_labeled"] = result.groupings.size();
  model["mistakes"] = result.mistakes.size();
  model["failed_sentences"] = result.failed;
  model["retries"] = result.retries_used;
  model["condition_accuracy_mean"] = result.condition_accuracy_mean;
  model["condition_accuracy_sd"] = result.condition_accuracy_sd;
  model["repeats"] = result.repeats;
  summary["models"].push_back(model);
  (void)seed;

  for (SentenceId id : result.failed) {
    std::fprintf(stderr, "warning: %s failed on sentence %lld after retries\n",
                 name.c_str(), static_cast<long long>(id));
  }
}

}  // namespace

int cmd_label(const GlobalOptions& g, const LabelOptionsCli& o) {
  ensure_out_dir(g.out, g.force);

  // joint-only mode: combine two existing grouping files
  if (!o.joint_inputs.empty()) {
    if (o.joint_inputs.size() != 2) {
      throw config_error("--joint takes exactly two grouping files");
    }
    const auto a = load_groupings_checked(o.joint_inputs[0]);
    const auto b = load_groupings_checked(o.joint_inputs[1]);
    std::map<SentenceId, const WordGrouping*> b_by_id;
    for (const auto& gb : b) b_by_id[gb.sentence_id] = &gb;
    std::vector<WordGrouping> joint;
    for (const auto& ga : a) {
      auto it = b_by_id.find(ga.sentence_id);
      if (it == b_by_id.end()) continue;
      joint.push_back(labeling::joint_select(ga, *it->second));
    }
    const auto path = fs::path{g.out} / "groupings_joint.jsonl";
    save_groupings(joint, path.string());
    std::printf("wrote %s (%zu sentences)\n", path.string().c_str(), joint.size());
    return 0;
  }

  const auto bundle = load_bundle_checked(o.bundle, "label");

  labeling::LabelOptions options;
  options.relations = parse_relations(o.relations);
  options.repeats = o.repeats;
  options.max_retries = o.retries;
  options.backoff_base_s = o.backoff_s;

  json summary;
  summary["models"] = json::array();
  std::vector<labeling::MistakeRecord> mistakes;
  std::vector<std::vector<WordGrouping>> grouping_sets;
  std::vector<std::string> names;

  const bool mock_mode = o.endpoint.empty();
  std::size_t total_failed = 0;
  std::size_t total_labeled = 0;

  auto run_model = [&](const std::string& name, GroupingSource source,
                       std::unique_ptr<labeling::Provider> provider) {
    options.source = source;
    const auto result = labeling::label_corpus(*provider, bundle, options);
    write_label_outputs(g.out, g.seed, name, result, mistakes, summary);
    grouping_sets.push_back(result.groupings);
    names.push_back(name);
    total_failed += result.failed.size();
    total_labeled += result.groupings.size();
  };

  if (mock_mode) {
    const std::uint64_t seed_a = o.mock_a.seed ? o.mock_a.seed : g.seed;
    auto behavior_a = parse_mock(o.mock_a, o.hrw_fraction);
    run_model(o.model, GroupingSource::ModelA,
              std::make_unique<labeling::MockProvider>(bundle, seed_a, behavior_a, o.model));
    if (!o.model_b.empty()) {
      const std::uint64_t seed_b = o.mock_b.seed ? o.mock_b.seed : g.seed;
      auto behavior_b = parse_mock(o.mock_b, o.hrw_fraction);
      run_model(o.model_b, GroupingSource::ModelB,
                std::make_unique<labeling::MockProvider>(bundle, seed_b, behavior_b,
                                                         o.model_b));
    }
  } else {
    labeling::ProviderConfig config;
    config.endpoint_url = o.endpoint;
    config.model = o.model;
    config.api_key_env = o.api_key_env;
    config.max_retries = o.retries;
    config.timeout_s = o.timeout_s;
    config.temperature = o.temperature;
    if (options.backoff_base_s <= 0.0) options.backoff_base_s = 1.0;
    run_model(o.model, GroupingSource::ModelA,
              std::make_unique<labeling::HttpProvider>(config));
    if (!o.model_b.empty()) {
      config.model = o.model_b;
      run_model(o.model_b, GroupingSource::ModelB,
                std::make_unique<labeling::HttpProvider>(config));
    }
  }

  if (grouping_sets.size() == 2) {
    std::map<SentenceId, const WordGrouping*> b_by_id;
    for (const auto& gb : grouping_sets[1]) b_by_id[gb.sentence_id] = &gb;
    std::vector<WordGrouping> joint;
    for (const auto& ga : grouping_sets[0]) {
      auto it = b_by_id.find(ga.sentence_id);
      if (it == b_by_id.end()) continue;
      joint.push_back(labeling::joint_select(ga, *it->second));
    }
    save_groupings(joint, (fs::path{g.out} / "groupings_joint.jsonl").string());
    summary["joint"] = {{"groupings", "groupings_joint.jsonl"},
                        {"sentences", joint.size()}};
  }

  labeling::save_mistakes(mistakes, (fs::path{g.out} / "mistakes.csv").string());
  std::ofstream(fs::path{g.out} / "label_summary.json") << summary.dump(2) << "\n";

  std::printf("labeled %zu sentence-model pairs, %zu mistakes, %zu failures\n",
              total_labeled, mistakes.size(), total_failed);
  if (total_labeled == 0 && total_failed > 0) {
    throw provider_exhausted_error("all sentences failed; provider unreachable?");
  }
  return 0;
}

int cmd_features(const GlobalOptions& g, const FeatureOptions& o) {
  ensure_out_dir(g.out, g.force);
  const auto bundle = load_bundle_checked(o.bundle, "features");
  const auto groupings = load_groupings_checked(o.groupings);

  const auto raw = features::compute_raw_features(bundle, o.bins, g.effective_jobs());
  auto set = classify::build_labeled_set(bundle, raw, groupings,
                                         features::FeatureTag::Combined90);
  if (set.size() < 2) {
    throw error("too few labeled epochs (" + std::to_string(set.size()) + ")");
  }

  // whole-set reducers; inspection output, not the per-fold models used in
  // cross-validation
  const int k_bp = std::min<int>(o.dim, std::min(set.bp.cols, set.size() - 1));
  const int k_ce = std::min<int>(o.dim, std::min(set.cond_en.cols, set.size() - 1));
  const int k_cc = std::min<int>(o.dim, static_cast<int>(set.clustering.cols));
  const auto pca_bp = features::fit_pca(set.bp, k_bp, "BP30");
  const auto pca_ce = features::fit_pca(set.cond_en, k_ce, "CONDEN30");
  const auto nodes = features::select_nodes(set.clustering, k_cc);

  const std::size_t n = set.size();
  RowMatrix bp30(n, static_cast<std::size_t>(k_bp));
  RowMatrix ce30(n, static_cast<std::size_t>(k_ce));
  RowMatrix plv30(n, nodes.size());
  RowMatrix combined(n, static_cast<std::size_t>(k_bp + k_ce) + nodes.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = pca_bp.apply(set.bp.row(i));
    const auto c = pca_ce.apply(set.cond_en.row(i));
    std::copy(b.begin(), b.end(), bp30.row(i).begin());
    std::copy(c.begin(), c.end(), ce30.row(i).begin());
    auto cc_row = set.clustering.row(i);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      plv30.at(i, j) = cc_row[nodes[j]];
    }
    auto dst = combined.row(i);
    std::copy(b.begin(), b.end(), dst.begin());
    std::copy(c.begin(), c.end(), dst.begin() + k_bp);
    for (std::size_t j = 0; j < nodes.size(); ++j) dst[k_bp + k_ce + j] = plv30.at(i, j);
  }

  const fs::path out{g.out};
  write_feature_csv((out / "features_BP30.csv").string(), g.seed, set.epoch_ids,
                    set.labels, bp30);
  write_feature_csv((out / "features_CONDEN30.csv").string(), g.seed, set.epoch_ids,
                    set.labels, ce30);
  write_feature_csv((out / "features_PLV30.csv").string(), g.seed, set.epoch_ids,
                    set.labels, plv30);
  write_feature_csv((out / "features_COMBINED90.csv").string(), g.seed, set.epoch_ids,
                    set.labels, combined);
  features::save_pca(pca_bp, (out / "pca_BP30.json").string());
  features::save_pca(pca_ce, (out / "pca_CONDEN30.json").string());
  {
    json j;
    j["selected_nodes"] = nodes;
    j["source_tag"] = "PLV30";
    std::ofstream(out / "nodes_PLV30.json") << j.dump(2) << "\n";
  }
  std::printf("wrote 4 feature tables (%zu epochs) to %s\n", n, g.out.c_str());
  return 0;
}

int cmd_train(const GlobalOptions& g, const TrainOptions& o) {
  ensure_out_dir(g.out, g.force);
  const auto bundle = load_bundle_checked(o.bundle, "train");
  const auto groupings = load_groupings_checked(o.groupings);

  std::vector<classify::ClassifierKind> kinds;
  if (o.classifiers.empty()) {
    kinds.assign(classify::kAllClassifiers.begin(), classify::kAllClassifiers.end());
  } else {
    for (const auto& name : o.classifiers) kinds.push_back(classify::parse_classifier(name));
  }

  const auto raw = features::compute_raw_features(bundle, o.bins, g.effective_jobs());
  auto base = classify::build_labeled_set(bundle, raw, groupings,
                                          features::FeatureTag::Combined90);
  const auto balanced = classify::balance_classes(base, g.seed);
  std::printf("balanced set: %zu epochs (%zu before balancing)\n", balanced.size(),
              base.size());

  classify::CvOptions cv_options;
  cv_options.folds = o.folds;
  cv_options.reduce_dim = o.dim;
  cv_options.shuffle_labels = o.shuffle_labels;

  std::vector<classify::CvReport> reports;
  for (const auto& set_name : o.sets) {
    auto set = balanced;
    set.tag = tag_from_name(set_name);
    reports.push_back(classify::cross_validate(set, kinds, g.seed, cv_options));
    const auto [best_kind, best_acc] = classify::best_of(reports.back());
    std::printf("%-10s best: %s at %.2f%%\n",
                std::string{features::feature_tag_id(set.tag)}.c_str(),
                std::string{classify::classifier_name(best_kind)}.c_str(),
                100.0 * best_acc);
  }

  const fs::path out{g.out};
  classify::save_cv_reports(reports, (out / "cv_report.json").string());
  classify::render_cv_table(reports, (out / "cv_table.csv").string(), g.seed);
  std::printf("wrote %s\n", (out / "cv_table.csv").string().c_str());
  return 0;
}

int cmd_stats(const GlobalOptions& g, const StatsOptions& o) {
  ensure_out_dir(g.out, g.force);
  if (o.bundles.empty()) {
    throw config_error("--bundle is required (repeat for multiple subjects)");
  }
  std::vector<SessionBundle> bundles;
  for (const auto& path : o.bundles) {
    bundles.push_back(load_bundle_checked(path, "stats"));
  }
  const auto groupings = load_groupings_checked(o.groupings);
  const auto table = analysis::fixation_stats(bundles, groupings);
  analysis::render_gaze_stats(table, (fs::path{g.out} / "gaze_stats.csv").string(), g.seed);
  std::printf("gaze stats over %zu subject(s): HRW %.4f vs LRW %.4f fixations/word "
              "(zero-fixation words included)\n",
              bundles.size(), table.hrw.fixations_incl_zero.mean,
              table.lrw.fixations_incl_zero.mean);
  return 0;
}

int cmd_frp(const GlobalOptions& g, const FrpOptions& o) {
  ensure_out_dir(g.out, g.force);
  const auto bundle = load_bundle_checked(o.bundle, "frp");
  const auto groupings = load_groupings_checked(o.groupings);
  if (bundle.frp_epochs.empty()) {
    throw missing_artifact_error("bundle has no FRP epochs; re-run `fixread synth` "
                                 "without --no-frp");
  }

  const auto idx = index_groupings(groupings);
  std::vector<FrpEpoch> hrw, lrw;
  for (const auto& e : bundle.frp_epochs) {
    auto it = idx.label_of.find({e.sentence_id, e.token_index});
    if (it == idx.label_of.end()) continue;
    (it->second == 1 ? hrw : lrw).push_back(e);
  }
  if (hrw.size() < 2 || lrw.size() < 2) {
    throw error("need at least 2 FRP epochs per group (" + std::to_string(hrw.size()) +
                " HRW / " + std::to_string(lrw.size()) + " LRW)");
  }
  std::printf("FRP groups: %zu HRW, %zu LRW epochs\n", hrw.size(), lrw.size());

  const fs::path out{g.out};
  std::vector<double> time_ms(FrpEpoch::kSamples);
  for (int t = 0; t < FrpEpoch::kSamples; ++t) {
    time_ms[t] = (t - FrpEpoch::kOnsetIndex) * 1000.0 / 500.0;
  }

  for (int channel : o.channels) {
    const auto mean_hrw = analysis::mean_frp(hrw, channel);
    const auto mean_lrw = analysis::mean_frp(lrw, channel);
    const auto mask = analysis::pointwise_significance(hrw, lrw, channel, o.alpha);
    {
      CsvWriter csv((out / ("frp_" + std::to_string(channel) + ".csv")).string(), g.seed);
      csv.comment("pointwise two-sample t-test, alpha = " + format_double(o.alpha, 2) +
                  ", no multiple-comparison correction");
      csv.row({"time_ms", "hrw_mean", "lrw_mean", "significant"});
      for (int t = 0; t < FrpEpoch::kSamples; ++t) {
        csv.row({format_double(time_ms[t], 0), format_double(mean_hrw[t], 6),
                 format_double(mean_lrw[t], 6), mask[t] ? "1" : "0"});
      }
    }

    const auto erp_hrw = analysis::erp_image(hrw, channel, o.smooth);
    const auto erp_lrw = analysis::erp_image(lrw, channel, o.smooth);
    {
      CsvWriter csv((out / ("erpimage_" + std::to_string(channel) + ".csv")).string(),
                    g.seed);
      std::vector<std::string> header{"group", "trial"};
      for (int t = 0; t < FrpEpoch::kSamples; ++t) {
        header.push_back("t" + std::to_string(t));
      }
      csv.row(header);
      auto dump = [&](const char* name, const analysis::ErpImage& image) {
        for (std::size_t i = 0; i < image.image.rows; ++i) {
          std::vector<std::string> row{name, std::to_string(i)};
          for (int t = 0; t < FrpEpoch::kSamples; ++t) {
            row.push_back(format_double(image.image.at(i, t), 6));
          }
          csv.row(row);
        }
      };
      dump("hrw", erp_hrw);
      dump("lrw", erp_lrw);
    }

    const auto psd_hrw = analysis::welch_psd(hrw, channel);
    const auto psd_lrw = analysis::welch_psd(lrw, channel);
    {
      CsvWriter csv((out / ("psd_" + std::to_string(channel) + ".csv")).string(), g.seed);
      csv.row({"frequency_hz", "hrw_density", "lrw_density"});
      for (std::size_t k = 0; k < psd_hrw.frequencies_hz.size(); ++k) {
        csv.row({format_double(psd_hrw.frequencies_hz[k], 4),
                 format_double(psd_hrw.density[k], 9),
                 format_double(psd_lrw.density[k], 9)});
      }
    }
    {
      CsvWriter csv((out / ("psd_differences_" + std::to_string(channel) + ".csv")).string(),
                    g.seed);
      csv.row({"band_hz", "integrated_difference_uv2"});
      csv.row({"0.5-10",
               format_double(analysis::psd_band_difference(psd_hrw, psd_lrw, 0.5, 10.0), 6)});
      csv.row({"25-45",
               format_double(analysis::psd_band_difference(psd_hrw, psd_lrw, 25.0, 45.0), 6)});
    }

    if (o.svg) {
      svg::write_line_chart(
          (out / ("frp_" + std::to_string(channel) + ".svg")).string(),
          "Mean FRP, channel " + std::to_string(channel), time_ms,
          {{"HRW", "#c03030", mean_hrw}, {"LRW", "#3050c0", mean_lrw}},
          mask);
      svg::write_line_chart(
          (out / ("psd_" + std::to_string(channel) + ".svg")).string(),
          "Welch PSD, channel " + std::to_string(channel), psd_hrw.frequencies_hz,
          {{"HRW", "#c03030", psd_hrw.density}, {"LRW", "#3050c0", psd_lrw.density}});
      svg::write_matrix_heatmap(
          (out / ("erpimage_" + std::to_string(channel) + "_hrw.svg")).string(),
          "ERP image (HRW), channel " + std::to_string(channel), erp_hrw.image);
      svg::write_matrix_heatmap(
          (out / ("erpimage_" + std::to_string(channel) + "_lrw.svg")).string(),
          "ERP image (LRW), channel " + std::to_string(channel), erp_lrw.image);
    }
  }

  const auto topo = analysis::band_topography(hrw, lrw, bundle.rate_hz);
  {
    CsvWriter csv((out / "topography.csv").string(), g.seed);
    csv.row({"band", "group", "channel", "value_uv2"});
    for (int b = 0; b < kBandCount; ++b) {
      for (int c = 0; c < topo.channels; ++c) {
        csv.row({std::string{kBands[b].name}, "hrw", std::to_string(c),
                 format_double(topo.hrw[b][c], 6)});
      }
      for (int c = 0; c < topo.channels; ++c) {
        csv.row({std::string{kBands[b].name}, "lrw", std::to_string(c),
                 format_double(topo.lrw[b][c], 6)});
      }
      for (int c = 0; c < topo.channels; ++c) {
        csv.row({std::string{kBands[b].name}, "diff", std::to_string(c),
                 format_double(topo.diff[b][c], 6)});
      }
    }
  }
  if (o.svg) {
    const int columns = std::max(1, static_cast<int>(std::ceil(std::sqrt(topo.channels))));
    for (int b = 0; b < kBandCount; ++b) {
      svg::write_grid_heatmap(
          (out / ("topography_" + std::string{kBands[b].name} + "_diff.svg")).string(),
          std::string{kBands[b].name} + " band, HRW - LRW", topo.diff[b], columns);
    }
  }
  std::printf("wrote FRP artifacts to %s\n", g.out.c_str());
  return 0;
}

int cmd_report(const GlobalOptions& g, const ReportOptions& o) {
  ensure_out_dir(g.out, g.force);
  if (o.bundles.empty()) {
    throw config_error("--bundle is required (repeat for multiple subjects)");
  }
  if (o.groupings.empty()) {
    throw config_error("--groupings is required (repeat for several sources)");
  }

  const fs::path results{o.results.empty() ? g.out : o.results};
  for (const auto& [file, producer] :
       {std::pair{"cv_table.csv", "fixread train"},
        std::pair{"gaze_stats.csv", "fixread stats"}}) {
    if (!fs::exists(results / file)) {
      throw missing_artifact_error(std::string{file} + " not found in '" +
                                   results.string() + "'; run `" + producer + "` first");
    }
    fs::copy_file(results / file, fs::path{g.out} / file,
                  fs::copy_options::overwrite_existing);
  }

  std::vector<std::vector<WordGrouping>> grouping_sets;
  for (const auto& path : o.groupings) {
    grouping_sets.push_back(load_groupings_checked(path));
  }

  CsvWriter csv((fs::path{g.out} / "epoch_counts.csv").string(), g.seed);
  csv.row({"subject", "source", "hrw_epochs", "lrw_epochs", "hrw_words", "lrw_words"});
  for (const auto& bundle_path : o.bundles) {
    const auto bundle = load_bundle_checked(bundle_path, "report");
    for (const auto& groupings : grouping_sets) {
      const auto idx = index_groupings(groupings);
      long hrw_epochs = 0, lrw_epochs = 0;
      for (const auto& e : bundle.epochs) {
        auto it = idx.label_of.find({e.sentence_id, e.token_index});
        if (it == idx.label_of.end()) continue;
        (it->second == 1 ? hrw_epochs : lrw_epochs)++;
      }
      std::size_t hrw_words = 0, lrw_words = 0;
      for (const auto& grouping : groupings) {
        hrw_words += grouping.hrw.size();
        lrw_words += grouping.lrw.size();
      }
      const std::string source{
          grouping_source_id(groupings.empty() ? GroupingSource::Joint
                                               : groupings.front().source)};
      csv.row({bundle.subject_id, source, std::to_string(hrw_epochs),
               std::to_string(lrw_epochs), std::to_string(hrw_words),
               std::to_string(lrw_words)});
    }
  }
  std::printf("wrote report to %s\n", g.out.c_str());
  return 0;
}

}  // namespace fixread::cli
