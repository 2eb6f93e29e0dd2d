#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include "json.hpp"

#include "fixread/classify.hpp"
#include "fixread/csv.hpp"
#include "fixread/errors.hpp"
#include "fixread/rng.hpp"

namespace fixread::classify {
namespace {

using features::FeatureTag;
using nlohmann::json;

std::uint64_t hash_bytes(std::uint64_t h, const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_doubles(std::uint64_t h, const std::vector<double>& v) {
  return hash_bytes(h, v.data(), v.size() * sizeof(double));
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Stratified assignment with one fold cursor running across classes: per
// class the spread is within one row, and the global fold sizes follow the
// ceil/floor split of the total row count.
std::vector<int> assign_folds(const std::vector<int>& labels, int folds, Rng& rng) {
  std::vector<int> assignment(labels.size(), -1);
  int cursor = 0;
  for (int cls : {kLrw, kHrw}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) rows.push_back(i);
    }
    rng.shuffle(rows);
    for (std::size_t r : rows) {
      assignment[r] = cursor;
      cursor = (cursor + 1) % folds;
    }
  }
  return assignment;
}

RowMatrix select_rows(const RowMatrix& src, const std::vector<std::size_t>& rows) {
  RowMatrix out(rows.size(), src.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(src.row(rows[i]).begin(), src.row(rows[i]).end(), out.row(i).begin());
  }
  return out;
}

struct FoldReducers {
  bool use_bp = false;
  bool use_ce = false;
  bool use_cc = false;
  features::PcaModel pca_bp;
  features::PcaModel pca_ce;
  std::vector<int> nodes;
};

int clamp_k(int want, std::size_t n_train, std::size_t dim) {
  return std::max(1, std::min<int>(want, std::min<std::size_t>(n_train - 1, dim)));
}

FoldReducers fit_reducers(const LabeledSet& set, const std::vector<std::size_t>& train,
                          FeatureTag tag, int want_k) {
  FoldReducers red;
  red.use_bp = tag == FeatureTag::Bp30 || tag == FeatureTag::Combined90;
  red.use_ce = tag == FeatureTag::CondEn30 || tag == FeatureTag::Combined90;
  red.use_cc = tag == FeatureTag::Plv30 || tag == FeatureTag::Combined90;

  if (red.use_bp) {
    red.pca_bp = features::fit_pca(select_rows(set.bp, train),
                                   clamp_k(want_k, train.size(), set.bp.cols), "BP30");
  }
  if (red.use_ce) {
    red.pca_ce = features::fit_pca(select_rows(set.cond_en, train),
                                   clamp_k(want_k, train.size(), set.cond_en.cols),
                                   "CONDEN30");
  }
  if (red.use_cc) {
    red.nodes = features::select_nodes(
        select_rows(set.clustering, train),
        std::max(1, std::min<int>(want_k, static_cast<int>(set.clustering.cols))));
  }
  return red;
}

RowMatrix reduce_rows(const LabeledSet& set, const std::vector<std::size_t>& rows,
                      const FoldReducers& red) {
  std::size_t dim = 0;
  if (red.use_bp) dim += static_cast<std::size_t>(red.pca_bp.k);
  if (red.use_ce) dim += static_cast<std::size_t>(red.pca_ce.k);
  if (red.use_cc) dim += red.nodes.size();

  RowMatrix out(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto dst = out.row(i);
    std::size_t offset = 0;
    if (red.use_bp) {
      const auto v = red.pca_bp.apply(set.bp.row(rows[i]));
      std::copy(v.begin(), v.end(), dst.begin() + offset);
      offset += v.size();
    }
    if (red.use_ce) {
      const auto v = red.pca_ce.apply(set.cond_en.row(rows[i]));
      std::copy(v.begin(), v.end(), dst.begin() + offset);
      offset += v.size();
    }
    if (red.use_cc) {
      const auto src = set.clustering.row(rows[i]);
      for (int node : red.nodes) dst[offset++] = src[node];
    }
  }
  return out;
}

std::string digest_fold_models(const FoldReducers& red, const Scaler& scaler) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = hash_doubles(h, scaler.mean);
  h = hash_doubles(h, scaler.inv_sd);
  if (red.use_bp) {
    h = hash_doubles(h, red.pca_bp.mean);
    h = hash_doubles(h, red.pca_bp.components.data);
  }
  if (red.use_ce) {
    h = hash_doubles(h, red.pca_ce.mean);
    h = hash_doubles(h, red.pca_ce.components.data);
  }
  if (red.use_cc) {
    h = hash_bytes(h, red.nodes.data(), red.nodes.size() * sizeof(int));
  }
  return hex64(h);
}

std::string_view tag_column_name(FeatureTag tag) {
  switch (tag) {
    case FeatureTag::Combined90: return "Combined";
    case FeatureTag::Bp30: return "BP+PCA";
    case FeatureTag::CondEn30: return "ConEn+PCA";
    case FeatureTag::Plv30: return "PLV+Clustering Coef.";
  }
  return "";
}

}  // namespace

CvReport cross_validate(const LabeledSet& set, const std::vector<ClassifierKind>& kinds,
                        std::uint64_t seed, const CvOptions& options) {
  const std::size_t n = set.size();
  if (options.folds < 2) {
    throw error("cross_validate: need at least 2 folds");
  }
  if (n < static_cast<std::size_t>(options.folds) * 2) {
    throw error("cross_validate: need at least " + std::to_string(options.folds * 2) +
                " rows, got " + std::to_string(n));
  }
  std::size_t per_class[2] = {0, 0};
  for (int label : set.labels) per_class[label]++;
  const std::size_t gap = per_class[0] > per_class[1] ? per_class[0] - per_class[1]
                                                      : per_class[1] - per_class[0];
  if (gap > 1) {
    throw error("cross_validate: set must be balanced (" + std::to_string(per_class[0]) +
                " vs " + std::to_string(per_class[1]) + ")");
  }

  std::vector<int> labels = set.labels;
  if (options.shuffle_labels) {
    Rng shuffle_rng(derive_seed(seed, "label-shuffle"));
    shuffle_rng.shuffle(labels);
  }

  Rng fold_rng(derive_seed(seed, "folds"));
  const std::vector<int> fold_of = assign_folds(labels, options.folds, fold_rng);

  CvReport report;
  report.subject_id = set.subject_id;
  report.tag = set.tag;
  report.seed = seed;
  report.folds = options.folds;
  report.fold_digest = hex64(hash_bytes(0xcbf29ce484222325ULL, fold_of.data(),
                                        fold_of.size() * sizeof(int)));

  std::map<ClassifierKind, std::vector<double>> scores;
  for (int f = 0; f < options.folds; ++f) {
    std::vector<std::size_t> train_rows, val_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (fold_of[i] == f ? val_rows : train_rows).push_back(i);
    }

    const FoldReducers reducers =
        fit_reducers(set, train_rows, set.tag, options.reduce_dim);
    const RowMatrix x_train_raw = reduce_rows(set, train_rows, reducers);
    const RowMatrix x_val_raw = reduce_rows(set, val_rows, reducers);
    const Scaler scaler = Scaler::fit(x_train_raw);
    const RowMatrix x_train = scaler.apply(x_train_raw);
    const RowMatrix x_val = scaler.apply(x_val_raw);
    report.fold_model_digests.push_back(digest_fold_models(reducers, scaler));

    std::vector<int> y_train, y_val;
    for (std::size_t i : train_rows) y_train.push_back(labels[i]);
    for (std::size_t i : val_rows) y_val.push_back(labels[i]);

    for (std::size_t kd = 0; kd < kinds.size(); ++kd) {
      const auto model =
          train(kinds[kd], x_train, y_train, options.hyper,
                derive_seed(seed, "train", static_cast<std::uint64_t>(f) * 131 + kd));
      const auto predicted = predict(model, x_val);
      scores[kinds[kd]].push_back(accuracy(predicted, y_val));
    }
  }

  for (ClassifierKind kind : kinds) {
    ClassifierScore sc;
    sc.kind = kind;
    sc.fold_accuracies = scores[kind];
    double mean = 0.0;
    for (double a : sc.fold_accuracies) mean += a;
    mean /= static_cast<double>(sc.fold_accuracies.size());
    double ss = 0.0;
    for (double a : sc.fold_accuracies) ss += (a - mean) * (a - mean);
    sc.mean = mean;
    sc.sd = sc.fold_accuracies.size() > 1
                ? std::sqrt(ss / static_cast<double>(sc.fold_accuracies.size() - 1))
                : 0.0;
    report.results.push_back(std::move(sc));
  }
  return report;
}

void save_cv_reports(const std::vector<CvReport>& reports, const std::string& path) {
  json out = json::array();
  for (const auto& r : reports) {
    json j;
    j["subject_id"] = r.subject_id;
    j["feature_tag"] = features::feature_tag_id(r.tag);
    j["seed"] = r.seed;
    j["folds"] = r.folds;
    j["fold_digest"] = r.fold_digest;
    j["fold_model_digests"] = r.fold_model_digests;
    json results = json::array();
    for (const auto& sc : r.results) {
      results.push_back(json{{"classifier", classifier_id(sc.kind)},
                             {"fold_accuracies", sc.fold_accuracies},
                             {"mean", sc.mean},
                             {"sd", sc.sd}});
    }
    j["results"] = std::move(results);
    out.push_back(std::move(j));
  }
  std::ofstream f(path);
  if (!f) {
    throw error("cannot open for writing: " + path);
  }
  f << out.dump(2) << "\n";
}

std::vector<CvReport> load_cv_reports(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw error("cannot open: " + path);
  }
  json in;
  try {
    f >> in;
  } catch (const json::exception& e) {
    throw malformed_record_error(path + ": " + e.what());
  }
  std::vector<CvReport> reports;
  for (const auto& j : in) {
    CvReport r;
    r.subject_id = j.at("subject_id").get<std::string>();
    r.tag = features::parse_feature_tag(j.at("feature_tag").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.folds = j.at("folds").get<int>();
    r.fold_digest = j.at("fold_digest").get<std::string>();
    r.fold_model_digests = j.at("fold_model_digests").get<std::vector<std::string>>();
    for (const auto& sj : j.at("results")) {
      ClassifierScore sc;
      sc.kind = parse_classifier(sj.at("classifier").get<std::string>());
      sc.fold_accuracies = sj.at("fold_accuracies").get<std::vector<double>>();
      sc.mean = sj.at("mean").get<double>();
      sc.sd = sj.at("sd").get<double>();
      r.results.push_back(std::move(sc));
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

void render_cv_table(const std::vector<CvReport>& reports, const std::string& path,
                     std::uint64_t seed) {
  constexpr std::array<FeatureTag, 4> kColumns = {
      FeatureTag::Combined90, FeatureTag::Bp30, FeatureTag::CondEn30,
      FeatureTag::Plv30};

  // cell = mean ± sd across subjects when several report the same tag,
  // otherwise that one report's across-fold mean ± sd
  std::map<FeatureTag, std::map<ClassifierKind, std::vector<const ClassifierScore*>>> cells;
  for (const auto& r : reports) {
    for (const auto& sc : r.results) {
      cells[r.tag][sc.kind].push_back(&sc);
    }
  }

  CsvWriter csv(path, seed);
  std::vector<std::string> header{"Classifier"};
  for (FeatureTag tag : kColumns) header.emplace_back(tag_column_name(tag));
  csv.row(header);

  for (ClassifierKind kind : kAllClassifiers) {
    bool present = false;
    for (FeatureTag tag : kColumns) {
      auto it = cells.find(tag);
      if (it != cells.end() && it->second.count(kind)) present = true;
    }
    if (!present) continue;

    std::vector<std::string> row{std::string{classifier_name(kind)}};
    for (FeatureTag tag : kColumns) {
      auto tag_it = cells.find(tag);
      if (tag_it == cells.end() || !tag_it->second.count(kind)) {
        row.emplace_back("-");
        continue;
      }
      const auto& scs = tag_it->second.at(kind);
      if (scs.size() == 1) {
        row.push_back(format_mean_sd(100.0 * scs[0]->mean, 100.0 * scs[0]->sd, 2));
      } else {
        double mean = 0.0;
        for (const auto* sc : scs) mean += sc->mean;
        mean /= static_cast<double>(scs.size());
        double ss = 0.0;
        for (const auto* sc : scs) ss += (sc->mean - mean) * (sc->mean - mean);
        const double sd = std::sqrt(ss / static_cast<double>(scs.size() - 1));
        row.push_back(format_mean_sd(100.0 * mean, 100.0 * sd, 2));
      }
    }
    csv.row(row);
  }
}

}  // namespace fixread::classify
