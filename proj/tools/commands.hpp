#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fixread::cli {

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string out;
  int jobs = 0;  // 0 = logical cores
  bool force = false;

  int effective_jobs() const;
};

struct SynthOptions {
  int sentences = 40;
  int words = 9;
  int channels = 105;
  double rate = 500.0;
  double hrw_fraction = 0.25;
  std::string class_effect = "1,1,1,1,1";  // delta,theta,alpha,beta,gamma
  int subjects = 1;
  bool no_frp = false;
};

struct MockSpec {
  std::string behavior = "truthful";  // truthful | adversarial:K | noisy:P
  std::uint64_t seed = 0;             // 0 = inherit the global seed
};

struct LabelOptionsCli {
  std::string bundle;
  std::string endpoint;     // empty = mock mode
  std::string model = "mockA";
  std::string model_b;      // non-empty enables a second model + joint
  MockSpec mock_a;
  MockSpec mock_b;
  double hrw_fraction = 0.25;
  std::string api_key_env = "FIXREAD_API_KEY";
  double timeout_s = 30.0;
  double temperature = 0.0;
  int repeats = 1;
  int retries = 3;
  double backoff_s = 0.0;  // mock default; real providers get 1.0
  std::vector<std::string> relations;
  std::vector<std::string> joint_inputs;  // --joint a.jsonl b.jsonl
};

struct FeatureOptions {
  std::string bundle;
  std::string groupings;
  int bins = 8;
  int dim = 30;
};

struct TrainOptions {
  std::string bundle;
  std::string groupings;
  std::vector<std::string> sets = {"combined", "bp", "conden", "plv"};
  std::vector<std::string> classifiers;  // empty = all 11
  int folds = 5;
  int bins = 8;
  int dim = 30;
  bool shuffle_labels = false;
};

struct StatsOptions {
  std::vector<std::string> bundles;
  std::string groupings;
};

struct FrpOptions {
  std::string bundle;
  std::string groupings;
  std::vector<int> channels = {0};
  int smooth = 10;
  double alpha = 0.05;
  bool svg = false;
};

struct ReportOptions {
  std::vector<std::string> bundles;
  std::vector<std::string> groupings;
  std::string results;  // directory holding cv_table.csv / gaze_stats.csv
};

int cmd_synth(const GlobalOptions& g, const SynthOptions& o);
int cmd_label(const GlobalOptions& g, const LabelOptionsCli& o);
int cmd_features(const GlobalOptions& g, const FeatureOptions& o);
int cmd_train(const GlobalOptions& g, const TrainOptions& o);
int cmd_stats(const GlobalOptions& g, const StatsOptions& o);
int cmd_frp(const GlobalOptions& g, const FrpOptions& o);
int cmd_report(const GlobalOptions& g, const ReportOptions& o);

}  // namespace fixread::cli
