#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fixread/types.hpp"

namespace fixread::labeling {

struct ProviderConfig {
  std::string endpoint_url;  // OpenAI-style chat completions endpoint
  std::string model = "mock";
  std::string api_key_env = "FIXREAD_API_KEY";  // name of the env var, never logged
  int max_retries = 3;
  double timeout_s = 30.0;
  double temperature = 0.0;
  double backoff_base_s = 1.0;  // exponential backoff, factor 2

  void validate() const;
};

// Blocking completion transport. One prompt in, raw text out; retry policy
// lives in the caller. Implementations must be safe for concurrent use.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  virtual std::string name() const = 0;
};

// Real HTTP chat-completion client. The API key is read from the
// environment variable named in the config at call time.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(ProviderConfig config);
  std::string complete(const std::string& prompt) override;
  std::string name() const override;

 private:
  ProviderConfig config_;
};

struct MockBehavior {
  enum class Kind { Truthful, Adversarial, Noisy };

  Kind kind = Kind::Truthful;
  SentenceId adversarial_sentence = 0;  // answer flipped here, natural prompt only
  double noise_p = 0.0;                 // chance one response is malformed
  // Bucket fraction for the seeded HRW assignment. When this and the seed
  // match the generator's, the truthful mock reproduces the ground-truth
  // grouping exactly.
  double hrw_fraction = 0.25;

  static MockBehavior truthful();
  static MockBehavior adversarial(SentenceId k);
  static MockBehavior noisy(double p);
};

// Raw model text for one sentence in the mandated output format.
// Deterministic given (seed, sentence_id, attempt). forced_label, when
// present, simulates the reply to the corrective follow-up prompt.
std::string mock_response(const SentenceRecord& sentence,
                          const std::vector<std::string>& normalized_tokens,
                          std::uint64_t seed, const MockBehavior& behavior,
                          int attempt = 0, std::optional<int> forced_label = {});

// Offline provider. Locates the sentence by parsing its own prompt (the
// prompts embed the sentence text verbatim), so it satisfies the same
// complete(prompt) contract as the real transport.
class MockProvider : public Provider {
 public:
  MockProvider(const SessionBundle& bundle, std::uint64_t seed, MockBehavior behavior,
               std::string name = "mock");
  std::string complete(const std::string& prompt) override;
  std::string name() const override { return name_; }

 private:
  struct Entry {
    SentenceRecord sentence;
    std::vector<std::string> normalized;
  };

  std::map<std::string, Entry> by_text_;
  std::uint64_t seed_;
  MockBehavior behavior_;
  std::string name_;
  std::mutex mutex_;
  std::map<SentenceId, int> attempts_;
};

}  // namespace fixread::labeling
