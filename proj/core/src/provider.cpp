#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "fixread/provider.hpp"

#include <cstdlib>

#include "httplib.h"
#include "json.hpp"

#include "fixread/errors.hpp"
#include "fixread/rng.hpp"
#include "fixread/synth.hpp"
#include "fixread/tokenize.hpp"

namespace fixread::labeling {

using nlohmann::json;

void ProviderConfig::validate() const {
  if (max_retries < 0) {
    throw config_error("provider: max_retries must be >= 0");
  }
  if (timeout_s <= 0.0) {
    throw config_error("provider: timeout must be positive");
  }
  if (backoff_base_s < 0.0) {
    throw config_error("provider: backoff base must be >= 0");
  }
}

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.endpoint_url.empty()) {
    throw config_error("provider: endpoint URL required");
  }
}

std::string HttpProvider::name() const { return config_.model; }

std::string HttpProvider::complete(const std::string& prompt) {
  const auto scheme_end = config_.endpoint_url.find("://");
  if (scheme_end == std::string::npos) {
    throw config_error("provider: endpoint URL missing scheme");
  }
  const auto path_start = config_.endpoint_url.find('/', scheme_end + 3);
  const std::string base = path_start == std::string::npos
                               ? config_.endpoint_url
                               : config_.endpoint_url.substr(0, path_start);
  const std::string path =
      path_start == std::string::npos ? "/" : config_.endpoint_url.substr(path_start);

  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw config_error("provider: environment variable " + config_.api_key_env +
                       " is not set");
  }

  json body;
  body["model"] = config_.model;
  body["temperature"] = config_.temperature;
  body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});

  httplib::Client client(base);
  client.set_connection_timeout(static_cast<time_t>(config_.timeout_s), 0);
  client.set_read_timeout(static_cast<time_t>(config_.timeout_s), 0);
  httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw transport_error("provider: request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw transport_error("provider: HTTP " + std::to_string(res->status));
  }
  try {
    json reply = json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw transport_error(std::string("provider: unexpected response shape: ") + e.what());
  }
}

MockBehavior MockBehavior::truthful() { return MockBehavior{}; }

MockBehavior MockBehavior::adversarial(SentenceId k) {
  MockBehavior b;
  b.kind = Kind::Adversarial;
  b.adversarial_sentence = k;
  return b;
}

MockBehavior MockBehavior::noisy(double p) {
  MockBehavior b;
  b.kind = Kind::Noisy;
  b.noise_p = p;
  return b;
}

std::string mock_response(const SentenceRecord& sentence,
                          const std::vector<std::string>& normalized_tokens,
                          std::uint64_t seed, const MockBehavior& behavior, int attempt,
                          std::optional<int> forced_label) {
  // malformed response (answer marker dropped) with probability noise_p,
  // decided per (seed, sentence, attempt)
  if (behavior.kind == MockBehavior::Kind::Noisy) {
    const std::uint64_t h = splitmix64(
        seed ^ splitmix64(static_cast<std::uint64_t>(sentence.sentence_id) * 2654435761ULL +
                          static_cast<std::uint64_t>(attempt) + 1));
    const double roll = static_cast<double>(h >> 11) * 0x1.0p-53;
    if (roll < behavior.noise_p) {
      return "I grouped the words but forgot the answer marker.";
    }
  }

  int answer = sentence.ground_truth;
  if (forced_label) {
    answer = *forced_label;
  } else if (behavior.kind == MockBehavior::Kind::Adversarial &&
             sentence.sentence_id == behavior.adversarial_sentence) {
    answer = 1 - answer;
  }

  const auto hrw = assign_hrw(seed, sentence.relation, normalized_tokens,
                              behavior.hrw_fraction);
  std::string high, low;
  for (std::size_t i = 0; i < normalized_tokens.size(); ++i) {
    if (normalized_tokens[i].empty()) continue;
    std::string& group = hrw[i] ? high : low;
    if (!group.empty()) group += ", ";
    group += normalized_tokens[i];
  }

  const std::string keyword = relation_keyword(sentence.relation);
  std::string out = "[" + std::to_string(answer) + "] First group (high-relevance words to '" +
                    keyword + "'): " + high + ". The second group (low-relevance words to '" +
                    keyword + "'): " + low + ".";
  return out;
}

MockProvider::MockProvider(const SessionBundle& bundle, std::uint64_t seed,
                           MockBehavior behavior, std::string name)
    : seed_(seed), behavior_(behavior), name_(std::move(name)) {
  for (const auto& s : bundle.sentences) {
    Entry e;
    e.sentence = s;
    for (const auto* t : bundle.sentence_tokens(s.sentence_id)) {
      e.normalized.push_back(t->normalized);
    }
    by_text_.emplace(s.text, std::move(e));
  }
}

std::string MockProvider::complete(const std::string& prompt) {
  static constexpr std::string_view kSentenceLead = "For this sentence, ['";
  static constexpr std::string_view kSentenceTail = "'], does this sentence contain";
  const auto lead = prompt.find(kSentenceLead);
  if (lead == std::string::npos) {
    throw transport_error("mock: prompt does not embed a sentence");
  }
  const auto text_start = lead + kSentenceLead.size();
  const auto tail = prompt.find(kSentenceTail, text_start);
  if (tail == std::string::npos) {
    throw transport_error("mock: prompt does not embed a sentence");
  }
  const std::string text = prompt.substr(text_start, tail - text_start);

  auto it = by_text_.find(text);
  if (it == by_text_.end()) {
    throw transport_error("mock: sentence not in corpus: '" + text + "'");
  }
  const Entry& entry = it->second;

  std::optional<int> forced_label;
  static constexpr std::string_view kForcedLead = "the correct answer is [";
  const auto forced = prompt.find(kForcedLead);
  if (forced != std::string::npos && forced + kForcedLead.size() < prompt.size()) {
    forced_label = prompt[forced + kForcedLead.size()] == '1' ? 1 : 0;
  }

  int attempt = 0;
  {
    std::lock_guard lock(mutex_);
    attempt = attempts_[entry.sentence.sentence_id]++;
  }
  return mock_response(entry.sentence, entry.normalized, seed_, behavior_, attempt,
                       forced_label);
}

}  // namespace fixread::labeling
