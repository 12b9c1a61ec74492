#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace planact::flp {

/// One prompt/answer exchange; the prompt is kept only as its SHA-256.
struct TranscriptEntry {
  std::size_t exchange = 0;
  std::string prompt_sha;
  std::string answer;

  bool operator==(const TranscriptEntry&) const = default;
};

nlohmann::ordered_json entry_to_json(const TranscriptEntry& e);
TranscriptEntry entry_from_json(const nlohmann::json& j);
/// JSON-lines, one entry per line.
std::string transcript_to_text(const std::vector<TranscriptEntry>& entries);
std::vector<TranscriptEntry> transcript_from_text(const std::string& text);

/// Language-model client. complete() records every exchange.
class LLMBackend {
 public:
  virtual ~LLMBackend() = default;
  virtual std::string kind() const = 0;

  std::string complete(const std::string& prompt);
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  std::size_t exchanges() const { return transcript_.size(); }

 protected:
  virtual std::string answer(const std::string& prompt, std::size_t exchange) = 0;

 private:
  std::vector<TranscriptEntry> transcript_;
};

/// Canned answers keyed by (scenario, exchange index). `fallback`, when set,
/// answers every unscripted exchange.
class ScriptedBackend final : public LLMBackend {
 public:
  using Script = std::map<std::pair<std::string, std::size_t>, std::string>;

  ScriptedBackend(std::string scenario, Script script, std::optional<std::string> fallback = std::nullopt);
  /// {"scenario": id, "answers": [...], "fallback": "..."}
  static ScriptedBackend from_json(const nlohmann::json& j);

  std::string kind() const override { return "scripted"; }

 protected:
  std::string answer(const std::string& prompt, std::size_t exchange) override;

 private:
  std::string scenario_;
  Script script_;
  std::optional<std::string> fallback_;
};

/// Plays back a recorded transcript in order. A prompt whose hash differs from
/// the recorded one is a TransportError; running past the end is MissingScript.
class ReplayBackend final : public LLMBackend {
 public:
  explicit ReplayBackend(std::vector<TranscriptEntry> entries);
  std::string kind() const override { return "replay"; }

 protected:
  std::string answer(const std::string& prompt, std::size_t exchange) override;

 private:
  std::vector<TranscriptEntry> entries_;
};

struct HttpConfig {
  /// Chat-completion URL, e.g. https://api.example.com/v1/chat/completions
  std::string endpoint;
  std::string model = "gpt-4o";
  std::chrono::seconds timeout{60};
  /// Environment variable holding the bearer token.
  std::string api_key_env = "PLANACT_LLM_API_KEY";
};

/// One chat-completion POST per prompt, retried once on transport failure.
class HttpBackend final : public LLMBackend {
 public:
  explicit HttpBackend(HttpConfig config);
  std::string kind() const override { return "http"; }

 protected:
  std::string answer(const std::string& prompt, std::size_t exchange) override;

 private:
  HttpConfig config_;
};

}  // namespace planact::flp
