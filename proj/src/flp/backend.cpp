#include "planact/flp/backend.hpp"

#include <cstdlib>
#include <sstream>

#include <httplib.h>

#include "planact/common/error.hpp"
#include "planact/common/sha256.hpp"

namespace planact::flp {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json entry_to_json(const TranscriptEntry& e) {
  ordered_json j;
  j["exchange"] = e.exchange;
  j["prompt_sha"] = e.prompt_sha;
  j["answer"] = e.answer;
  return j;
}

TranscriptEntry entry_from_json(const json& j) {
  try {
    return {j.at("exchange").get<std::size_t>(), j.at("prompt_sha").get<std::string>(),
            j.at("answer").get<std::string>()};
  } catch (const json::exception& e) {
    throw SchemaError(std::string("transcript entry: ") + e.what());
  }
}

std::string transcript_to_text(const std::vector<TranscriptEntry>& entries) {
  std::string out;
  for (const TranscriptEntry& e : entries) out += entry_to_json(e).dump() + "\n";
  return out;
}

std::vector<TranscriptEntry> transcript_from_text(const std::string& text) {
  std::vector<TranscriptEntry> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(entry_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw SchemaError(std::string("transcript line: ") + e.what());
    }
  }
  return out;
}

std::string LLMBackend::complete(const std::string& prompt) {
  const std::size_t exchange = transcript_.size();
  std::string text = answer(prompt, exchange);
  transcript_.push_back({exchange, sha256_hex(prompt), text});
  return text;
}

// --- scripted --------------------------------------------------------------

ScriptedBackend::ScriptedBackend(std::string scenario, Script script, std::optional<std::string> fallback)
    : scenario_(std::move(scenario)), script_(std::move(script)), fallback_(std::move(fallback)) {}

ScriptedBackend ScriptedBackend::from_json(const json& j) {
  try {
    const std::string scenario = j.at("scenario").get<std::string>();
    Script script;
    const json& answers = j.value("answers", json::array());
    for (std::size_t i = 0; i < answers.size(); ++i) script[{scenario, i}] = answers[i].get<std::string>();
    std::optional<std::string> fallback;
    if (j.contains("fallback")) fallback = j.at("fallback").get<std::string>();
    return ScriptedBackend(scenario, std::move(script), std::move(fallback));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("llm script: ") + e.what());
  }
}

std::string ScriptedBackend::answer(const std::string&, std::size_t exchange) {
  if (auto it = script_.find({scenario_, exchange}); it != script_.end()) return it->second;
  if (fallback_) return *fallback_;
  throw MissingScript("no scripted answer for " + scenario_ + " exchange " + std::to_string(exchange));
}

// --- replay ----------------------------------------------------------------

ReplayBackend::ReplayBackend(std::vector<TranscriptEntry> entries) : entries_(std::move(entries)) {}

std::string ReplayBackend::answer(const std::string& prompt, std::size_t exchange) {
  if (exchange >= entries_.size()) {
    throw MissingScript("transcript ends after " + std::to_string(entries_.size()) + " exchanges");
  }
  const TranscriptEntry& e = entries_[exchange];
  if (e.prompt_sha != sha256_hex(prompt)) {
    throw TransportError("prompt of exchange " + std::to_string(exchange) + " differs from the transcript");
  }
  return e.answer;
}

// --- http ------------------------------------------------------------------

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw SchemaError("http backend needs an endpoint");
}

std::string HttpBackend::answer(const std::string& prompt, std::size_t) {
  const std::string& url = config_.endpoint;
  const std::size_t scheme_end = url.find("://");
  const std::size_t path_at = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string origin = path_at == std::string::npos ? url : url.substr(0, path_at);
  const std::string path = path_at == std::string::npos ? "/" : url.substr(path_at);

  httplib::Client client(origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  ordered_json body;
  body["model"] = config_.model;
  body["temperature"] = 0;
  body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
  const std::string payload = body.dump();

  httplib::Result res = client.Post(path, headers, payload, "application/json");
  if (!res) res = client.Post(path, headers, payload, "application/json");
  if (!res) {
    if (res.error() == httplib::Error::Read || res.error() == httplib::Error::Write ||
        res.error() == httplib::Error::ConnectionTimeout) {
      throw Timeout("no reply from " + origin + " within " + std::to_string(config_.timeout.count()) + " s");
    }
    throw TransportError(origin + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) throw TransportError(origin + " returned HTTP " + std::to_string(res->status));
  try {
    return json::parse(res->body).at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("unexpected reply body: ") + e.what());
  }
}

}  // namespace planact::flp
