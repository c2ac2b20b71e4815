#include "vltrack/model_client.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "vltrack/errors.hpp"

namespace vltrack {

namespace {

constexpr const char* kChatPath = "/v1/chat/completions";

std::string base64_encode(const std::string& bytes) {
  static const char* alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string encoded;
  encoded.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 3 <= bytes.size()) {
    const uint32_t chunk = (static_cast<uint8_t>(bytes[i]) << 16) |
                           (static_cast<uint8_t>(bytes[i + 1]) << 8) |
                           static_cast<uint8_t>(bytes[i + 2]);
    encoded.push_back(alphabet[(chunk >> 18) & 0x3F]);
    encoded.push_back(alphabet[(chunk >> 12) & 0x3F]);
    encoded.push_back(alphabet[(chunk >> 6) & 0x3F]);
    encoded.push_back(alphabet[chunk & 0x3F]);
    i += 3;
  }
  const size_t rest = bytes.size() - i;
  if (rest == 1) {
    const uint32_t chunk = static_cast<uint8_t>(bytes[i]) << 16;
    encoded.push_back(alphabet[(chunk >> 18) & 0x3F]);
    encoded.push_back(alphabet[(chunk >> 12) & 0x3F]);
    encoded.append("==");
  } else if (rest == 2) {
    const uint32_t chunk =
        (static_cast<uint8_t>(bytes[i]) << 16) | (static_cast<uint8_t>(bytes[i + 1]) << 8);
    encoded.push_back(alphabet[(chunk >> 18) & 0x3F]);
    encoded.push_back(alphabet[(chunk >> 12) & 0x3F]);
    encoded.push_back(alphabet[(chunk >> 6) & 0x3F]);
    encoded.push_back('=');
  }
  return encoded;
}

std::string image_url(const ImagePayload& image) {
  switch (image.kind) {
    case ImagePayload::Kind::kBase64:
      return "data:image/jpeg;base64," + image.value;
    case ImagePayload::Kind::kPath: {
      std::ifstream in(image.value, std::ios::binary);
      if (!in) {
        throw IoError("cannot read image file: " + image.value);
      }
      std::ostringstream bytes;
      bytes << in.rdbuf();
      return "data:image/jpeg;base64," + base64_encode(bytes.str());
    }
    case ImagePayload::Kind::kUri:
      return image.value;
  }
  return image.value;
}

std::string body_excerpt(const std::string& body) {
  constexpr size_t kLimit = 200;
  if (body.size() <= kLimit) {
    return body;
  }
  return body.substr(0, kLimit) + "...";
}

std::optional<std::string> read_env(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') {
    return std::nullopt;
  }
  return std::string(value);
}

httplib::Headers auth_headers(const EndpointConfig& config) {
  httplib::Headers headers;
  if (!config.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config.api_key);
  }
  return headers;
}

// POST with retry on transport failures and 5xx; other statuses return as-is.
httplib::Result post_with_retries(const EndpointConfig& config, const std::string& path,
                                  const std::string& body, const char* unavailable_what) {
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    httplib::Client client(config.base_url);
    client.set_connection_timeout(config.timeout_ms / 1000, (config.timeout_ms % 1000) * 1000);
    client.set_read_timeout(config.timeout_ms / 1000, (config.timeout_ms % 1000) * 1000);
    auto result = client.Post(path, auth_headers(config), body, "application/json");
    const bool retryable = !result || result->status >= 500;
    if (!retryable) {
      return result;
    }
    if (attempt + 1 < config.max_attempts) {
      const auto delay = std::chrono::milliseconds(config.backoff_base_ms) * (1 << attempt);
      std::this_thread::sleep_for(delay);
    }
  }
  throw RefinerUnavailableError(std::string(unavailable_what) + " at " + config.base_url +
                                " still failing after " + std::to_string(config.max_attempts) +
                                " attempts");
}

}  // namespace

EndpointConfig endpoint_from_env(EndpointConfig base) {
  if (auto url = read_env("REFINER_URL")) {
    base.base_url = *url;
  }
  if (auto key = read_env("REFINER_KEY")) {
    base.api_key = *key;
  }
  return base;
}

EndpointConfig tracker_endpoint_from_env(EndpointConfig base) {
  if (auto url = read_env("TRACKER_URL")) {
    base.base_url = *url;
  }
  if (auto key = read_env("TRACKER_KEY")) {
    base.api_key = *key;
  }
  return base;
}

ImagePayload image_from_ref(const std::string& uri) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(uri, ec)) {
    return ImagePayload{ImagePayload::Kind::kPath, uri};
  }
  return ImagePayload{ImagePayload::Kind::kUri, uri};
}

void validate(const RefinerRequest& request) {
  if (request.template_image.value.empty() || request.search_image.value.empty()) {
    throw ValidationError("refiner request needs both images");
  }
  if (request.system_prompt.empty()) {
    throw ValidationError("refiner request needs a system prompt");
  }
  if (request.sampling.temperature < 0.0) {
    throw ValidationError("temperature must be non-negative");
  }
  if (request.sampling.max_tokens < 1) {
    throw ValidationError("max_tokens must be positive");
  }
}

RefinerClient::RefinerClient(EndpointConfig config) : config_(std::move(config)) {
  if (config_.max_attempts < 1) {
    throw ValidationError("max_attempts must be >= 1");
  }
  if (config_.max_inflight < 1) {
    throw ValidationError("max_inflight must be >= 1");
  }
}

std::string RefinerClient::compose_request_body(const RefinerRequest& request,
                                                const std::string& model) {
  validate(request);
  nlohmann::json user_content = nlohmann::json::array();
  user_content.push_back(
      {{"type", "image_url"}, {"image_url", {{"url", image_url(request.template_image)}}}});
  user_content.push_back(
      {{"type", "image_url"}, {"image_url", {{"url", image_url(request.search_image)}}}});
  user_content.push_back(
      {{"type", "text"},
       {"text", "The first image is the template frame, the second is the current search frame. "
                "Previous target description: \"" +
                    request.initial_language +
                    "\". Decide whether the description still fits the target and reply in the "
                    "<think></think><d></d><answer></answer> format."}});

  nlohmann::json body;
  body["model"] = model;
  body["messages"] = nlohmann::json::array(
      {{{"role", "system"}, {"content", request.system_prompt}},
       {{"role", "user"}, {"content", user_content}}});
  body["temperature"] = request.sampling.temperature;
  body["max_tokens"] = request.sampling.max_tokens;
  return body.dump();
}

CoTResponse RefinerClient::refine(const RefinerRequest& request) const {
  const std::string body = compose_request_body(request, config_.model);
  auto result = post_with_retries(config_, kChatPath, body, "refiner");
  if (result->status < 200 || result->status >= 300) {
    throw EndpointError("refiner endpoint returned HTTP " + std::to_string(result->status) +
                        ": " + body_excerpt(result->body));
  }
  nlohmann::json reply = nlohmann::json::parse(result->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty() ||
      !reply["choices"][0].contains("message") ||
      !reply["choices"][0]["message"].contains("content") ||
      !reply["choices"][0]["message"]["content"].is_string()) {
    // Not a chat-completions body; treat the raw bytes as the model text.
    return parse(result->body);
  }
  return parse(reply["choices"][0]["message"]["content"].get<std::string>());
}

SampleGroupResult RefinerClient::sample_group(const RefinerRequest& request, int n) const {
  if (n < 1) {
    throw ValidationError("sample group size must be >= 1, got " + std::to_string(n));
  }
  SampleGroupResult result;
  std::vector<std::optional<CoTResponse>> slots(static_cast<size_t>(n));
  std::vector<std::string> errors(static_cast<size_t>(n));
  std::atomic<int> next{0};

  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) {
        return;
      }
      try {
        slots[static_cast<size_t>(i)] = refine(request);
      } catch (const std::exception& e) {
        errors[static_cast<size_t>(i)] = e.what();
      }
    }
  };

  const int thread_count = std::min(config_.max_inflight, n);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(thread_count));
  for (int i = 0; i < thread_count; ++i) {
    threads.emplace_back(worker);
  }
  for (std::thread& thread : threads) {
    thread.join();
  }

  for (int i = 0; i < n; ++i) {
    const auto index = static_cast<size_t>(i);
    if (slots[index]) {
      result.responses.push_back(std::move(*slots[index]));
    } else {
      result.warnings.push_back("sample " + std::to_string(i + 1) + "/" + std::to_string(n) +
                                " failed: " + errors[index]);
    }
  }
  return result;
}

RemoteRefiner::RemoteRefiner(EndpointConfig config, Sampling sampling)
    : client_(std::move(config)), sampling_(sampling) {}

CoTResponse RemoteRefiner::refine(const FrameRef& anchor, const FrameRef& current,
                                  const std::string& language, const std::string& system_prompt) {
  RefinerRequest request;
  request.template_image = image_from_ref(anchor.uri);
  request.search_image = image_from_ref(current.uri);
  request.initial_language = language;
  request.system_prompt = system_prompt;
  request.sampling = sampling_;
  return client_.refine(request);
}

RemoteTracker::RemoteTracker(EndpointConfig config) : config_(std::move(config)) {}

TrackResult RemoteTracker::track(std::span<const FrameRef> templates, const FrameRef& search,
                                 const std::string& language) {
  nlohmann::json body;
  nlohmann::json template_uris = nlohmann::json::array();
  for (const FrameRef& frame : templates) {
    template_uris.push_back(frame.uri);
  }
  body["templates"] = template_uris;
  body["search"] = search.uri;
  body["language"] = language;

  try {
    auto result = post_with_retries(config_, "/track", body.dump(), "tracker");
    if (result->status < 200 || result->status >= 300) {
      throw TrackerError("tracker endpoint returned HTTP " + std::to_string(result->status) +
                         ": " + body_excerpt(result->body));
    }
    nlohmann::json reply = nlohmann::json::parse(result->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("box") || !reply["box"].is_array() ||
        reply["box"].size() != 4) {
      throw TrackerError("tracker endpoint reply missing box: " + body_excerpt(result->body));
    }
    TrackResult tracked;
    tracked.box = BoundingBox{reply["box"][0].get<double>(), reply["box"][1].get<double>(),
                              reply["box"][2].get<double>(), reply["box"][3].get<double>()};
    tracked.confidence = reply.value("confidence", 1.0);
    validate(tracked.box, "tracker endpoint box");
    if (!(tracked.confidence >= 0.0 && tracked.confidence <= 1.0)) {
      throw TrackerError("tracker endpoint confidence outside [0, 1]: " +
                         std::to_string(tracked.confidence));
    }
    return tracked;
  } catch (const RefinerUnavailableError& e) {
    throw TrackerError(e.what());
  }
}

struct StubRefinerServer::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  mutable std::mutex mutex;
  std::vector<std::string> replies = {"<think>stub</think><d>no</d><answer></answer>"};
  std::vector<int> statuses = {200};
  int requests = 0;
  std::string last_body;
};

StubRefinerServer::StubRefinerServer(int port) : impl_(std::make_unique<Impl>()) {
  impl_->server.Post(kChatPath, [impl = impl_.get()](const httplib::Request& request,
                                                     httplib::Response& response) {
    std::lock_guard<std::mutex> lock(impl->mutex);
    impl->last_body = request.body;
    const int call = impl->requests++;
    const int status = impl->statuses[static_cast<size_t>(call) % impl->statuses.size()];
    if (status < 200 || status >= 300) {
      response.status = status;
      response.set_content("stub scripted failure", "text/plain");
      return;
    }
    const std::string& content =
        impl->replies[static_cast<size_t>(call) % impl->replies.size()];
    nlohmann::json reply;
    reply["id"] = "stub-" + std::to_string(call);
    reply["object"] = "chat.completion";
    reply["choices"] = nlohmann::json::array(
        {{{"index", 0},
          {"message", {{"role", "assistant"}, {"content", content}}},
          {"finish_reason", "stop"}}});
    response.status = 200;
    response.set_content(reply.dump(), "application/json");
  });

  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  } else if (impl_->server.bind_to_port("127.0.0.1", port)) {
    impl_->port = port;
  }
  if (impl_->port <= 0) {
    throw IoError("stub server could not bind a loopback port");
  }
  Impl* impl = impl_.get();
  impl_->thread = std::thread([impl]() { impl->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

StubRefinerServer::~StubRefinerServer() {
  impl_->server.stop();
  if (impl_->thread.joinable()) {
    impl_->thread.join();
  }
}

int StubRefinerServer::port() const { return impl_->port; }

std::string StubRefinerServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port);
}

void StubRefinerServer::set_replies(std::vector<std::string> contents) {
  if (contents.empty()) {
    throw ValidationError("stub needs at least one reply");
  }
  std::lock_guard<std::mutex> lock(impl_->mutex);
  impl_->replies = std::move(contents);
}

void StubRefinerServer::set_status_script(std::vector<int> statuses) {
  if (statuses.empty()) {
    throw ValidationError("stub needs at least one status");
  }
  std::lock_guard<std::mutex> lock(impl_->mutex);
  impl_->statuses = std::move(statuses);
}

int StubRefinerServer::request_count() const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  return impl_->requests;
}

std::string StubRefinerServer::last_request_body() const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  return impl_->last_body;
}

}  // namespace vltrack
