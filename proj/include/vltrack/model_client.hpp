#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vltrack/response_format.hpp"
#include "vltrack/tracking_loop.hpp"

namespace vltrack {

/// Endpoint address and transport policy. REFINER_URL / REFINER_KEY override
/// base_url / api_key when set (see endpoint_from_env).
struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8000";
  std::string api_key;
  std::string model = "refiner";
  int timeout_ms = 30000;
  int max_attempts = 3;
  int backoff_base_ms = 500;
  int max_inflight = 4;
};

EndpointConfig endpoint_from_env(EndpointConfig base = {});

struct ImagePayload {
  enum class Kind { kPath, kBase64, kUri };
  Kind kind = Kind::kUri;
  std::string value;
};

/// Payload from a loop frame reference: existing readable files are inlined
/// as base64, anything else passes through verbatim.
ImagePayload image_from_ref(const std::string& uri);

struct Sampling {
  double temperature = 1.0;
  int max_tokens = 512;
};

struct RefinerRequest {
  ImagePayload template_image;
  ImagePayload search_image;
  std::string initial_language;
  std::string system_prompt;
  Sampling sampling;
};

void validate(const RefinerRequest& request);

struct SampleGroupResult {
  std::vector<CoTResponse> responses;
  std::vector<std::string> warnings;  // one entry per failed exchange
};

/// Chat-completions client for the refiner endpoint. Shareable across
/// threads; every exchange uses its own connection.
class RefinerClient {
 public:
  explicit RefinerClient(EndpointConfig config);

  /// One exchange: system prompt plus a user turn carrying both images and
  /// the update instruction. Transport failures and 5xx statuses retry with
  /// exponential backoff (max_attempts, backoff_base_ms) before
  /// RefinerUnavailableError; other non-2xx statuses raise EndpointError with
  /// a body excerpt. A reply that fails the tag grammar comes back as a
  /// level-0 CoTResponse, never an exception.
  CoTResponse refine(const RefinerRequest& request) const;

  /// n independent exchanges, order preserved, parallelized up to
  /// max_inflight. Failed exchanges are dropped with a warning.
  SampleGroupResult sample_group(const RefinerRequest& request, int n) const;

  /// Deterministic request body (the wire contract; frozen by golden files).
  static std::string compose_request_body(const RefinerRequest& request,
                                          const std::string& model);

  const EndpointConfig& config() const { return config_; }

 private:
  EndpointConfig config_;
};

/// RefinerPort over a remote endpoint.
class RemoteRefiner : public RefinerPort {
 public:
  RemoteRefiner(EndpointConfig config, Sampling sampling = {});
  CoTResponse refine(const FrameRef& anchor, const FrameRef& current, const std::string& language,
                     const std::string& system_prompt) override;

 private:
  RefinerClient client_;
  Sampling sampling_;
};

/// TrackerPort over a remote endpoint: POST {base}/track with
/// {"templates": [...], "search": ..., "language": ...} expecting
/// {"box": [x,y,w,h], "confidence": c}. TRACKER_URL / TRACKER_KEY override.
class RemoteTracker : public TrackerPort {
 public:
  explicit RemoteTracker(EndpointConfig config);
  TrackResult track(std::span<const FrameRef> templates, const FrameRef& search,
                    const std::string& language) override;

 private:
  EndpointConfig config_;
};

EndpointConfig tracker_endpoint_from_env(EndpointConfig base = {});

/// Deterministic in-process chat-completions stub bound to a loopback
/// ephemeral port. Replies and HTTP statuses replay from scripts (cycled);
/// requests are recorded for golden assertions.
class StubRefinerServer {
 public:
  /// port 0 binds an ephemeral loopback port.
  explicit StubRefinerServer(int port = 0);
  ~StubRefinerServer();
  StubRefinerServer(const StubRefinerServer&) = delete;
  StubRefinerServer& operator=(const StubRefinerServer&) = delete;

  int port() const;
  std::string base_url() const;

  void set_replies(std::vector<std::string> contents);
  void set_status_script(std::vector<int> statuses);

  int request_count() const;
  std::string last_request_body() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vltrack
