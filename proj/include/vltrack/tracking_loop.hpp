#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vltrack/dataset.hpp"
#include "vltrack/geometry.hpp"
#include "vltrack/metrics.hpp"
#include "vltrack/prompts.hpp"
#include "vltrack/response_format.hpp"

namespace vltrack {

/// Opaque handle to one frame: its zero-based position plus a reference the
/// endpoint understands (path or URI). The loop never opens frames itself.
struct FrameRef {
  int index = 0;
  std::string uri;
};

/// Frame refs for a whole annotated sequence.
std::vector<FrameRef> sequence_frames(const SequenceAnnotation& annotation);

struct TrackResult {
  BoundingBox box;
  double confidence = 1.0;
};

class TrackerPort {
 public:
  virtual ~TrackerPort() = default;
  virtual TrackResult track(std::span<const FrameRef> templates, const FrameRef& search,
                            const std::string& language) = 0;
};

class RefinerPort {
 public:
  virtual ~RefinerPort() = default;
  /// anchor is the frame of the last accepted update, current the frame under
  /// examination; language is the sentence the strategy feeds the refiner.
  virtual CoTResponse refine(const FrameRef& anchor, const FrameRef& current,
                             const std::string& language, const std::string& system_prompt) = 0;
};

/// static: never call the refiner. dynamic1: the refiner always receives the
/// initial sentence. dynamic2: the refiner receives the last accepted sentence
/// (cascaded updates). dynamic_static: refiner input as dynamic1, but the
/// tracker receives dynamic and static sentences concatenated in that order.
enum class UpdateStrategy { kStatic, kDynamic1, kDynamic2, kDynamicStatic };

UpdateStrategy parse_update_strategy(const std::string& text);
std::string to_string(UpdateStrategy strategy);

enum class TemplatePolicy { kInitialOnly, kInitialPlusRecent };

struct LoopConfig {
  int update_interval = 100;
  UpdateStrategy strategy = UpdateStrategy::kDynamic1;
  TemplatePolicy template_policy = TemplatePolicy::kInitialPlusRecent;
  /// Latest confidence must fall below this for the refiner to run at an
  /// interval tick; >= 1.0 keeps the gate always open.
  double gate_threshold = 1.0;
  std::string system_prompt = kDefaultSystemPrompt;
  std::string dynamic_static_separator = "; ";
  /// Pass-through for reward logging by callers; the loop itself does not
  /// score anything.
  double log_theta = 0.61;
  double log_weights[4] = {1.0, 1.0, 1.0, 1.0};
};

/// One refiner invocation at an interval tick. frame_index is the one-based
/// frame number t (a positive multiple of the update interval).
struct UpdateEvent {
  int frame_index = 0;
  int previous_anchor_frame = 1;
  Decision decision = Decision::kInvalid;
  int level = 0;
  std::string old_language;
  std::string new_language;
  std::string think;
  std::string error;  // non-empty when the refiner call failed
};

struct RunResult {
  TrackOutput output;  // partial when !completed
  std::vector<UpdateEvent> events;
  bool completed = true;
  std::string abort_reason;
};

/// True iff the refiner may run at the next interval tick.
bool preliminary_gate(std::span<const double> confidence_history, double threshold);

/// Frame-by-frame tracking with periodic language refreshes. Every u-th frame
/// (gate permitting) the refiner sees the anchor frame, the current frame, and
/// the strategy's input sentence; its reply replaces the dynamic language and
/// advances the anchor only when it is level 2 with decision yes. Refiner
/// failures are logged on the event and the run continues; tracker failures
/// abort the run with partial output flagged.
RunResult run(std::span<const FrameRef> frames, const std::string& initial_language,
              TrackerPort& tracker, RefinerPort* refiner, const LoopConfig& config);

/// Ground-truth-backed tracker double: returns the annotated box jittered by
/// uniform per-coordinate noise in [-noise_px, +noise_px], clamping extents at
/// zero; confidence is the overlap between the jittered and true boxes. The
/// per-frame jitter direction depends only on (seed, frame index), so runs at
/// different noise levels perturb each frame along the same direction.
class OracleTracker : public TrackerPort {
 public:
  OracleTracker(SequenceAnnotation annotation, double noise_px, uint64_t seed);
  TrackResult track(std::span<const FrameRef> templates, const FrameRef& search,
                    const std::string& language) override;

 private:
  SequenceAnnotation annotation_;
  double noise_px_;
  uint64_t seed_;
};

/// Replays canned raw replies, cycling when exhausted. Backs the CLI stub
/// refiner and loop tests; no transport involved.
class CannedRefiner : public RefinerPort {
 public:
  explicit CannedRefiner(std::vector<std::string> raw_replies);
  CoTResponse refine(const FrameRef& anchor, const FrameRef& current, const std::string& language,
                     const std::string& system_prompt) override;
  int call_count() const { return calls_; }

 private:
  std::vector<std::string> replies_;
  int calls_ = 0;
};

/// Event log: one JSON object per line.
void save_update_events(const std::string& path, std::span<const UpdateEvent> events);

}  // namespace vltrack
