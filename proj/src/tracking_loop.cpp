#include "vltrack/tracking_loop.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <json.hpp>

#include "vltrack/errors.hpp"
#include "vltrack/rng.hpp"

namespace vltrack {

namespace {

// Distinct RNG stream per (seed, frame); splitmix64 finalizer for dispersion.
uint64_t mix_seed(uint64_t seed, int frame_index) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<uint64_t>(frame_index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<FrameRef> sequence_frames(const SequenceAnnotation& annotation) {
  std::vector<FrameRef> frames;
  frames.reserve(annotation.gt_boxes.size());
  for (int i = 0; i < annotation.frame_count(); ++i) {
    frames.push_back(FrameRef{i, frame_ref(annotation.sequence_id, i)});
  }
  return frames;
}

UpdateStrategy parse_update_strategy(const std::string& text) {
  if (text == "static") {
    return UpdateStrategy::kStatic;
  }
  if (text == "dynamic1") {
    return UpdateStrategy::kDynamic1;
  }
  if (text == "dynamic2") {
    return UpdateStrategy::kDynamic2;
  }
  if (text == "dynamic_static" || text == "dynamic+static") {
    return UpdateStrategy::kDynamicStatic;
  }
  throw ValidationError("unknown update strategy '" + text +
                        "' (expected static, dynamic1, dynamic2, or dynamic_static)");
}

std::string to_string(UpdateStrategy strategy) {
  switch (strategy) {
    case UpdateStrategy::kStatic:
      return "static";
    case UpdateStrategy::kDynamic1:
      return "dynamic1";
    case UpdateStrategy::kDynamic2:
      return "dynamic2";
    case UpdateStrategy::kDynamicStatic:
      return "dynamic_static";
  }
  return "static";
}

bool preliminary_gate(std::span<const double> confidence_history, double threshold) {
  if (confidence_history.empty()) {
    throw ValidationError("preliminary gate needs a non-empty confidence history");
  }
  if (threshold >= 1.0) {
    return true;
  }
  return confidence_history.back() < threshold;
}

RunResult run(std::span<const FrameRef> frames, const std::string& initial_language,
              TrackerPort& tracker, RefinerPort* refiner, const LoopConfig& config) {
  if (frames.empty()) {
    throw ValidationError("tracking run needs at least one frame");
  }
  if (config.update_interval < 1) {
    throw ValidationError("update interval must be >= 1, got " +
                          std::to_string(config.update_interval));
  }
  if (config.strategy != UpdateStrategy::kStatic && refiner == nullptr) {
    throw ValidationError("strategy " + to_string(config.strategy) + " needs a refiner");
  }

  RunResult result;
  result.output.boxes.reserve(frames.size());

  std::string dynamic_language = initial_language;
  int anchor = 1;  // one-based frame of the last accepted update
  std::vector<double> confidence_history;
  confidence_history.reserve(frames.size());

  const int frame_total = static_cast<int>(frames.size());
  for (int t = 1; t <= frame_total; ++t) {
    const FrameRef& search = frames[static_cast<size_t>(t - 1)];

    FrameRef templates[3];
    if (config.template_policy == TemplatePolicy::kInitialOnly) {
      templates[0] = templates[1] = templates[2] = frames[0];
    } else {
      templates[0] = frames[0];
      templates[1] = frames[static_cast<size_t>(anchor - 1)];
      templates[2] = frames[static_cast<size_t>(std::max(t - 2, 0))];
    }

    std::string tracker_language;
    switch (config.strategy) {
      case UpdateStrategy::kStatic:
        tracker_language = initial_language;
        break;
      case UpdateStrategy::kDynamic1:
      case UpdateStrategy::kDynamic2:
        tracker_language = dynamic_language;
        break;
      case UpdateStrategy::kDynamicStatic:
        tracker_language = dynamic_language + config.dynamic_static_separator + initial_language;
        break;
    }

    TrackResult tracked;
    try {
      tracked = tracker.track(templates, search, tracker_language);
    } catch (const std::exception& e) {
      result.completed = false;
      result.abort_reason = e.what();
      return result;
    }
    result.output.boxes.push_back(tracked.box);
    confidence_history.push_back(tracked.confidence);

    const bool interval_tick = (t % config.update_interval) == 0;
    if (config.strategy == UpdateStrategy::kStatic || !interval_tick ||
        !preliminary_gate(confidence_history, config.gate_threshold)) {
      continue;
    }

    UpdateEvent event;
    event.frame_index = t;
    event.previous_anchor_frame = anchor;
    event.old_language = dynamic_language;
    event.new_language = dynamic_language;

    const std::string& refiner_language =
        config.strategy == UpdateStrategy::kDynamic2 ? dynamic_language : initial_language;
    try {
      const CoTResponse reply = refiner->refine(frames[static_cast<size_t>(anchor - 1)], search,
                                                refiner_language, config.system_prompt);
      event.decision = reply.decision;
      event.level = reply.level;
      event.think = reply.think;
      if (reply.level == 2 && reply.decision == Decision::kYes) {
        dynamic_language = reply.answer;
        event.new_language = dynamic_language;
        anchor = t;
      }
    } catch (const std::exception& e) {
      event.error = e.what();
    }
    result.events.push_back(std::move(event));
  }
  return result;
}

OracleTracker::OracleTracker(SequenceAnnotation annotation, double noise_px, uint64_t seed)
    : annotation_(std::move(annotation)), noise_px_(noise_px), seed_(seed) {
  validate(annotation_);
  if (noise_px_ < 0.0) {
    throw ValidationError("noise_px must be non-negative");
  }
}

TrackResult OracleTracker::track(std::span<const FrameRef> templates, const FrameRef& search,
                                 const std::string& language) {
  (void)templates;
  (void)language;
  if (search.index < 0 || search.index >= annotation_.frame_count()) {
    throw TrackerError("frame index " + std::to_string(search.index) +
                       " outside sequence '" + annotation_.sequence_id + "'");
  }
  const BoundingBox& truth = annotation_.gt_boxes[static_cast<size_t>(search.index)];
  std::mt19937_64 rng(mix_seed(seed_, search.index));
  const double dx = uniform_symmetric(rng) * noise_px_;
  const double dy = uniform_symmetric(rng) * noise_px_;
  const double dw = uniform_symmetric(rng) * noise_px_;
  const double dh = uniform_symmetric(rng) * noise_px_;
  TrackResult result;
  result.box = BoundingBox{truth.x + dx, truth.y + dy, std::max(0.0, truth.w + dw),
                           std::max(0.0, truth.h + dh)};
  result.confidence = iou(truth, result.box);
  return result;
}

CannedRefiner::CannedRefiner(std::vector<std::string> raw_replies)
    : replies_(std::move(raw_replies)) {
  if (replies_.empty()) {
    throw ValidationError("canned refiner needs at least one reply");
  }
}

CoTResponse CannedRefiner::refine(const FrameRef& anchor, const FrameRef& current,
                                  const std::string& language, const std::string& system_prompt) {
  (void)anchor;
  (void)current;
  (void)language;
  (void)system_prompt;
  const std::string& raw = replies_[static_cast<size_t>(calls_) % replies_.size()];
  ++calls_;
  return parse(raw);
}

void save_update_events(const std::string& path, std::span<const UpdateEvent> events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write event log: " + path);
  }
  for (const UpdateEvent& event : events) {
    nlohmann::json record;
    record["frame_index"] = event.frame_index;
    record["previous_anchor_frame"] = event.previous_anchor_frame;
    record["decision"] = to_string(event.decision);
    record["level"] = event.level;
    record["old_language"] = event.old_language;
    record["new_language"] = event.new_language;
    record["think"] = event.think;
    if (!event.error.empty()) {
      record["error"] = event.error;
    }
    out << record.dump() << '\n';
  }
}

}  // namespace vltrack
