#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vltrack/geometry.hpp"

namespace vltrack {

inline constexpr int kAttributeCount = 15;

/// Per-sequence challenge flags, in file order.
extern const std::array<std::string, kAttributeCount> kAttributeNames;

/// One benchmark sequence: per-frame ground truth, per-frame absent flags,
/// the language sentence, and the 15 attribute flags.
struct SequenceAnnotation {
  std::string sequence_id;
  std::vector<BoundingBox> gt_boxes;
  std::vector<int> absent;  // 0 = target visible, 1 = fully occluded / out of view
  std::string language;
  std::array<int, kAttributeCount> attributes{};

  int frame_count() const { return static_cast<int>(gt_boxes.size()); }
};

/// Throws ValidationError when list lengths disagree or flags are not 0/1.
void validate(const SequenceAnnotation& annotation);

/// Loads the four annotation files (groundtruth.txt, absent.txt, language.txt,
/// attributes.txt) from a sequence directory; the directory name becomes the
/// sequence id. Unknown files in the directory are ignored.
SequenceAnnotation load_sequence(const std::string& dir);

/// Writes the four annotation files in canonical form: comma-separated
/// shortest-round-trip numbers, one record per line, trailing newline on every
/// file. load_sequence(save_sequence(...)) is byte-identical.
void save_sequence(const std::string& dir, const SequenceAnnotation& annotation);

/// Loads every subdirectory of `dir` as a sequence, sorted by id.
std::vector<SequenceAnnotation> load_corpus(const std::string& dir);

/// Frame reference string "<sequence_id>/<frame_index>", zero-based.
std::string frame_ref(const std::string& sequence_id, int frame_index);

/// A sampled template/search frame pair. template_frame <= search_frame.
struct FramePair {
  std::string sequence_id;
  int template_frame = 0;
  int search_frame = 0;
  std::string language;
};

/// Supervised pair record after reasoning text has been attached.
struct SftRecord {
  std::string search_image;
  std::string template_image;
  std::string language;
  std::string reasoning;  // full tagged reply; must parse to level >= 1
};

void validate(const SftRecord& record);

/// RL sample: a frame pair plus the two ground-truth boxes.
struct RlRecord {
  std::string search_image;
  std::string template_image;
  std::string language;
  BoundingBox box_template;
  BoundingBox box_search;
};

void validate(const RlRecord& record);

/// Samples `count` distinct template/search pairs uniformly over all eligible
/// pairs of the corpus (template index <= search index within one sequence).
/// Frames with absent = 1 are never referenced. Deterministic for a fixed
/// seed; throws NotEnoughSamplesError reporting the shortfall when the
/// eligible pool is smaller than `count`.
std::vector<FramePair> build_sft_samples(std::span<const SequenceAnnotation> sequences, int count,
                                         uint64_t seed);

/// As build_sft_samples, additionally requiring positive-area ground truth on
/// both frames and attaching the two boxes.
std::vector<RlRecord> build_rl_samples(std::span<const SequenceAnnotation> sequences, int count,
                                       uint64_t seed);

/// Line-delimited record files, one JSON object per line.
void save_sft_pairs(const std::string& path, std::span<const FramePair> pairs);
void save_sft_records(const std::string& path, std::span<const SftRecord> records);
std::vector<SftRecord> load_sft_records(const std::string& path);
void save_rl_records(const std::string& path, std::span<const RlRecord> records);
std::vector<RlRecord> load_rl_records(const std::string& path);

}  // namespace vltrack
