#include "vltrack/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <utility>

#include <json.hpp>

#include "vltrack/errors.hpp"
#include "vltrack/response_format.hpp"
#include "vltrack/rng.hpp"
#include "vltrack/strings.hpp"

namespace fs = std::filesystem;

namespace vltrack {

const std::array<std::string, kAttributeCount> kAttributeNames = {
    "CM", "ROT", "DEF", "FOC", "IV", "OV", "POC", "VC", "SV", "BC", "MB", "ARC", "LR", "FM", "AS"};

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("missing annotation file: " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(line);
  }
  return lines;
}

BoundingBox parse_box_line(const std::string& path, int line_number, std::string_view line) {
  const auto parts = split(line, ',');
  if (parts.size() != 4) {
    throw IoError(path, line_number, "expected 4 comma-separated values, got " +
                                         std::to_string(parts.size()));
  }
  double values[4];
  for (int i = 0; i < 4; ++i) {
    const auto value = parse_real(parts[i]);
    if (!value) {
      throw IoError(path, line_number, "malformed number '" + std::string(parts[i]) + "'");
    }
    values[i] = *value;
  }
  const BoundingBox box{values[0], values[1], values[2], values[3]};
  if (!is_valid(box)) {
    throw IoError(path, line_number, "box must be finite with non-negative extents");
  }
  return box;
}

int parse_flag(const std::string& path, int line_number, std::string_view token) {
  const std::string_view trimmed = trim(token);
  if (trimmed == "0") {
    return 0;
  }
  if (trimmed == "1") {
    return 1;
  }
  throw IoError(path, line_number, "expected 0 or 1, got '" + std::string(token) + "'");
}

// Pair index m in [0, e(e+1)/2) decodes to (i, j) with i <= j < e,
// enumerated as m = j(j+1)/2 + i.
std::pair<uint64_t, uint64_t> decode_pair_index(uint64_t m) {
  auto j = static_cast<uint64_t>((std::sqrt(8.0 * static_cast<double>(m) + 1.0) - 1.0) / 2.0);
  while (j * (j + 1) / 2 > m) {
    --j;
  }
  while ((j + 1) * (j + 2) / 2 <= m) {
    ++j;
  }
  return {m - j * (j + 1) / 2, j};
}

struct EligiblePool {
  // Per sequence: ascending frame indices that may be sampled.
  std::vector<std::vector<int>> frames;
  std::vector<uint64_t> pair_counts;
  uint64_t total_pairs = 0;
};

template <typename Predicate>
EligiblePool collect_eligible(std::span<const SequenceAnnotation> sequences, Predicate eligible) {
  EligiblePool pool;
  pool.frames.reserve(sequences.size());
  for (const SequenceAnnotation& seq : sequences) {
    std::vector<int> indices;
    for (int i = 0; i < seq.frame_count(); ++i) {
      if (eligible(seq, i)) {
        indices.push_back(i);
      }
    }
    const auto e = static_cast<uint64_t>(indices.size());
    pool.pair_counts.push_back(e * (e + 1) / 2);
    pool.total_pairs += pool.pair_counts.back();
    pool.frames.push_back(std::move(indices));
  }
  return pool;
}

std::vector<FramePair> sample_pairs(std::span<const SequenceAnnotation> sequences,
                                    const EligiblePool& pool, int count, uint64_t seed) {
  if (count < 0) {
    throw ValidationError("pair count must be non-negative");
  }
  if (static_cast<uint64_t>(count) > pool.total_pairs) {
    throw NotEnoughSamplesError(
        "requested " + std::to_string(count) + " pairs but only " +
        std::to_string(pool.total_pairs) + " eligible pairs exist (shortfall " +
        std::to_string(static_cast<uint64_t>(count) - pool.total_pairs) + ")");
  }
  std::mt19937_64 rng(seed);
  std::set<std::pair<size_t, uint64_t>> chosen;
  std::vector<FramePair> pairs;
  pairs.reserve(static_cast<size_t>(count));
  while (pairs.size() < static_cast<size_t>(count)) {
    uint64_t draw = bounded_uniform(rng, pool.total_pairs);
    size_t seq_index = 0;
    while (draw >= pool.pair_counts[seq_index]) {
      draw -= pool.pair_counts[seq_index];
      ++seq_index;
    }
    if (!chosen.emplace(seq_index, draw).second) {
      continue;
    }
    const auto [i, j] = decode_pair_index(draw);
    const auto& frames = pool.frames[seq_index];
    const SequenceAnnotation& seq = sequences[seq_index];
    pairs.push_back(FramePair{seq.sequence_id, frames[static_cast<size_t>(i)],
                              frames[static_cast<size_t>(j)], seq.language});
  }
  return pairs;
}

nlohmann::json box_to_json(const BoundingBox& box) {
  return nlohmann::json::array({box.x, box.y, box.w, box.h});
}

BoundingBox box_from_json(const nlohmann::json& value, const std::string& path, int line_number) {
  if (!value.is_array() || value.size() != 4) {
    throw IoError(path, line_number, "box must be an array of 4 numbers");
  }
  BoundingBox box{value[0].get<double>(), value[1].get<double>(), value[2].get<double>(),
                  value[3].get<double>()};
  if (!is_valid(box)) {
    throw IoError(path, line_number, "box must be finite with non-negative extents");
  }
  return box;
}

nlohmann::json parse_record_line(const std::string& path, int line_number,
                                 const std::string& line) {
  nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
  if (record.is_discarded() || !record.is_object()) {
    throw IoError(path, line_number, "expected one JSON object per line");
  }
  return record;
}

std::string require_string(const nlohmann::json& record, const char* key, const std::string& path,
                           int line_number) {
  if (!record.contains(key) || !record[key].is_string()) {
    throw IoError(path, line_number, std::string("missing string field '") + key + "'");
  }
  return record[key].get<std::string>();
}

}  // namespace

void validate(const SequenceAnnotation& annotation) {
  if (annotation.gt_boxes.empty()) {
    throw ValidationError("sequence '" + annotation.sequence_id + "' has no frames");
  }
  if (annotation.absent.size() != annotation.gt_boxes.size()) {
    throw ValidationError("sequence '" + annotation.sequence_id + "': absent list has " +
                          std::to_string(annotation.absent.size()) + " entries for " +
                          std::to_string(annotation.gt_boxes.size()) + " frames");
  }
  for (int flag : annotation.absent) {
    if (flag != 0 && flag != 1) {
      throw ValidationError("sequence '" + annotation.sequence_id + "': absent flags must be 0/1");
    }
  }
  for (int flag : annotation.attributes) {
    if (flag != 0 && flag != 1) {
      throw ValidationError("sequence '" + annotation.sequence_id +
                            "': attribute flags must be 0/1");
    }
  }
  for (const BoundingBox& box : annotation.gt_boxes) {
    validate(box, "ground-truth box of sequence '" + annotation.sequence_id + "'");
  }
}

SequenceAnnotation load_sequence(const std::string& dir) {
  SequenceAnnotation annotation;
  annotation.sequence_id = fs::path(dir).filename().string();

  const std::string gt_path = (fs::path(dir) / "groundtruth.txt").string();
  const auto gt_lines = read_lines(gt_path);
  int line_number = 0;
  for (const std::string& line : gt_lines) {
    ++line_number;
    annotation.gt_boxes.push_back(parse_box_line(gt_path, line_number, line));
  }
  if (annotation.gt_boxes.empty()) {
    throw IoError(gt_path + ": sequence has no frames");
  }

  const std::string absent_path = (fs::path(dir) / "absent.txt").string();
  const auto absent_lines = read_lines(absent_path);
  if (absent_lines.size() != annotation.gt_boxes.size()) {
    throw IoError(absent_path + ": has " + std::to_string(absent_lines.size()) +
                  " lines but groundtruth.txt has " + std::to_string(annotation.gt_boxes.size()));
  }
  line_number = 0;
  for (const std::string& line : absent_lines) {
    ++line_number;
    annotation.absent.push_back(parse_flag(absent_path, line_number, line));
  }

  const std::string language_path = (fs::path(dir) / "language.txt").string();
  const auto language_lines = read_lines(language_path);
  if (language_lines.empty()) {
    throw IoError(language_path + ": expected one sentence");
  }
  annotation.language = language_lines.front();

  const std::string attr_path = (fs::path(dir) / "attributes.txt").string();
  const auto attr_lines = read_lines(attr_path);
  if (attr_lines.empty()) {
    throw IoError(attr_path + ": expected one line of 15 flags");
  }
  const auto attr_parts = split(attr_lines.front(), ',');
  if (attr_parts.size() != kAttributeCount) {
    throw IoError(attr_path, 1, "expected 15 comma-separated flags, got " +
                                    std::to_string(attr_parts.size()));
  }
  for (int i = 0; i < kAttributeCount; ++i) {
    annotation.attributes[static_cast<size_t>(i)] = parse_flag(attr_path, 1, attr_parts[i]);
  }

  validate(annotation);
  return annotation;
}

void save_sequence(const std::string& dir, const SequenceAnnotation& annotation) {
  validate(annotation);
  fs::create_directories(dir);

  auto open = [](const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw IoError("cannot write annotation file: " + path);
    }
    return out;
  };

  auto gt = open((fs::path(dir) / "groundtruth.txt").string());
  for (const BoundingBox& box : annotation.gt_boxes) {
    gt << to_string(box) << '\n';
  }

  auto absent = open((fs::path(dir) / "absent.txt").string());
  for (int flag : annotation.absent) {
    absent << flag << '\n';
  }

  auto language = open((fs::path(dir) / "language.txt").string());
  language << annotation.language << '\n';

  auto attrs = open((fs::path(dir) / "attributes.txt").string());
  for (int i = 0; i < kAttributeCount; ++i) {
    attrs << annotation.attributes[static_cast<size_t>(i)]
          << (i + 1 < kAttributeCount ? "," : "\n");
  }
}

std::vector<SequenceAnnotation> load_corpus(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("corpus directory not found: " + dir);
  }
  std::vector<std::string> subdirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) {
      subdirs.push_back(entry.path().string());
    }
  }
  std::sort(subdirs.begin(), subdirs.end());
  std::vector<SequenceAnnotation> sequences;
  sequences.reserve(subdirs.size());
  for (const std::string& subdir : subdirs) {
    sequences.push_back(load_sequence(subdir));
  }
  return sequences;
}

std::string frame_ref(const std::string& sequence_id, int frame_index) {
  return sequence_id + "/" + std::to_string(frame_index);
}

void validate(const SftRecord& record) {
  if (record.search_image.empty() || record.template_image.empty()) {
    throw ValidationError("sft record needs both image references");
  }
  if (parse(record.reasoning).level < 1) {
    throw ValidationError("sft reasoning must contain the three tag identifiers");
  }
}

void validate(const RlRecord& record) {
  if (record.search_image.empty() || record.template_image.empty()) {
    throw ValidationError("rl record needs both image references");
  }
  validate(record.box_template, "template box");
  validate(record.box_search, "search box");
  if (record.box_template.area() <= 0.0 || record.box_search.area() <= 0.0) {
    throw ValidationError("rl record boxes must have positive area");
  }
}

std::vector<FramePair> build_sft_samples(std::span<const SequenceAnnotation> sequences, int count,
                                         uint64_t seed) {
  const EligiblePool pool = collect_eligible(
      sequences, [](const SequenceAnnotation& seq, int i) { return seq.absent[static_cast<size_t>(i)] == 0; });
  return sample_pairs(sequences, pool, count, seed);
}

std::vector<RlRecord> build_rl_samples(std::span<const SequenceAnnotation> sequences, int count,
                                       uint64_t seed) {
  const EligiblePool pool =
      collect_eligible(sequences, [](const SequenceAnnotation& seq, int i) {
        const auto index = static_cast<size_t>(i);
        return seq.absent[index] == 0 && seq.gt_boxes[index].area() > 0.0;
      });
  const auto pairs = sample_pairs(sequences, pool, count, seed);

  std::vector<RlRecord> records;
  records.reserve(pairs.size());
  for (const FramePair& pair : pairs) {
    const auto seq_it =
        std::find_if(sequences.begin(), sequences.end(), [&](const SequenceAnnotation& seq) {
          return seq.sequence_id == pair.sequence_id;
        });
    RlRecord record;
    record.template_image = frame_ref(pair.sequence_id, pair.template_frame);
    record.search_image = frame_ref(pair.sequence_id, pair.search_frame);
    record.language = pair.language;
    record.box_template = seq_it->gt_boxes[static_cast<size_t>(pair.template_frame)];
    record.box_search = seq_it->gt_boxes[static_cast<size_t>(pair.search_frame)];
    records.push_back(std::move(record));
  }
  return records;
}

void save_sft_pairs(const std::string& path, std::span<const FramePair> pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write record file: " + path);
  }
  for (const FramePair& pair : pairs) {
    nlohmann::json record;
    record["template_image"] = frame_ref(pair.sequence_id, pair.template_frame);
    record["search_image"] = frame_ref(pair.sequence_id, pair.search_frame);
    record["language"] = pair.language;
    out << record.dump() << '\n';
  }
}

void save_sft_records(const std::string& path, std::span<const SftRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write record file: " + path);
  }
  for (const SftRecord& record : records) {
    validate(record);
    nlohmann::json json_record;
    json_record["search_image"] = record.search_image;
    json_record["template_image"] = record.template_image;
    json_record["language"] = record.language;
    json_record["reasoning"] = record.reasoning;
    out << json_record.dump() << '\n';
  }
}

std::vector<SftRecord> load_sft_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open record file: " + path);
  }
  std::vector<SftRecord> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) {
      continue;
    }
    const nlohmann::json json_record = parse_record_line(path, line_number, line);
    SftRecord record;
    record.search_image = require_string(json_record, "search_image", path, line_number);
    record.template_image = require_string(json_record, "template_image", path, line_number);
    record.language = require_string(json_record, "language", path, line_number);
    record.reasoning = require_string(json_record, "reasoning", path, line_number);
    validate(record);
    records.push_back(std::move(record));
  }
  return records;
}

void save_rl_records(const std::string& path, std::span<const RlRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write record file: " + path);
  }
  for (const RlRecord& record : records) {
    validate(record);
    nlohmann::json json_record;
    json_record["search_image"] = record.search_image;
    json_record["template_image"] = record.template_image;
    json_record["language"] = record.language;
    json_record["box_template"] = box_to_json(record.box_template);
    json_record["box_search"] = box_to_json(record.box_search);
    out << json_record.dump() << '\n';
  }
}

std::vector<RlRecord> load_rl_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open record file: " + path);
  }
  std::vector<RlRecord> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) {
      continue;
    }
    const nlohmann::json json_record = parse_record_line(path, line_number, line);
    RlRecord record;
    record.search_image = require_string(json_record, "search_image", path, line_number);
    record.template_image = require_string(json_record, "template_image", path, line_number);
    record.language = require_string(json_record, "language", path, line_number);
    if (!json_record.contains("box_template") || !json_record.contains("box_search")) {
      throw IoError(path, line_number, "missing box_template/box_search");
    }
    record.box_template = box_from_json(json_record["box_template"], path, line_number);
    record.box_search = box_from_json(json_record["box_search"], path, line_number);
    validate(record);
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace vltrack
