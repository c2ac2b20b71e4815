#pragma once

// Synthetic corpora and scratch directories for tests.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "vltrack/dataset.hpp"
#include "vltrack/geometry.hpp"
#include "vltrack/metrics.hpp"
#include "vltrack/rng.hpp"

namespace testsupport {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("vltrack-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string sub(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Random-walk sequence on a 640x480 canvas. absent_rate in [0,1); absent
// frames keep a zero-area placeholder box.
inline vltrack::SequenceAnnotation make_sequence(const std::string& id, int frames,
                                                 double absent_rate, std::mt19937_64& rng) {
  vltrack::SequenceAnnotation seq;
  seq.sequence_id = id;
  seq.language = "the moving target in sequence " + id;
  double x = 100 + vltrack::uniform_unit(rng) * 300;
  double y = 80 + vltrack::uniform_unit(rng) * 200;
  double w = 8 + vltrack::uniform_unit(rng) * 40;
  double h = 8 + vltrack::uniform_unit(rng) * 40;
  for (int i = 0; i < frames; ++i) {
    x += vltrack::uniform_symmetric(rng) * 6;
    y += vltrack::uniform_symmetric(rng) * 6;
    w = std::max(4.0, w + vltrack::uniform_symmetric(rng) * 2);
    h = std::max(4.0, h + vltrack::uniform_symmetric(rng) * 2);
    const bool absent = vltrack::uniform_unit(rng) < absent_rate;
    seq.absent.push_back(absent ? 1 : 0);
    if (absent) {
      seq.gt_boxes.push_back(vltrack::BoundingBox{0, 0, 0, 0});
    } else {
      seq.gt_boxes.push_back(vltrack::BoundingBox{x, y, w, h});
    }
  }
  for (auto& flag : seq.attributes) {
    flag = vltrack::uniform_unit(rng) < 0.3 ? 1 : 0;
  }
  return seq;
}

inline std::vector<vltrack::SequenceAnnotation> make_corpus(int sequences, int frames,
                                                            double absent_rate, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<vltrack::SequenceAnnotation> corpus;
  char name[16];
  for (int i = 0; i < sequences; ++i) {
    std::snprintf(name, sizeof(name), "seq%03d", i);
    corpus.push_back(make_sequence(name, frames, absent_rate, rng));
  }
  return corpus;
}

// Tracker output as a noisy copy of the ground truth; absent frames get an
// arbitrary box since they must not be scored.
inline vltrack::TrackOutput make_noisy_output(const vltrack::SequenceAnnotation& seq,
                                              double noise, std::mt19937_64& rng) {
  vltrack::TrackOutput out;
  out.sequence_id = seq.sequence_id;
  for (size_t i = 0; i < seq.gt_boxes.size(); ++i) {
    if (seq.absent[i] == 1) {
      out.boxes.push_back(vltrack::BoundingBox{-50, -50, 3, 3});
      continue;
    }
    const auto& gt = seq.gt_boxes[i];
    out.boxes.push_back(vltrack::BoundingBox{
        gt.x + vltrack::uniform_symmetric(rng) * noise,
        gt.y + vltrack::uniform_symmetric(rng) * noise,
        std::max(0.0, gt.w + vltrack::uniform_symmetric(rng) * noise),
        std::max(0.0, gt.h + vltrack::uniform_symmetric(rng) * noise)});
  }
  return out;
}

}  // namespace testsupport
