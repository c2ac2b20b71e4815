#include "vltrack/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <doctest.h>

#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "vltrack/errors.hpp"

using vltrack::BoundingBox;
using vltrack::SequenceAnnotation;
using vltrack::TrackOutput;

namespace {

TrackOutput perfect_output(const SequenceAnnotation& seq) {
  TrackOutput out;
  out.sequence_id = seq.sequence_id;
  out.boxes = seq.gt_boxes;
  return out;
}

}  // namespace

TEST_CASE("perfect tracker scores 1.0 everywhere except the strict top bin") {
  std::mt19937_64 rng(3);
  auto seq = testsupport::make_sequence("perfect", 40, 0.0, rng);
  const auto metrics = vltrack::evaluate_sequence(seq, perfect_output(seq));
  CHECK(metrics.ao == doctest::Approx(1.0));
  CHECK(metrics.sr_050 == 1.0);
  CHECK(metrics.sr_075 == 1.0);
  CHECK(metrics.pr == 1.0);
  CHECK(metrics.npr == 1.0);
  for (int t = 0; t < vltrack::kSuccessPoints - 1; ++t) {
    CHECK(metrics.success_curve[static_cast<size_t>(t)] == 1.0);
  }
  // IoU > 1.0 never holds
  CHECK(metrics.success_curve[vltrack::kSuccessPoints - 1] == 0.0);
}

TEST_CASE("offset predictions kill precision and overlap") {
  SequenceAnnotation seq;
  seq.sequence_id = "offset";
  for (int i = 0; i < 10; ++i) {
    seq.gt_boxes.push_back(BoundingBox{10.0 * i, 5, 10, 10});
    seq.absent.push_back(0);
  }
  seq.language = "x";

  TrackOutput out;
  out.sequence_id = "offset";
  for (const auto& box : seq.gt_boxes) {
    out.boxes.push_back(BoundingBox{box.x + 30, box.y, box.w, box.h});
  }
  const auto metrics = vltrack::evaluate_sequence(seq, out);
  CHECK(metrics.pr == 0.0);  // center error 30 > 20
  CHECK(metrics.ao == 0.0);  // 10-wide boxes offset by 30 are disjoint
}

TEST_CASE("one-third overlap shows up in ao but not sr@0.5") {
  SequenceAnnotation seq;
  seq.sequence_id = "third";
  for (int i = 0; i < 6; ++i) {
    seq.gt_boxes.push_back(BoundingBox{20, 20, 10, 10});
    seq.absent.push_back(0);
  }
  seq.language = "x";
  TrackOutput out;
  out.sequence_id = "third";
  for (const auto& box : seq.gt_boxes) {
    out.boxes.push_back(BoundingBox{box.x + 5, box.y, 10, 10});
  }
  const auto metrics = vltrack::evaluate_sequence(seq, out);
  CHECK(metrics.sr_050 == 0.0);
  CHECK(metrics.ao == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("length mismatch is an error") {
  SequenceAnnotation seq;
  seq.sequence_id = "s";
  seq.gt_boxes = {{0, 0, 5, 5}, {0, 0, 5, 5}};
  seq.absent = {0, 0};
  seq.language = "x";
  TrackOutput out;
  out.sequence_id = "s";
  out.boxes = {{0, 0, 5, 5}};
  CHECK_THROWS_AS(vltrack::evaluate_sequence(seq, out), vltrack::ValidationError);
}

TEST_CASE("a sequence with zero valid frames is an empty marker") {
  SequenceAnnotation seq;
  seq.sequence_id = "gone";
  seq.gt_boxes = {{0, 0, 0, 0}, {0, 0, 0, 0}};
  seq.absent = {1, 1};
  seq.language = "x";
  TrackOutput out;
  out.sequence_id = "gone";
  out.boxes = {{1, 1, 2, 2}, {3, 3, 2, 2}};
  const auto metrics = vltrack::evaluate_sequence(seq, out);
  CHECK(metrics.valid_frames == 0);
}

TEST_CASE("metrics match the brute-force oracle on random sequences") {
  std::mt19937_64 rng(77);
  auto corpus = testsupport::make_corpus(30, 120, 0.15, 500);
  std::vector<TrackOutput> outputs;
  std::vector<vltrack::SequenceMetrics> records;
  std::vector<testsupport::RefSequenceStats> reference;
  for (const auto& seq : corpus) {
    outputs.push_back(testsupport::make_noisy_output(seq, 6.0, rng));
    records.push_back(vltrack::evaluate_sequence(seq, outputs.back()));
    reference.push_back(testsupport::ref_sequence_stats(seq, outputs.back()));
  }
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(std::abs(records[i].ao - reference[i].ao) < 1e-9);
    CHECK(std::abs(records[i].sr_auc - reference[i].sr_auc) < 1e-9);
    CHECK(std::abs(records[i].pr - reference[i].pr) < 1e-9);
    CHECK(std::abs(records[i].npr - reference[i].npr) < 1e-9);
    CHECK(std::abs(records[i].sr_050 - reference[i].sr_050) < 1e-9);
    CHECK(std::abs(records[i].sr_075 - reference[i].sr_075) < 1e-9);
    for (int t = 0; t < 21; ++t) {
      CHECK(std::abs(records[i].success_curve[static_cast<size_t>(t)] -
                     reference[i].success[static_cast<size_t>(t)]) < 1e-9);
    }
  }

  const auto report = vltrack::aggregate(records, corpus);
  const auto ref_report = testsupport::ref_aggregate(reference, corpus);
  CHECK(std::abs(report.ao - ref_report.ao) < 1e-9);
  CHECK(std::abs(report.pr - ref_report.pr) < 1e-9);
  CHECK(std::abs(report.npr - ref_report.npr) < 1e-9);
  CHECK(std::abs(report.sr_auc - ref_report.sr_auc) < 1e-9);
  for (const auto& [name, entry] : report.per_attribute) {
    const auto& expected = ref_report.per_attribute.at(name);
    CHECK(std::abs(entry.pr - expected[0]) < 1e-9);
    CHECK(std::abs(entry.npr - expected[1]) < 1e-9);
    CHECK(std::abs(entry.sr_auc - expected[2]) < 1e-9);
  }
}

TEST_CASE("curves are monotone") {
  std::mt19937_64 rng(13);
  const auto corpus = testsupport::make_corpus(5, 80, 0.1, 31);
  for (const auto& seq : corpus) {
    const auto out = testsupport::make_noisy_output(seq, 8.0, rng);
    const auto metrics = vltrack::evaluate_sequence(seq, out);
    for (int t = 1; t < vltrack::kSuccessPoints; ++t) {
      CHECK(metrics.success_curve[static_cast<size_t>(t)] <=
            metrics.success_curve[static_cast<size_t>(t - 1)]);
    }
    for (int t = 1; t < vltrack::kPrecisionPoints; ++t) {
      CHECK(metrics.precision_curve[static_cast<size_t>(t)] >=
            metrics.precision_curve[static_cast<size_t>(t - 1)]);
      CHECK(metrics.norm_precision_curve[static_cast<size_t>(t)] >=
            metrics.norm_precision_curve[static_cast<size_t>(t - 1)]);
    }
  }
}

TEST_CASE("aggregation is permutation invariant and means sequences") {
  std::mt19937_64 rng(55);
  auto corpus = testsupport::make_corpus(8, 60, 0.1, 99);
  std::vector<vltrack::SequenceMetrics> records;
  for (const auto& seq : corpus) {
    records.push_back(vltrack::evaluate_sequence(seq, testsupport::make_noisy_output(seq, 4, rng)));
  }
  const auto report = vltrack::aggregate(records, corpus);

  std::vector<size_t> order(corpus.size());
  for (size_t i = 0; i < order.size(); ++i) {
    order[i] = order.size() - 1 - i;
  }
  std::vector<SequenceAnnotation> shuffled_corpus;
  std::vector<vltrack::SequenceMetrics> shuffled_records;
  for (size_t i : order) {
    shuffled_corpus.push_back(corpus[i]);
    shuffled_records.push_back(records[i]);
  }
  const auto shuffled = vltrack::aggregate(shuffled_records, shuffled_corpus);
  CHECK(report.ao == doctest::Approx(shuffled.ao).epsilon(1e-12));
  CHECK(report.sr_auc == doctest::Approx(shuffled.sr_auc).epsilon(1e-12));

  // two-sequence mean example
  vltrack::SequenceMetrics a;
  a.sequence_id = "a";
  a.valid_frames = 10;
  a.sr_auc = 0.4;
  vltrack::SequenceMetrics b;
  b.sequence_id = "b";
  b.valid_frames = 10;
  b.sr_auc = 0.6;
  SequenceAnnotation ann_a;
  ann_a.sequence_id = "a";
  ann_a.gt_boxes = {{0, 0, 1, 1}};
  ann_a.absent = {0};
  SequenceAnnotation ann_b = ann_a;
  ann_b.sequence_id = "b";
  ann_b.attributes[14] = 1;  // AS set only on b
  std::vector<vltrack::SequenceMetrics> two{a, b};
  std::vector<SequenceAnnotation> anns{ann_a, ann_b};
  const auto mean_report = vltrack::aggregate(two, anns);
  CHECK(mean_report.sr_auc == doctest::Approx(0.5));
  REQUIRE(mean_report.per_attribute.count("AS") == 1);
  CHECK(mean_report.per_attribute.at("AS").sr_auc == doctest::Approx(0.6));
  CHECK(mean_report.per_attribute.count("CM") == 0);  // absent, not zero
}

TEST_CASE("absent frames with garbage predictions change nothing") {
  std::mt19937_64 rng(200);
  auto seq = testsupport::make_sequence("masked", 50, 0.0, rng);
  auto out = testsupport::make_noisy_output(seq, 5.0, rng);
  const auto before = vltrack::evaluate_sequence(seq, out);

  // splice absent frames with invalid garbage into both
  SequenceAnnotation spliced = seq;
  TrackOutput spliced_out = out;
  for (int k = 0; k < 10; ++k) {
    const size_t at = static_cast<size_t>(k) * 5;
    spliced.gt_boxes.insert(spliced.gt_boxes.begin() + static_cast<long>(at),
                            BoundingBox{0, 0, 0, 0});
    spliced.absent.insert(spliced.absent.begin() + static_cast<long>(at), 1);
    // garbage includes outright invalid geometry; masked frames are never touched
    const BoundingBox garbage =
        k % 2 == 0 ? BoundingBox{-1e6, 4e7, 123456, 7} : BoundingBox{5, 5, -3, 2};
    spliced_out.boxes.insert(spliced_out.boxes.begin() + static_cast<long>(at), garbage);
  }
  const auto after = vltrack::evaluate_sequence(spliced, spliced_out);
  CHECK(after.valid_frames == before.valid_frames);
  CHECK(after.ao == before.ao);
  CHECK(after.sr_auc == before.sr_auc);
  CHECK(after.pr == before.pr);
  CHECK(after.npr == before.npr);
  CHECK(after.success_curve == before.success_curve);
  CHECK(after.precision_curve == before.precision_curve);
}

TEST_CASE("ao approaches the refined success grid") {
  std::mt19937_64 rng(404);
  const auto corpus = testsupport::make_corpus(6, 100, 0.0, 8);
  for (const auto& seq : corpus) {
    const auto out = testsupport::make_noisy_output(seq, 5.0, rng);
    const auto metrics = vltrack::evaluate_sequence(seq, out);
    // fine grid: mean over 1001 thresholds of the strict success fraction
    std::vector<double> ious;
    for (size_t i = 0; i < seq.gt_boxes.size(); ++i) {
      if (seq.absent[i] == 0) {
        ious.push_back(vltrack::iou(seq.gt_boxes[i], out.boxes[i]));
      }
    }
    double fine = 0.0;
    for (int t = 0; t <= 1000; ++t) {
      const double tau = t / 1000.0;
      int hits = 0;
      for (double v : ious) {
        if (v > tau) {
          ++hits;
        }
      }
      fine += static_cast<double>(hits) / static_cast<double>(ious.size());
    }
    fine /= 1001.0;
    CHECK(std::abs(metrics.ao - fine) < 0.03);
    CHECK(std::abs(metrics.sr_auc - fine) < 0.03);
  }
}

TEST_CASE("structured report round trips") {
  std::mt19937_64 rng(31);
  const auto corpus = testsupport::make_corpus(4, 40, 0.1, 77);
  std::vector<vltrack::SequenceMetrics> records;
  for (const auto& seq : corpus) {
    records.push_back(
        vltrack::evaluate_sequence(seq, testsupport::make_noisy_output(seq, 4, rng)));
  }
  auto report = vltrack::aggregate(records, corpus);
  report.baselines.push_back({"published-best", 74.1, 77.0, 63.9});
  const std::string text = vltrack::report_to_json(report);
  const auto loaded = vltrack::report_from_json(text);
  CHECK(loaded == report);
}

TEST_CASE("baseline rows parse from the comparison file") {
  testsupport::TempDir dir("baselines");
  const std::string path = dir.sub("rows.csv");
  {
    std::ofstream out(path);
    out << "# name,pr,npr,sr\n";
    out << "published-best,74.1,77.0,63.9\n";
    out << "runner-up,72.5,75.8,62.8\n";
  }
  const auto rows = vltrack::load_baselines(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].name == "published-best");
  CHECK(rows[0].pr == 74.1);
  CHECK(rows[0].npr == 77.0);
  CHECK(rows[0].sr == 63.9);
}

TEST_CASE("plotdata emits the exact grid sizes") {
  testsupport::TempDir dir("plotdata");
  std::mt19937_64 rng(3);
  const auto corpus = testsupport::make_corpus(2, 30, 0.0, 5);
  std::vector<vltrack::SequenceMetrics> records;
  for (const auto& seq : corpus) {
    records.push_back(
        vltrack::evaluate_sequence(seq, testsupport::make_noisy_output(seq, 3, rng)));
  }
  const auto report = vltrack::aggregate(records, corpus);
  const auto files = vltrack::emit_report(report, vltrack::ReportFormat::kPlotdata, dir.str());
  REQUIRE(files.size() == 3);
  auto count_lines = [](const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    int lines = 0;
    std::string line;
    while (std::getline(in, line)) {
      ++lines;
    }
    return lines;
  };
  CHECK(count_lines(files[0]) == 21);
  CHECK(count_lines(files[1]) == 51);
  CHECK(count_lines(files[2]) == 51);
}
