#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vltrack/dataset.hpp"
#include "vltrack/geometry.hpp"

namespace vltrack {

/// One tracker run over one sequence, one box per frame.
struct TrackOutput {
  std::string sequence_id;
  std::vector<BoundingBox> boxes;
};

/// Loads "<sequence_id>.txt" (same grammar as groundtruth.txt).
TrackOutput load_track_output(const std::string& path);
void save_track_output(const std::string& path, const TrackOutput& output);

inline constexpr int kSuccessPoints = 21;       // IoU thresholds 0, 0.05, ..., 1.0
inline constexpr int kPrecisionPoints = 51;     // center error thresholds 0..50 px
inline constexpr int kNormPrecisionPoints = 51; // normalized thresholds 0..0.5
inline constexpr int kPrecisionReportPx = 20;

double success_threshold(int index);         // index * 0.05
double precision_threshold(int index);       // index * 1 px
double norm_precision_threshold(int index);  // index * 0.01

/// Per-sequence metrics over frames with absent = 0. A sequence with zero
/// such frames is an empty marker (valid_frames = 0) and is skipped by
/// aggregation.
struct SequenceMetrics {
  std::string sequence_id;
  int valid_frames = 0;
  double ao = 0.0;      // mean IoU
  double sr_auc = 0.0;  // mean of the 21-point success curve
  double sr_050 = 0.0;  // fraction with IoU > 0.5
  double sr_075 = 0.0;  // fraction with IoU > 0.75
  double pr = 0.0;      // fraction with center error <= 20 px
  double npr = 0.0;     // mean of the 51-point normalized precision curve
  std::array<double, kSuccessPoints> success_curve{};
  std::array<double, kPrecisionPoints> precision_curve{};
  std::array<double, kNormPrecisionPoints> norm_precision_curve{};
};

/// Success uses strict IoU > tau; precision curves use center error <= threshold.
SequenceMetrics evaluate_sequence(const SequenceAnnotation& gt, const TrackOutput& out);

struct AttributeMetrics {
  double pr = 0.0;
  double npr = 0.0;
  double sr_auc = 0.0;
  int sequence_count = 0;
};

/// Published comparison row (percent scale, e.g. 74.1).
struct BaselineRow {
  std::string name;
  double pr = 0.0;
  double npr = 0.0;
  double sr = 0.0;
};

/// Dataset-level report: unweighted means over non-empty sequences; attribute
/// entries average only sequences whose flag is set and are absent (missing
/// from the map) when no sequence carries the flag.
struct EvalReport {
  double pr = 0.0;
  double npr = 0.0;
  double sr_auc = 0.0;
  double ao = 0.0;
  double sr_050 = 0.0;
  double sr_075 = 0.0;
  int sequence_count = 0;
  std::array<double, kSuccessPoints> success_curve{};
  std::array<double, kPrecisionPoints> precision_curve{};
  std::array<double, kNormPrecisionPoints> norm_precision_curve{};
  std::map<std::string, AttributeMetrics> per_attribute;
  std::vector<BaselineRow> baselines;

  bool operator==(const EvalReport& other) const;
};

/// Records and annotations pair up by sequence id.
EvalReport aggregate(std::span<const SequenceMetrics> records,
                     std::span<const SequenceAnnotation> annotations);

enum class ReportFormat { kTabular, kStructured, kPlotdata };

ReportFormat parse_report_format(const std::string& text);

/// tabular -> human-readable table at `destination` (a file path);
/// structured -> JSON at `destination`; plotdata -> success_plot.txt,
/// precision_plot.txt, norm_precision_plot.txt under `destination` (a
/// directory). Returns the paths written.
std::vector<std::string> emit_report(const EvalReport& report, ReportFormat format,
                                     const std::string& destination);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

/// Parses "name,pr,npr,sr" rows (percent scale); '#' starts a comment.
std::vector<BaselineRow> load_baselines(const std::string& path);

}  // namespace vltrack
