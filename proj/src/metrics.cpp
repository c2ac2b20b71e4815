#include "vltrack/metrics.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "vltrack/errors.hpp"
#include "vltrack/strings.hpp"

namespace fs = std::filesystem;

namespace vltrack {

namespace {

std::vector<std::string> read_lines_checked(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open track output: " + path);
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

double percent(double fraction) { return 100.0 * fraction; }

template <size_t N>
nlohmann::json curve_to_json(const std::array<double, N>& curve) {
  return nlohmann::json(std::vector<double>(curve.begin(), curve.end()));
}

template <size_t N>
void curve_from_json(const nlohmann::json& value, std::array<double, N>& curve) {
  if (!value.is_array() || value.size() != N) {
    throw IoError("report curve must have " + std::to_string(N) + " points");
  }
  for (size_t i = 0; i < N; ++i) {
    curve[i] = value[i].get<double>();
  }
}

void write_plot_file(const std::string& path, std::span<const double> thresholds,
                     std::span<const double> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write plot file: " + path);
  }
  for (size_t i = 0; i < thresholds.size(); ++i) {
    out << format_real(thresholds[i]) << '\t' << format_real(values[i]) << '\n';
  }
}

}  // namespace

double success_threshold(int index) { return index * 0.05; }
double precision_threshold(int index) { return static_cast<double>(index); }
double norm_precision_threshold(int index) { return index * 0.01; }

TrackOutput load_track_output(const std::string& path) {
  TrackOutput output;
  output.sequence_id = fs::path(path).stem().string();
  const auto lines = read_lines_checked(path);
  int line_number = 0;
  for (const std::string& line : lines) {
    ++line_number;
    const auto parts = split(line, ',');
    if (parts.size() != 4) {
      throw IoError(path, line_number, "expected 4 comma-separated values");
    }
    double values[4];
    for (int i = 0; i < 4; ++i) {
      const auto value = parse_real(parts[i]);
      if (!value) {
        throw IoError(path, line_number, "malformed number '" + std::string(parts[i]) + "'");
      }
      values[i] = *value;
    }
    output.boxes.push_back(BoundingBox{values[0], values[1], values[2], values[3]});
  }
  return output;
}

void save_track_output(const std::string& path, const TrackOutput& output) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write track output: " + path);
  }
  for (const BoundingBox& box : output.boxes) {
    out << to_string(box) << '\n';
  }
  if (!out) {
    throw IoError("failed writing track output: " + path);
  }
}

SequenceMetrics evaluate_sequence(const SequenceAnnotation& gt, const TrackOutput& out) {
  validate(gt);
  if (out.boxes.size() != gt.gt_boxes.size()) {
    throw ValidationError("sequence '" + gt.sequence_id + "': output has " +
                          std::to_string(out.boxes.size()) + " boxes but annotation has " +
                          std::to_string(gt.gt_boxes.size()) + " frames");
  }

  SequenceMetrics metrics;
  metrics.sequence_id = gt.sequence_id;

  std::vector<double> ious;
  std::vector<double> center_errors;
  std::vector<double> norm_errors;
  for (size_t i = 0; i < gt.gt_boxes.size(); ++i) {
    if (gt.absent[i] != 0) {
      continue;  // absent frames are never scored, whatever the prediction holds
    }
    const BoundingBox& truth = gt.gt_boxes[i];
    const BoundingBox& pred = out.boxes[i];
    ious.push_back(iou(truth, pred));
    center_errors.push_back(center_distance(truth, pred));
    norm_errors.push_back(normalized_center_distance(pred, truth));
  }

  metrics.valid_frames = static_cast<int>(ious.size());
  if (metrics.valid_frames == 0) {
    return metrics;
  }
  const double n = static_cast<double>(ious.size());

  double iou_sum = 0.0;
  for (double v : ious) {
    iou_sum += v;
  }
  metrics.ao = iou_sum / n;

  for (int t = 0; t < kSuccessPoints; ++t) {
    const double tau = success_threshold(t);
    int hits = 0;
    for (double v : ious) {
      if (v > tau) {
        ++hits;
      }
    }
    metrics.success_curve[static_cast<size_t>(t)] = hits / n;
  }
  double success_sum = 0.0;
  for (double v : metrics.success_curve) {
    success_sum += v;
  }
  metrics.sr_auc = success_sum / kSuccessPoints;

  int hits_050 = 0;
  int hits_075 = 0;
  for (double v : ious) {
    if (v > 0.5) {
      ++hits_050;
    }
    if (v > 0.75) {
      ++hits_075;
    }
  }
  metrics.sr_050 = hits_050 / n;
  metrics.sr_075 = hits_075 / n;

  for (int t = 0; t < kPrecisionPoints; ++t) {
    const double threshold = precision_threshold(t);
    int hits = 0;
    for (double e : center_errors) {
      if (e <= threshold) {
        ++hits;
      }
    }
    metrics.precision_curve[static_cast<size_t>(t)] = hits / n;
  }
  metrics.pr = metrics.precision_curve[kPrecisionReportPx];

  for (int t = 0; t < kNormPrecisionPoints; ++t) {
    const double threshold = norm_precision_threshold(t);
    int hits = 0;
    for (double e : norm_errors) {
      if (e <= threshold) {
        ++hits;
      }
    }
    metrics.norm_precision_curve[static_cast<size_t>(t)] = hits / n;
  }
  double npr_sum = 0.0;
  for (double v : metrics.norm_precision_curve) {
    npr_sum += v;
  }
  metrics.npr = npr_sum / kNormPrecisionPoints;

  return metrics;
}

bool EvalReport::operator==(const EvalReport& other) const {
  auto attr_equal = [&]() {
    if (per_attribute.size() != other.per_attribute.size()) {
      return false;
    }
    for (const auto& [name, entry] : per_attribute) {
      const auto it = other.per_attribute.find(name);
      if (it == other.per_attribute.end() || entry.pr != it->second.pr ||
          entry.npr != it->second.npr || entry.sr_auc != it->second.sr_auc ||
          entry.sequence_count != it->second.sequence_count) {
        return false;
      }
    }
    return true;
  };
  auto baselines_equal = [&]() {
    if (baselines.size() != other.baselines.size()) {
      return false;
    }
    for (size_t i = 0; i < baselines.size(); ++i) {
      if (baselines[i].name != other.baselines[i].name || baselines[i].pr != other.baselines[i].pr ||
          baselines[i].npr != other.baselines[i].npr || baselines[i].sr != other.baselines[i].sr) {
        return false;
      }
    }
    return true;
  };
  return pr == other.pr && npr == other.npr && sr_auc == other.sr_auc && ao == other.ao &&
         sr_050 == other.sr_050 && sr_075 == other.sr_075 &&
         sequence_count == other.sequence_count && success_curve == other.success_curve &&
         precision_curve == other.precision_curve &&
         norm_precision_curve == other.norm_precision_curve && attr_equal() && baselines_equal();
}

EvalReport aggregate(std::span<const SequenceMetrics> records,
                     std::span<const SequenceAnnotation> annotations) {
  if (records.size() != annotations.size()) {
    throw ValidationError("aggregate: got " + std::to_string(records.size()) + " records for " +
                          std::to_string(annotations.size()) + " annotations");
  }
  for (size_t i = 0; i < records.size(); ++i) {
    if (records[i].sequence_id != annotations[i].sequence_id) {
      throw ValidationError("aggregate: record '" + records[i].sequence_id +
                            "' does not match annotation '" + annotations[i].sequence_id + "'");
    }
  }

  EvalReport report;
  std::array<double, kAttributeCount> attr_pr{};
  std::array<double, kAttributeCount> attr_npr{};
  std::array<double, kAttributeCount> attr_sr{};
  std::array<int, kAttributeCount> attr_n{};

  for (size_t i = 0; i < records.size(); ++i) {
    const SequenceMetrics& m = records[i];
    if (m.valid_frames == 0) {
      continue;
    }
    ++report.sequence_count;
    report.pr += m.pr;
    report.npr += m.npr;
    report.sr_auc += m.sr_auc;
    report.ao += m.ao;
    report.sr_050 += m.sr_050;
    report.sr_075 += m.sr_075;
    for (int t = 0; t < kSuccessPoints; ++t) {
      report.success_curve[static_cast<size_t>(t)] += m.success_curve[static_cast<size_t>(t)];
    }
    for (int t = 0; t < kPrecisionPoints; ++t) {
      report.precision_curve[static_cast<size_t>(t)] += m.precision_curve[static_cast<size_t>(t)];
    }
    for (int t = 0; t < kNormPrecisionPoints; ++t) {
      report.norm_precision_curve[static_cast<size_t>(t)] +=
          m.norm_precision_curve[static_cast<size_t>(t)];
    }
    for (int a = 0; a < kAttributeCount; ++a) {
      if (annotations[i].attributes[static_cast<size_t>(a)] == 1) {
        attr_pr[static_cast<size_t>(a)] += m.pr;
        attr_npr[static_cast<size_t>(a)] += m.npr;
        attr_sr[static_cast<size_t>(a)] += m.sr_auc;
        ++attr_n[static_cast<size_t>(a)];
      }
    }
  }

  if (report.sequence_count == 0) {
    throw ValidationError("aggregate: no sequence has scorable frames");
  }
  const double n = report.sequence_count;
  report.pr /= n;
  report.npr /= n;
  report.sr_auc /= n;
  report.ao /= n;
  report.sr_050 /= n;
  report.sr_075 /= n;
  for (double& v : report.success_curve) {
    v /= n;
  }
  for (double& v : report.precision_curve) {
    v /= n;
  }
  for (double& v : report.norm_precision_curve) {
    v /= n;
  }
  for (int a = 0; a < kAttributeCount; ++a) {
    const auto index = static_cast<size_t>(a);
    if (attr_n[index] == 0) {
      continue;  // attribute entry marked absent, not zero
    }
    AttributeMetrics entry;
    entry.pr = attr_pr[index] / attr_n[index];
    entry.npr = attr_npr[index] / attr_n[index];
    entry.sr_auc = attr_sr[index] / attr_n[index];
    entry.sequence_count = attr_n[index];
    report.per_attribute[kAttributeNames[index]] = entry;
  }
  return report;
}

ReportFormat parse_report_format(const std::string& text) {
  if (text == "tabular") {
    return ReportFormat::kTabular;
  }
  if (text == "structured") {
    return ReportFormat::kStructured;
  }
  if (text == "plotdata") {
    return ReportFormat::kPlotdata;
  }
  throw ValidationError("unknown report format '" + text +
                        "' (expected tabular, structured, or plotdata)");
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json json_report;
  json_report["pr"] = report.pr;
  json_report["npr"] = report.npr;
  json_report["sr_auc"] = report.sr_auc;
  json_report["ao"] = report.ao;
  json_report["sr_050"] = report.sr_050;
  json_report["sr_075"] = report.sr_075;
  json_report["sequence_count"] = report.sequence_count;
  json_report["success_curve"] = curve_to_json(report.success_curve);
  json_report["precision_curve"] = curve_to_json(report.precision_curve);
  json_report["norm_precision_curve"] = curve_to_json(report.norm_precision_curve);
  nlohmann::json attrs = nlohmann::json::object();
  for (const auto& [name, entry] : report.per_attribute) {
    attrs[name] = {{"pr", entry.pr},
                   {"npr", entry.npr},
                   {"sr_auc", entry.sr_auc},
                   {"sequence_count", entry.sequence_count}};
  }
  json_report["per_attribute"] = attrs;
  nlohmann::json baselines = nlohmann::json::array();
  for (const BaselineRow& row : report.baselines) {
    baselines.push_back({{"name", row.name}, {"pr", row.pr}, {"npr", row.npr}, {"sr", row.sr}});
  }
  json_report["baselines"] = baselines;
  return json_report.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  nlohmann::json json_report = nlohmann::json::parse(text, nullptr, false);
  if (json_report.is_discarded() || !json_report.is_object()) {
    throw IoError("malformed report JSON");
  }
  EvalReport report;
  report.pr = json_report.at("pr").get<double>();
  report.npr = json_report.at("npr").get<double>();
  report.sr_auc = json_report.at("sr_auc").get<double>();
  report.ao = json_report.at("ao").get<double>();
  report.sr_050 = json_report.at("sr_050").get<double>();
  report.sr_075 = json_report.at("sr_075").get<double>();
  report.sequence_count = json_report.at("sequence_count").get<int>();
  curve_from_json(json_report.at("success_curve"), report.success_curve);
  curve_from_json(json_report.at("precision_curve"), report.precision_curve);
  curve_from_json(json_report.at("norm_precision_curve"), report.norm_precision_curve);
  for (const auto& [name, entry] : json_report.at("per_attribute").items()) {
    AttributeMetrics metrics;
    metrics.pr = entry.at("pr").get<double>();
    metrics.npr = entry.at("npr").get<double>();
    metrics.sr_auc = entry.at("sr_auc").get<double>();
    metrics.sequence_count = entry.at("sequence_count").get<int>();
    report.per_attribute[name] = metrics;
  }
  for (const auto& entry : json_report.at("baselines")) {
    BaselineRow row;
    row.name = entry.at("name").get<std::string>();
    row.pr = entry.at("pr").get<double>();
    row.npr = entry.at("npr").get<double>();
    row.sr = entry.at("sr").get<double>();
    report.baselines.push_back(std::move(row));
  }
  return report;
}

std::vector<BaselineRow> load_baselines(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open baselines file: " + path);
  }
  std::vector<BaselineRow> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') {
      continue;
    }
    const auto parts = split(text, ',');
    if (parts.size() != 4) {
      throw IoError(path, line_number, "expected name,pr,npr,sr");
    }
    BaselineRow row;
    row.name = std::string(trim(parts[0]));
    const auto pr = parse_real(parts[1]);
    const auto npr = parse_real(parts[2]);
    const auto sr = parse_real(parts[3]);
    if (!pr || !npr || !sr) {
      throw IoError(path, line_number, "malformed number");
    }
    row.pr = *pr;
    row.npr = *npr;
    row.sr = *sr;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> emit_report(const EvalReport& report, ReportFormat format,
                                     const std::string& destination) {
  std::vector<std::string> written;
  switch (format) {
    case ReportFormat::kStructured: {
      std::ofstream out(destination, std::ios::binary);
      if (!out) {
        throw IoError("cannot write report: " + destination);
      }
      out << report_to_json(report);
      written.push_back(destination);
      break;
    }
    case ReportFormat::kTabular: {
      std::ofstream out(destination, std::ios::binary);
      if (!out) {
        throw IoError("cannot write report: " + destination);
      }
      out << std::fixed << std::setprecision(1);
      out << "metric            value\n";
      out << "PR  (@20px)       " << percent(report.pr) << "\n";
      out << "NPR (AUC 0..0.5)  " << percent(report.npr) << "\n";
      out << "SR  (AUC)         " << percent(report.sr_auc) << "\n";
      out << "AO                " << percent(report.ao) << "\n";
      out << "SR@0.50           " << percent(report.sr_050) << "\n";
      out << "SR@0.75           " << percent(report.sr_075) << "\n";
      out << "sequences         " << report.sequence_count << "\n";
      if (!report.per_attribute.empty()) {
        out << "\nattribute  n    PR    NPR   SR\n";
        for (const auto& name : kAttributeNames) {
          const auto it = report.per_attribute.find(name);
          if (it == report.per_attribute.end()) {
            out << name << std::string(11 - name.size(), ' ') << "-    -     -     -\n";
            continue;
          }
          out << name << std::string(11 - name.size(), ' ') << it->second.sequence_count << "    "
              << percent(it->second.pr) << "  " << percent(it->second.npr) << "  "
              << percent(it->second.sr_auc) << "\n";
        }
      }
      if (!report.baselines.empty()) {
        out << "\ncomparison         PR    NPR   SR\n";
        for (const BaselineRow& row : report.baselines) {
          std::string name = row.name;
          name.resize(std::max<size_t>(name.size(), 16), ' ');
          out << name << "   " << row.pr << "  " << row.npr << "  " << row.sr << "\n";
        }
        out << "this run           " << percent(report.pr) << "  " << percent(report.npr) << "  "
            << percent(report.sr_auc) << "\n";
      }
      written.push_back(destination);
      break;
    }
    case ReportFormat::kPlotdata: {
      fs::create_directories(destination);
      std::array<double, kSuccessPoints> success_thresholds{};
      for (int t = 0; t < kSuccessPoints; ++t) {
        success_thresholds[static_cast<size_t>(t)] = success_threshold(t);
      }
      std::array<double, kPrecisionPoints> precision_thresholds{};
      for (int t = 0; t < kPrecisionPoints; ++t) {
        precision_thresholds[static_cast<size_t>(t)] = precision_threshold(t);
      }
      std::array<double, kNormPrecisionPoints> norm_thresholds{};
      for (int t = 0; t < kNormPrecisionPoints; ++t) {
        norm_thresholds[static_cast<size_t>(t)] = norm_precision_threshold(t);
      }
      const std::string success_path = (fs::path(destination) / "success_plot.txt").string();
      const std::string precision_path = (fs::path(destination) / "precision_plot.txt").string();
      const std::string norm_path = (fs::path(destination) / "norm_precision_plot.txt").string();
      write_plot_file(success_path, success_thresholds, report.success_curve);
      write_plot_file(precision_path, precision_thresholds, report.precision_curve);
      write_plot_file(norm_path, norm_thresholds, report.norm_precision_curve);
      written = {success_path, precision_path, norm_path};
      break;
    }
  }
  return written;
}

}  // namespace vltrack
