#include "vltrack/reward.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "vltrack/errors.hpp"
#include "vltrack/strings.hpp"

namespace vltrack {

void validate(const RewardWeights& weights) {
  const double values[] = {weights.w_format1, weights.w_format2, weights.w_iou, weights.w_judge};
  for (double w : values) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError("reward weights must be finite and non-negative, got " +
                            format_real(w));
    }
  }
  if (!std::isfinite(weights.theta) || weights.theta < 0.0 || weights.theta > 1.0) {
    throw ValidationError("theta must lie in [0, 1], got " + format_real(weights.theta));
  }
}

RewardWeights load_reward_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open reward config: " + path);
  }
  RewardWeights weights;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') {
      continue;
    }
    const size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw IoError(path, line_number, "expected key=value");
    }
    const std::string key(trim(text.substr(0, eq)));
    const auto value = parse_real(text.substr(eq + 1));
    if (!value) {
      throw IoError(path, line_number, "expected a number after '='");
    }
    if (key == "w_format1") {
      weights.w_format1 = *value;
    } else if (key == "w_format2") {
      weights.w_format2 = *value;
    } else if (key == "w_iou") {
      weights.w_iou = *value;
    } else if (key == "w_judge") {
      weights.w_judge = *value;
    } else if (key == "theta") {
      weights.theta = *value;
    } else {
      throw IoError(path, line_number, "unknown key '" + key + "'");
    }
  }
  validate(weights);
  return weights;
}

double iou_reward(const BoundingBox& gt, const BoundingBox& pred, double theta) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > 1.0) {
    throw ValidationError("theta must lie in [0, 1], got " + format_real(theta));
  }
  const double overlap = iou(gt, pred);
  return overlap > theta ? overlap : 0.0;
}

int judge_reward(Decision decision, double iou1, double iou2) {
  for (double v : {iou1, iou2}) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ValidationError("IoU values must lie in [0, 1], got " + format_real(v));
    }
  }
  if (decision == Decision::kYes && iou1 < iou2) {
    return 1;
  }
  if (decision == Decision::kNo && iou1 >= iou2) {
    return 1;
  }
  return 0;
}

RewardBreakdown overall_reward(const CoTResponse& resp, const BoundingBox& gt,
                               const BoundingBox& pred_opt, double iou1,
                               const RewardWeights& weights) {
  validate(weights);
  RewardBreakdown breakdown;
  const FormatRewards formats = format_rewards(resp);
  breakdown.format1 = formats.format1;
  breakdown.format2 = formats.format2;
  breakdown.iou_reward = iou_reward(gt, pred_opt, weights.theta);
  const double iou2 = iou(gt, pred_opt);
  breakdown.judge_reward = judge_reward(resp.decision, iou1, iou2);
  breakdown.overall = weights.w_format1 * breakdown.format1 +
                      weights.w_format2 * breakdown.format2 +
                      weights.w_iou * breakdown.iou_reward +
                      weights.w_judge * breakdown.judge_reward;
  return breakdown;
}

void write_breakdown_header(std::ostream& out) {
  out << "sample_id\tformat1\tformat2\tiou_reward\tjudge_reward\toverall\n";
}

void write_breakdown_row(std::ostream& out, const std::string& sample_id,
                         const RewardBreakdown& breakdown) {
  out << sample_id << '\t' << breakdown.format1 << '\t' << breakdown.format2 << '\t'
      << format_real(breakdown.iou_reward) << '\t' << breakdown.judge_reward << '\t'
      << format_real(breakdown.overall) << '\n';
}

}  // namespace vltrack
