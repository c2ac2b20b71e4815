#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vltrack/geometry.hpp"
#include "vltrack/response_format.hpp"

namespace vltrack {

/// Weights of the four reward components plus the IoU gate threshold.
struct RewardWeights {
  double w_format1 = 1.0;
  double w_format2 = 1.0;
  double w_iou = 1.0;
  double w_judge = 1.0;
  double theta = 0.61;
};

/// Throws ValidationError unless all weights are finite and non-negative and
/// theta lies in [0, 1].
void validate(const RewardWeights& weights);

/// Loads weights from a key=value file with keys w_format1, w_format2, w_iou,
/// w_judge, theta. Missing keys keep their defaults; unknown keys are errors.
RewardWeights load_reward_weights(const std::string& path);

struct RewardBreakdown {
  int format1 = 0;
  int format2 = 0;
  double iou_reward = 0.0;
  int judge_reward = 0;
  double overall = 0.0;
};

/// Gated overlap reward: iou(gt, pred) when it strictly exceeds theta, else 0.
double iou_reward(const BoundingBox& gt, const BoundingBox& pred, double theta);

/// 1 iff the yes/no decision matches the observed overlap change: yes requires
/// iou1 < iou2, no requires iou1 >= iou2. An invalid decision scores 0.
/// iou1 is the overlap under the initial text, iou2 under the optimized text.
int judge_reward(Decision decision, double iou1, double iou2);

/// Fills all four components and their weighted sum. iou(gt, pred_opt) serves
/// both as the gated IoU reward input and as iou2 for the judge reward; iou1
/// is supplied by the caller (it requires a tracker pass with the initial
/// text, which this module does not own).
RewardBreakdown overall_reward(const CoTResponse& resp, const BoundingBox& gt,
                               const BoundingBox& pred_opt, double iou1,
                               const RewardWeights& weights);

/// Tab-separated breakdown log, one line per sample. Header:
/// sample_id  format1  format2  iou_reward  judge_reward  overall
void write_breakdown_header(std::ostream& out);
void write_breakdown_row(std::ostream& out, const std::string& sample_id,
                         const RewardBreakdown& breakdown);

}  // namespace vltrack
