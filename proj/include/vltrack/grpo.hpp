#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vltrack {

/// Sampled responses per question; the group size the advantages normalize over.
inline constexpr int kDefaultGroupSize = 5;

/// One group of sampled rewards and, once normalized, their advantages.
struct SampleGroup {
  std::string id;
  std::vector<double> rewards;
  std::vector<double> advantages;
};

/// Group-relative advantages: (r_i - mean) / population std. Groups whose
/// population std falls below 1e-12 yield all-zero advantages. Requires at
/// least two finite rewards.
std::vector<double> group_advantages(std::span<const double> rewards);

/// Per-token policy record. Log-probabilities are natural logs of the emitted
/// token's probability; the optional distributions cover a toy vocabulary
/// slice and must each sum to 1.
struct PolicyStep {
  double logprob_current = 0.0;
  double logprob_old = 0.0;
  double logprob_base = 0.0;
  std::optional<std::vector<double>> dist_current;
  std::optional<std::vector<double>> dist_base;
};

/// KL(p || q) = sum p_i ln(p_i / q_i) with 0 ln(0/q) = 0. Throws
/// SupportMismatchError where p has mass and q does not.
double kl_categorical(std::span<const double> p, std::span<const double> q);

/// Sampled single-token KL surrogate: with delta = logprob_base -
/// logprob_current, returns exp(delta) - delta - 1 (>= 0, zero iff delta = 0).
double kl_sampled_estimate(const PolicyStep& step);

enum class KlMode { kExact, kSampled };

/// Mean over steps of ratio * advantage - beta * KL_t, where ratio =
/// exp(logprob_current - logprob_old) and KL_t comes from kl_categorical
/// (exact mode, requires full distributions) or kl_sampled_estimate. Evaluates
/// objective values for verification and logging; no gradients.
double objective_value(std::span<const PolicyStep> steps, double advantage, double beta,
                       KlMode kl_mode);

/// Line-oriented group batch files: one JSON object per line with fields
/// "id" and "rewards"; normalize_groups fills "advantages".
std::vector<SampleGroup> load_groups(const std::string& path);
void normalize_groups(std::vector<SampleGroup>& groups);
void save_groups(const std::string& path, const std::vector<SampleGroup>& groups);

}  // namespace vltrack
