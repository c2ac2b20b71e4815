#include "vltrack/grpo.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "vltrack/errors.hpp"
#include "vltrack/strings.hpp"

namespace vltrack {

namespace {

constexpr double kStdEpsilon = 1e-12;
constexpr double kDistributionSumTolerance = 1e-9;

void validate_distribution(std::span<const double> dist, const char* name) {
  double sum = 0.0;
  for (double p : dist) {
    if (!std::isfinite(p) || p < 0.0) {
      throw ValidationError(std::string(name) + " entries must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionSumTolerance) {
    throw ValidationError(std::string(name) + " must sum to 1, got " + format_real(sum));
  }
}

void validate_logprob(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
  if (value > 0.0) {
    throw ValidationError(std::string(name) + " is a log-probability and must be <= 0, got " +
                          format_real(value));
  }
}

}  // namespace

std::vector<double> group_advantages(std::span<const double> rewards) {
  if (rewards.size() < 2) {
    throw GroupTooSmallError("advantage group needs at least 2 rewards, got " +
                             std::to_string(rewards.size()));
  }
  double mean = 0.0;
  for (double r : rewards) {
    if (!std::isfinite(r)) {
      throw ValidationError("rewards must be finite");
    }
    mean += r;
  }
  mean /= static_cast<double>(rewards.size());

  double variance = 0.0;
  for (double r : rewards) {
    const double d = r - mean;
    variance += d * d;
  }
  variance /= static_cast<double>(rewards.size());
  const double std_pop = std::sqrt(variance);

  std::vector<double> advantages(rewards.size(), 0.0);
  if (std_pop < kStdEpsilon) {
    return advantages;
  }
  for (size_t i = 0; i < rewards.size(); ++i) {
    advantages[i] = (rewards[i] - mean) / std_pop;
  }
  return advantages;
}

double kl_categorical(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ValidationError("distributions must have equal length, got " +
                          std::to_string(p.size()) + " and " + std::to_string(q.size()));
  }
  if (p.empty()) {
    throw ValidationError("distributions must be non-empty");
  }
  validate_distribution(p, "p");
  validate_distribution(q, "q");
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) {
      continue;
    }
    if (q[i] == 0.0) {
      throw SupportMismatchError("support mismatch at index " + std::to_string(i) +
                                 ": p has mass where q is zero");
    }
    kl += p[i] * std::log(p[i] / q[i]);
  }
  // Gibbs' inequality guarantees kl >= 0; absorb rounding residue near zero.
  if (kl < 0.0 && kl > -kStdEpsilon) {
    kl = 0.0;
  }
  return kl;
}

double kl_sampled_estimate(const PolicyStep& step) {
  if (!std::isfinite(step.logprob_current) || !std::isfinite(step.logprob_base)) {
    throw ValidationError("log-probabilities must be finite");
  }
  const double delta = step.logprob_base - step.logprob_current;
  return std::exp(delta) - delta - 1.0;
}

double objective_value(std::span<const PolicyStep> steps, double advantage, double beta,
                       KlMode kl_mode) {
  if (steps.empty()) {
    throw ValidationError("objective needs at least one step");
  }
  if (!std::isfinite(beta) || beta < 0.0) {
    throw ValidationError("beta must be finite and non-negative, got " + format_real(beta));
  }
  if (!std::isfinite(advantage)) {
    throw ValidationError("advantage must be finite");
  }
  double total = 0.0;
  for (const PolicyStep& step : steps) {
    validate_logprob(step.logprob_current, "logprob_current");
    validate_logprob(step.logprob_old, "logprob_old");
    validate_logprob(step.logprob_base, "logprob_base");
    double kl = 0.0;
    if (kl_mode == KlMode::kExact) {
      if (!step.dist_current || !step.dist_base) {
        throw MissingDistributionError(
            "exact KL mode requires dist_current and dist_base on every step");
      }
      kl = kl_categorical(*step.dist_current, *step.dist_base);
    } else {
      kl = kl_sampled_estimate(step);
    }
    const double ratio = std::exp(step.logprob_current - step.logprob_old);
    total += ratio * advantage - beta * kl;
  }
  return total / static_cast<double>(steps.size());
}

std::vector<SampleGroup> load_groups(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open groups file: " + path);
  }
  std::vector<SampleGroup> groups;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) {
      continue;
    }
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object() || !record.contains("id") ||
        !record.contains("rewards") || !record["rewards"].is_array()) {
      throw IoError(path, line_number, "expected {\"id\": ..., \"rewards\": [...]}");
    }
    SampleGroup group;
    group.id = record["id"].is_string() ? record["id"].get<std::string>() : record["id"].dump();
    for (const auto& value : record["rewards"]) {
      if (!value.is_number()) {
        throw IoError(path, line_number, "rewards must be numbers");
      }
      group.rewards.push_back(value.get<double>());
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

void normalize_groups(std::vector<SampleGroup>& groups) {
  for (SampleGroup& group : groups) {
    group.advantages = group_advantages(group.rewards);
  }
}

void save_groups(const std::string& path, const std::vector<SampleGroup>& groups) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write groups file: " + path);
  }
  for (const SampleGroup& group : groups) {
    nlohmann::json record;
    record["id"] = group.id;
    record["rewards"] = group.rewards;
    if (!group.advantages.empty()) {
      record["advantages"] = group.advantages;
    }
    out << record.dump() << '\n';
  }
  if (!out) {
    throw IoError("failed writing groups file: " + path);
  }
}

}  // namespace vltrack
