#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vltrack/dataset.hpp"
#include "vltrack/errors.hpp"
#include "vltrack/grpo.hpp"
#include "vltrack/metrics.hpp"
#include "vltrack/model_client.hpp"
#include "vltrack/reward.hpp"
#include "vltrack/strings.hpp"
#include "vltrack/tracking_loop.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitEndpoint = 3;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

void write_manifest(const std::string& path, const std::string& command,
                    const json& config_snapshot, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, bool completed = true) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config_snapshot;
  manifest["inputs"] = inputs;
  manifest["outputs"] = outputs;
  manifest["completed"] = completed;
  manifest["timestamp_utc"] = utc_timestamp();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw vltrack::IoError("cannot write manifest: " + path);
  }
  out << manifest.dump(2) << '\n';
}

std::string manifest_path_for(const std::string& out_path) {
  if (fs::is_directory(out_path)) {
    return (fs::path(out_path) / "manifest.json").string();
  }
  return out_path + ".manifest.json";
}

vltrack::RewardWeights weights_from_flags(const std::string& weights_csv, double theta) {
  const auto parts = vltrack::split(weights_csv, ',');
  if (parts.size() != 4) {
    throw vltrack::ValidationError("--weights expects 4 comma-separated values");
  }
  vltrack::RewardWeights weights;
  double values[4];
  for (int i = 0; i < 4; ++i) {
    const auto value = vltrack::parse_real(parts[i]);
    if (!value) {
      throw vltrack::ValidationError("malformed weight '" + std::string(parts[i]) + "'");
    }
    values[i] = *value;
  }
  weights.w_format1 = values[0];
  weights.w_format2 = values[1];
  weights.w_iou = values[2];
  weights.w_judge = values[3];
  weights.theta = theta;
  validate(weights);
  return weights;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw vltrack::IoError("cannot open file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string gt_dir;
  std::string pred_dir;
  std::string out;
  std::string format = "tabular";
  std::string baselines;
};

int run_eval(const EvalArgs& args) {
  const auto corpus = vltrack::load_corpus(args.gt_dir);
  if (corpus.empty()) {
    std::cerr << "eval: no sequences under " << args.gt_dir << "\n";
    return kExitValidation;
  }

  std::vector<std::string> missing;
  std::vector<std::string> mismatched;
  std::vector<vltrack::TrackOutput> outputs;
  for (const auto& sequence : corpus) {
    const std::string pred_path =
        (fs::path(args.pred_dir) / (sequence.sequence_id + ".txt")).string();
    if (!fs::is_regular_file(pred_path)) {
      missing.push_back(sequence.sequence_id);
      continue;
    }
    auto output = vltrack::load_track_output(pred_path);
    if (output.boxes.size() != sequence.gt_boxes.size()) {
      mismatched.push_back(sequence.sequence_id);
    }
    outputs.push_back(std::move(output));
  }
  if (!missing.empty()) {
    std::cerr << "eval: missing tracker outputs for:";
    for (const auto& id : missing) {
      std::cerr << ' ' << id;
    }
    std::cerr << "\n";
    return kExitValidation;
  }
  if (!mismatched.empty()) {
    std::cerr << "eval: frame-count mismatch for:";
    for (const auto& id : mismatched) {
      std::cerr << ' ' << id;
    }
    std::cerr << "\n";
    return kExitValidation;
  }

  std::vector<vltrack::SequenceMetrics> records;
  records.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    records.push_back(vltrack::evaluate_sequence(corpus[i], outputs[i]));
  }
  auto report = vltrack::aggregate(records, corpus);
  if (!args.baselines.empty()) {
    report.baselines = vltrack::load_baselines(args.baselines);
  }

  const auto format = vltrack::parse_report_format(args.format);
  const auto written = vltrack::emit_report(report, format, args.out);

  json config;
  config["gt_dir"] = args.gt_dir;
  config["pred_dir"] = args.pred_dir;
  config["format"] = args.format;
  write_manifest(manifest_path_for(args.out), "eval", config, {args.gt_dir, args.pred_dir},
                 written);
  std::cout << "eval: " << report.sequence_count << " sequences, ao="
            << vltrack::format_real(report.ao) << " sr=" << vltrack::format_real(report.sr_auc)
            << " pr=" << vltrack::format_real(report.pr)
            << " npr=" << vltrack::format_real(report.npr) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// reward

struct RewardArgs {
  std::string responses;
  std::string gt_box;
  std::string pred_opt_box;
  double iou1 = 0.0;
  std::string weights_csv = "1,1,1,1";
  double theta = 0.61;
  std::string out;
};

int run_reward(const RewardArgs& args) {
  const auto gt = vltrack::parse_box(args.gt_box);
  const auto pred_opt = vltrack::parse_box(args.pred_opt_box);
  const auto weights = weights_from_flags(args.weights_csv, args.theta);

  std::ifstream in(args.responses);
  if (!in) {
    throw vltrack::IoError("cannot open responses file: " + args.responses);
  }
  std::ostringstream table;
  vltrack::write_breakdown_header(table);
  std::string line;
  int line_number = 0;
  int samples = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (vltrack::trim(line).empty()) {
      continue;
    }
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.contains("sample_id") || !record.contains("response")) {
      throw vltrack::IoError(args.responses, line_number,
                             "expected {\"sample_id\": ..., \"response\": ...}");
    }
    const auto resp = vltrack::parse(record["response"].get<std::string>());
    const auto breakdown = vltrack::overall_reward(resp, gt, pred_opt, args.iou1, weights);
    vltrack::write_breakdown_row(table, record["sample_id"].get<std::string>(), breakdown);
    ++samples;
  }

  std::ofstream out(args.out, std::ios::binary);
  if (!out) {
    throw vltrack::IoError("cannot write breakdown table: " + args.out);
  }
  out << table.str();
  std::cout << table.str();

  json config;
  config["gt"] = args.gt_box;
  config["pred_opt"] = args.pred_opt_box;
  config["iou1"] = args.iou1;
  config["weights"] = args.weights_csv;
  config["theta"] = args.theta;
  write_manifest(manifest_path_for(args.out), "reward", config, {args.responses}, {args.out});
  std::cout << "reward: scored " << samples << " samples\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// advantage

struct AdvantageArgs {
  std::string groups_file;
  std::string out;
};

int run_advantage(const AdvantageArgs& args) {
  auto groups = vltrack::load_groups(args.groups_file);
  vltrack::normalize_groups(groups);
  vltrack::save_groups(args.out, groups);

  json config;
  config["groups_file"] = args.groups_file;
  write_manifest(manifest_path_for(args.out), "advantage", config, {args.groups_file},
                 {args.out});
  std::cout << "advantage: normalized " << groups.size() << " groups\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// track

struct TrackArgs {
  std::string sequence_dir;
  std::string tracker = "oracle";
  std::string refiner = "stub";
  int update_interval = 100;
  std::string strategy = "dynamic1";
  uint64_t seed = 0;
  double noise_px = 0.0;
  double gate_threshold = 1.0;
  std::string template_policy = "initial_plus_recent";
  std::string stub_reply = "<think>stub</think><d>no</d><answer></answer>";
  std::string system_prompt_file;
  std::string refiner_url;
  std::string tracker_url;
  std::string out;
};

int run_track(const TrackArgs& args) {
  const auto annotation = vltrack::load_sequence(args.sequence_dir);
  const auto frames = vltrack::sequence_frames(annotation);

  vltrack::LoopConfig config;
  config.update_interval = args.update_interval;
  config.strategy = vltrack::parse_update_strategy(args.strategy);
  config.gate_threshold = args.gate_threshold;
  if (args.template_policy == "initial_only") {
    config.template_policy = vltrack::TemplatePolicy::kInitialOnly;
  } else if (args.template_policy == "initial_plus_recent") {
    config.template_policy = vltrack::TemplatePolicy::kInitialPlusRecent;
  } else {
    throw vltrack::ValidationError("unknown template policy '" + args.template_policy + "'");
  }
  if (!args.system_prompt_file.empty()) {
    config.system_prompt = read_text_file(args.system_prompt_file);
  }

  std::unique_ptr<vltrack::TrackerPort> tracker;
  std::string tracker_endpoint = "(local oracle)";
  if (args.tracker == "oracle") {
    tracker = std::make_unique<vltrack::OracleTracker>(annotation, args.noise_px, args.seed);
  } else if (args.tracker == "remote") {
    vltrack::EndpointConfig endpoint;
    if (!args.tracker_url.empty()) {
      endpoint.base_url = args.tracker_url;
    }
    endpoint = vltrack::tracker_endpoint_from_env(endpoint);
    tracker_endpoint = endpoint.base_url;
    tracker = std::make_unique<vltrack::RemoteTracker>(endpoint);
  } else {
    throw vltrack::ValidationError("unknown tracker '" + args.tracker +
                                   "' (expected oracle or remote)");
  }

  std::unique_ptr<vltrack::RefinerPort> refiner;
  std::string refiner_endpoint = "(local stub)";
  if (args.refiner == "stub") {
    refiner = std::make_unique<vltrack::CannedRefiner>(std::vector<std::string>{args.stub_reply});
  } else if (args.refiner == "remote") {
    vltrack::EndpointConfig endpoint;
    if (!args.refiner_url.empty()) {
      endpoint.base_url = args.refiner_url;
    }
    endpoint = vltrack::endpoint_from_env(endpoint);
    refiner_endpoint = endpoint.base_url;
    refiner = std::make_unique<vltrack::RemoteRefiner>(endpoint);
  } else {
    throw vltrack::ValidationError("unknown refiner '" + args.refiner +
                                   "' (expected stub or remote)");
  }

  auto result = vltrack::run(frames, annotation.language, *tracker, refiner.get(), config);
  result.output.sequence_id = annotation.sequence_id;

  fs::create_directories(args.out);
  const std::string output_path =
      (fs::path(args.out) / (annotation.sequence_id + ".txt")).string();
  const std::string events_path = (fs::path(args.out) / "events.jsonl").string();
  vltrack::save_track_output(output_path, result.output);
  vltrack::save_update_events(events_path, result.events);

  json config_snapshot;
  config_snapshot["sequence_dir"] = args.sequence_dir;
  config_snapshot["tracker"] = args.tracker;
  config_snapshot["refiner"] = args.refiner;
  config_snapshot["u"] = args.update_interval;
  config_snapshot["strategy"] = vltrack::to_string(config.strategy);
  config_snapshot["template_policy"] = args.template_policy;
  config_snapshot["seed"] = args.seed;
  config_snapshot["noise_px"] = args.noise_px;
  config_snapshot["gate_threshold"] = args.gate_threshold;
  config_snapshot["tracker_endpoint"] = tracker_endpoint;
  config_snapshot["refiner_endpoint"] = refiner_endpoint;
  config_snapshot["theta"] = config.log_theta;
  config_snapshot["weights"] = {config.log_weights[0], config.log_weights[1],
                                config.log_weights[2], config.log_weights[3]};
  write_manifest((fs::path(args.out) / "manifest.json").string(), "track", config_snapshot,
                 {args.sequence_dir}, {output_path, events_path}, result.completed);

  if (!result.completed) {
    std::cerr << "track: aborted after " << result.output.boxes.size()
              << " frames: " << result.abort_reason << "\n";
    return kExitEndpoint;
  }
  std::cout << "track: " << result.output.boxes.size() << " frames, " << result.events.size()
            << " update events\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  std::string template_image;
  std::string search_image;
  std::string language;
  int n = vltrack::kDefaultGroupSize;
  double temperature = 1.0;
  int max_tokens = 512;
  std::string system_prompt_file;
  std::string refiner_url;
  std::string out;
};

int run_sample(const SampleArgs& args) {
  vltrack::EndpointConfig endpoint;
  if (!args.refiner_url.empty()) {
    endpoint.base_url = args.refiner_url;
  }
  vltrack::RefinerClient client(vltrack::endpoint_from_env(endpoint));

  vltrack::RefinerRequest request;
  request.template_image = vltrack::image_from_ref(args.template_image);
  request.search_image = vltrack::image_from_ref(args.search_image);
  request.initial_language = args.language;
  request.system_prompt = args.system_prompt_file.empty()
                              ? std::string(vltrack::kDefaultSystemPrompt)
                              : read_text_file(args.system_prompt_file);
  request.sampling.temperature = args.temperature;
  request.sampling.max_tokens = args.max_tokens;

  const auto group = client.sample_group(request, args.n);
  for (const std::string& warning : group.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }

  std::ofstream out(args.out, std::ios::binary);
  if (!out) {
    throw vltrack::IoError("cannot write responses file: " + args.out);
  }
  for (size_t i = 0; i < group.responses.size(); ++i) {
    json record;
    record["sample_id"] = "s" + std::to_string(i + 1);
    record["response"] = group.responses[i].raw;
    out << record.dump() << '\n';
  }

  json config;
  config["template_image"] = args.template_image;
  config["search_image"] = args.search_image;
  config["language"] = args.language;
  config["n"] = args.n;
  config["temperature"] = args.temperature;
  config["max_tokens"] = args.max_tokens;
  write_manifest(manifest_path_for(args.out), "sample", config,
                 {args.template_image, args.search_image}, {args.out});
  std::cout << "sample: " << group.responses.size() << "/" << args.n << " responses\n";
  return group.responses.size() == static_cast<size_t>(args.n) ? kExitOk : kExitEndpoint;
}

// ---------------------------------------------------------------------------
// build-sft / build-rl

struct BuildArgs {
  std::string corpus;
  int count = 0;
  uint64_t seed = 0;
  std::string out;
};

int run_build(const BuildArgs& args, bool rl) {
  const auto corpus = vltrack::load_corpus(args.corpus);
  json config;
  config["corpus"] = args.corpus;
  config["count"] = args.count;
  config["seed"] = args.seed;
  if (rl) {
    const auto records = vltrack::build_rl_samples(corpus, args.count, args.seed);
    vltrack::save_rl_records(args.out, records);
    write_manifest(manifest_path_for(args.out), "build-rl", config, {args.corpus}, {args.out});
    std::cout << "build-rl: wrote " << records.size() << " records\n";
  } else {
    const auto pairs = vltrack::build_sft_samples(corpus, args.count, args.seed);
    vltrack::save_sft_pairs(args.out, pairs);
    write_manifest(manifest_path_for(args.out), "build-sft", config, {args.corpus}, {args.out});
    std::cout << "build-sft: wrote " << pairs.size() << " pairs\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stub-server

struct StubServerArgs {
  int port = 8000;
  std::string reply = "<think>stub</think><d>no</d><answer></answer>";
  std::string reply_file;
};

int run_stub_server(const StubServerArgs& args) {
  vltrack::StubRefinerServer server(args.port);
  std::string reply = args.reply;
  if (!args.reply_file.empty()) {
    reply = read_text_file(args.reply_file);
  }
  server.set_replies({reply});
  std::cout << "stub refiner listening on " << server.base_url() << " (ctrl-c to stop)\n";
  while (true) {
    std::this_thread::sleep_for(std::chrono::seconds(1));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vision-language tracking harness: reward scoring, GRPO math, benchmark "
               "evaluation, and the periodic text-update tracking loop"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; command-line flags take precedence");
  app.get_config_formatter_base()->section("");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate tracker outputs against annotations");
  eval_cmd->add_option("--gt-dir", eval_args.gt_dir, "Directory of sequence annotation dirs")
      ->required();
  eval_cmd->add_option("--pred-dir", eval_args.pred_dir, "Directory of <sequence_id>.txt outputs")
      ->required();
  eval_cmd->add_option("--out", eval_args.out, "Report destination (file, or dir for plotdata)")
      ->required();
  eval_cmd->add_option("--format", eval_args.format,
                       "Report format: tabular, structured, or plotdata")
      ->capture_default_str();
  eval_cmd->add_option("--baselines", eval_args.baselines,
                       "Published rows name,pr,npr,sr (percent) for the comparison table");

  RewardArgs reward_args;
  auto* reward_cmd = app.add_subcommand("reward", "Score sampled responses");
  reward_cmd->add_option("--responses", reward_args.responses,
                         "JSONL file of {\"sample_id\", \"response\"}")
      ->required();
  reward_cmd->add_option("--gt", reward_args.gt_box, "Ground-truth box x,y,w,h")->required();
  reward_cmd->add_option("--pred-opt", reward_args.pred_opt_box,
                         "Tracker box under the optimized text, x,y,w,h")
      ->required();
  reward_cmd->add_option("--iou1", reward_args.iou1, "IoU under the initial text")->required();
  reward_cmd->add_option("--weights", reward_args.weights_csv,
                         "w_format1,w_format2,w_iou,w_judge")
      ->capture_default_str();
  reward_cmd->add_option("--theta", reward_args.theta, "IoU reward gate threshold")
      ->capture_default_str();
  reward_cmd->add_option("--out", reward_args.out, "Breakdown table destination")->required();

  AdvantageArgs advantage_args;
  auto* advantage_cmd = app.add_subcommand("advantage", "Normalize reward groups");
  advantage_cmd
      ->add_option("--groups-file", advantage_args.groups_file,
                   "JSONL file of {\"id\", \"rewards\"}")
      ->required();
  advantage_cmd->add_option("--out", advantage_args.out, "Destination JSONL with advantages")
      ->required();

  TrackArgs track_args;
  auto* track_cmd = app.add_subcommand("track", "Run the tracking loop over one sequence");
  track_cmd->add_option("--sequence-dir", track_args.sequence_dir, "Annotated sequence directory")
      ->required();
  track_cmd->add_option("--tracker", track_args.tracker, "oracle or remote")
      ->capture_default_str();
  track_cmd->add_option("--refiner", track_args.refiner, "stub or remote")->capture_default_str();
  track_cmd->add_option("--u", track_args.update_interval, "Text update interval in frames")
      ->capture_default_str();
  track_cmd
      ->add_option("--strategy", track_args.strategy,
                   "static, dynamic1, dynamic2, or dynamic_static")
      ->capture_default_str();
  track_cmd->add_option("--seed", track_args.seed, "Seed for all randomness")
      ->capture_default_str();
  track_cmd->add_option("--noise-px", track_args.noise_px, "Oracle tracker jitter amplitude")
      ->capture_default_str();
  track_cmd
      ->add_option("--gate-threshold", track_args.gate_threshold,
                   "Confidence gate; >= 1 keeps the gate always open")
      ->capture_default_str();
  track_cmd
      ->add_option("--template-policy", track_args.template_policy,
                   "initial_only or initial_plus_recent")
      ->capture_default_str();
  track_cmd->add_option("--stub-reply", track_args.stub_reply, "Canned reply of the stub refiner")
      ->capture_default_str();
  track_cmd->add_option("--system-prompt-file", track_args.system_prompt_file,
                        "Override the built-in refiner system prompt");
  track_cmd->add_option("--refiner-url", track_args.refiner_url,
                        "Refiner base URL (REFINER_URL overrides)");
  track_cmd->add_option("--tracker-url", track_args.tracker_url,
                        "Tracker base URL (TRACKER_URL overrides)");
  track_cmd->add_option("--out", track_args.out, "Output directory")->required();

  SampleArgs sample_args;
  auto* sample_cmd =
      app.add_subcommand("sample", "Draw a group of refiner responses for one frame pair");
  sample_cmd->add_option("--template-image", sample_args.template_image, "Template frame ref")
      ->required();
  sample_cmd->add_option("--search-image", sample_args.search_image, "Search frame ref")
      ->required();
  sample_cmd->add_option("--language", sample_args.language, "Initial target description")
      ->required();
  sample_cmd->add_option("--n", sample_args.n, "Samples per question")->capture_default_str();
  sample_cmd->add_option("--temperature", sample_args.temperature, "Sampling temperature")
      ->capture_default_str();
  sample_cmd->add_option("--max-tokens", sample_args.max_tokens, "Reply token budget")
      ->capture_default_str();
  sample_cmd->add_option("--system-prompt-file", sample_args.system_prompt_file,
                         "Override the built-in refiner system prompt");
  sample_cmd->add_option("--refiner-url", sample_args.refiner_url,
                         "Refiner base URL (REFINER_URL overrides)");
  sample_cmd->add_option("--out", sample_args.out, "Destination responses JSONL")->required();

  BuildArgs sft_args;
  auto* sft_cmd = app.add_subcommand("build-sft", "Sample template/search pairs for SFT data");
  sft_cmd->add_option("--corpus", sft_args.corpus, "Directory of sequence annotation dirs")
      ->required();
  sft_cmd->add_option("--count", sft_args.count, "Number of pairs")->required();
  sft_cmd->add_option("--seed", sft_args.seed, "Sampling seed")->capture_default_str();
  sft_cmd->add_option("--out", sft_args.out, "Destination JSONL")->required();

  BuildArgs rl_args;
  auto* rl_cmd = app.add_subcommand("build-rl", "Sample RL records with ground-truth boxes");
  rl_cmd->add_option("--corpus", rl_args.corpus, "Directory of sequence annotation dirs")
      ->required();
  rl_cmd->add_option("--count", rl_args.count, "Number of records")->required();
  rl_cmd->add_option("--seed", rl_args.seed, "Sampling seed")->capture_default_str();
  rl_cmd->add_option("--out", rl_args.out, "Destination JSONL")->required();

  StubServerArgs stub_args;
  auto* stub_cmd = app.add_subcommand("stub-server", "Run the deterministic refiner stub");
  stub_cmd->add_option("--port", stub_args.port, "Listen port on 127.0.0.1")
      ->capture_default_str();
  stub_cmd->add_option("--reply", stub_args.reply, "Canned reply content")->capture_default_str();
  stub_cmd->add_option("--reply-file", stub_args.reply_file, "File holding the canned reply");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (eval_cmd->parsed()) {
      return run_eval(eval_args);
    }
    if (reward_cmd->parsed()) {
      return run_reward(reward_args);
    }
    if (advantage_cmd->parsed()) {
      return run_advantage(advantage_args);
    }
    if (track_cmd->parsed()) {
      return run_track(track_args);
    }
    if (sample_cmd->parsed()) {
      return run_sample(sample_args);
    }
    if (sft_cmd->parsed()) {
      return run_build(sft_args, false);
    }
    if (rl_cmd->parsed()) {
      return run_build(rl_args, true);
    }
    if (stub_cmd->parsed()) {
      return run_stub_server(stub_args);
    }
  } catch (const vltrack::RefinerUnavailableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEndpoint;
  } catch (const vltrack::EndpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEndpoint;
  } catch (const vltrack::TrackerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEndpoint;
  } catch (const vltrack::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const vltrack::GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const vltrack::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
