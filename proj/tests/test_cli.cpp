// End-to-end checks of the CLI binary. VLTRACK_CLI_PATH points at the built
// executable; everything runs in scratch directories.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "support/synthetic.hpp"
#include "vltrack/dataset.hpp"
#include "vltrack/metrics.hpp"
#include "vltrack/strings.hpp"

namespace {

int run_cli(const std::string& args, std::string* stdout_text = nullptr) {
  const std::string out_file =
      (std::filesystem::temp_directory_path() / ("vltrack-cli-out-" + std::to_string(::getpid())))
          .string();
  const std::string command =
      std::string(VLTRACK_CLI_PATH) + " " + args + " >" + out_file + " 2>&1";
  const int status = std::system(command.c_str());
  if (stdout_text != nullptr) {
    std::ifstream in(out_file);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    *stdout_text = buffer.str();
  }
  std::filesystem::remove(out_file);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_corpus(const std::string& dir, int sequences, int frames, double absent_rate,
                  uint64_t seed) {
  const auto corpus = testsupport::make_corpus(sequences, frames, absent_rate, seed);
  for (const auto& seq : corpus) {
    vltrack::save_sequence((std::filesystem::path(dir) / seq.sequence_id).string(), seq);
  }
}

}  // namespace

TEST_CASE("reward subcommand reproduces the engine examples") {
  testsupport::TempDir dir("clireward");
  const std::string responses = dir.sub("responses.jsonl");
  {
    std::ofstream out(responses);
    out << R"({"sample_id": "full", "response": "<think>t</think><d>yes</d><answer>a</answer>"})"
        << "\n";
  }

  // iou(gt, pred) = (10-s)/(10+s); s chosen for 0.70
  const double s70 = 10.0 * 0.30 / 1.70;
  std::string table_path = dir.sub("b1.tsv");
  int code = run_cli("reward --responses " + responses + " --gt 0,0,10,10 --pred-opt " +
                     vltrack::format_real(s70) + ",0,10,10 --iou1 0.30 --out " + table_path);
  CHECK(code == 0);
  {
    std::istringstream table(slurp(table_path));
    std::string header, row;
    std::getline(table, header);
    std::getline(table, row);
    const auto cells = vltrack::split(row, '\t');
    REQUIRE(cells.size() == 6);
    CHECK(cells[0] == "full");
    CHECK(cells[1] == "1");
    CHECK(cells[2] == "1");
    CHECK(*vltrack::parse_real(cells[3]) == doctest::Approx(0.70));
    CHECK(cells[4] == "1");
    CHECK(*vltrack::parse_real(cells[5]) == doctest::Approx(3.70));
  }

  // level-0 response with disjoint boxes and iou1 = 0 -> overall 0
  {
    std::ofstream out(responses);
    out << R"({"sample_id": "untagged", "response": "free text"})" << "\n";
  }
  table_path = dir.sub("b2.tsv");
  code = run_cli("reward --responses " + responses +
                 " --gt 0,0,10,10 --pred-opt 50,50,10,10 --iou1 0 --out " + table_path);
  CHECK(code == 0);
  {
    std::istringstream table(slurp(table_path));
    std::string header, row;
    std::getline(table, header);
    std::getline(table, row);
    const auto cells = vltrack::split(row, '\t');
    REQUIRE(cells.size() == 6);
    CHECK(*vltrack::parse_real(cells[5]) == 0.0);
  }

  // correct "no" with sub-threshold overlap: components (1,1,0,1), overall 3
  {
    std::ofstream out(responses);
    out << R"({"sample_id": "keep", "response": "<think>t</think><d>no</d><answer>a</answer>"})"
        << "\n";
  }
  const double s40 = 10.0 * 0.60 / 1.40;
  table_path = dir.sub("b3.tsv");
  code = run_cli("reward --responses " + responses + " --gt 0,0,10,10 --pred-opt " +
                 vltrack::format_real(s40) + ",0,10,10 --iou1 0.55 --out " + table_path);
  CHECK(code == 0);
  {
    std::istringstream table(slurp(table_path));
    std::string header, row;
    std::getline(table, header);
    std::getline(table, row);
    const auto cells = vltrack::split(row, '\t');
    REQUIRE(cells.size() == 6);
    CHECK(*vltrack::parse_real(cells[3]) == 0.0);
    CHECK(cells[4] == "1");
    CHECK(*vltrack::parse_real(cells[5]) == doctest::Approx(3.0));
  }
}

TEST_CASE("advantage subcommand reproduces the normalization examples") {
  testsupport::TempDir dir("cliadv");
  const std::string groups = dir.sub("groups.jsonl");
  {
    std::ofstream out(groups);
    out << R"({"id": "constant", "rewards": [1, 1, 1, 1, 1]})" << "\n";
    out << R"({"id": "onehot", "rewards": [1, 0, 0, 0, 0]})" << "\n";
    out << R"({"id": "pair", "rewards": [2, 4]})" << "\n";
  }
  const std::string out_path = dir.sub("advantages.jsonl");
  CHECK(run_cli("advantage --groups-file " + groups + " --out " + out_path) == 0);

  std::ifstream in(out_path);
  std::string line;
  std::getline(in, line);
  auto record = nlohmann::json::parse(line);
  for (const auto& a : record["advantages"]) {
    CHECK(a.get<double>() == 0.0);
  }
  std::getline(in, line);
  record = nlohmann::json::parse(line);
  CHECK(record["advantages"][0].get<double>() == doctest::Approx(2.0));
  CHECK(record["advantages"][1].get<double>() == doctest::Approx(-0.5));
  std::getline(in, line);
  record = nlohmann::json::parse(line);
  CHECK(record["advantages"][0].get<double>() == doctest::Approx(-1.0));
  CHECK(record["advantages"][1].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("eval subcommand validates inputs with exit code 2") {
  testsupport::TempDir dir("clieval");
  const std::string gt_dir = dir.sub("gt");
  write_corpus(gt_dir, 2, 30, 0.0, 5);

  const std::string pred_dir = dir.sub("pred");
  std::filesystem::create_directories(pred_dir);

  std::string output;
  CHECK(run_cli("eval --gt-dir " + gt_dir + " --pred-dir " + pred_dir + " --out " +
                    dir.sub("r.txt"),
                &output) == 2);
  CHECK(output.find("seq000") != std::string::npos);
  CHECK(output.find("seq001") != std::string::npos);

  // perfect predictions for one sequence, truncated for the other
  const auto corpus = vltrack::load_corpus(gt_dir);
  vltrack::TrackOutput perfect;
  perfect.sequence_id = corpus[0].sequence_id;
  perfect.boxes = corpus[0].gt_boxes;
  vltrack::save_track_output(pred_dir + "/" + corpus[0].sequence_id + ".txt", perfect);
  vltrack::TrackOutput truncated;
  truncated.sequence_id = corpus[1].sequence_id;
  truncated.boxes.assign(corpus[1].gt_boxes.begin(), corpus[1].gt_boxes.end() - 3);
  vltrack::save_track_output(pred_dir + "/" + corpus[1].sequence_id + ".txt", truncated);

  CHECK(run_cli("eval --gt-dir " + gt_dir + " --pred-dir " + pred_dir + " --out " +
                    dir.sub("r.txt"),
                &output) == 2);
  CHECK(output.find("mismatch") != std::string::npos);
  CHECK(output.find("seq001") != std::string::npos);
  CHECK(output.find("seq000") == std::string::npos);

  // fix the truncation -> perfect report
  truncated.boxes = corpus[1].gt_boxes;
  vltrack::save_track_output(pred_dir + "/" + corpus[1].sequence_id + ".txt", truncated);
  const std::string report_path = dir.sub("report.json");
  CHECK(run_cli("eval --gt-dir " + gt_dir + " --pred-dir " + pred_dir +
                " --format structured --out " + report_path) == 0);
  const auto report = vltrack::report_from_json(slurp(report_path));
  CHECK(report.pr == 1.0);
  CHECK(report.ao == 1.0);
}

TEST_CASE("build subcommands are deterministic at the file level") {
  testsupport::TempDir dir("clibuild");
  const std::string corpus_dir = dir.sub("corpus");
  write_corpus(corpus_dir, 4, 40, 0.2, 77);

  CHECK(run_cli("build-sft --corpus " + corpus_dir + " --count 12 --seed 3 --out " +
                dir.sub("a.jsonl")) == 0);
  CHECK(run_cli("build-sft --corpus " + corpus_dir + " --count 12 --seed 3 --out " +
                dir.sub("b.jsonl")) == 0);
  CHECK(slurp(dir.sub("a.jsonl")) == slurp(dir.sub("b.jsonl")));

  CHECK(run_cli("build-rl --corpus " + corpus_dir + " --count 9 --seed 4 --out " +
                dir.sub("rl.jsonl")) == 0);
  std::ifstream in(dir.sub("rl.jsonl"));
  std::string line;
  int records = 0;
  while (std::getline(in, line)) {
    const auto record = nlohmann::json::parse(line);
    CHECK(record.contains("box_template"));
    CHECK(record.contains("box_search"));
    ++records;
  }
  CHECK(records == 9);

  // a manifest rides along with every run
  CHECK(std::filesystem::exists(dir.sub("rl.jsonl.manifest.json")));
}

TEST_CASE("track writes outputs, events, and a manifest") {
  testsupport::TempDir dir("clitrack");
  const std::string corpus_dir = dir.sub("corpus");
  write_corpus(corpus_dir, 1, 50, 0.0, 9);
  const std::string run_dir = dir.sub("run");

  CHECK(run_cli("track --sequence-dir " + corpus_dir + "/seq000 --tracker oracle"
                " --refiner stub --u 10 --seed 2 --noise-px 0 --out " +
                run_dir) == 0);
  CHECK(std::filesystem::exists(run_dir + "/seq000.txt"));
  CHECK(std::filesystem::exists(run_dir + "/manifest.json"));
  std::ifstream events(run_dir + "/events.jsonl");
  std::string line;
  std::vector<int> ticks;
  while (std::getline(events, line)) {
    ticks.push_back(nlohmann::json::parse(line)["frame_index"].get<int>());
  }
  CHECK(ticks == std::vector<int>{10, 20, 30, 40, 50});

  const auto manifest = nlohmann::json::parse(slurp(run_dir + "/manifest.json"));
  CHECK(manifest["command"] == "track");
  CHECK(manifest["completed"] == true);
  CHECK(manifest["config"]["u"] == 10);
  CHECK(manifest["config"]["theta"] == 0.61);
}

TEST_CASE("help advertises the documented defaults") {
  std::string help;
  run_cli("track --help", &help);
  CHECK(help.find("[100]") != std::string::npos);       // u
  CHECK(help.find("[dynamic1]") != std::string::npos);  // strategy
  run_cli("reward --help", &help);
  CHECK(help.find("[0.61]") != std::string::npos);     // theta
  CHECK(help.find("[1,1,1,1]") != std::string::npos);  // weights
  run_cli("sample --help", &help);
  CHECK(help.find("[5]") != std::string::npos);  // n
}
