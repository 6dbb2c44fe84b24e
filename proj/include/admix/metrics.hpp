#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace admix {

// 1 iff the predicted clip sequence matches ground truth exactly, position
// by position. A length mismatch scores 0.
int sra(std::span<const std::string> ground_truth,
        std::span<const std::string> predicted);

// Script length: each CJK character counts 1, each maximal contiguous
// Latin/digit run counts 1, everything else counts 0.
int word_count(std::string_view script);

struct WcdConfig {
  double chars_per_second = 4.5;
};

// Duration-derived target length, rounded half-up.
long long wcd_target(double clip_duration_s, const WcdConfig& cfg = {});

// |word_count(script) - target|
double wcd(std::string_view script, double clip_duration_s, const WcdConfig& cfg = {});

struct JudgeScores {
  int vsc = 0;
  int fact = 0;
  int coh = 0;
  int logic = 0;

  bool operator==(const JudgeScores&) const = default;
};

// Strict grammar for judge replies: each of VSC/Fact/Coh/Logic must appear
// exactly once as "<name>: <integer>", integers in {0,1,2}. Anything else
// is an error, never a default score.
JudgeScores parse_judge_reply(std::string_view reply);

struct MetricReport {
  std::string sample_id;
  int sra = 0;
  std::optional<double> wcd;  // mean over the sample's tuples
  std::optional<int> ssa;     // 1 iff every tuple's segmentation passes
  std::optional<JudgeScores> judge;
  std::vector<double> wcd_per_clip;
  std::optional<std::string> error;  // set on parse/scoring failure
};

struct AggregateReport {
  std::size_t total = 0;
  std::size_t scored = 0;  // rows without error
  std::size_t judged = 0;
  std::size_t errors = 0;
  double sra_mean = 0.0;  // errored rows count as SRA=0
  std::optional<double> wcd_mean;
  std::optional<double> ssa_mean;
  std::optional<double> vsc_mean;
  std::optional<double> fact_mean;
  std::optional<double> coh_mean;
  std::optional<double> logic_mean;
};

AggregateReport aggregate(std::span<const MetricReport> reports);

}  // namespace admix
