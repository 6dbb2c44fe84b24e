#include "admix/metrics.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "admix/error.hpp"
#include "admix/util.hpp"

namespace admix {

int sra(std::span<const std::string> ground_truth,
        std::span<const std::string> predicted) {
  if (ground_truth.size() != predicted.size()) return 0;
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    if (ground_truth[i] != predicted[i]) return 0;
  }
  return 1;
}

int word_count(std::string_view script) {
  int count = 0;
  bool in_run = false;
  for (const auto& cp : decode_utf8(script)) {
    const CharClass cls = classify_char(cp.value);
    if (cls == CharClass::cjk) {
      if (in_run) ++count;
      in_run = false;
      ++count;
    } else if (cls == CharClass::latin_letter || cls == CharClass::digit) {
      in_run = true;
    } else {
      if (in_run) ++count;
      in_run = false;
    }
  }
  if (in_run) ++count;
  return count;
}

long long wcd_target(double clip_duration_s, const WcdConfig& cfg) {
  if (clip_duration_s <= 0) {
    throw Error(Errc::invalid_argument, "wcd: duration must be > 0");
  }
  if (cfg.chars_per_second <= 0) {
    throw Error(Errc::invalid_config, "wcd: chars_per_second must be > 0");
  }
  return round_half_up(clip_duration_s * cfg.chars_per_second);
}

double wcd(std::string_view script, double clip_duration_s, const WcdConfig& cfg) {
  return std::abs(static_cast<double>(word_count(script)) -
                  static_cast<double>(wcd_target(clip_duration_s, cfg)));
}

namespace {

// Finds "<name><ws>:<ws><token>" and parses the token as a score.
int extract_score(std::string_view reply, std::string_view name) {
  std::size_t found = std::string_view::npos;
  for (std::size_t pos = 0;;) {
    pos = reply.find(name, pos);
    if (pos == std::string_view::npos) break;
    // Reject substring hits inside a longer word (e.g. "Factuality").
    const bool start_ok = pos == 0 || !std::isalpha(static_cast<unsigned char>(reply[pos - 1]));
    std::size_t q = pos + name.size();
    while (q < reply.size() && (reply[q] == ' ' || reply[q] == '\t')) ++q;
    if (start_ok && q < reply.size() && (reply[q] == ':' || reply[q] == '=')) {
      if (found != std::string_view::npos) {
        throw Error(Errc::judge_parse,
                    "judge reply: field '" + std::string(name) + "' appears more than once");
      }
      found = q + 1;
    }
    pos += name.size();
  }
  if (found == std::string_view::npos) {
    throw Error(Errc::judge_parse,
                "judge reply: missing field '" + std::string(name) + "'");
  }
  std::size_t q = found;
  while (q < reply.size() && (reply[q] == ' ' || reply[q] == '\t')) ++q;
  std::size_t end = q;
  while (end < reply.size() && std::isdigit(static_cast<unsigned char>(reply[end]))) ++end;
  if (end == q) {
    throw Error(Errc::judge_parse,
                "judge reply: field '" + std::string(name) + "' has no integer value");
  }
  // A digit run followed by '.' would be a fractional score; reject.
  if (end < reply.size() && reply[end] == '.') {
    throw Error(Errc::judge_parse,
                "judge reply: field '" + std::string(name) + "' is not an integer");
  }
  const int value = std::atoi(std::string(reply.substr(q, end - q)).c_str());
  if (value < 0 || value > 2) {
    throw Error(Errc::judge_range, "judge reply: field '" + std::string(name) +
                                       "' out of range: " + std::to_string(value));
  }
  return value;
}

}  // namespace

JudgeScores parse_judge_reply(std::string_view reply) {
  JudgeScores scores;
  scores.vsc = extract_score(reply, "VSC");
  scores.fact = extract_score(reply, "Fact");
  scores.coh = extract_score(reply, "Coh");
  scores.logic = extract_score(reply, "Logic");
  return scores;
}

AggregateReport aggregate(std::span<const MetricReport> reports) {
  if (reports.empty()) {
    throw Error(Errc::empty_input, "aggregate: no reports");
  }
  AggregateReport agg;
  agg.total = reports.size();
  double sra_sum = 0, wcd_sum = 0, ssa_sum = 0;
  double vsc_sum = 0, fact_sum = 0, coh_sum = 0, logic_sum = 0;
  std::size_t wcd_n = 0, ssa_n = 0;
  for (const auto& r : reports) {
    if (r.error) {
      ++agg.errors;
    } else {
      ++agg.scored;
    }
    sra_sum += r.sra;
    if (r.wcd) {
      wcd_sum += *r.wcd;
      ++wcd_n;
    }
    if (r.ssa) {
      ssa_sum += *r.ssa;
      ++ssa_n;
    }
    if (r.judge) {
      ++agg.judged;
      vsc_sum += r.judge->vsc;
      fact_sum += r.judge->fact;
      coh_sum += r.judge->coh;
      logic_sum += r.judge->logic;
    }
  }
  agg.sra_mean = sra_sum / static_cast<double>(agg.total);
  if (wcd_n > 0) agg.wcd_mean = wcd_sum / static_cast<double>(wcd_n);
  if (ssa_n > 0) agg.ssa_mean = ssa_sum / static_cast<double>(ssa_n);
  if (agg.judged > 0) {
    const auto jn = static_cast<double>(agg.judged);
    agg.vsc_mean = vsc_sum / jn;
    agg.fact_mean = fact_sum / jn;
    agg.coh_mean = coh_sum / jn;
    agg.logic_mean = logic_sum / jn;
  }
  return agg;
}

}  // namespace admix
