#include "admix/subtitle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "admix/error.hpp"

namespace admix {

namespace {

// Unit sums mix binary-inexact weights (0.4, 0.5); thresholds tolerate the
// accumulated representation error.
constexpr double kUnitEps = 1e-9;

}  // namespace

double UnitWeights::weight_for(CharClass cls) const {
  switch (cls) {
    case CharClass::cjk: return cjk_char;
    case CharClass::latin_letter: return latin_letter;
    case CharClass::digit: return digit;
    case CharClass::space: return space;
    case CharClass::other_symbol: return other_symbol;
  }
  return other_symbol;
}

Dictionary Dictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::io, "cannot open dictionary: " + path.string());
  }
  Dictionary dict;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    dict.max_word_cps_ = std::max(dict.max_word_cps_, decode_utf8(line).size());
    dict.words_.insert(std::move(line));
  }
  return dict;
}

Dictionary Dictionary::from_words(std::span<const std::string> words) {
  Dictionary dict;
  for (const auto& w : words) {
    if (w.empty()) continue;
    dict.max_word_cps_ = std::max(dict.max_word_cps_, decode_utf8(w).size());
    dict.words_.insert(w);
  }
  return dict;
}

bool Dictionary::contains(std::string_view word) const {
  return words_.find(std::string(word)) != words_.end();
}

bool SsaConfig::is_punctuation(char32_t cp) const {
  return punctuation.find(cp) != std::u32string::npos;
}

double unit_count(std::string_view text, const UnitWeights& weights) {
  double total = 0.0;
  for (const auto& cp : decode_utf8(text)) {
    total += weights.weight_for(classify_char(cp.value));
  }
  return total;
}

std::vector<Token> tokenize_tokens(std::string_view text, const Dictionary& dict) {
  std::vector<Token> out;
  const auto cps = decode_utf8(text);
  const std::size_t n = cps.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t best_len = 1;
    if (dict.max_word_codepoints() >= 2) {
      const std::size_t cap = std::min(dict.max_word_codepoints(), n - i);
      for (std::size_t len = cap; len >= 2; --len) {
        const std::size_t start = cps[i].offset;
        const std::size_t end = cps[i + len - 1].offset + cps[i + len - 1].size;
        if (dict.contains(text.substr(start, end - start))) {
          best_len = len;
          break;
        }
      }
    }
    Token tok;
    tok.byte_start = cps[i].offset;
    tok.byte_end = cps[i + best_len - 1].offset + cps[i + best_len - 1].size;
    tok.text = std::string(text.substr(tok.byte_start, tok.byte_end - tok.byte_start));
    tok.codepoints = best_len;
    out.push_back(std::move(tok));
    i += best_len;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text, const Dictionary& dict) {
  std::vector<std::string> out;
  for (auto& tok : tokenize_tokens(text, dict)) {
    out.push_back(std::move(tok.text));
  }
  return out;
}

namespace {

struct ByteRange {
  std::size_t start = 0;
  std::size_t end = 0;
  bool intersects(const ByteRange& other) const {
    return start < other.end && other.start < end;
  }
};

// Maximal punctuation-free runs of the script, as byte ranges.
std::vector<ByteRange> punctuation_free_spans(std::string_view script,
                                              const SsaConfig& cfg) {
  std::vector<ByteRange> spans;
  bool open = false;
  for (const auto& cp : decode_utf8(script)) {
    if (cfg.is_punctuation(cp.value)) {
      open = false;
      continue;
    }
    if (!open) {
      spans.push_back({cp.offset, cp.offset + cp.size});
      open = true;
    } else {
      spans.back().end = cp.offset + cp.size;
    }
  }
  return spans;
}

}  // namespace

SsaVerdict validate_segments(std::string_view script,
                             std::span<const std::string> segments,
                             const SsaConfig& cfg) {
  if (cfg.max_units_per_segment <= 0 || cfg.per_span_divisor <= 0) {
    throw Error(Errc::invalid_config, "SsaConfig limits must be positive");
  }
  std::string joined;
  for (const auto& seg : segments) joined += seg;
  if (joined != script) {
    throw Error(Errc::concat_mismatch, "segments do not re-concatenate to the script");
  }

  SsaVerdict verdict;

  // Rule 1: per-segment unit budget.
  std::vector<ByteRange> ranges;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    ranges.push_back({pos, pos + segments[i].size()});
    pos += segments[i].size();
    const double units = unit_count(segments[i], cfg.weights);
    if (units > cfg.max_units_per_segment + kUnitEps) {
      verdict.violations.push_back(
          {SsaRule::length, "segment " + std::to_string(i), ranges.back().start});
    }
  }

  // Rule 2: segment count per punctuation-free span.
  const auto spans = punctuation_free_spans(script, cfg);
  for (std::size_t j = 0; j < spans.size(); ++j) {
    const auto text = script.substr(spans[j].start, spans[j].end - spans[j].start);
    const double units = unit_count(text, cfg.weights);
    const auto allowed = static_cast<long long>(
        std::ceil(units / cfg.per_span_divisor - kUnitEps));
    long long hit = 0;
    for (const auto& r : ranges) {
      if (r.intersects(spans[j])) ++hit;
    }
    if (hit > allowed) {
      verdict.violations.push_back(
          {SsaRule::span_count, "span " + std::to_string(j), spans[j].start});
    }
  }

  // Rule 3: dictionary words must not cross segment boundaries.
  if (cfg.dictionary && cfg.dictionary->size() > 0) {
    std::vector<std::size_t> cuts;  // interior boundaries only
    for (std::size_t i = 0; i + 1 < ranges.size(); ++i) cuts.push_back(ranges[i].end);
    for (const auto& tok : tokenize_tokens(script, *cfg.dictionary)) {
      if (tok.codepoints < 2) continue;
      for (std::size_t cut : cuts) {
        if (cut > tok.byte_start && cut < tok.byte_end) {
          verdict.violations.push_back(
              {SsaRule::word_split, "word " + tok.text, tok.byte_start});
          break;
        }
      }
    }
  }

  std::sort(verdict.violations.begin(), verdict.violations.end(),
            [](const SsaViolation& a, const SsaViolation& b) {
              if (a.byte_offset != b.byte_offset) return a.byte_offset < b.byte_offset;
              if (a.rule != b.rule) return a.rule < b.rule;
              return a.where < b.where;
            });
  verdict.pass = verdict.violations.empty();
  return verdict;
}

std::vector<std::string> auto_segment(std::string_view script, const SsaConfig& cfg) {
  if (script.empty()) {
    throw Error(Errc::empty_input, "auto_segment: script is empty");
  }
  const auto cps = decode_utf8(script);
  const std::size_t n = cps.size();

  // Byte offsets strictly inside multi-character dictionary words.
  std::vector<bool> inside_word(script.size() + 1, false);
  if (cfg.dictionary && cfg.dictionary->size() > 0) {
    for (const auto& tok : tokenize_tokens(script, *cfg.dictionary)) {
      if (tok.codepoints < 2) continue;
      for (std::size_t b = tok.byte_start + 1; b < tok.byte_end; ++b) {
        inside_word[b] = true;
      }
    }
  }

  std::vector<double> weight(n);
  std::vector<bool> punct(n);
  for (std::size_t i = 0; i < n; ++i) {
    weight[i] = cfg.weights.weight_for(classify_char(cps[i].value));
    punct[i] = cfg.is_punctuation(cps[i].value);
  }

  const auto byte_at = [&](std::size_t j) {
    return j == n ? script.size() : cps[j].offset;
  };

  std::vector<std::string> segments;
  std::size_t start = 0;
  while (start < n) {
    double units = 0.0;
    std::ptrdiff_t best = -1;      // punctuation attaches to the left segment
    std::ptrdiff_t fallback = -1;  // relaxed: may break before punctuation
    for (std::size_t j = start + 1; j <= n; ++j) {
      units += weight[j - 1];
      if (units > cfg.max_units_per_segment + kUnitEps) break;
      const std::size_t b = byte_at(j);
      if (j < n && inside_word[b]) continue;
      fallback = static_cast<std::ptrdiff_t>(j);
      if (j == n || !punct[j]) {
        best = static_cast<std::ptrdiff_t>(j);
        // A punctuation run just ended: the split is mandatory here.
        if (j < n && punct[j - 1]) break;
      }
    }
    if (best < 0) best = fallback;
    if (best < 0) {
      throw Error(Errc::infeasible,
                  "auto_segment: no feasible split near byte offset " +
                      std::to_string(byte_at(start)) +
                      " (a dictionary word exceeds the unit budget)");
    }
    const std::size_t from = byte_at(start);
    const std::size_t to = byte_at(static_cast<std::size_t>(best));
    segments.emplace_back(script.substr(from, to - from));
    start = static_cast<std::size_t>(best);
  }
  return segments;
}

}  // namespace admix
