#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "admix/util.hpp"

namespace admix {

// Per-character-class readability weights. CJK/letter/space values follow
// the evaluation rules this implements; digit and symbol weights are
// extensions (digits render like letters, symbols like spaces).
struct UnitWeights {
  double cjk_char = 1.0;
  double latin_letter = 0.4;
  double space = 0.5;
  double digit = 0.4;
  double other_symbol = 0.5;

  double weight_for(CharClass cls) const;
};

class Dictionary {
 public:
  Dictionary() = default;

  static Dictionary load(const std::filesystem::path& path);
  static Dictionary from_words(std::span<const std::string> words);

  bool contains(std::string_view word) const;
  std::size_t max_word_codepoints() const { return max_word_cps_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
  std::size_t max_word_cps_ = 0;
};

struct SsaConfig {
  double max_units_per_segment = 13.0;
  double per_span_divisor = 10.0;
  UnitWeights weights;
  std::shared_ptr<const Dictionary> dictionary;  // null = word rule has no hits
  // Characters that delimit spans for the span-count rule. They keep their
  // class weight for unit counting.
  std::u32string punctuation = U"。，！？；：、…—,.!?;:";

  bool is_punctuation(char32_t cp) const;
};

enum class SsaRule { length, span_count, word_split };

std::string_view ssa_rule_name(SsaRule rule);

struct SsaViolation {
  SsaRule rule;
  std::string where;        // "segment 2", "span 1", "word 巧克力"
  std::size_t byte_offset;  // into the script

  bool operator==(const SsaViolation&) const = default;
};

struct SsaVerdict {
  bool pass = false;
  std::vector<SsaViolation> violations;
};

struct Token {
  std::string text;
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;
  std::size_t codepoints = 0;
};

// Weighted character count. Additive over concatenation.
double unit_count(std::string_view text, const UnitWeights& weights = {});

// Greedy longest-match segmentation against the dictionary; characters with
// no dictionary hit come out as single-codepoint tokens.
std::vector<Token> tokenize_tokens(std::string_view text, const Dictionary& dict);
std::vector<std::string> tokenize(std::string_view text, const Dictionary& dict);

// Checks the three segmentation rules:
//   1. no segment exceeds max_units_per_segment units;
//   2. each maximal punctuation-free span with u units is intersected by at
//      most ceil(u / per_span_divisor) segments (straddling segments count
//      for both adjacent spans);
//   3. no multi-character dictionary word crosses a segment boundary.
// Throws when the segments do not re-concatenate to the script.
SsaVerdict validate_segments(std::string_view script,
                             std::span<const std::string> segments,
                             const SsaConfig& cfg);

// Baseline segmenter: break after punctuation runs, then split spans
// greedily at the latest boundary within the unit budget that does not cut
// a dictionary word. Throws Errc::infeasible when no such split exists.
std::vector<std::string> auto_segment(std::string_view script, const SsaConfig& cfg);

}  // namespace admix
