#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace admix {

// ---------------------------------------------------------------------------
// UTF-8
// ---------------------------------------------------------------------------

struct Codepoint {
  char32_t value = 0;
  std::size_t offset = 0;  // byte offset in the source string
  std::size_t size = 0;    // encoded byte length
};

// Decodes a UTF-8 string. Invalid bytes decode as U+FFFD, one byte each,
// so offsets always cover the input exactly.
std::vector<Codepoint> decode_utf8(std::string_view text);

enum class CharClass { cjk, latin_letter, digit, space, other_symbol };

CharClass classify_char(char32_t cp);

// ---------------------------------------------------------------------------
// Hashing / numeric
// ---------------------------------------------------------------------------

// SHA-256 hex digest of arbitrary bytes.
std::string sha256_hex(std::string_view data);

std::string base64_encode(std::span<const unsigned char> data);

// Half-up rounding to the nearest integer: round_half_up(22.5) == 23.
long long round_half_up(double x);

// ---------------------------------------------------------------------------
// Deterministic randomness
//
// std::shuffle / std::sample are implementation-defined given the same
// engine, so anything that must reproduce bit-for-bit across toolchains
// goes through these.
// ---------------------------------------------------------------------------

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform-ish value in [0, bound); bound > 0.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

template <typename T>
void deterministic_shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

// k distinct indices from [0, n), order of draw preserved.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, SplitMix64& rng);

// ---------------------------------------------------------------------------
// Filesystem
// ---------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);

// Write via temp file + rename so concurrent writers of identical content
// are last-writer-wins and readers never see partial files.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// ---------------------------------------------------------------------------
// Concurrency
// ---------------------------------------------------------------------------

// Runs fn(i) for i in [0, count) on up to max_concurrency threads.
// fn must handle its own failures; an escaped exception terminates.
void parallel_for(std::size_t count, int max_concurrency,
                  const std::function<void(std::size_t)>& fn);

}  // namespace admix
