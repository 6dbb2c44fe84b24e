#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace admix {

// One exception type for the whole library; the code tells failure modes
// apart so callers (and tests) can match on them instead of message text.
enum class Errc {
  io,
  schema,
  version_mismatch,
  invalid_config,
  invalid_argument,
  duplicate_index,
  duplicate_clip,
  unknown_clip,
  missing_frame,
  parse_failed,
  concat_mismatch,
  empty_segment,
  k_mismatch,
  transport,
  refusal,
  timeout,
  judge_parse,
  judge_range,
  infeasible,
  missing_transcript,
  missing_script,
  empty_input,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, long byte_offset = -1)
      : std::runtime_error(message), code_(code), byte_offset_(byte_offset) {}

  Errc code() const { return code_; }
  // Offset into the offending input when known, -1 otherwise.
  long byte_offset() const { return byte_offset_; }

 private:
  Errc code_;
  long byte_offset_;
};

}  // namespace admix
