#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "admix/clip_repr.hpp"
#include "admix/manifest.hpp"

namespace admix {

struct PromptPart {
  enum class Kind { text, image };
  Kind kind = Kind::text;
  std::string text;
  FrameRef image;

  static PromptPart make_text(std::string t);
  static PromptPart make_image(FrameRef ref);
};

// A backend-agnostic multimodal request. canonical_text() is a pure
// function of the content parts; sample_tag is routing/log metadata and
// stays out of it.
struct Prompt {
  std::string template_id;
  std::vector<PromptPart> parts;
  std::optional<std::uint64_t> seed;
  std::string sample_tag;

  std::string canonical_text() const;
  std::string content_hash() const;  // sha256 of canonical_text
};

struct TokenUsage {
  long prompt_tokens = 0;
  long completion_tokens = 0;
};

struct BackendResponse {
  std::string raw_text;  // verbatim; parsing happens downstream
  TokenUsage usage;
  long latency_ms = 0;
  std::string backend_id;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  virtual BackendResponse complete(const Prompt& prompt) = 0;
};

// Deterministic fixture-keyed backend for offline runs and tests.
// Resolution order: handler, sample_tag fixture, content-hash fixture,
// default reply; no match throws Errc::refusal.
class MockBackend : public Backend {
 public:
  using Handler = std::function<std::string(const Prompt&)>;

  MockBackend() = default;
  explicit MockBackend(Handler handler) : handler_(std::move(handler)) {}

  std::string id() const override { return "mock"; }
  BackendResponse complete(const Prompt& prompt) override;

  void set_handler(Handler handler) { handler_ = std::move(handler); }
  void add_tag_fixture(const std::string& sample_tag, std::string reply);
  void add_hash_fixture(const std::string& content_hash, std::string reply);
  void set_default_reply(std::string reply) { default_reply_ = std::move(reply); }

  // Loads fixtures from a JSON object {"by_tag": {...}, "by_hash": {...},
  // "default": "..."}.
  void load_fixtures(const std::filesystem::path& path);

  long calls() const { return calls_.load(); }

 private:
  Handler handler_;
  std::map<std::string, std::string> by_tag_;
  std::map<std::string, std::string> by_hash_;
  std::optional<std::string> default_reply_;
  std::atomic<long> calls_{0};
  std::mutex mutex_;
};

struct RetryPolicy {
  int max_retries = 3;         // attempts = max_retries + 1
  int backoff_initial_ms = 200;
  double backoff_factor = 2.0;
  int timeout_s = 60;
};

// Remote HTTP backend. POSTs a JSON body to <endpoint_path> with images
// inlined base64; expects {"text": "..."} back. The credential comes from
// the environment, never from config files.
class HttpBackend : public Backend {
 public:
  HttpBackend(std::string host, int port, std::string path, std::string model,
              RetryPolicy retry = {}, std::string api_key_env = "ADMIX_API_KEY");

  std::string id() const override { return "remote:" + model_; }
  BackendResponse complete(const Prompt& prompt) override;

 private:
  std::string host_;
  int port_;
  std::string path_;
  std::string model_;
  RetryPolicy retry_;
  std::string api_key_env_;
};

// Record/replay wrapper keyed by prompt content hash. With an inner
// backend it records misses; without one it replays only and a miss is a
// transport error. Safe under concurrent access.
class CacheBackend : public Backend {
 public:
  CacheBackend(std::shared_ptr<Backend> inner, std::filesystem::path dir);

  std::string id() const override;
  BackendResponse complete(const Prompt& prompt) override;

  long hits() const { return hits_.load(); }
  long misses() const { return misses_.load(); }

 private:
  std::shared_ptr<Backend> inner_;
  std::filesystem::path dir_;
  std::atomic<long> hits_{0};
  std::atomic<long> misses_{0};
  std::mutex mutex_;
};

// Versioned instruction templates, one file per id: <dir>/<id>.txt with
// {placeholder} substitution.
class TemplateStore {
 public:
  explicit TemplateStore(std::filesystem::path dir);

  std::string render(const std::string& template_id,
                     const std::map<std::string, std::string>& vars) const;
  bool has(const std::string& template_id) const;

 private:
  std::filesystem::path dir_;
};

struct GenerationRequest {
  ProductInfo product;
  std::vector<std::pair<int, ClipRepresentation>> clips;  // (pool index, repr)
  std::optional<int> k;
  std::string instruction_template_id;
  std::optional<std::uint64_t> seed;
  Prompt prompt;  // assembled, deterministic
};

// Lays out the request: product block, per-clip blocks (index, spatial
// image, temporal sequence, optional supplementary text), instruction last.
GenerationRequest assemble_request(
    const ProductInfo& product,
    const std::vector<std::pair<int, ClipRepresentation>>& representations,
    std::optional<int> k, const std::string& template_id,
    const TemplateStore& templates);

BackendResponse generate(const GenerationRequest& request, Backend& backend);

struct TrainingClip {
  int index = 0;
  ClipRepresentation repr;
  std::optional<std::string> script;  // ground truth, when available
};

struct AugmentedInput {
  GenerationRequest base;
  // clip_id -> rewritten ground-truth script attached as supplementary info
  std::map<std::string, std::string> supplementary;
};

// Rewrites each clip's ground-truth script through the rewriter backend and
// attaches the result to the clip's input. Training-data construction only.
// A rewriter failure throws; callers record the skip reason.
AugmentedInput augment_with_supplementary(const ProductInfo& product,
                                          std::vector<TrainingClip> clips,
                                          std::optional<int> k,
                                          const std::string& template_id,
                                          Backend& rewriter,
                                          const TemplateStore& templates);

}  // namespace admix
