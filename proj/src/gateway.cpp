#include "admix/gateway.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <thread>

#include "admix/error.hpp"
#include "admix/util.hpp"

// HTTP only; TLS termination is the deployment's concern (the endpoint is
// typically an internal gateway).
#include <httplib.h>

namespace admix {

using ojson = nlohmann::ordered_json;

PromptPart PromptPart::make_text(std::string t) {
  PromptPart p;
  p.kind = Kind::text;
  p.text = std::move(t);
  return p;
}

PromptPart PromptPart::make_image(FrameRef ref) {
  PromptPart p;
  p.kind = Kind::image;
  p.image = std::move(ref);
  return p;
}

std::string Prompt::canonical_text() const {
  std::string out;
  out += "[template:" + template_id + "]\n";
  if (seed) out += "[seed:" + std::to_string(*seed) + "]\n";
  for (const auto& part : parts) {
    if (part.kind == PromptPart::Kind::text) {
      out += part.text;
      out += '\n';
    } else {
      out += "[image:" + part.image.path.generic_string() + "@" +
             part.image.target.to_string() + "]\n";
    }
  }
  return out;
}

std::string Prompt::content_hash() const { return sha256_hex(canonical_text()); }

BackendResponse MockBackend::complete(const Prompt& prompt) {
  calls_.fetch_add(1);
  std::string reply;
  bool found = false;
  if (handler_) {
    reply = handler_(prompt);
    found = true;
  } else {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = by_tag_.find(prompt.sample_tag); it != by_tag_.end()) {
      reply = it->second;
      found = true;
    } else if (auto hit = by_hash_.find(prompt.content_hash()); hit != by_hash_.end()) {
      reply = hit->second;
      found = true;
    } else if (default_reply_) {
      reply = *default_reply_;
      found = true;
    }
  }
  if (!found) {
    throw Error(Errc::refusal, "mock backend has no fixture for this request (tag '" +
                                   prompt.sample_tag + "')");
  }
  BackendResponse resp;
  resp.raw_text = std::move(reply);
  resp.backend_id = id();
  resp.latency_ms = 0;
  return resp;
}

void MockBackend::add_tag_fixture(const std::string& sample_tag, std::string reply) {
  std::lock_guard<std::mutex> lock(mutex_);
  by_tag_[sample_tag] = std::move(reply);
}

void MockBackend::add_hash_fixture(const std::string& content_hash, std::string reply) {
  std::lock_guard<std::mutex> lock(mutex_);
  by_hash_[content_hash] = std::move(reply);
}

void MockBackend::load_fixtures(const std::filesystem::path& path) {
  ojson doc;
  try {
    doc = ojson::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::schema, "mock fixtures " + path.string() + ": " + e.what());
  }
  std::lock_guard<std::mutex> lock(mutex_);
  if (auto it = doc.find("by_tag"); it != doc.end()) {
    for (const auto& [k, v] : it->items()) by_tag_[k] = v.get<std::string>();
  }
  if (auto it = doc.find("by_hash"); it != doc.end()) {
    for (const auto& [k, v] : it->items()) by_hash_[k] = v.get<std::string>();
  }
  if (auto it = doc.find("default"); it != doc.end()) {
    default_reply_ = it->get<std::string>();
  }
}

HttpBackend::HttpBackend(std::string host, int port, std::string path,
                         std::string model, RetryPolicy retry, std::string api_key_env)
    : host_(std::move(host)),
      port_(port),
      path_(std::move(path)),
      model_(std::move(model)),
      retry_(retry),
      api_key_env_(std::move(api_key_env)) {}

BackendResponse HttpBackend::complete(const Prompt& prompt) {
  ojson body;
  body["model"] = model_;
  body["template_id"] = prompt.template_id;
  if (prompt.seed) body["seed"] = *prompt.seed;
  ojson parts = ojson::array();
  for (const auto& part : prompt.parts) {
    if (part.kind == PromptPart::Kind::text) {
      parts.push_back({{"type", "text"}, {"text", part.text}});
    } else {
      const auto jpeg = encode_resized_jpeg(part.image);
      parts.push_back({{"type", "image"},
                       {"media_type", "image/jpeg"},
                       {"height", part.image.target.height},
                       {"width", part.image.target.width},
                       {"data", base64_encode(jpeg)}});
    }
  }
  body["parts"] = std::move(parts);
  const std::string payload = body.dump();

  const char* key = std::getenv(api_key_env_.c_str());
  httplib::Headers headers;
  if (key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const int attempts = retry_.max_retries + 1;
  bool timed_out = false;
  std::string last_error;
  int backoff_ms = retry_.backoff_initial_ms;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(retry_.timeout_s, 0);
    client.set_read_timeout(retry_.timeout_s, 0);
    client.set_write_timeout(retry_.timeout_s, 0);

    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(path_, headers, payload, "application/json");
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    if (res) {
      if (res->status >= 200 && res->status < 300) {
        ojson reply;
        try {
          reply = ojson::parse(res->body);
        } catch (const nlohmann::json::parse_error& e) {
          throw Error(Errc::schema, std::string("backend reply is not JSON: ") + e.what());
        }
        if (!reply.contains("text")) {
          throw Error(Errc::schema, "backend reply lacks 'text' field");
        }
        BackendResponse out;
        out.raw_text = reply["text"].get<std::string>();
        if (auto it = reply.find("prompt_tokens"); it != reply.end()) {
          out.usage.prompt_tokens = it->get<long>();
        }
        if (auto it = reply.find("completion_tokens"); it != reply.end()) {
          out.usage.completion_tokens = it->get<long>();
        }
        out.latency_ms = static_cast<long>(elapsed);
        out.backend_id = id();
        return out;
      }
      if (res->status >= 400 && res->status < 500) {
        throw Error(Errc::refusal, "backend refused request: HTTP " +
                                       std::to_string(res->status) + " " + res->body);
      }
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      const auto err = res.error();
      timed_out = err == httplib::Error::ConnectionTimeout ||
                  err == httplib::Error::Read || err == httplib::Error::Write;
      last_error = httplib::to_string(err);
    }
    if (attempt < attempts) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms = static_cast<int>(backoff_ms * retry_.backoff_factor);
    }
  }
  if (timed_out) {
    throw Error(Errc::timeout, "backend timed out after " + std::to_string(attempts) +
                                   " attempts (" + last_error + ")");
  }
  throw Error(Errc::transport, "backend unreachable after " + std::to_string(attempts) +
                                   " attempts (" + last_error + ")");
}

CacheBackend::CacheBackend(std::shared_ptr<Backend> inner, std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string CacheBackend::id() const {
  return inner_ ? "replay(" + inner_->id() + ")" : "replay";
}

BackendResponse CacheBackend::complete(const Prompt& prompt) {
  const auto entry = dir_ / (prompt.content_hash() + ".json");
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (std::filesystem::exists(entry)) {
      ojson doc = ojson::parse(read_file(entry));
      BackendResponse resp;
      resp.raw_text = doc["raw_text"].get<std::string>();
      resp.usage.prompt_tokens = doc["usage"]["prompt_tokens"].get<long>();
      resp.usage.completion_tokens = doc["usage"]["completion_tokens"].get<long>();
      resp.latency_ms = doc["latency_ms"].get<long>();
      resp.backend_id = doc["backend_id"].get<std::string>();
      hits_.fetch_add(1);
      return resp;
    }
  }
  if (!inner_) {
    throw Error(Errc::transport,
                "replay cache miss and no inner backend: " + prompt.content_hash());
  }
  misses_.fetch_add(1);
  BackendResponse resp = inner_->complete(prompt);
  ojson doc;
  doc["raw_text"] = resp.raw_text;
  doc["usage"] = {{"prompt_tokens", resp.usage.prompt_tokens},
                  {"completion_tokens", resp.usage.completion_tokens}};
  doc["latency_ms"] = resp.latency_ms;
  doc["backend_id"] = resp.backend_id;
  std::lock_guard<std::mutex> lock(mutex_);
  write_file_atomic(entry, doc.dump(2) + "\n");
  return resp;
}

TemplateStore::TemplateStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

bool TemplateStore::has(const std::string& template_id) const {
  return std::filesystem::exists(dir_ / (template_id + ".txt"));
}

std::string TemplateStore::render(const std::string& template_id,
                                  const std::map<std::string, std::string>& vars) const {
  const auto path = dir_ / (template_id + ".txt");
  if (!std::filesystem::exists(path)) {
    throw Error(Errc::io, "instruction template not found: " + path.string());
  }
  std::string text = read_file(path);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  for (const auto& [name, value] : vars) {
    const std::string needle = "{" + name + "}";
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
      text.replace(pos, needle.size(), value);
      pos += value.size();
    }
  }
  return text;
}

GenerationRequest assemble_request(
    const ProductInfo& product,
    const std::vector<std::pair<int, ClipRepresentation>>& representations,
    std::optional<int> k, const std::string& template_id,
    const TemplateStore& templates) {
  if (representations.empty()) {
    throw Error(Errc::empty_input, "assemble_request: no clip representations");
  }
  const int n = static_cast<int>(representations.size());
  if (k && (*k < 1 || *k > n)) {
    throw Error(Errc::invalid_argument,
                "assemble_request: k=" + std::to_string(*k) + " out of range 1.." +
                    std::to_string(n));
  }

  GenerationRequest req;
  req.product = product;
  req.clips = representations;
  req.k = k;
  req.instruction_template_id = template_id;

  std::string product_block = "Product information:\nName: " + product.name + "\n";
  if (!product.selling_points.empty()) {
    product_block += "Selling points:\n";
    for (const auto& sp : product.selling_points) product_block += "- " + sp + "\n";
  }
  if (!product.extra.empty()) {
    product_block += "Attributes:\n";
    for (const auto& [key, value] : product.extra) {
      product_block += key + ": " + value + "\n";
    }
  }
  product_block.pop_back();  // trailing newline
  req.prompt.parts.push_back(PromptPart::make_text(std::move(product_block)));

  for (const auto& [index, repr] : representations) {
    std::string head = "Clip " + std::to_string(index) + ":";
    if (repr.supplementary) {
      head += "\nSupplementary notes: " + *repr.supplementary;
    }
    req.prompt.parts.push_back(PromptPart::make_text(std::move(head)));
    req.prompt.parts.push_back(PromptPart::make_image(repr.spatial));
    req.prompt.parts.push_back(PromptPart::make_text("Frames:"));
    for (const auto& frame : repr.temporal) {
      req.prompt.parts.push_back(PromptPart::make_image(frame));
    }
  }

  std::map<std::string, std::string> vars;
  vars["product_name"] = product.name;
  vars["clip_count"] = std::to_string(n);
  vars["k_clause"] =
      k ? "Select exactly " + std::to_string(*k) + " clips." : "Choose how many clips to select.";
  req.prompt.parts.push_back(PromptPart::make_text(templates.render(template_id, vars)));
  req.prompt.template_id = template_id;
  return req;
}

BackendResponse generate(const GenerationRequest& request, Backend& backend) {
  return backend.complete(request.prompt);
}

AugmentedInput augment_with_supplementary(const ProductInfo& product,
                                          std::vector<TrainingClip> clips,
                                          std::optional<int> k,
                                          const std::string& template_id,
                                          Backend& rewriter,
                                          const TemplateStore& templates) {
  AugmentedInput out;
  for (auto& clip : clips) {
    if (!clip.script) continue;
    Prompt prompt;
    prompt.template_id = "rewrite_v1";
    prompt.sample_tag = clip.repr.clip_id;
    prompt.parts.push_back(PromptPart::make_text(
        templates.render("rewrite_v1", {{"script", *clip.script}})));
    const BackendResponse resp = rewriter.complete(prompt);
    if (resp.raw_text.empty()) {
      throw Error(Errc::refusal, "rewriter returned empty text for clip " +
                                     clip.repr.clip_id);
    }
    clip.repr.supplementary = resp.raw_text;
    out.supplementary[clip.repr.clip_id] = resp.raw_text;
  }
  std::vector<std::pair<int, ClipRepresentation>> reprs;
  reprs.reserve(clips.size());
  for (auto& clip : clips) {
    reprs.emplace_back(clip.index, std::move(clip.repr));
  }
  out.base = assemble_request(product, reprs, k, template_id, templates);
  return out;
}

}  // namespace admix
