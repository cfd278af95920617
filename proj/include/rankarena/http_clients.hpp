#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rankarena/agents.hpp"
#include "rankarena/cache.hpp"
#include "rankarena/services.hpp"

namespace rankarena {

struct HttpOptions {
    int attempts = 3;        // bounded retries with exponential backoff
    int backoff_ms = 100;
    int timeout_seconds = 30;
    int max_in_flight = 4;
};

// POST-only JSON transport with retries and a bounded in-flight count.
class HttpTransport {
public:
    explicit HttpTransport(std::string url, HttpOptions options = {});

    /// POST `body` as application/json; returns the response body on 200.
    /// Throws TransportError (carrying the request digest) once retries are
    /// exhausted.
    std::string post_json(const std::string& body) const;

    const std::string& url() const { return url_; }

private:
    std::string url_;
    std::string base_; // scheme://host[:port]
    std::string path_;
    HttpOptions options_;
};

class HttpLlmClient final : public LlmClient {
public:
    HttpLlmClient(std::string url, std::string model,
                  ResponseCache* cache = nullptr, HttpOptions options = {});
    std::string complete(const GenerationRequest& request) override;

private:
    HttpTransport transport_;
    std::string model_;
    ResponseCache* cache_;
};

class HttpEntailmentScorer final : public EntailmentScorer {
public:
    explicit HttpEntailmentScorer(std::string url, ResponseCache* cache = nullptr,
                                  HttpOptions options = {});
    double score(const std::string& premise, const std::string& hypothesis) override;

private:
    HttpTransport transport_;
    ResponseCache* cache_;
};

// Caches per text: only cache misses go out, batched into one request.
class HttpEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit HttpEmbeddingProvider(std::string url, ResponseCache* cache = nullptr,
                                   HttpOptions options = {});
    EmbeddingBatch embed(const std::vector<std::string>& texts) override;

private:
    HttpTransport transport_;
    ResponseCache* cache_;
};

} // namespace rankarena
