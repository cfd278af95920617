#include "rankarena/http_clients.hpp"

#include <chrono>
#include <optional>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "rankarena/errors.hpp"

namespace rankarena {

using nlohmann::json;

namespace {

// Global bound on concurrent outbound requests.
std::counting_semaphore<64>& in_flight_slots() {
    static std::counting_semaphore<64> semaphore(4);
    return semaphore;
}

} // namespace

HttpTransport::HttpTransport(std::string url, HttpOptions options)
    : url_(std::move(url)), options_(options) {
    auto scheme_end = url_.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("HttpTransport: URL must include a scheme: " + url_);
    }
    auto path_begin = url_.find('/', scheme_end + 3);
    if (path_begin == std::string::npos) {
        base_ = url_;
        path_ = "/";
    } else {
        base_ = url_.substr(0, path_begin);
        path_ = url_.substr(path_begin);
    }
}

std::string HttpTransport::post_json(const std::string& body) const {
    std::string last_error;
    for (int attempt = 0; attempt < options_.attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(options_.backoff_ms << (attempt - 1)));
        }
        in_flight_slots().acquire();
        httplib::Client client(base_);
        client.set_connection_timeout(options_.timeout_seconds, 0);
        client.set_read_timeout(options_.timeout_seconds, 0);
        client.set_write_timeout(options_.timeout_seconds, 0);
        auto result = client.Post(path_, body, "application/json");
        in_flight_slots().release();
        if (result && result->status == 200) {
            return result->body;
        }
        if (result) {
            last_error = "HTTP " + std::to_string(result->status);
        } else {
            last_error = "transport failure (" + httplib::to_string(result.error()) + ")";
        }
    }
    throw TransportError("POST " + url_ + " failed after " +
                         std::to_string(options_.attempts) + " attempts: " +
                         last_error + " [request sha256 " +
                         sha256_hex(body).substr(0, 16) + "]");
}

HttpLlmClient::HttpLlmClient(std::string url, std::string model,
                             ResponseCache* cache, HttpOptions options)
    : transport_(std::move(url), options), model_(std::move(model)), cache_(cache) {}

std::string HttpLlmClient::complete(const GenerationRequest& request) {
    const json body = {
        {"model", model_},
        {"messages",
         {{{"role", "system"}, {"content", request.system_text}},
          {{"role", "user"}, {"content", request.user_text}}}},
        {"temperature", request.temperature},
    };
    const std::string body_str = body.dump();
    std::optional<std::string> response;
    if (cache_ != nullptr) {
        response = cache_->get("llm", body_str);
    }
    if (!response) {
        response = transport_.post_json(body_str);
        if (cache_ != nullptr) {
            cache_->put("llm", body_str, *response);
        }
    }
    json parsed;
    try {
        parsed = json::parse(*response);
        return parsed.at("choices").at(0).at("message").at("content")
            .get<std::string>();
    } catch (const json::exception& e) {
        throw TransportError(std::string("LLM response not in the expected shape: ") +
                             e.what());
    }
}

HttpEntailmentScorer::HttpEntailmentScorer(std::string url, ResponseCache* cache,
                                           HttpOptions options)
    : transport_(std::move(url), options), cache_(cache) {}

double HttpEntailmentScorer::score(const std::string& premise,
                                   const std::string& hypothesis) {
    const json body = {{"premise", premise}, {"hypothesis", hypothesis}};
    const std::string body_str = body.dump();
    std::optional<std::string> response;
    if (cache_ != nullptr) {
        response = cache_->get("entail", body_str);
    }
    if (!response) {
        response = transport_.post_json(body_str);
        if (cache_ != nullptr) {
            cache_->put("entail", body_str, *response);
        }
    }
    double value = 0.0;
    try {
        value = json::parse(*response).at("score").get<double>();
    } catch (const json::exception& e) {
        throw TransportError(std::string("entailment response not in the expected "
                                         "shape: ") + e.what());
    }
    if (value < 0.0 || value > 1.0) {
        throw DataError("entailment score " + std::to_string(value) +
                        " outside [0,1]");
    }
    return value;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string url, ResponseCache* cache,
                                             HttpOptions options)
    : transport_(std::move(url), options), cache_(cache) {}

EmbeddingBatch HttpEmbeddingProvider::embed(const std::vector<std::string>& texts) {
    EmbeddingBatch batch;
    batch.vectors.resize(texts.size());
    std::vector<std::size_t> misses;
    auto text_key = [](const std::string& t) {
        return json{{"texts", {t}}}.dump();
    };
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (cache_ == nullptr) {
            misses.push_back(i);
            continue;
        }
        auto hit = cache_->get("embed", text_key(texts[i]));
        if (!hit) {
            misses.push_back(i);
            continue;
        }
        try {
            const json parsed = json::parse(*hit);
            batch.dim = parsed.at("dim").get<int>();
            batch.vectors[i] = parsed.at("vectors").at(0).get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw TransportError(std::string("cached embedding corrupt: ") + e.what());
        }
    }
    if (!misses.empty()) {
        json request_texts = json::array();
        for (std::size_t i : misses) request_texts.push_back(texts[i]);
        const std::string response =
            transport_.post_json(json{{"texts", request_texts}}.dump());
        json parsed;
        try {
            parsed = json::parse(response);
            batch.dim = parsed.at("dim").get<int>();
            const auto& vectors = parsed.at("vectors");
            if (vectors.size() != misses.size()) {
                throw TransportError("embedding response count mismatch");
            }
            for (std::size_t m = 0; m < misses.size(); ++m) {
                batch.vectors[misses[m]] = vectors.at(m).get<std::vector<double>>();
                if (cache_ != nullptr) {
                    const json entry = {{"dim", batch.dim},
                                        {"vectors", {batch.vectors[misses[m]]}}};
                    cache_->put("embed", text_key(texts[misses[m]]), entry.dump());
                }
            }
        } catch (const json::exception& e) {
            throw TransportError(std::string("embedding response not in the "
                                             "expected shape: ") + e.what());
        }
    }
    for (const auto& v : batch.vectors) {
        if (static_cast<int>(v.size()) != batch.dim) {
            throw DataError("embedding dimension mismatch: declared " +
                            std::to_string(batch.dim) + ", got " +
                            std::to_string(v.size()));
        }
    }
    return batch;
}

} // namespace rankarena
