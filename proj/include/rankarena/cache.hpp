#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

namespace rankarena {

/// SHA-256 hex digest, used to content-address cached service responses.
std::string sha256_hex(const std::string& data);

// Disk cache keyed by hash(kind + canonical request body). Entries are raw
// response bodies, written atomically; safe for concurrent use within one
// process.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<std::string> get(const std::string& kind,
                                   const std::string& request_body);
    void put(const std::string& kind, const std::string& request_body,
             const std::string& response_body);

    std::string key(const std::string& kind, const std::string& request_body) const;
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path entry_path(const std::string& kind,
                                     const std::string& key) const;

    std::filesystem::path dir_;
    std::mutex mutex_;
};

} // namespace rankarena
