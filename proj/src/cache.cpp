#include "rankarena/cache.hpp"

#include <openssl/evp.h>

#include "rankarena/errors.hpp"
#include "rankarena/util.hpp"

namespace rankarena {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256_hex: digest failed");
    }
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::string ResponseCache::key(const std::string& kind,
                               const std::string& request_body) const {
    return sha256_hex(kind + "\n" + request_body);
}

std::filesystem::path ResponseCache::entry_path(const std::string& kind,
                                                const std::string& k) const {
    return dir_ / kind / (k + ".json");
}

std::optional<std::string> ResponseCache::get(const std::string& kind,
                                              const std::string& request_body) {
    const auto path = entry_path(kind, key(kind, request_body));
    std::lock_guard<std::mutex> lock(mutex_);
    if (!std::filesystem::exists(path)) {
        return std::nullopt;
    }
    return util::read_file(path);
}

void ResponseCache::put(const std::string& kind, const std::string& request_body,
                        const std::string& response_body) {
    const auto path = entry_path(kind, key(kind, request_body));
    std::lock_guard<std::mutex> lock(mutex_);
    util::atomic_write_file(path, response_body);
}

} // namespace rankarena
