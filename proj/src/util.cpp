#include "rankarena/util.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "rankarena/errors.hpp"

namespace rankarena::util {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= static_cast<std::uint64_t>(c);
        hash *= 0x00000100000001b3ULL;
    }
    return hash;
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) {
        throw DataError("bounded: empty range");
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = rng();
    while (v >= limit) {
        v = rng();
    }
    return v % n;
}

std::string fmt_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t thread_count =
        std::min<std::size_t>(workers < 1 ? 1 : static_cast<std::size_t>(workers), n);
    if (thread_count <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
        threads.emplace_back(worker);
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("atomic_write_file: cannot open " + tmp.string());
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw DataError("atomic_write_file: short write to " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("read_file: cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace rankarena::util
