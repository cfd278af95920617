#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace rankarena {

// Run configuration, merged from (lowest to highest precedence) defaults, the
// INI-style config file, RANKARENA_<SECTION>_<KEY> environment variables, and
// CLI flags.
struct RunConfig {
    // [paths]
    std::string log;
    std::string votes;
    std::string cache_dir = ".rankarena-cache";
    std::string out_dir = "out";

    // [ranker] kind = tfidf | dense
    std::string ranker = "tfidf";

    // [services] each of llm/entail/embed is "mock", a mock variant
    // ("mock:echo", "mock:append-query"), or an HTTP endpoint URL.
    std::string llm = "mock:append-query";
    std::string entail = "mock";
    std::string embed = "mock";
    std::string llm_model = "default";

    // [eval]
    int round = 2;
    int k = 10;
    int permutations = 100000;
    std::uint64_t seed = 7;
    int workers = 1;
    std::string mode = "thresholded";  // thresholded | mean
    std::string rank_mode = "rerank";  // rerank | replay
    std::string snapshot = "through";  // through | before (the evaluated round)
    bool student_rows = false;
    std::string agent = "static";

    // [online]
    int rounds = 7;
    int players = 5;
    int bot_entry_round = 2;
    std::string bot = "pairwise-best";

    /// Throws ConfigError on unresolvable paths or invalid selections.
    /// `need_log` commands require paths.log to exist.
    void validate(bool need_log) const;
};

/// Parse an INI-style file ([section], key = value, '#' comments).
std::map<std::string, std::string> parse_ini(const std::string& content);

RunConfig load_config(const std::filesystem::path& path);

/// Apply defaults + parsed file + environment overrides.
RunConfig config_from_entries(const std::map<std::string, std::string>& entries);

} // namespace rankarena
