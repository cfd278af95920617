#include "rankarena/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "rankarena/errors.hpp"
#include "rankarena/util.hpp"

namespace rankarena {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

const std::map<std::string, std::string> kKnownKeys = {
    {"paths.log", ""},         {"paths.votes", ""},
    {"paths.cache_dir", ""},   {"paths.out_dir", ""},
    {"ranker.kind", ""},       {"services.llm", ""},
    {"services.entail", ""},   {"services.embed", ""},
    {"services.llm_model", ""},
    {"eval.round", ""},        {"eval.k", ""},
    {"eval.permutations", ""}, {"eval.seed", ""},
    {"eval.workers", ""},      {"eval.mode", ""},
    {"eval.rank_mode", ""},    {"eval.snapshot", ""},
    {"eval.student_rows", ""}, {"eval.agent", ""},
    {"online.rounds", ""},     {"online.players", ""},
    {"online.bot_entry_round", ""},
    {"online.bot", ""},
};

int to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " must be an integer, got '" + value +
                          "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config: " + key + " must be a boolean, got '" + value + "'");
}

} // namespace

std::map<std::string, std::string> parse_ini(const std::string& content) {
    std::map<std::string, std::string> entries;
    std::istringstream in(content);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            }
            section = trim(stripped.substr(1, stripped.size() - 2));
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside any [section]");
        }
        entries[section + "." + key] = value;
    }
    return entries;
}

RunConfig config_from_entries(const std::map<std::string, std::string>& file_entries) {
    std::map<std::string, std::string> entries = file_entries;
    for (const auto& [key, unused] : kKnownKeys) {
        (void)unused;
        std::string env_name = "RANKARENA_" + key;
        std::replace(env_name.begin(), env_name.end(), '.', '_');
        std::transform(env_name.begin(), env_name.end(), env_name.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (const char* value = std::getenv(env_name.c_str())) {
            entries[key] = value;
        }
    }
    for (const auto& [key, value] : entries) {
        (void)value;
        if (kKnownKeys.count(key) == 0) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    RunConfig config;
    auto get = [&](const char* key) -> const std::string* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    if (auto* v = get("paths.log")) config.log = *v;
    if (auto* v = get("paths.votes")) config.votes = *v;
    if (auto* v = get("paths.cache_dir")) config.cache_dir = *v;
    if (auto* v = get("paths.out_dir")) config.out_dir = *v;
    if (auto* v = get("ranker.kind")) config.ranker = *v;
    if (auto* v = get("services.llm")) config.llm = *v;
    if (auto* v = get("services.entail")) config.entail = *v;
    if (auto* v = get("services.embed")) config.embed = *v;
    if (auto* v = get("services.llm_model")) config.llm_model = *v;
    if (auto* v = get("eval.round")) config.round = to_int("eval.round", *v);
    if (auto* v = get("eval.k")) config.k = to_int("eval.k", *v);
    if (auto* v = get("eval.permutations")) {
        config.permutations = to_int("eval.permutations", *v);
    }
    if (auto* v = get("eval.seed")) {
        config.seed = static_cast<std::uint64_t>(std::stoull(*v));
    }
    if (auto* v = get("eval.workers")) config.workers = to_int("eval.workers", *v);
    if (auto* v = get("eval.mode")) config.mode = *v;
    if (auto* v = get("eval.rank_mode")) config.rank_mode = *v;
    if (auto* v = get("eval.snapshot")) config.snapshot = *v;
    if (auto* v = get("eval.student_rows")) {
        config.student_rows = to_bool("eval.student_rows", *v);
    }
    if (auto* v = get("eval.agent")) config.agent = *v;
    if (auto* v = get("online.rounds")) config.rounds = to_int("online.rounds", *v);
    if (auto* v = get("online.players")) config.players = to_int("online.players", *v);
    if (auto* v = get("online.bot_entry_round")) {
        config.bot_entry_round = to_int("online.bot_entry_round", *v);
    }
    if (auto* v = get("online.bot")) config.bot = *v;
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::string content;
    try {
        content = util::read_file(path);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    return config_from_entries(parse_ini(content));
}

void RunConfig::validate(bool need_log) const {
    if (ranker != "tfidf" && ranker != "dense") {
        throw ConfigError("config: ranker.kind must be tfidf or dense, got '" +
                          ranker + "'");
    }
    auto check_service = [](const char* name, const std::string& value) {
        if (value == "mock" || value.rfind("mock:", 0) == 0) return;
        if (value.rfind("http://", 0) == 0 || value.rfind("https://", 0) == 0) return;
        throw ConfigError(std::string("config: services.") + name +
                          " must be a mock selector or an HTTP URL, got '" + value +
                          "'");
    };
    check_service("llm", llm);
    check_service("entail", entail);
    check_service("embed", embed);
    if (mode != "thresholded" && mode != "mean") {
        throw ConfigError("config: eval.mode must be thresholded or mean");
    }
    if (rank_mode != "rerank" && rank_mode != "replay") {
        throw ConfigError("config: eval.rank_mode must be rerank or replay");
    }
    if (snapshot != "through" && snapshot != "before") {
        throw ConfigError("config: eval.snapshot must be through or before");
    }
    if (k < 1) throw ConfigError("config: eval.k must be >= 1");
    if (permutations < 1) throw ConfigError("config: eval.permutations must be >= 1");
    if (workers < 1) throw ConfigError("config: eval.workers must be >= 1");
    if (agent.empty()) throw ConfigError("config: eval.agent must name an agent");
    if (need_log) {
        if (log.empty()) {
            throw ConfigError("config: paths.log is required for this command");
        }
        if (!std::filesystem::exists(log)) {
            throw ConfigError("config: paths.log does not exist: " + log);
        }
    }
    if (!votes.empty() && !std::filesystem::exists(votes)) {
        throw ConfigError("config: paths.votes does not exist: " + votes);
    }
}

} // namespace rankarena
