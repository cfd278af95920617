#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rankarena {

struct Query {
    std::string query_id;
    std::string text;
};

enum class PlayerKind {
    Student,
    StaticDoc,
    LlmBot,
    SentReplaceBaseline,
    MockBot,
};

std::string to_string(PlayerKind kind);
PlayerKind player_kind_from_string(const std::string& s);

struct DocVersion {
    std::string doc_id;
    std::string player_id;
    std::string query_id;
    int round = 0;
    std::string text;
    std::optional<int> rank; // absent only for freshly generated versions
};

struct RoundRanking {
    std::string query_id;
    int round = 0;
    std::vector<std::pair<std::string, int>> entries; // (doc_id, rank), rank 1 best

    /// doc_ids ordered by rank, best first.
    std::vector<std::string> ordered_doc_ids() const;
    std::optional<int> rank_of(const std::string& doc_id) const;
};

/// Documents visible at some point of a competition, in deterministic
/// (query_id, round, player_id) order.
struct CorpusSnapshot {
    std::vector<DocVersion> docs;

    std::size_t size() const { return docs.size(); }
    bool empty() const { return docs.empty(); }
};

// Full history of a multi-round, multi-query ranking competition. Treated as
// immutable once validated; the online simulation builds one incrementally
// and re-validates at the end.
struct CompetitionLog {
    std::vector<Query> queries;                       // sorted by query_id
    std::vector<DocVersion> versions;                 // load order
    std::map<std::string, PlayerKind> players;        // player_id -> kind
    std::map<std::pair<std::string, int>, RoundRanking> rankings;

    const Query* find_query(const std::string& query_id) const;
    const RoundRanking* find_ranking(const std::string& query_id, int round) const;
    const DocVersion* find_version(const std::string& query_id, int round,
                                   const std::string& player_id) const;
    const DocVersion* find_version_by_doc(const std::string& doc_id,
                                          int round) const;
    /// Largest round recorded for the query, 0 if none.
    int max_round(const std::string& query_id) const;

    /// Versions of one query at one round, sorted by player_id.
    std::vector<const DocVersion*> versions_at(const std::string& query_id,
                                               int round) const;
};

struct LoadReport {
    CompetitionLog log;
    // Ingested human data may exceed the 150-word cap; it is kept but flagged.
    std::vector<std::string> warnings;
};

/// Parse and validate a JSONL competition log (one document version per
/// line). Throws DataError with the offending line or query/round named.
LoadReport load_competition_log(const std::filesystem::path& path);
LoadReport parse_competition_log(const std::string& content);

/// Validate all log invariants: rank sets exactly 1..n, unique
/// (query, round, player), contiguous rounds from 1, referenced docs present.
void validate_log(const CompetitionLog& log,
                  std::vector<std::string>* warnings = nullptr);

/// One JSONL line per version, sorted by (query_id, round, player_id),
/// canonical field order.
std::string serialize_log(const CompetitionLog& log);

/// All versions from rounds strictly before `round` (round >= 2), across all
/// queries.
CorpusSnapshot history_upto(const CompetitionLog& log, int round);

/// Whitespace-token word count of `docs`' texts, median per text.hpp rules.
std::size_t median_word_length(const std::vector<DocVersion>& docs);

inline constexpr std::size_t kWordCap = 150;

} // namespace rankarena
