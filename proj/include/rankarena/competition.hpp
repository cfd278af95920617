#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "rankarena/agents.hpp"
#include "rankarena/metrics.hpp"

namespace rankarena {

struct EvalRow {
    std::string query_id;
    int round = 0;
    std::string player_id;
    std::string doc_id;
    PlayerKind agent_kind = PlayerKind::Student;
    std::string agent_name;
    PromotionReport promotion;
    FaithfulnessReport faith;
    std::optional<int> quality;   // online only, from annotation votes
    std::optional<int> relevance; // online only, from annotation votes
    std::optional<RankedList> induced; // kept when OfflineOptions::keep_induced
};

// How the post-modification ranking is induced.
//   Rerank: the ranker re-scores the modified document plus the other
//           players' next-round versions (competitions whose ranker we can
//           recompute).
//   Replay: the other documents keep their recorded next-round ranks; the
//           modified document is placed among them by the pluggable scorer.
//           A modification identical to the player's recorded next-round
//           version simply replays its recorded rank (logs whose original
//           ranker is unavailable).
enum class RankMode { Rerank, Replay };

// Corpus bound for the faithfulness snapshot: all rounds up to and including
// the evaluated round (default), or strictly before it.
enum class SnapshotBound { ThroughEvalRound, BeforeEvalRound };

struct OfflineOptions {
    RankMode rank_mode = RankMode::Rerank;
    SnapshotBound snapshot = SnapshotBound::ThroughEvalRound;
    int k = 10;
    FaithMode mode = FaithMode::Thresholded;
    CorpusProbe probe = CorpusProbe::Current;
    bool student_rows = false; // also emit the other players' induced movement
    bool keep_induced = false;
    int workers = 1;
};

struct OfflineError {
    std::string query_id;
    std::string message;
};

struct OfflineResult {
    std::vector<EvalRow> rows;
    std::vector<OfflineError> errors;
};

/// The single-round modify-and-rerank protocol: for every non-top document of
/// `round`, let the agent modify it, induce a ranking over the modified
/// version plus the other players' round+1 versions, and record promotion and
/// faithfulness against the round-`round` original.
OfflineResult run_offline_eval(const CompetitionLog& log, int round, Agent& agent,
                               const Ranker& ranker, EntailmentScorer& scorer,
                               EmbeddingProvider& provider,
                               const OfflineOptions& options = {});

struct RosterEntry {
    std::string player_id;
    std::shared_ptr<Agent> agent;
};

struct SimResult {
    CompetitionLog log;
    std::vector<std::string> flags; // carried-over documents after agent failures
};

using InitialTextFn =
    std::function<std::string(const Query& query, const std::string& player_id)>;

/// Multi-round simulated competition: per round every active agent modifies
/// its previous-round document given the visible history, then the ranker
/// induces the round's ranking. Agents of bot kinds (LlmBot,
/// SentReplaceBaseline, MockBot) act as static documents before
/// `bot_entry_round`.
SimResult run_online_sim(const std::vector<Query>& queries,
                         const std::vector<RosterEntry>& roster,
                         const InitialTextFn& initial_text, int rounds,
                         const Ranker& ranker, int bot_entry_round = 2);

struct LogEvalOptions {
    int k = 10;
    FaithMode mode = FaithMode::Thresholded;
    CorpusProbe probe = CorpusProbe::Current;
    int workers = 1;
};

/// Per-player rows straight from a recorded log (used for online runs): the
/// row at round r covers the version submitted at r, its promotion from the
/// player's round r-1 rank, and its faithfulness to the round r-1 version.
std::vector<EvalRow> evaluate_log_rows(const CompetitionLog& log, int from_round,
                                       int to_round, EntailmentScorer& scorer,
                                       EmbeddingProvider& provider,
                                       const LogEvalOptions& options = {});

struct VoteRecord {
    std::string doc_id;
    int round = 0;
    std::string dimension; // "quality" | "relevance"
    std::vector<bool> votes;
};

std::vector<VoteRecord> parse_votes(const std::string& content);
std::vector<VoteRecord> load_votes(const std::filesystem::path& path);

/// Fill in quality/relevance grades by (doc_id, round) majority vote.
void attach_grades(std::vector<EvalRow>& rows,
                   const std::vector<VoteRecord>& votes);

struct AggregateOptions {
    bool rounds_mean = false; // mean over per-round means
    int permutations = 100000;
    std::uint64_t seed = 0;
};

struct GroupStats {
    std::string group; // agent kind
    std::size_t row_count = 0;
    std::map<std::string, double> means;       // measure -> mean
    std::map<std::string, std::size_t> counts; // rows contributing per measure
};

struct EvalTable {
    std::vector<std::string> measures;
    std::vector<GroupStats> groups;
    // (group_a, group_b, measure) -> two-tailed paired permutation p-value,
    // pairs formed from per-(query, round) means common to both groups.
    std::map<std::tuple<std::string, std::string, std::string>, double> p_values;
};

EvalTable aggregate(const std::vector<EvalRow>& rows,
                    const AggregateOptions& options = {});

/// Measure value of one row, absent when the row does not carry it.
std::optional<double> measure_value(const EvalRow& row, const std::string& measure);

inline const std::vector<std::string>& table_measures() {
    static const std::vector<std::string> measures = {
        "scaled_promotion", "orig_faith",      "corp_faith_dense",
        "corp_faith_sparse", "quality",        "relevance",
    };
    return measures;
}

} // namespace rankarena
