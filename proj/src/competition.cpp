#include "rankarena/competition.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rankarena/errors.hpp"
#include "rankarena/text.hpp"
#include "rankarena/util.hpp"

namespace rankarena {

using nlohmann::json;

namespace {

FaithfulnessReport faithfulness_report(const DocVersion& d_curr,
                                       const DocVersion& d_mod,
                                       const Retriever& sparse,
                                       const Retriever& dense,
                                       EntailmentScorer& scorer, int k,
                                       FaithMode mode, CorpusProbe probe) {
    FaithfulnessReport report;
    report.k = k;
    report.mode = mode;
    const OrigFaithResult of = orig_faith(d_curr, d_mod, scorer, mode);
    report.rf_raw = of.rf_mod;
    report.orig_faith = of.value;
    report.orig_degenerate = of.degenerate;
    CorpusFaithOptions options;
    options.k = k;
    options.mode = mode;
    options.probe = probe;
    report.sparse = corpus_faithfulness(d_curr, d_mod, sparse, scorer, options);
    report.dense = corpus_faithfulness(d_curr, d_mod, dense, scorer, options);
    return report;
}

// Replay-mode placement: the other documents keep their recorded order; the
// modified one is inserted at the first position whose incumbent scores
// strictly below it (doc_id breaking exact ties).
RankedList replay_insert(const Query& query, const DocVersion& modified,
                         double modified_score,
                         const std::vector<std::pair<const DocVersion*, double>>& others_by_rank) {
    RankedList list;
    list.query_id = query.query_id;
    std::size_t position = others_by_rank.size();
    for (std::size_t i = 0; i < others_by_rank.size(); ++i) {
        const auto& [doc, score] = others_by_rank[i];
        if (modified_score > score ||
            (modified_score == score && modified.doc_id < doc->doc_id)) {
            position = i;
            break;
        }
    }
    for (std::size_t i = 0; i < others_by_rank.size(); ++i) {
        if (i == position) {
            list.entries.push_back({modified.doc_id, modified_score});
        }
        list.entries.push_back({others_by_rank[i].first->doc_id,
                                others_by_rank[i].second});
    }
    if (position == others_by_rank.size()) {
        list.entries.push_back({modified.doc_id, modified_score});
    }
    return list;
}

bool is_bot_kind(PlayerKind kind) {
    return kind == PlayerKind::LlmBot || kind == PlayerKind::SentReplaceBaseline ||
           kind == PlayerKind::MockBot;
}

} // namespace

OfflineResult run_offline_eval(const CompetitionLog& log, int round, Agent& agent,
                               const Ranker& ranker, EntailmentScorer& scorer,
                               EmbeddingProvider& provider,
                               const OfflineOptions& options) {
    if (round < 1) {
        throw DataError("run_offline_eval: round must be >= 1");
    }
    OfflineResult result;
    const int snapshot_bound =
        options.snapshot == SnapshotBound::ThroughEvalRound ? round + 1 : round;
    const CorpusSnapshot snapshot = history_upto(log, snapshot_bound);
    const SparseRetriever sparse_retriever(snapshot);
    const DenseRetriever dense_retriever(snapshot, provider);

    struct Task {
        const Query* query;
        const RoundRanking* ranking_curr;
        const DocVersion* d_curr;
        std::vector<const DocVersion*> others_next; // sorted by recorded rank
    };
    std::vector<Task> tasks;
    for (const auto& query : log.queries) {
        const RoundRanking* ranking_curr = log.find_ranking(query.query_id, round);
        if (ranking_curr == nullptr || ranking_curr->entries.empty()) {
            continue; // query was not played at this round
        }
        const auto ordered = ranking_curr->ordered_doc_ids();
        // The next-round versions of every player must exist before any
        // document of this query can be evaluated.
        bool complete = true;
        std::map<std::string, const DocVersion*> next_by_doc;
        for (const auto& doc_id : ordered) {
            const DocVersion* curr = log.find_version_by_doc(doc_id, round);
            const DocVersion* next =
                curr ? log.find_version(query.query_id, round + 1, curr->player_id)
                     : nullptr;
            if (curr == nullptr || next == nullptr) {
                result.errors.push_back(
                    {query.query_id, "missing round-" + std::to_string(round + 1) +
                                         " version for doc '" + doc_id + "'"});
                complete = false;
                break;
            }
            next_by_doc[doc_id] = next;
        }
        if (!complete) continue;
        // The top-ranked document is never modified.
        for (std::size_t i = 1; i < ordered.size(); ++i) {
            Task task;
            task.query = &query;
            task.ranking_curr = ranking_curr;
            task.d_curr = log.find_version_by_doc(ordered[i], round);
            for (const auto& doc_id : ordered) {
                if (doc_id == ordered[i]) continue;
                task.others_next.push_back(next_by_doc[doc_id]);
            }
            tasks.push_back(std::move(task));
        }
    }

    // One student faithfulness report per (query, player); it does not depend
    // on which document the agent modified.
    std::map<std::pair<std::string, std::string>, FaithfulnessReport> student_faith;
    if (options.student_rows) {
        for (const auto& task : tasks) {
            for (const DocVersion* next : task.others_next) {
                const auto key = std::make_pair(next->query_id, next->player_id);
                if (student_faith.count(key) > 0) continue;
                const DocVersion* curr =
                    log.find_version(next->query_id, round, next->player_id);
                student_faith.emplace(
                    key, faithfulness_report(*curr, *next, sparse_retriever,
                                             dense_retriever, scorer, options.k,
                                             options.mode, options.probe));
            }
        }
    }

    std::vector<std::vector<EvalRow>> row_buckets(tasks.size());
    std::vector<std::optional<OfflineError>> task_errors(tasks.size());
    util::parallel_for(tasks.size(), options.workers, [&](std::size_t t) {
        const Task& task = tasks[t];
        const Query& query = *task.query;
        const DocVersion& d_curr = *task.d_curr;
        try {
            const AgentOutcome outcome =
                agent.modify({log, query, d_curr, round + 1});
            DocVersion modified = d_curr;
            modified.round = round + 1;
            modified.text = outcome.new_text;
            modified.rank.reset();

            RankedList induced;
            const DocVersion* own_next =
                log.find_version(query.query_id, round + 1, d_curr.player_id);
            const RoundRanking* recorded_next =
                log.find_ranking(query.query_id, round + 1);
            if (options.rank_mode == RankMode::Replay && recorded_next != nullptr) {
                if (own_next != nullptr && own_next->text == modified.text) {
                    // Untouched relative to the recorded next round: replay.
                    induced.query_id = query.query_id;
                    for (const auto& doc_id : recorded_next->ordered_doc_ids()) {
                        induced.entries.push_back({doc_id, 0.0});
                    }
                } else {
                    std::vector<std::pair<const DocVersion*, double>> others;
                    others.reserve(task.others_next.size());
                    std::vector<const DocVersion*> by_rank = task.others_next;
                    std::sort(by_rank.begin(), by_rank.end(),
                              [&](const DocVersion* a, const DocVersion* b) {
                                  return *recorded_next->rank_of(a->doc_id) <
                                         *recorded_next->rank_of(b->doc_id);
                              });
                    for (const DocVersion* doc : by_rank) {
                        others.emplace_back(doc,
                                            ranker.score_text(query, doc->text));
                    }
                    induced = replay_insert(query, modified,
                                            ranker.score_text(query, modified.text),
                                            others);
                }
            } else {
                std::vector<DocVersion> candidates;
                candidates.push_back(modified);
                for (const DocVersion* doc : task.others_next) {
                    candidates.push_back(*doc);
                }
                induced = rank_documents(ranker, query, candidates);
            }

            const int n = static_cast<int>(induced.entries.size());
            EvalRow row;
            row.query_id = query.query_id;
            row.round = round;
            row.player_id = d_curr.player_id;
            row.doc_id = d_curr.doc_id;
            row.agent_kind = agent.kind();
            row.agent_name = agent.name();
            row.promotion =
                scaled_promotion(*d_curr.rank, induced.rank_of(d_curr.doc_id), n);
            row.faith = faithfulness_report(d_curr, modified, sparse_retriever,
                                            dense_retriever, scorer, options.k,
                                            options.mode, options.probe);
            if (options.keep_induced) row.induced = induced;
            row_buckets[t].push_back(std::move(row));

            if (options.student_rows) {
                for (const DocVersion* next : task.others_next) {
                    const auto curr_rank = task.ranking_curr->rank_of(next->doc_id);
                    const int next_rank = induced.rank_of(next->doc_id);
                    if (!curr_rank || next_rank == 0) continue;
                    EvalRow srow;
                    srow.query_id = query.query_id;
                    srow.round = round;
                    srow.player_id = next->player_id;
                    srow.doc_id = next->doc_id;
                    srow.agent_kind = log.players.at(next->player_id);
                    srow.agent_name = to_string(srow.agent_kind);
                    srow.promotion = scaled_promotion(*curr_rank, next_rank, n);
                    srow.faith =
                        student_faith.at({next->query_id, next->player_id});
                    row_buckets[t].push_back(std::move(srow));
                }
            }
        } catch (const TransportError&) {
            throw; // service outages abort the run
        } catch (const Error& e) {
            task_errors[t] = OfflineError{query.query_id, e.what()};
        }
    });
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (task_errors[t]) result.errors.push_back(*task_errors[t]);
        for (auto& row : row_buckets[t]) result.rows.push_back(std::move(row));
    }
    return result;
}

SimResult run_online_sim(const std::vector<Query>& queries,
                         const std::vector<RosterEntry>& roster,
                         const InitialTextFn& initial_text, int rounds,
                         const Ranker& ranker, int bot_entry_round) {
    if (queries.empty()) {
        throw DataError("run_online_sim: no queries");
    }
    if (roster.size() < 2 || roster.size() > 8) {
        throw DataError("run_online_sim: roster size must be in [2, 8]");
    }
    if (rounds < 1) {
        throw DataError("run_online_sim: rounds must be >= 1");
    }
    if (bot_entry_round > rounds) {
        throw DataError("run_online_sim: bot_entry_round exceeds rounds");
    }
    SimResult result;
    CompetitionLog& log = result.log;
    for (const auto& query : queries) {
        log.queries.push_back(query);
    }
    std::sort(log.queries.begin(), log.queries.end(),
              [](const Query& a, const Query& b) { return a.query_id < b.query_id; });
    for (const auto& entry : roster) {
        log.players[entry.player_id] = entry.agent->kind();
    }

    auto doc_id_for = [](const Query& q, const std::string& player_id) {
        return q.query_id + ":" + player_id;
    };

    for (int round = 1; round <= rounds; ++round) {
        for (const auto& query : log.queries) {
            std::vector<DocVersion> round_docs;
            for (const auto& entry : roster) {
                DocVersion v;
                v.doc_id = doc_id_for(query, entry.player_id);
                v.player_id = entry.player_id;
                v.query_id = query.query_id;
                v.round = round;
                if (round == 1) {
                    v.text = initial_text(query, entry.player_id);
                } else {
                    const DocVersion* prev =
                        log.find_version(query.query_id, round - 1, entry.player_id);
                    const bool active = !is_bot_kind(entry.agent->kind()) ||
                                        round >= bot_entry_round;
                    if (!active) {
                        v.text = prev->text;
                    } else {
                        try {
                            v.text = entry.agent
                                         ->modify({log, query, *prev, round})
                                         .new_text;
                        } catch (const Error& e) {
                            v.text = prev->text;
                            result.flags.push_back(
                                "query '" + query.query_id + "' round " +
                                std::to_string(round) + " player '" +
                                entry.player_id + "' carried over: " + e.what());
                        }
                    }
                }
                round_docs.push_back(std::move(v));
            }
            const RankedList ranked = rank_documents(ranker, query, round_docs);
            RoundRanking ranking;
            ranking.query_id = query.query_id;
            ranking.round = round;
            for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
                ranking.entries.emplace_back(ranked.entries[i].doc_id,
                                             static_cast<int>(i) + 1);
            }
            for (auto& doc : round_docs) {
                doc.rank = ranked.rank_of(doc.doc_id);
                log.versions.push_back(std::move(doc));
            }
            log.rankings[{query.query_id, round}] = std::move(ranking);
        }
    }
    validate_log(log);
    return result;
}

std::vector<EvalRow> evaluate_log_rows(const CompetitionLog& log, int from_round,
                                       int to_round, EntailmentScorer& scorer,
                                       EmbeddingProvider& provider,
                                       const LogEvalOptions& options) {
    if (from_round < 2 || to_round < from_round) {
        throw DataError("evaluate_log_rows: need 2 <= from_round <= to_round");
    }
    struct Task {
        const Query* query;
        const DocVersion* prev;
        const DocVersion* curr;
        int n;
        int round;
    };
    std::vector<Task> tasks;
    for (int round = from_round; round <= to_round; ++round) {
        for (const auto& query : log.queries) {
            const RoundRanking* prev_ranking =
                log.find_ranking(query.query_id, round - 1);
            const RoundRanking* curr_ranking = log.find_ranking(query.query_id, round);
            if (prev_ranking == nullptr || curr_ranking == nullptr) continue;
            for (const auto* curr : log.versions_at(query.query_id, round)) {
                const DocVersion* prev =
                    log.find_version(query.query_id, round - 1, curr->player_id);
                if (prev == nullptr || !prev->rank || !curr->rank) continue;
                tasks.push_back({&query, prev, curr,
                                 static_cast<int>(curr_ranking->entries.size()),
                                 round});
            }
        }
    }
    std::vector<EvalRow> rows(tasks.size());
    // One retriever pair per round bound; rounds repeat across tasks.
    std::map<int, std::unique_ptr<SparseRetriever>> sparse_cache;
    std::map<int, std::unique_ptr<DenseRetriever>> dense_cache;
    for (const auto& task : tasks) {
        if (sparse_cache.count(task.round) == 0) {
            CorpusSnapshot snap = history_upto(log, task.round);
            sparse_cache[task.round] = std::make_unique<SparseRetriever>(snap);
            dense_cache[task.round] =
                std::make_unique<DenseRetriever>(std::move(snap), provider);
        }
    }
    util::parallel_for(tasks.size(), options.workers, [&](std::size_t t) {
        const Task& task = tasks[t];
        EvalRow row;
        row.query_id = task.query->query_id;
        row.round = task.round;
        row.player_id = task.curr->player_id;
        row.doc_id = task.curr->doc_id;
        row.agent_kind = log.players.at(task.curr->player_id);
        row.agent_name = to_string(row.agent_kind);
        row.promotion = scaled_promotion(*task.prev->rank, *task.curr->rank, task.n);
        row.faith = faithfulness_report(
            *task.prev, *task.curr, *sparse_cache.at(task.round),
            *dense_cache.at(task.round), scorer, options.k, options.mode,
            options.probe);
        rows[t] = std::move(row);
    });
    return rows;
}

std::vector<VoteRecord> parse_votes(const std::string& content) {
    std::vector<VoteRecord> votes;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError("votes line " + std::to_string(line_no) + ": " + e.what());
        }
        VoteRecord record;
        record.doc_id = obj.at("doc_id").get<std::string>();
        record.round = obj.at("round").get<int>();
        record.dimension = obj.at("dimension").get<std::string>();
        if (record.dimension != "quality" && record.dimension != "relevance") {
            throw DataError("votes line " + std::to_string(line_no) +
                            ": dimension must be quality or relevance");
        }
        for (const auto& v : obj.at("votes")) {
            record.votes.push_back(v.get<bool>());
        }
        votes.push_back(std::move(record));
    }
    return votes;
}

std::vector<VoteRecord> load_votes(const std::filesystem::path& path) {
    return parse_votes(util::read_file(path));
}

void attach_grades(std::vector<EvalRow>& rows, const std::vector<VoteRecord>& votes) {
    std::map<std::tuple<std::string, int, std::string>, int> grades;
    for (const auto& record : votes) {
        grades[{record.doc_id, record.round, record.dimension}] =
            majority_grade(record.votes);
    }
    for (auto& row : rows) {
        auto q = grades.find({row.doc_id, row.round, "quality"});
        if (q != grades.end()) row.quality = q->second;
        auto r = grades.find({row.doc_id, row.round, "relevance"});
        if (r != grades.end()) row.relevance = r->second;
    }
}

std::optional<double> measure_value(const EvalRow& row, const std::string& measure) {
    if (measure == "scaled_promotion") return row.promotion.scaled;
    if (measure == "orig_faith") return row.faith.orig_faith;
    if (measure == "corp_faith_dense") return row.faith.dense.normalized;
    if (measure == "corp_faith_sparse") return row.faith.sparse.normalized;
    if (measure == "quality") {
        if (row.quality) return static_cast<double>(*row.quality);
        return std::nullopt;
    }
    if (measure == "relevance") {
        if (row.relevance) return static_cast<double>(*row.relevance);
        return std::nullopt;
    }
    throw DataError("unknown measure: " + measure);
}

EvalTable aggregate(const std::vector<EvalRow>& rows,
                    const AggregateOptions& options) {
    if (rows.empty()) {
        throw DataError("aggregate: no rows");
    }
    EvalTable table;
    table.measures = table_measures();
    std::map<std::string, std::vector<const EvalRow*>> by_group;
    for (const auto& row : rows) {
        by_group[to_string(row.agent_kind)].push_back(&row);
    }
    for (const auto& [group, group_rows] : by_group) {
        GroupStats stats;
        stats.group = group;
        stats.row_count = group_rows.size();
        for (const auto& measure : table.measures) {
            std::map<int, std::pair<double, std::size_t>> per_round;
            double sum = 0.0;
            std::size_t count = 0;
            for (const EvalRow* row : group_rows) {
                const auto value = measure_value(*row, measure);
                if (!value) continue;
                sum += *value;
                ++count;
                auto& bucket = per_round[row->round];
                bucket.first += *value;
                ++bucket.second;
            }
            if (count == 0) continue;
            double mean = 0.0;
            if (options.rounds_mean) {
                for (const auto& [round, bucket] : per_round) {
                    (void)round;
                    mean += bucket.first / static_cast<double>(bucket.second);
                }
                mean /= static_cast<double>(per_round.size());
            } else {
                mean = sum / static_cast<double>(count);
            }
            stats.means[measure] = mean;
            stats.counts[measure] = count;
        }
        table.groups.push_back(std::move(stats));
    }
    // Pairwise significance: per-(query, round) means paired across groups.
    for (std::size_t a = 0; a < table.groups.size(); ++a) {
        for (std::size_t b = a + 1; b < table.groups.size(); ++b) {
            const std::string& ga = table.groups[a].group;
            const std::string& gb = table.groups[b].group;
            for (const auto& measure : table.measures) {
                auto key_means = [&](const std::string& group) {
                    std::map<std::pair<std::string, int>, std::pair<double, std::size_t>>
                        acc;
                    for (const EvalRow* row : by_group.at(group)) {
                        const auto value = measure_value(*row, measure);
                        if (!value) continue;
                        auto& bucket = acc[{row->query_id, row->round}];
                        bucket.first += *value;
                        ++bucket.second;
                    }
                    std::map<std::pair<std::string, int>, double> means;
                    for (const auto& [key, bucket] : acc) {
                        means[key] = bucket.first / static_cast<double>(bucket.second);
                    }
                    return means;
                };
                const auto means_a = key_means(ga);
                const auto means_b = key_means(gb);
                std::vector<double> va, vb;
                for (const auto& [key, value] : means_a) {
                    auto it = means_b.find(key);
                    if (it == means_b.end()) continue;
                    va.push_back(value);
                    vb.push_back(it->second);
                }
                if (va.empty()) continue;
                table.p_values[{ga, gb, measure}] =
                    permutation_test(va, vb, options.permutations, options.seed);
            }
        }
    }
    return table;
}

} // namespace rankarena
