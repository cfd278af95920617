#include "rankarena/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rankarena/errors.hpp"
#include "rankarena/text.hpp"
#include "rankarena/util.hpp"

namespace rankarena {

using nlohmann::json;

std::string to_string(PlayerKind kind) {
    switch (kind) {
        case PlayerKind::Student: return "student";
        case PlayerKind::StaticDoc: return "static";
        case PlayerKind::LlmBot: return "llm_bot";
        case PlayerKind::SentReplaceBaseline: return "sent_replace";
        case PlayerKind::MockBot: return "mock_bot";
    }
    return "unknown";
}

PlayerKind player_kind_from_string(const std::string& s) {
    if (s == "student") return PlayerKind::Student;
    if (s == "static") return PlayerKind::StaticDoc;
    if (s == "llm_bot") return PlayerKind::LlmBot;
    if (s == "sent_replace") return PlayerKind::SentReplaceBaseline;
    if (s == "mock_bot") return PlayerKind::MockBot;
    throw DataError("unknown player_kind: " + s);
}

std::vector<std::string> RoundRanking::ordered_doc_ids() const {
    std::vector<std::pair<std::string, int>> sorted = entries;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<std::string> out;
    out.reserve(sorted.size());
    for (const auto& [doc_id, rank] : sorted) {
        (void)rank;
        out.push_back(doc_id);
    }
    return out;
}

std::optional<int> RoundRanking::rank_of(const std::string& doc_id) const {
    for (const auto& [id, rank] : entries) {
        if (id == doc_id) return rank;
    }
    return std::nullopt;
}

const Query* CompetitionLog::find_query(const std::string& query_id) const {
    for (const auto& q : queries) {
        if (q.query_id == query_id) return &q;
    }
    return nullptr;
}

const RoundRanking* CompetitionLog::find_ranking(const std::string& query_id,
                                                 int round) const {
    auto it = rankings.find({query_id, round});
    return it == rankings.end() ? nullptr : &it->second;
}

const DocVersion* CompetitionLog::find_version(const std::string& query_id,
                                               int round,
                                               const std::string& player_id) const {
    for (const auto& v : versions) {
        if (v.query_id == query_id && v.round == round && v.player_id == player_id) {
            return &v;
        }
    }
    return nullptr;
}

const DocVersion* CompetitionLog::find_version_by_doc(const std::string& doc_id,
                                                      int round) const {
    for (const auto& v : versions) {
        if (v.doc_id == doc_id && v.round == round) return &v;
    }
    return nullptr;
}

int CompetitionLog::max_round(const std::string& query_id) const {
    int best = 0;
    for (const auto& v : versions) {
        if (v.query_id == query_id) best = std::max(best, v.round);
    }
    return best;
}

std::vector<const DocVersion*> CompetitionLog::versions_at(
    const std::string& query_id, int round) const {
    std::vector<const DocVersion*> out;
    for (const auto& v : versions) {
        if (v.query_id == query_id && v.round == round) out.push_back(&v);
    }
    std::sort(out.begin(), out.end(), [](const DocVersion* a, const DocVersion* b) {
        return a->player_id < b->player_id;
    });
    return out;
}

namespace {

std::string get_string(const json& obj, const char* field, std::size_t line) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string()) {
        throw DataError("line " + std::to_string(line) + ": missing string field '" +
                        field + "'");
    }
    return it->get<std::string>();
}

int get_int(const json& obj, const char* field, std::size_t line) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_number_integer()) {
        throw DataError("line " + std::to_string(line) + ": missing integer field '" +
                        field + "'");
    }
    return it->get<int>();
}

} // namespace

LoadReport parse_competition_log(const std::string& content) {
    CompetitionLog log;
    std::map<std::string, std::string> query_texts;
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
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        DocVersion v;
        v.query_id = get_string(obj, "query_id", line_no);
        const std::string query_text = get_string(obj, "query_text", line_no);
        v.round = get_int(obj, "round", line_no);
        v.player_id = get_string(obj, "player_id", line_no);
        const std::string kind_str = get_string(obj, "player_kind", line_no);
        v.doc_id = get_string(obj, "doc_id", line_no);
        v.text = get_string(obj, "text", line_no);
        if (obj.contains("rank")) {
            if (!obj["rank"].is_number_integer()) {
                throw DataError("line " + std::to_string(line_no) +
                                ": 'rank' must be an integer");
            }
            v.rank = obj["rank"].get<int>();
        }
        if (v.round < 1) {
            throw DataError("line " + std::to_string(line_no) +
                            ": round must be >= 1");
        }
        PlayerKind kind;
        try {
            kind = player_kind_from_string(kind_str);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        auto [pit, inserted] = log.players.emplace(v.player_id, kind);
        if (!inserted && pit->second != kind) {
            throw DataError("line " + std::to_string(line_no) + ": player '" +
                            v.player_id + "' re-declared with a different kind");
        }
        auto [qit, q_inserted] = query_texts.emplace(v.query_id, query_text);
        if (!q_inserted && qit->second != query_text) {
            throw DataError("line " + std::to_string(line_no) + ": query '" +
                            v.query_id + "' re-declared with different text");
        }
        if (q_inserted && text::word_count(query_text) == 0) {
            throw DataError("line " + std::to_string(line_no) + ": query '" +
                            v.query_id + "' has empty text");
        }
        log.versions.push_back(std::move(v));
    }
    for (const auto& [id, qtext] : query_texts) {
        log.queries.push_back(Query{id, qtext});
    }
    // Derive per-round rankings from the rank fields.
    for (const auto& v : log.versions) {
        if (!v.rank) continue;
        auto& ranking = log.rankings[{v.query_id, v.round}];
        ranking.query_id = v.query_id;
        ranking.round = v.round;
        ranking.entries.emplace_back(v.doc_id, *v.rank);
    }
    LoadReport report;
    report.log = std::move(log);
    validate_log(report.log, &report.warnings);
    return report;
}

LoadReport load_competition_log(const std::filesystem::path& path) {
    return parse_competition_log(util::read_file(path));
}

void validate_log(const CompetitionLog& log, std::vector<std::string>* warnings) {
    std::set<std::tuple<std::string, int, std::string>> seen;
    std::map<std::string, std::set<int>> rounds_per_query;
    for (const auto& v : log.versions) {
        if (!seen.insert({v.query_id, v.round, v.player_id}).second) {
            throw DataError("duplicate version for query '" + v.query_id +
                            "' round " + std::to_string(v.round) + " player '" +
                            v.player_id + "'");
        }
        rounds_per_query[v.query_id].insert(v.round);
        if (warnings && text::word_count(v.text) > kWordCap) {
            warnings->push_back("query '" + v.query_id + "' round " +
                                std::to_string(v.round) + " doc '" + v.doc_id +
                                "' exceeds the " + std::to_string(kWordCap) +
                                "-word cap (ingested data kept as-is)");
        }
    }
    for (const auto& [query_id, rounds] : rounds_per_query) {
        int expected = 1;
        for (int r : rounds) {
            if (r != expected) {
                throw DataError("query '" + query_id + "': rounds not contiguous (" +
                                "expected " + std::to_string(expected) + ", found " +
                                std::to_string(r) + ")");
            }
            ++expected;
        }
    }
    for (const auto& [key, ranking] : log.rankings) {
        const auto& [query_id, round] = key;
        std::set<int> ranks;
        for (const auto& [doc_id, rank] : ranking.entries) {
            if (!ranks.insert(rank).second) {
                throw DataError("query '" + query_id + "' round " +
                                std::to_string(round) + ": duplicate rank " +
                                std::to_string(rank));
            }
            bool found = false;
            for (const auto& v : log.versions) {
                if (v.doc_id == doc_id && v.round == round &&
                    v.query_id == query_id) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw DataError("query '" + query_id + "' round " +
                                std::to_string(round) + ": ranked doc '" + doc_id +
                                "' has no version");
            }
        }
        const int n = static_cast<int>(ranking.entries.size());
        if (!ranks.empty() && (*ranks.begin() != 1 || *ranks.rbegin() != n)) {
            throw DataError("query '" + query_id + "' round " +
                            std::to_string(round) + ": ranks are not exactly 1.." +
                            std::to_string(n));
        }
    }
}

std::string serialize_log(const CompetitionLog& log) {
    std::vector<const DocVersion*> order;
    order.reserve(log.versions.size());
    for (const auto& v : log.versions) order.push_back(&v);
    std::sort(order.begin(), order.end(),
              [](const DocVersion* a, const DocVersion* b) {
                  return std::tie(a->query_id, a->round, a->player_id) <
                         std::tie(b->query_id, b->round, b->player_id);
              });
    std::string out;
    for (const DocVersion* v : order) {
        json obj;
        obj["query_id"] = v->query_id;
        obj["query_text"] = log.find_query(v->query_id)->text;
        obj["round"] = v->round;
        obj["player_id"] = v->player_id;
        obj["player_kind"] = to_string(log.players.at(v->player_id));
        obj["doc_id"] = v->doc_id;
        obj["text"] = v->text;
        if (v->rank) obj["rank"] = *v->rank;
        out += obj.dump();
        out += '\n';
    }
    return out;
}

CorpusSnapshot history_upto(const CompetitionLog& log, int round) {
    if (round < 2) {
        throw DataError("history_upto: round must be >= 2, got " +
                        std::to_string(round));
    }
    CorpusSnapshot snap;
    for (const auto& v : log.versions) {
        if (v.round < round) snap.docs.push_back(v);
    }
    std::sort(snap.docs.begin(), snap.docs.end(),
              [](const DocVersion& a, const DocVersion& b) {
                  return std::tie(a.query_id, a.round, a.player_id) <
                         std::tie(b.query_id, b.round, b.player_id);
              });
    return snap;
}

std::size_t median_word_length(const std::vector<DocVersion>& docs) {
    if (docs.empty()) {
        throw DataError("median_word_length: empty collection");
    }
    std::vector<std::size_t> counts;
    counts.reserve(docs.size());
    for (const auto& d : docs) {
        counts.push_back(text::word_count(d.text));
    }
    return text::median_count(std::move(counts));
}

} // namespace rankarena
