#include "rankarena/prompts.hpp"

#include <algorithm>
#include <random>

#include "rankarena/errors.hpp"
#include "rankarena/util.hpp"

namespace rankarena {

std::string to_string(ContextType type) {
    switch (type) {
        case ContextType::Pointwise: return "pointwise";
        case ContextType::Pairwise: return "pairwise";
        case ContextType::Listwise: return "listwise";
        case ContextType::Temporal: return "temporal";
    }
    return "unknown";
}

ContextType context_type_from_string(const std::string& s) {
    if (s == "pointwise") return ContextType::Pointwise;
    if (s == "pairwise") return ContextType::Pairwise;
    if (s == "listwise") return ContextType::Listwise;
    if (s == "temporal") return ContextType::Temporal;
    throw DataError("unknown context type: " + s);
}

std::string to_string(PairMode mode) {
    return mode == PairMode::Random ? "random" : "top_plus_random";
}

PairMode pair_mode_from_string(const std::string& s) {
    if (s == "random") return PairMode::Random;
    if (s == "top_plus_random") return PairMode::TopPlusRandom;
    throw DataError("unknown pair mode: " + s);
}

void PromptConfig::validate() const {
    if (num_queries < 1 || num_queries > 2) {
        throw DataError("PromptConfig: num_queries must be 1 or 2");
    }
    if (examples_per_query < 1 || examples_per_query > 3) {
        throw DataError("PromptConfig: examples_per_query must be in {1,2,3}");
    }
    if ((context_type == ContextType::Pairwise) != pair_mode.has_value()) {
        throw DataError("PromptConfig: pair_mode present iff context is pairwise");
    }
    if ((context_type == ContextType::Temporal) != temporal_depth.has_value()) {
        throw DataError("PromptConfig: temporal_depth present iff context is temporal");
    }
    if (temporal_depth && (*temporal_depth < 2 || *temporal_depth > 3)) {
        throw DataError("PromptConfig: temporal_depth must be 2 or 3");
    }
    if (temperature < 0.0 || temperature > 2.0) {
        throw DataError("PromptConfig: temperature must be in [0, 2]");
    }
}

bool PromptConfig::same_factors(const PromptConfig& other) const {
    return context_type == other.context_type && num_queries == other.num_queries &&
           examples_per_query == other.examples_per_query &&
           include_current_rank == other.include_current_rank &&
           include_query_at_hand == other.include_query_at_hand &&
           pair_mode == other.pair_mode && temporal_depth == other.temporal_depth &&
           temperature == other.temperature;
}

std::string config_name(const PromptConfig& config) {
    std::string name = to_string(config.context_type);
    name += "_nq" + std::to_string(config.num_queries);
    name += "_ex" + std::to_string(config.examples_per_query);
    name += config.include_current_rank ? "_rank1" : "_rank0";
    name += config.include_query_at_hand ? "_self1" : "_self0";
    if (config.pair_mode) {
        name += (*config.pair_mode == PairMode::Random) ? "_pairrand" : "_pairtop";
    }
    if (config.temporal_depth) {
        name += "_depth" + std::to_string(*config.temporal_depth);
    }
    name += "_t" + util::fmt_fixed(config.temperature, 1);
    return name;
}

namespace {

constexpr const char* kQueryMarker = "- Candidate Query: ";
constexpr const char* kDocumentMarker = "- Candidate Document: ";

// Ordinal labels for "the j-th most recent ranking", j starting at 1.
const char* ranking_label(int j) {
    switch (j) {
        case 1: return "latest ranking";
        case 2: return "second to latest ranking";
        case 3: return "third to latest ranking";
        default:
            throw DataError("no ranking label for offset " + std::to_string(j));
    }
}

} // namespace

std::string render_shared(const Query& query, const DocVersion& current_doc,
                          std::size_t median_len) {
    if (median_len < 1) {
        throw DataError("render_shared: median length must be >= 1");
    }
    std::string out;
    out += "Edit the candidate document to improve its search engine ranking for "
           "the candidate query, aiming for the highest rank (1 being the "
           "highest). Use the black box search engine's past rankings over "
           "various queries, provided as context by the user, to guide your "
           "edits. Focus on editing the most impactful sentences to enhance "
           "ranking potential. Target an edited document length of around ";
    out += std::to_string(median_len);
    out += " words, not exceeding 150 words. Ensure the edited document is very "
           "similar to the candidate document. Generate only the edited "
           "document, without additional comments or titles.\n";
    out += "Input:\n";
    out += kQueryMarker;
    out += query.text;
    out += "\n";
    out += kDocumentMarker;
    out += current_doc.text;
    out += "\n";
    return out;
}

std::string extract_candidate_query(const std::string& shared_part) {
    const std::string marker = std::string("\n") + kQueryMarker;
    const auto begin = shared_part.find(marker);
    if (begin == std::string::npos) return {};
    const auto value_begin = begin + marker.size();
    const auto end = shared_part.find(std::string("\n") + kDocumentMarker, value_begin);
    if (end == std::string::npos) return {};
    return shared_part.substr(value_begin, end - value_begin);
}

std::string extract_candidate_document(const std::string& shared_part) {
    const std::string marker = std::string("\n") + kDocumentMarker;
    const auto begin = shared_part.find(marker);
    if (begin == std::string::npos) return {};
    const auto value_begin = begin + marker.size();
    auto end = shared_part.size();
    if (end > value_begin && shared_part[end - 1] == '\n') --end;
    return shared_part.substr(value_begin, end - value_begin);
}

namespace {

struct ContextBuilder {
    const PromptConfig& config;
    const CompetitionLog& log;
    const Query& played;
    const DocVersion& current_doc;
    int round; // documents must come from rounds < round
    std::mt19937_64 rng;
    PromptBundle bundle;

    ContextBuilder(const PromptConfig& cfg, const CompetitionLog& l, const Query& q,
                   const DocVersion& doc, int r)
        : config(cfg), log(l), played(q), current_doc(doc), round(r), rng(cfg.seed) {
        bundle.config = cfg;
    }

    int history_depth() const {
        return config.context_type == ContextType::Temporal
                   ? *config.temporal_depth
                   : config.examples_per_query;
    }

    const RoundRanking& ranking_at(const std::string& query_id, int offset) const {
        const RoundRanking* r = log.find_ranking(query_id, round - offset);
        if (r == nullptr || r->entries.empty()) {
            throw DataError("build_context: query '" + query_id +
                            "' has no ranking for round " +
                            std::to_string(round - offset));
        }
        return *r;
    }

    const DocVersion& doc_at(const std::string& doc_id, int offset) {
        const DocVersion* v = log.find_version_by_doc(doc_id, round - offset);
        if (v == nullptr) {
            throw DataError("build_context: doc '" + doc_id +
                            "' missing at round " + std::to_string(round - offset));
        }
        bundle.provenance.push_back({v->query_id, v->round, v->doc_id});
        return *v;
    }

    bool query_eligible(const std::string& query_id) const {
        const int depth = history_depth();
        for (int j = 1; j <= depth; ++j) {
            const RoundRanking* r = log.find_ranking(query_id, round - j);
            if (r == nullptr || r->entries.empty()) return false;
            if (config.context_type == ContextType::Pairwise && r->entries.size() < 2) {
                return false;
            }
        }
        if (config.context_type == ContextType::Temporal) {
            return !temporal_candidates(query_id).empty();
        }
        return true;
    }

    // Players whose document is ranked in every one of the last depth rounds.
    std::vector<std::string> temporal_candidates(const std::string& query_id) const {
        const int depth = history_depth();
        std::vector<std::string> out;
        for (const auto* v : log.versions_at(query_id, round - 1)) {
            bool ok = true;
            for (int j = 1; j <= depth && ok; ++j) {
                const RoundRanking* r = log.find_ranking(query_id, round - j);
                ok = r != nullptr && r->rank_of(v->doc_id).has_value() &&
                     log.find_version_by_doc(v->doc_id, round - j) != nullptr;
            }
            if (ok) out.push_back(v->doc_id);
        }
        return out;
    }

    std::vector<const Query*> select_queries() {
        const int depth = history_depth();
        if (round - depth < 1) {
            throw DataError("build_context: need " + std::to_string(depth) +
                            " past rounds before round " + std::to_string(round) +
                            ", only " + std::to_string(round - 1) + " exist");
        }
        std::vector<const Query*> selected;
        if (config.include_query_at_hand) {
            if (!query_eligible(played.query_id)) {
                throw DataError("build_context: query '" + played.query_id +
                                "' lacks rankings for the last " +
                                std::to_string(depth) + " rounds");
            }
            selected.push_back(&played);
        }
        const int wanted =
            config.num_queries - static_cast<int>(selected.size());
        if (wanted > 0) {
            std::vector<const Query*> pool;
            for (const auto& q : log.queries) {
                if (q.query_id == played.query_id) continue;
                if (query_eligible(q.query_id)) pool.push_back(&q);
            }
            if (static_cast<int>(pool.size()) < wanted) {
                throw DataError("build_context: need " + std::to_string(wanted) +
                                " other queries with " + std::to_string(depth) +
                                " rounds of history, found " +
                                std::to_string(pool.size()));
            }
            for (int i = 0; i < wanted; ++i) {
                const auto pick = util::bounded(rng, pool.size());
                selected.push_back(pool[pick]);
                pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
            }
        }
        return selected;
    }

    // "query: <Q>\n\n* document: <A>\n\n<label>: <r(A)>\n\n\n* document: <B>..."
    std::string pairwise_batch(const Query& q, int offset) {
        const RoundRanking& ranking = ranking_at(q.query_id, offset);
        const auto ordered = ranking.ordered_doc_ids();
        std::size_t first, second;
        if (*config.pair_mode == PairMode::TopPlusRandom) {
            first = 0;
            second = 1 + util::bounded(rng, ordered.size() - 1);
        } else {
            first = util::bounded(rng, ordered.size());
            second = util::bounded(rng, ordered.size() - 1);
            if (second >= first) ++second;
            if (second < first) std::swap(first, second); // present by rank
        }
        std::string out = "query: " + q.text;
        for (std::size_t pick : {first, second}) {
            const std::string& doc_id = ordered[pick];
            const DocVersion& doc = doc_at(doc_id, offset);
            out += "\n\n* document: " + doc.text;
            out += "\n\n" + std::string(ranking_label(offset)) + ": " +
                   std::to_string(*ranking.rank_of(doc_id));
        }
        return out;
    }

    std::string pointwise_batch(const Query& q, int offset) {
        const RoundRanking& ranking = ranking_at(q.query_id, offset);
        const std::string winner_id = ranking.ordered_doc_ids().front();
        const DocVersion& doc = doc_at(winner_id, offset);
        std::string out = "query: " + q.text;
        out += "\n\n* document: " + doc.text;
        out += "\n\n" + std::string(ranking_label(offset)) + ": 1";
        return out;
    }

    std::string temporal_batch(const Query& q, const std::string& doc_id) {
        std::string out = "query: " + q.text;
        for (int j = 1; j <= *config.temporal_depth; ++j) {
            const RoundRanking& ranking = ranking_at(q.query_id, j);
            const DocVersion& doc = doc_at(doc_id, j);
            out += "\n\n* document: " + doc.text;
            out += "\n\n" + std::string(ranking_label(j)) + ": " +
                   std::to_string(*ranking.rank_of(doc_id));
        }
        return out;
    }

    // The latest list is rendered as bullets and excludes the current
    // document; earlier lists are numbered and complete.
    std::string listwise_block(const Query& q) {
        std::string out = "\n\nquery: " + q.text;
        out += "\n\n* documents ordered by latest ranking from highest to lowest "
               "in relation to the query: ";
        for (const auto& doc_id : ranking_at(q.query_id, 1).ordered_doc_ids()) {
            if (doc_id == current_doc.doc_id) continue;
            out += "\n\n\n* " + doc_at(doc_id, 1).text;
        }
        for (int j = 2; j <= config.examples_per_query; ++j) {
            out += "\n\n\n\n\n\n * documents ranked by " +
                   std::string(ranking_label(j)) +
                   " from highest to lowest in relation to the query:";
            int position = 1;
            for (const auto& doc_id : ranking_at(q.query_id, j).ordered_doc_ids()) {
                out += "\n" + std::to_string(position) + ". " + doc_at(doc_id, j).text;
                ++position;
            }
        }
        out += "\n\n\n\n";
        return out;
    }

    PromptBundle build() {
        config.validate();
        if (round < 2) {
            throw DataError("build_context: round must be >= 2 (no history yet)");
        }
        const auto selected = select_queries();
        std::string ctx;
        if (config.context_type == ContextType::Listwise) {
            for (const Query* q : selected) {
                ctx += listwise_block(*q);
            }
        } else {
            std::vector<std::string> batches;
            for (const Query* q : selected) {
                switch (config.context_type) {
                    case ContextType::Pairwise:
                        for (int j = 1; j <= config.examples_per_query; ++j) {
                            batches.push_back(pairwise_batch(*q, j));
                        }
                        break;
                    case ContextType::Pointwise:
                        for (int j = 1; j <= config.examples_per_query; ++j) {
                            batches.push_back(pointwise_batch(*q, j));
                        }
                        break;
                    case ContextType::Temporal: {
                        auto candidates = temporal_candidates(q->query_id);
                        const int wanted =
                            std::min<int>(config.examples_per_query,
                                          static_cast<int>(candidates.size()));
                        if (wanted < config.examples_per_query) {
                            throw DataError(
                                "build_context: query '" + q->query_id + "' has " +
                                std::to_string(candidates.size()) +
                                " documents with full rank history, need " +
                                std::to_string(config.examples_per_query));
                        }
                        for (int e = 0; e < wanted; ++e) {
                            const auto pick = util::bounded(rng, candidates.size());
                            batches.push_back(temporal_batch(*q, candidates[pick]));
                            candidates.erase(candidates.begin() +
                                             static_cast<std::ptrdiff_t>(pick));
                        }
                        break;
                    }
                    case ContextType::Listwise:
                        break;
                }
            }
            ctx = "\n\n";
            for (std::size_t i = 0; i < batches.size(); ++i) {
                if (i > 0) ctx += "\n\n\n\n\n";
                ctx += batches[i];
            }
        }
        if (config.include_current_rank) {
            const auto rank = ranking_at(played.query_id, 1).rank_of(current_doc.doc_id);
            if (!rank) {
                throw DataError("build_context: current doc '" + current_doc.doc_id +
                                "' is not in the latest ranking of query '" +
                                played.query_id + "'");
            }
            ctx += "\n\ncurrent rank: " + std::to_string(*rank);
        }
        bundle.context_part = std::move(ctx);
        return std::move(bundle);
    }
};

} // namespace

PromptBundle build_context(const PromptConfig& config, const CompetitionLog& log,
                           const Query& query, const DocVersion& current_doc,
                           int round) {
    ContextBuilder builder(config, log, query, current_doc, round);
    return builder.build();
}

std::vector<PromptConfig> enumerate_grid(std::uint64_t seed) {
    std::vector<PromptConfig> grid;
    const ContextType types[] = {ContextType::Pointwise, ContextType::Pairwise,
                                 ContextType::Listwise, ContextType::Temporal};
    const double temperatures[] = {0.0, 0.5, 1.0, 1.5, 2.0};
    for (ContextType type : types) {
        for (int nq : {1, 2}) {
            for (int ex : {1, 2, 3}) {
                for (bool rank : {false, true}) {
                    for (bool self : {true, false}) {
                        std::vector<PromptConfig> variants;
                        PromptConfig base;
                        base.context_type = type;
                        base.num_queries = nq;
                        base.examples_per_query = ex;
                        base.include_current_rank = rank;
                        base.include_query_at_hand = self;
                        base.seed = seed;
                        if (type == ContextType::Pairwise) {
                            for (PairMode mode : {PairMode::Random, PairMode::TopPlusRandom}) {
                                PromptConfig c = base;
                                c.pair_mode = mode;
                                variants.push_back(c);
                            }
                        } else if (type == ContextType::Temporal) {
                            for (int depth : {2, 3}) {
                                PromptConfig c = base;
                                c.temporal_depth = depth;
                                variants.push_back(c);
                            }
                        } else {
                            variants.push_back(base);
                        }
                        for (const auto& v : variants) {
                            for (double t : temperatures) {
                                PromptConfig c = v;
                                c.temperature = t;
                                grid.push_back(c);
                            }
                        }
                    }
                }
            }
        }
    }
    return grid;
}

GridManifest grid_manifest() {
    GridManifest m;
    m.pointwise = 2 * 3 * 2 * 2;
    m.pairwise = 2 * 3 * 2 * 2 * 2;
    m.listwise = 2 * 3 * 2 * 2;
    m.temporal = 2 * 3 * 2 * 2 * 2;
    m.base_total = m.pointwise + m.pairwise + m.listwise + m.temporal;
    m.temperatures = 5;
    m.total = m.base_total * m.temperatures;
    m.formula =
        "pointwise 2*3*2*2=24; pairwise 2*3*2*2*2=48; listwise 2*3*2*2=24; "
        "temporal 2*3*2*2*2=48; base 144; x5 temperatures = 720";
    return m;
}

PromptConfig pairwise_best(std::uint64_t seed) {
    PromptConfig c;
    c.context_type = ContextType::Pairwise;
    c.num_queries = 1;
    c.examples_per_query = 3;
    c.include_current_rank = false;
    c.include_query_at_hand = true;
    c.pair_mode = PairMode::Random;
    c.temperature = 0.5;
    c.seed = seed;
    return c;
}

PromptConfig listwise_best(std::uint64_t seed) {
    PromptConfig c;
    c.context_type = ContextType::Listwise;
    c.num_queries = 1;
    c.examples_per_query = 2;
    c.include_current_rank = false;
    c.include_query_at_hand = true;
    c.temperature = 0.0;
    c.seed = seed;
    return c;
}

void to_json(nlohmann::json& j, const PromptConfig& config) {
    j = nlohmann::json{
        {"context_type", to_string(config.context_type)},
        {"num_queries", config.num_queries},
        {"examples_per_query", config.examples_per_query},
        {"include_current_rank", config.include_current_rank},
        {"include_query_at_hand", config.include_query_at_hand},
        {"temperature", config.temperature},
        {"seed", config.seed},
    };
    if (config.pair_mode) j["pair_mode"] = to_string(*config.pair_mode);
    if (config.temporal_depth) j["temporal_depth"] = *config.temporal_depth;
}

void from_json(const nlohmann::json& j, PromptConfig& config) {
    config.context_type = context_type_from_string(j.at("context_type"));
    config.num_queries = j.at("num_queries");
    config.examples_per_query = j.at("examples_per_query");
    config.include_current_rank = j.at("include_current_rank");
    config.include_query_at_hand = j.at("include_query_at_hand");
    config.temperature = j.at("temperature");
    config.seed = j.at("seed");
    if (j.contains("pair_mode")) {
        config.pair_mode = pair_mode_from_string(j.at("pair_mode"));
    } else {
        config.pair_mode.reset();
    }
    if (j.contains("temporal_depth")) {
        config.temporal_depth = j.at("temporal_depth").get<int>();
    } else {
        config.temporal_depth.reset();
    }
    config.validate();
}

void to_json(nlohmann::json& j, const PromptBundle& bundle) {
    nlohmann::json provenance = nlohmann::json::array();
    for (const auto& p : bundle.provenance) {
        provenance.push_back({{"query_id", p.query_id},
                              {"round", p.round},
                              {"doc_id", p.doc_id}});
    }
    j = nlohmann::json{
        {"shared_part", bundle.shared_part},
        {"context_part", bundle.context_part},
        {"config", bundle.config},
        {"provenance", provenance},
    };
}

} // namespace rankarena
