#include "rankarena/agents.hpp"

#include <algorithm>
#include <cctype>

#include "rankarena/errors.hpp"
#include "rankarena/text.hpp"

namespace rankarena {

namespace {

std::string trim_ws(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

AgentOutcome llm_bot_modify(const PromptConfig& config, const CompetitionLog& log,
                            const Query& query, const DocVersion& current_doc,
                            int round, LlmClient& client, int max_retries) {
    if (max_retries < 0) {
        throw DataError("llm_bot_modify: max_retries must be >= 0");
    }
    PromptBundle bundle = build_context(config, log, query, current_doc, round);
    // The shared part's length target is the median word count of the
    // documents quoted in the context.
    std::vector<DocVersion> quoted;
    for (const auto& p : bundle.provenance) {
        const DocVersion* v = log.find_version_by_doc(p.doc_id, p.round);
        if (v != nullptr) quoted.push_back(*v);
    }
    const std::size_t median_len =
        quoted.empty() ? std::max<std::size_t>(1, text::word_count(current_doc.text))
                       : std::max<std::size_t>(1, median_word_length(quoted));
    bundle.shared_part = render_shared(query, current_doc, median_len);

    GenerationRequest request;
    request.system_text = bundle.shared_part;
    request.user_text = bundle.context_part;
    request.temperature = config.temperature;
    request.max_retries = max_retries;

    AgentOutcome outcome;
    outcome.provenance.bundle = bundle;
    std::string last_over_cap;
    int attempts = 0;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        ++attempts;
        const std::string response = trim_ws(client.complete(request));
        const std::size_t words = text::word_count(response);
        if (words == 0) {
            continue; // empty or whitespace, try again
        }
        if (words <= kWordCap) {
            outcome.new_text = response;
            outcome.attempts = attempts;
            return outcome;
        }
        last_over_cap = response;
    }
    outcome.attempts = attempts;
    if (last_over_cap.empty()) {
        throw DataError("llm_bot_modify: empty generation after " +
                        std::to_string(attempts) + " attempts");
    }
    auto truncated = text::truncate_to_word_cap(last_over_cap, kWordCap);
    if (!truncated) {
        throw DataError("llm_bot_modify: generation has no sentence boundary "
                        "within the " + std::to_string(kWordCap) + "-word cap");
    }
    outcome.new_text = *truncated;
    outcome.truncated = true;
    return outcome;
}

AgentOutcome static_modify(const DocVersion& current_doc) {
    AgentOutcome outcome;
    outcome.new_text = current_doc.text;
    outcome.provenance.note = "static";
    return outcome;
}

AgentOutcome sent_replace_modify(const DocVersion& current_doc,
                                 const DocVersion& past_winner,
                                 const Ranker& ranker, const Query& query) {
    const auto own = text::sentences(current_doc.text);
    if (own.size() < 2) {
        throw DataError("sent_replace_modify: document needs >= 2 sentences");
    }
    const auto donor = text::sentences(past_winner.text);
    if (donor.empty()) {
        throw DataError("sent_replace_modify: past winner has no sentences");
    }
    const double base_score = ranker.score_text(query, current_doc.text);
    double best_score = base_score;
    std::optional<std::pair<std::size_t, std::size_t>> best_pair;
    std::string best_text;
    for (std::size_t i = 0; i < own.size(); ++i) {
        for (std::size_t j = 0; j < donor.size(); ++j) {
            std::vector<std::string> edited = own;
            edited[i] = donor[j];
            std::string candidate = text::join_sentences(edited);
            if (text::word_count(candidate) > kWordCap) continue;
            const double score = ranker.score_text(query, candidate);
            // Strict improvement; (i, j) ascending keeps the smallest pair on ties.
            if (score > best_score) {
                best_score = score;
                best_pair = {i, j};
                best_text = std::move(candidate);
            }
        }
    }
    AgentOutcome outcome;
    if (!best_pair) {
        outcome.new_text = current_doc.text;
        outcome.provenance.note = "sent_replace: no improving pair, no-op";
        return outcome;
    }
    outcome.new_text = best_text;
    outcome.provenance.note =
        "sent_replace: replaced sentence " + std::to_string(best_pair->first) +
        " with winner sentence " + std::to_string(best_pair->second);
    return outcome;
}

AgentOutcome copy_top_modify(const DocVersion& current_doc,
                             const RoundRanking& last_ranking,
                             const CompetitionLog& log) {
    if (last_ranking.entries.empty()) {
        throw DataError("copy_top_modify: empty ranking");
    }
    const std::string winner_id = last_ranking.ordered_doc_ids().front();
    const DocVersion* winner =
        log.find_version_by_doc(winner_id, last_ranking.round);
    if (winner == nullptr) {
        throw DataError("copy_top_modify: winner doc '" + winner_id +
                        "' has no version at round " +
                        std::to_string(last_ranking.round));
    }
    AgentOutcome outcome;
    outcome.provenance.note = "copy_top: copied '" + winner_id + "' from round " +
                              std::to_string(last_ranking.round);
    if (text::word_count(winner->text) <= kWordCap) {
        outcome.new_text = winner->text;
        (void)current_doc;
        return outcome;
    }
    auto truncated = text::truncate_to_word_cap(winner->text, kWordCap);
    if (!truncated) {
        throw DataError("copy_top_modify: winner text has no sentence boundary "
                        "within the word cap");
    }
    outcome.new_text = *truncated;
    outcome.truncated = true;
    return outcome;
}

AgentOutcome StaticAgent::modify(const ModifyContext& ctx) {
    return static_modify(ctx.current_doc);
}

AgentOutcome CopyTopAgent::modify(const ModifyContext& ctx) {
    const RoundRanking* last =
        ctx.log.find_ranking(ctx.query.query_id, ctx.round - 1);
    if (last == nullptr) {
        throw DataError("copy_top: no ranking for query '" + ctx.query.query_id +
                        "' at round " + std::to_string(ctx.round - 1));
    }
    return copy_top_modify(ctx.current_doc, *last, ctx.log);
}

AgentOutcome SentReplaceAgent::modify(const ModifyContext& ctx) {
    const RoundRanking* last =
        ctx.log.find_ranking(ctx.query.query_id, ctx.round - 1);
    if (last == nullptr || last->entries.empty()) {
        throw DataError("sent_replace: no ranking for query '" +
                        ctx.query.query_id + "' at round " +
                        std::to_string(ctx.round - 1));
    }
    const std::string winner_id = last->ordered_doc_ids().front();
    const DocVersion* winner = ctx.log.find_version_by_doc(winner_id, last->round);
    if (winner == nullptr) {
        throw DataError("sent_replace: winner doc '" + winner_id +
                        "' has no version");
    }
    return sent_replace_modify(ctx.current_doc, *winner, *ranker_, ctx.query);
}

AgentOutcome LlmBotAgent::modify(const ModifyContext& ctx) {
    return llm_bot_modify(config_, ctx.log, ctx.query, ctx.current_doc, ctx.round,
                          *client_, max_retries_);
}

std::string ScriptedStudentAgent::name() const {
    switch (strategy_) {
        case StudentStrategy::MimicTop: return "student_mimic";
        case StudentStrategy::AppendQueryTerms: return "student_terms";
        case StudentStrategy::RotateSentences: return "student_rotate";
    }
    return "student";
}

AgentOutcome ScriptedStudentAgent::modify(const ModifyContext& ctx) {
    AgentOutcome outcome;
    outcome.provenance.note = name();
    const std::string& current = ctx.current_doc.text;
    switch (strategy_) {
        case StudentStrategy::MimicTop: {
            const RoundRanking* last =
                ctx.log.find_ranking(ctx.query.query_id, ctx.round - 1);
            if (last == nullptr || last->entries.empty()) {
                outcome.new_text = current;
                return outcome;
            }
            const std::string winner_id = last->ordered_doc_ids().front();
            if (winner_id == ctx.current_doc.doc_id) {
                outcome.new_text = current; // already on top, keep the document
                return outcome;
            }
            const DocVersion* winner =
                ctx.log.find_version_by_doc(winner_id, last->round);
            auto own = text::sentences(current);
            const auto donor =
                winner ? text::sentences(winner->text) : std::vector<std::string>{};
            if (own.empty() || donor.empty()) {
                outcome.new_text = current;
                return outcome;
            }
            own.front() = donor.front();
            std::string candidate = text::join_sentences(own);
            outcome.new_text =
                text::word_count(candidate) <= kWordCap ? candidate : current;
            return outcome;
        }
        case StudentStrategy::AppendQueryTerms: {
            std::string candidate = current + " " + ctx.query.text + ".";
            outcome.new_text =
                text::word_count(candidate) <= kWordCap ? candidate : current;
            return outcome;
        }
        case StudentStrategy::RotateSentences: {
            auto parts = text::sentences(current);
            if (parts.size() < 2) {
                outcome.new_text = current;
                return outcome;
            }
            std::rotate(parts.begin(), parts.begin() + 1, parts.end());
            outcome.new_text = text::join_sentences(parts);
            return outcome;
        }
    }
    outcome.new_text = current;
    return outcome;
}

std::string EchoLlmClient::complete(const GenerationRequest& request) {
    return extract_candidate_document(request.system_text);
}

std::string ScriptedLlmClient::complete(const GenerationRequest& request) {
    (void)request;
    if (responses_.empty()) {
        throw DataError("ScriptedLlmClient: empty transcript");
    }
    const std::size_t index =
        std::min<std::size_t>(static_cast<std::size_t>(calls_), responses_.size() - 1);
    ++calls_;
    return responses_[index];
}

std::string AppendQueryTermsLlmClient::complete(const GenerationRequest& request) {
    const std::string doc = extract_candidate_document(request.system_text);
    const std::string query = extract_candidate_query(request.system_text);
    if (query.empty()) return doc;
    return doc + " " + query + ".";
}

} // namespace rankarena
