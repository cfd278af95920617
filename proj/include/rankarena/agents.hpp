#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rankarena/corpus.hpp"
#include "rankarena/prompts.hpp"
#include "rankarena/rankers.hpp"

namespace rankarena {

struct GenerationRequest {
    std::string system_text; // shared prompt part
    std::string user_text;   // context-specific part
    double temperature = 0.0;
    int max_retries = 2;
};

// Text-generation contract (wire format: POST {"model","messages",
// "temperature"} -> choices[0].message.content).
class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual std::string complete(const GenerationRequest& request) = 0;
};

struct AgentProvenance {
    std::optional<PromptBundle> bundle; // LLM agents
    std::string note;                   // baselines / mocks
};

struct AgentOutcome {
    std::string new_text;
    int attempts = 1;
    bool truncated = false;
    AgentProvenance provenance;
};

// Everything an agent may look at when modifying its document for `round`:
// the log's history strictly before `round` plus the document being edited.
struct ModifyContext {
    const CompetitionLog& log;
    const Query& query;
    const DocVersion& current_doc;
    int round;
};

class Agent {
public:
    virtual ~Agent() = default;
    virtual AgentOutcome modify(const ModifyContext& ctx) = 0;
    virtual std::string name() const = 0;
    virtual PlayerKind kind() const = 0;
};

/// Render shared + context prompts, generate at config.temperature, retry on
/// over-length or empty output, then truncate at a sentence boundary within
/// the word cap as a last resort.
AgentOutcome llm_bot_modify(const PromptConfig& config, const CompetitionLog& log,
                            const Query& query, const DocVersion& current_doc,
                            int round, LlmClient& client, int max_retries = 2);

/// Never changes the text.
AgentOutcome static_modify(const DocVersion& current_doc);

/// Greedy single-sentence replacement: tries every (own sentence, winner
/// sentence) pair under the word cap and keeps the edit that maximizes the
/// ranker's score; falls back to a no-op when nothing strictly improves.
AgentOutcome sent_replace_modify(const DocVersion& current_doc,
                                 const DocVersion& past_winner,
                                 const Ranker& ranker, const Query& query);

/// Copies last round's winner, capped at the word limit.
AgentOutcome copy_top_modify(const DocVersion& current_doc,
                             const RoundRanking& last_ranking,
                             const CompetitionLog& log);

class StaticAgent final : public Agent {
public:
    AgentOutcome modify(const ModifyContext& ctx) override;
    std::string name() const override { return "static"; }
    PlayerKind kind() const override { return PlayerKind::StaticDoc; }
};

class CopyTopAgent final : public Agent {
public:
    AgentOutcome modify(const ModifyContext& ctx) override;
    std::string name() const override { return "copy_top"; }
    PlayerKind kind() const override { return PlayerKind::MockBot; }
};

class SentReplaceAgent final : public Agent {
public:
    explicit SentReplaceAgent(const Ranker& ranker) : ranker_(&ranker) {}
    AgentOutcome modify(const ModifyContext& ctx) override;
    std::string name() const override { return "sent_replace"; }
    PlayerKind kind() const override { return PlayerKind::SentReplaceBaseline; }

private:
    const Ranker* ranker_;
};

class LlmBotAgent final : public Agent {
public:
    LlmBotAgent(PromptConfig config, LlmClient& client, int max_retries = 2)
        : config_(std::move(config)), client_(&client), max_retries_(max_retries) {}
    AgentOutcome modify(const ModifyContext& ctx) override;
    std::string name() const override { return config_name(config_); }
    PlayerKind kind() const override { return PlayerKind::LlmBot; }
    const PromptConfig& config() const { return config_; }

private:
    PromptConfig config_;
    LlmClient* client_;
    int max_retries_;
};

// Deterministic stand-ins for human players.
enum class StudentStrategy {
    MimicTop,         // copy content from last round's winner
    AppendQueryTerms, // tack the query terms onto the document
    RotateSentences,  // move the first sentence to the end
};

class ScriptedStudentAgent final : public Agent {
public:
    explicit ScriptedStudentAgent(StudentStrategy strategy)
        : strategy_(strategy) {}
    AgentOutcome modify(const ModifyContext& ctx) override;
    std::string name() const override;
    PlayerKind kind() const override { return PlayerKind::Student; }

private:
    StudentStrategy strategy_;
};

// --- Mock LLM clients -------------------------------------------------------

/// Returns the candidate document embedded in the shared prompt part.
class EchoLlmClient final : public LlmClient {
public:
    std::string complete(const GenerationRequest& request) override;
};

/// Replays a fixed transcript; repeats the last entry once exhausted.
class ScriptedLlmClient final : public LlmClient {
public:
    explicit ScriptedLlmClient(std::vector<std::string> responses)
        : responses_(std::move(responses)) {}
    std::string complete(const GenerationRequest& request) override;
    int calls() const { return calls_; }

private:
    std::vector<std::string> responses_;
    int calls_ = 0;
};

/// Returns the candidate document with the candidate query appended, a
/// minimal rank-seeking modification.
class AppendQueryTermsLlmClient final : public LlmClient {
public:
    std::string complete(const GenerationRequest& request) override;
};

} // namespace rankarena
