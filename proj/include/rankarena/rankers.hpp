#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rankarena/corpus.hpp"
#include "rankarena/services.hpp"

namespace rankarena {

// Term weights keyed by term-id, sorted by id, zero weights never stored.
struct SparseVector {
    std::vector<std::pair<int, double>> entries;

    bool empty() const { return entries.empty(); }
};

using DenseVector = std::vector<double>;

struct TfidfModel {
    std::unordered_map<std::string, int> vocab; // term -> id, first-seen order
    std::vector<int> df;                        // by term-id
    int corpus_size = 0;                        // N

    bool fitted() const { return corpus_size > 0; }
};

/// Fit vocabulary and document frequencies over a corpus of texts.
TfidfModel tfidf_fit(const std::vector<std::string>& corpus);

/// weight(t) = tf(t) * (ln((N+1)/(df(t)+1)) + 1), then L2-normalized.
/// Out-of-vocabulary tokens are ignored; an all-OOV text yields an empty
/// (zero) vector.
SparseVector tfidf_vector(const TfidfModel& model, const std::string& text);

/// Cosine similarity; a zero vector against anything is 0 by convention.
double cosine(const SparseVector& a, const SparseVector& b);
double cosine(const DenseVector& a, const DenseVector& b);

struct RankedEntry {
    std::string doc_id;
    double score = 0.0;
};

struct RankedList {
    std::string query_id;
    std::vector<RankedEntry> entries; // descending score, ties by doc_id asc
    std::vector<std::vector<std::string>> tie_groups; // equal-score doc_ids

    /// 1-based rank, 0 when absent.
    int rank_of(const std::string& doc_id) const;
};

class Ranker {
public:
    virtual ~Ranker() = default;
    virtual std::string name() const = 0;
    virtual RankedList rank(const Query& query,
                            const std::vector<DocVersion>& docs) const = 0;
    /// Score one text against the query with the same representation rank()
    /// uses. Scores from a fixed-model TfidfRanker or a DenseRanker are
    /// comparable across texts.
    virtual double score_text(const Query& query, const std::string& doc_text) const = 0;
};

class TfidfRanker final : public Ranker {
public:
    /// Fits a model per candidate set at rank() time.
    TfidfRanker() = default;
    /// Uses one fixed model for every call.
    explicit TfidfRanker(TfidfModel model) : model_(std::move(model)) {}

    std::string name() const override { return "tfidf"; }
    RankedList rank(const Query& query,
                    const std::vector<DocVersion>& docs) const override;
    double score_text(const Query& query, const std::string& doc_text) const override;

private:
    std::optional<TfidfModel> model_;
};

class DenseRanker final : public Ranker {
public:
    explicit DenseRanker(EmbeddingProvider& provider) : provider_(&provider) {}

    std::string name() const override { return "dense"; }
    RankedList rank(const Query& query,
                    const std::vector<DocVersion>& docs) const override;
    double score_text(const Query& query, const std::string& doc_text) const override;

private:
    EmbeddingProvider* provider_;
};

/// Rank docs for the query: cosine(rep(query), rep(doc)), descending, ties by
/// ascending doc_id.
RankedList rank_documents(const Ranker& ranker, const Query& query,
                          const std::vector<DocVersion>& docs);

enum class Representation { Sparse, Dense };

struct RetrievedDoc {
    DocVersion doc;
    double score = 0.0;
};

struct TopKResult {
    std::vector<RetrievedDoc> docs; // descending score, ties by doc_id asc
    bool short_set = false;         // fewer than k candidates were available
};

class Retriever {
public:
    virtual ~Retriever() = default;
    /// Top-k snapshot documents by cosine to the probe. The probe itself is
    /// excluded when present (matched by doc_id + round).
    virtual TopKResult top_k(const DocVersion& probe, int k) const = 0;
};

class SparseRetriever final : public Retriever {
public:
    explicit SparseRetriever(CorpusSnapshot snapshot);
    TopKResult top_k(const DocVersion& probe, int k) const override;
    const TfidfModel& model() const { return model_; }

private:
    CorpusSnapshot snapshot_;
    TfidfModel model_;
    std::vector<SparseVector> vectors_;
};

class DenseRetriever final : public Retriever {
public:
    DenseRetriever(CorpusSnapshot snapshot, EmbeddingProvider& provider);
    TopKResult top_k(const DocVersion& probe, int k) const override;

private:
    CorpusSnapshot snapshot_;
    EmbeddingProvider* provider_;
    std::vector<DenseVector> vectors_;
};

/// One-shot retrieval; builds the matching retriever internally. `provider`
/// is required for the dense representation.
TopKResult top_k_similar(const CorpusSnapshot& snapshot, const DocVersion& probe,
                         int k, Representation representation,
                         EmbeddingProvider* provider = nullptr);

} // namespace rankarena
