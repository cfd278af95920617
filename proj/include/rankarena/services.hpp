#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rankarena {

// Entailment scorer contract (wire format: POST {"premise","hypothesis"} ->
// {"score"}). Scores are in [0,1], higher meaning stronger factual alignment.
class EntailmentScorer {
public:
    virtual ~EntailmentScorer() = default;
    virtual double score(const std::string& premise,
                         const std::string& hypothesis) = 0;
};

struct EmbeddingBatch {
    int dim = 0;
    std::vector<std::vector<double>> vectors; // aligned to request order
};

// Embedding provider contract (wire format: POST {"texts": [...]} ->
// {"dim", "vectors"}).
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual EmbeddingBatch embed(const std::vector<std::string>& texts) = 0;
};

// Deterministic lexical-overlap stand-in for the NLI model:
// |tokens(hypothesis) ∩ tokens(premise)| / |tokens(hypothesis)|,
// 0 when the hypothesis has no tokens.
class MockEntailmentScorer final : public EntailmentScorer {
public:
    double score(const std::string& premise, const std::string& hypothesis) override;
};

// Deterministic hashed bag-of-words embedding: each token is hashed to one of
// `dim` buckets, counts accumulated, vector L2-normalized.
class MockEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit MockEmbeddingProvider(int dim = 64) : dim_(dim) {}
    EmbeddingBatch embed(const std::vector<std::string>& texts) override;
    int dim() const { return dim_; }

private:
    int dim_;
};

} // namespace rankarena
