#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankarena/corpus.hpp"
#include "rankarena/rankers.hpp"
#include "rankarena/services.hpp"

namespace rankarena {

struct PromotionReport {
    int rank_curr = 0;
    int rank_next = 0;
    int n = 0;
    int raw = 0;        // rank_curr - rank_next
    double scaled = 0.0; // in [-1, 1]
};

/// Raw promotion normalized by the maximum possible promotion (raw > 0:
/// raw / (rank_curr - 1)) or demotion (raw < 0: raw / (n - rank_curr)).
PromotionReport scaled_promotion(int rank_curr, int rank_next, int n);

enum class FaithMode { Thresholded, Mean };

std::string to_string(FaithMode mode);
FaithMode faith_mode_from_string(const std::string& s);

/// Fraction of hypothesis sentences entailed by the premise (score >= 0.5),
/// or the mean raw score under FaithMode::Mean.
double raw_faithfulness(const std::string& premise_text,
                        const std::string& hypothesis_text,
                        EntailmentScorer& scorer, FaithMode mode);
double raw_faithfulness(const DocVersion& premise, const DocVersion& hypothesis,
                        EntailmentScorer& scorer, FaithMode mode);

struct OrigFaithResult {
    double value = 0.0;
    double rf_mod = 0.0;  // RF of the modified doc against the current one
    double rf_self = 0.0; // RF of the current doc against itself
    bool degenerate = false; // rf_self was 0; value reported as 0
};

/// rf_mod / rf_self, the self-consistency-normalized faithfulness of d_mod to
/// d_curr.
OrigFaithResult orig_faith(const DocVersion& d_curr, const DocVersion& d_mod,
                           EntailmentScorer& scorer, FaithMode mode);

enum class CorpusProbe { Current, Modified };

struct CorpusFaithOptions {
    int k = 10;
    FaithMode mode = FaithMode::Thresholded;
    CorpusProbe probe = CorpusProbe::Current;
};

struct CorpusFaithResult {
    double rcf_mod = 0.0;
    double rcf_curr = 0.0;
    double normalized = 0.0; // rcf_mod / rcf_curr
    int k_used = 0;          // size of the retrieved set actually used
    bool short_set = false;
    bool degenerate = false; // rcf_curr was 0; normalized reported as 0
};

/// Symmetric sentence-level entailment agreement with the top-k documents
/// most similar to the probe (d_curr by default): both rcf values average
/// RF in both directions over the same retrieved set.
CorpusFaithResult corpus_faithfulness(const DocVersion& d_curr,
                                      const DocVersion& d_mod,
                                      const Retriever& retriever,
                                      EntailmentScorer& scorer,
                                      const CorpusFaithOptions& options = {});

/// Convenience overload building the retriever from a snapshot.
CorpusFaithResult corpus_faithfulness(const DocVersion& d_curr,
                                      const DocVersion& d_mod,
                                      const CorpusSnapshot& snapshot,
                                      Representation representation,
                                      EntailmentScorer& scorer,
                                      const CorpusFaithOptions& options = {},
                                      EmbeddingProvider* provider = nullptr);

/// 1 iff at least 3 of exactly 5 votes are true.
int majority_grade(const std::vector<bool>& votes);

/// Two-tailed paired permutation test on the mean difference, random sign
/// flips with a seeded generator and add-one correction (p is never 0).
double permutation_test(const std::vector<double>& paired_a,
                        const std::vector<double>& paired_b,
                        int permutations = 100000, std::uint64_t seed = 0);

struct FaithfulnessReport {
    double rf_raw = 0.0;     // RF(d_mod, d_curr)
    double orig_faith = 0.0;
    bool orig_degenerate = false;
    CorpusFaithResult sparse;
    CorpusFaithResult dense;
    int k = 0;
    FaithMode mode = FaithMode::Thresholded;
};

} // namespace rankarena
