#include "rankarena/metrics.hpp"

#include <cmath>
#include <random>

#include "rankarena/errors.hpp"
#include "rankarena/kernels.hpp"
#include "rankarena/text.hpp"

namespace rankarena {

PromotionReport scaled_promotion(int rank_curr, int rank_next, int n) {
    if (n < 2) {
        throw DataError("scaled_promotion: n must be >= 2");
    }
    if (rank_curr < 1 || rank_curr > n || rank_next < 1 || rank_next > n) {
        throw DataError("scaled_promotion: rank out of [1, " + std::to_string(n) +
                        "]");
    }
    PromotionReport report;
    report.rank_curr = rank_curr;
    report.rank_next = rank_next;
    report.n = n;
    report.raw = rank_curr - rank_next;
    if (report.raw > 0) {
        report.scaled = static_cast<double>(report.raw) / (rank_curr - 1);
    } else if (report.raw < 0) {
        report.scaled = static_cast<double>(report.raw) / (n - rank_curr);
    } else {
        report.scaled = 0.0;
    }
    return report;
}

std::string to_string(FaithMode mode) {
    return mode == FaithMode::Thresholded ? "thresholded" : "mean";
}

FaithMode faith_mode_from_string(const std::string& s) {
    if (s == "thresholded") return FaithMode::Thresholded;
    if (s == "mean") return FaithMode::Mean;
    throw DataError("unknown faithfulness mode: " + s);
}

double raw_faithfulness(const std::string& premise_text,
                        const std::string& hypothesis_text,
                        EntailmentScorer& scorer, FaithMode mode) {
    const auto hyp_sentences = text::sentences(hypothesis_text);
    if (hyp_sentences.empty()) {
        throw DataError("raw_faithfulness: hypothesis has no sentences");
    }
    double acc = 0.0;
    for (const auto& sentence : hyp_sentences) {
        const double s = scorer.score(premise_text, sentence);
        if (s < 0.0 || s > 1.0 || !std::isfinite(s)) {
            throw DataError("raw_faithfulness: scorer returned " +
                            std::to_string(s) + ", outside [0,1]");
        }
        if (mode == FaithMode::Thresholded) {
            acc += (s >= 0.5) ? 1.0 : 0.0;
        } else {
            acc += s;
        }
    }
    return acc / static_cast<double>(hyp_sentences.size());
}

double raw_faithfulness(const DocVersion& premise, const DocVersion& hypothesis,
                        EntailmentScorer& scorer, FaithMode mode) {
    return raw_faithfulness(premise.text, hypothesis.text, scorer, mode);
}

OrigFaithResult orig_faith(const DocVersion& d_curr, const DocVersion& d_mod,
                           EntailmentScorer& scorer, FaithMode mode) {
    OrigFaithResult result;
    result.rf_mod = raw_faithfulness(d_curr.text, d_mod.text, scorer, mode);
    result.rf_self = raw_faithfulness(d_curr.text, d_curr.text, scorer, mode);
    if (result.rf_self == 0.0) {
        result.degenerate = true;
        result.value = 0.0;
    } else {
        result.value = result.rf_mod / result.rf_self;
    }
    return result;
}

CorpusFaithResult corpus_faithfulness(const DocVersion& d_curr,
                                      const DocVersion& d_mod,
                                      const Retriever& retriever,
                                      EntailmentScorer& scorer,
                                      const CorpusFaithOptions& options) {
    const DocVersion& probe =
        options.probe == CorpusProbe::Current ? d_curr : d_mod;
    const TopKResult retrieved = retriever.top_k(probe, options.k);
    CorpusFaithResult result;
    result.short_set = retrieved.short_set;
    result.k_used = static_cast<int>(retrieved.docs.size());
    if (retrieved.docs.empty()) {
        result.degenerate = true;
        return result;
    }
    auto rcf = [&](const DocVersion& doc) {
        double acc = 0.0;
        for (const auto& r : retrieved.docs) {
            acc += raw_faithfulness(r.doc.text, doc.text, scorer, options.mode);
            acc += raw_faithfulness(doc.text, r.doc.text, scorer, options.mode);
        }
        return acc / (2.0 * static_cast<double>(retrieved.docs.size()));
    };
    result.rcf_mod = rcf(d_mod);
    result.rcf_curr = rcf(d_curr);
    if (result.rcf_curr == 0.0) {
        result.degenerate = true;
        result.normalized = 0.0;
    } else {
        result.normalized = result.rcf_mod / result.rcf_curr;
    }
    return result;
}

CorpusFaithResult corpus_faithfulness(const DocVersion& d_curr,
                                      const DocVersion& d_mod,
                                      const CorpusSnapshot& snapshot,
                                      Representation representation,
                                      EntailmentScorer& scorer,
                                      const CorpusFaithOptions& options,
                                      EmbeddingProvider* provider) {
    if (representation == Representation::Sparse) {
        return corpus_faithfulness(d_curr, d_mod, SparseRetriever(snapshot),
                                   scorer, options);
    }
    if (provider == nullptr) {
        throw DataError("corpus_faithfulness: dense representation needs a provider");
    }
    return corpus_faithfulness(d_curr, d_mod, DenseRetriever(snapshot, *provider),
                               scorer, options);
}

int majority_grade(const std::vector<bool>& votes) {
    if (votes.size() != 5) {
        throw DataError("majority_grade: expected exactly 5 votes, got " +
                        std::to_string(votes.size()));
    }
    int positive = 0;
    for (bool v : votes) {
        if (v) ++positive;
    }
    return positive >= 3 ? 1 : 0;
}

double permutation_test(const std::vector<double>& paired_a,
                        const std::vector<double>& paired_b,
                        int permutations, std::uint64_t seed) {
    if (paired_a.empty() || paired_a.size() != paired_b.size()) {
        throw DataError("permutation_test: inputs must be equal-length and non-empty");
    }
    if (permutations < 1) {
        throw DataError("permutation_test: permutations must be >= 1");
    }
    const std::size_t n = paired_a.size();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) {
        diff[i] = paired_a[i] - paired_b[i];
    }
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> bits(words, 0);
    // The observed statistic goes through the same kernel so its rounding
    // matches the permuted sums exactly.
    const double observed = std::fabs(kernels::signflip_sum(diff.data(), n, bits.data()));
    std::mt19937_64 rng(seed);
    long as_extreme = 0;
    for (int p = 0; p < permutations; ++p) {
        for (std::size_t w = 0; w < words; ++w) {
            bits[w] = rng();
        }
        const double stat =
            std::fabs(kernels::signflip_sum(diff.data(), n, bits.data()));
        if (stat >= observed) {
            ++as_extreme;
        }
    }
    return (static_cast<double>(as_extreme) + 1.0) /
           (static_cast<double>(permutations) + 1.0);
}

} // namespace rankarena
