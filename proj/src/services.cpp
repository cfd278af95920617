#include "rankarena/services.hpp"

#include <cmath>

#include "rankarena/kernels.hpp"
#include "rankarena/text.hpp"
#include "rankarena/util.hpp"

namespace rankarena {

double MockEntailmentScorer::score(const std::string& premise,
                                   const std::string& hypothesis) {
    const auto hyp = text::token_set(hypothesis);
    if (hyp.empty()) return 0.0;
    const auto prem = text::token_set(premise);
    std::size_t common = 0;
    for (const auto& t : hyp) {
        if (prem.count(t) > 0) ++common;
    }
    return static_cast<double>(common) / static_cast<double>(hyp.size());
}

EmbeddingBatch MockEmbeddingProvider::embed(const std::vector<std::string>& texts) {
    EmbeddingBatch batch;
    batch.dim = dim_;
    batch.vectors.reserve(texts.size());
    for (const auto& t : texts) {
        std::vector<double> v(static_cast<std::size_t>(dim_), 0.0);
        for (const auto& token : text::tokenize(t)) {
            v[util::fnv1a64(token) % static_cast<std::uint64_t>(dim_)] += 1.0;
        }
        const double norm_sq = kernels::norm_sq(v.data(), v.size());
        if (norm_sq > 0.0) {
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (double& x : v) x *= inv;
        }
        batch.vectors.push_back(std::move(v));
    }
    return batch;
}

} // namespace rankarena
