#include "rankarena/rankers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rankarena/errors.hpp"
#include "rankarena/kernels.hpp"
#include "rankarena/text.hpp"

namespace rankarena {

TfidfModel tfidf_fit(const std::vector<std::string>& corpus) {
    if (corpus.empty()) {
        throw DataError("tfidf_fit: empty corpus");
    }
    TfidfModel model;
    model.corpus_size = static_cast<int>(corpus.size());
    for (const auto& doc : corpus) {
        std::vector<int> seen;
        for (const auto& token : text::tokenize(doc)) {
            auto [it, inserted] =
                model.vocab.emplace(token, static_cast<int>(model.vocab.size()));
            if (inserted) {
                model.df.push_back(0);
            }
            const int id = it->second;
            if (std::find(seen.begin(), seen.end(), id) == seen.end()) {
                seen.push_back(id);
            }
        }
        for (int id : seen) {
            ++model.df[static_cast<std::size_t>(id)];
        }
    }
    return model;
}

SparseVector tfidf_vector(const TfidfModel& model, const std::string& doc_text) {
    if (!model.fitted()) {
        throw DataError("tfidf_vector: model not fitted");
    }
    std::map<int, double> tf;
    for (const auto& token : text::tokenize(doc_text)) {
        auto it = model.vocab.find(token);
        if (it == model.vocab.end()) continue; // OOV ignored
        tf[it->second] += 1.0;
    }
    SparseVector v;
    v.entries.reserve(tf.size());
    double norm_sq = 0.0;
    const double n_plus_1 = static_cast<double>(model.corpus_size) + 1.0;
    for (const auto& [id, count] : tf) {
        const double idf =
            std::log(n_plus_1 / (static_cast<double>(model.df[static_cast<std::size_t>(id)]) + 1.0)) + 1.0;
        const double w = count * idf;
        v.entries.emplace_back(id, w);
        norm_sq += w * w;
    }
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [id, w] : v.entries) {
            (void)id;
            w *= inv;
        }
    }
    return v;
}

double cosine(const SparseVector& a, const SparseVector& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->first < ib->first) {
            na += ia->second * ia->second;
            ++ia;
        } else if (ib->first < ia->first) {
            nb += ib->second * ib->second;
            ++ib;
        } else {
            dot += ia->second * ib->second;
            na += ia->second * ia->second;
            nb += ib->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    for (; ia != a.entries.end(); ++ia) na += ia->second * ia->second;
    for (; ib != b.entries.end(); ++ib) nb += ib->second * ib->second;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double cosine(const DenseVector& a, const DenseVector& b) {
    if (a.size() != b.size()) {
        throw DataError("cosine: dimension mismatch (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
    }
    const double na = kernels::norm_sq(a.data(), a.size());
    const double nb = kernels::norm_sq(b.data(), b.size());
    if (na == 0.0 || nb == 0.0) return 0.0;
    return kernels::dot(a.data(), b.data(), a.size()) /
           (std::sqrt(na) * std::sqrt(nb));
}

int RankedList::rank_of(const std::string& doc_id) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].doc_id == doc_id) return static_cast<int>(i) + 1;
    }
    return 0;
}

namespace {

RankedList order_by_score(const Query& query,
                          std::vector<RankedEntry> scored) {
    std::sort(scored.begin(), scored.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.doc_id < b.doc_id;
              });
    RankedList list;
    list.query_id = query.query_id;
    list.entries = std::move(scored);
    std::size_t i = 0;
    while (i < list.entries.size()) {
        std::size_t j = i + 1;
        while (j < list.entries.size() &&
               list.entries[j].score == list.entries[i].score) {
            ++j;
        }
        if (j - i > 1) {
            std::vector<std::string> group;
            for (std::size_t t = i; t < j; ++t) group.push_back(list.entries[t].doc_id);
            list.tie_groups.push_back(std::move(group));
        }
        i = j;
    }
    return list;
}

} // namespace

RankedList TfidfRanker::rank(const Query& query,
                             const std::vector<DocVersion>& docs) const {
    if (docs.empty()) {
        throw DataError("rank: empty candidate set");
    }
    TfidfModel local;
    const TfidfModel* model = model_ ? &*model_ : nullptr;
    if (!model) {
        std::vector<std::string> texts;
        texts.reserve(docs.size());
        for (const auto& d : docs) texts.push_back(d.text);
        local = tfidf_fit(texts);
        model = &local;
    }
    const SparseVector qv = tfidf_vector(*model, query.text);
    std::vector<RankedEntry> scored;
    scored.reserve(docs.size());
    for (const auto& d : docs) {
        scored.push_back({d.doc_id, cosine(qv, tfidf_vector(*model, d.text))});
    }
    return order_by_score(query, std::move(scored));
}

double TfidfRanker::score_text(const Query& query, const std::string& doc_text) const {
    if (model_) {
        return cosine(tfidf_vector(*model_, query.text),
                      tfidf_vector(*model_, doc_text));
    }
    const TfidfModel local = tfidf_fit({doc_text});
    return cosine(tfidf_vector(local, query.text), tfidf_vector(local, doc_text));
}

RankedList DenseRanker::rank(const Query& query,
                             const std::vector<DocVersion>& docs) const {
    if (docs.empty()) {
        throw DataError("rank: empty candidate set");
    }
    std::vector<std::string> texts;
    texts.reserve(docs.size() + 1);
    texts.push_back(query.text);
    for (const auto& d : docs) texts.push_back(d.text);
    EmbeddingBatch batch;
    try {
        batch = provider_->embed(texts);
    } catch (const TransportError& e) {
        std::string ids;
        for (const auto& d : docs) {
            if (!ids.empty()) ids += ",";
            ids += d.doc_id;
        }
        throw TransportError(std::string(e.what()) + " (doc batch: " + ids + ")");
    }
    std::vector<RankedEntry> scored;
    scored.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        scored.push_back({docs[i].doc_id, cosine(batch.vectors[0], batch.vectors[i + 1])});
    }
    return order_by_score(query, std::move(scored));
}

double DenseRanker::score_text(const Query& query, const std::string& doc_text) const {
    const EmbeddingBatch batch = provider_->embed({query.text, doc_text});
    return cosine(batch.vectors[0], batch.vectors[1]);
}

RankedList rank_documents(const Ranker& ranker, const Query& query,
                          const std::vector<DocVersion>& docs) {
    return ranker.rank(query, docs);
}

namespace {

TopKResult select_top_k(const CorpusSnapshot& snapshot,
                        const std::vector<double>& scores,
                        const DocVersion& probe, int k) {
    if (k < 1) {
        throw DataError("top_k: k must be >= 1");
    }
    std::vector<std::size_t> idx;
    idx.reserve(snapshot.docs.size());
    for (std::size_t i = 0; i < snapshot.docs.size(); ++i) {
        const auto& d = snapshot.docs[i];
        if (d.doc_id == probe.doc_id && d.round == probe.round) continue;
        idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return snapshot.docs[a].doc_id < snapshot.docs[b].doc_id;
    });
    TopKResult result;
    result.short_set = idx.size() < static_cast<std::size_t>(k);
    const std::size_t take = std::min<std::size_t>(idx.size(), static_cast<std::size_t>(k));
    result.docs.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        result.docs.push_back({snapshot.docs[idx[i]], scores[idx[i]]});
    }
    return result;
}

} // namespace

SparseRetriever::SparseRetriever(CorpusSnapshot snapshot)
    : snapshot_(std::move(snapshot)) {
    std::vector<std::string> texts;
    texts.reserve(snapshot_.docs.size());
    for (const auto& d : snapshot_.docs) texts.push_back(d.text);
    if (!texts.empty()) {
        model_ = tfidf_fit(texts);
        vectors_.reserve(texts.size());
        for (const auto& t : texts) vectors_.push_back(tfidf_vector(model_, t));
    }
}

TopKResult SparseRetriever::top_k(const DocVersion& probe, int k) const {
    if (snapshot_.empty()) {
        TopKResult r;
        r.short_set = true;
        return r;
    }
    const SparseVector pv = tfidf_vector(model_, probe.text);
    std::vector<double> scores(snapshot_.docs.size(), 0.0);
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        scores[i] = cosine(pv, vectors_[i]);
    }
    return select_top_k(snapshot_, scores, probe, k);
}

DenseRetriever::DenseRetriever(CorpusSnapshot snapshot, EmbeddingProvider& provider)
    : snapshot_(std::move(snapshot)), provider_(&provider) {
    std::vector<std::string> texts;
    texts.reserve(snapshot_.docs.size());
    for (const auto& d : snapshot_.docs) texts.push_back(d.text);
    if (!texts.empty()) {
        vectors_ = provider_->embed(texts).vectors;
    }
}

TopKResult DenseRetriever::top_k(const DocVersion& probe, int k) const {
    if (snapshot_.empty()) {
        TopKResult r;
        r.short_set = true;
        return r;
    }
    const DenseVector pv = provider_->embed({probe.text}).vectors.at(0);
    std::vector<double> scores(snapshot_.docs.size(), 0.0);
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        scores[i] = cosine(pv, vectors_[i]);
    }
    return select_top_k(snapshot_, scores, probe, k);
}

TopKResult top_k_similar(const CorpusSnapshot& snapshot, const DocVersion& probe,
                         int k, Representation representation,
                         EmbeddingProvider* provider) {
    if (representation == Representation::Sparse) {
        return SparseRetriever(snapshot).top_k(probe, k);
    }
    if (provider == nullptr) {
        throw DataError("top_k_similar: dense representation needs a provider");
    }
    return DenseRetriever(snapshot, *provider).top_k(probe, k);
}

} // namespace rankarena
