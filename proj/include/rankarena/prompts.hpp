#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankarena/corpus.hpp"

namespace rankarena {

enum class ContextType { Pointwise, Pairwise, Listwise, Temporal };
enum class PairMode { Random, TopPlusRandom };

std::string to_string(ContextType type);
ContextType context_type_from_string(const std::string& s);
std::string to_string(PairMode mode);
PairMode pair_mode_from_string(const std::string& s);

// One point in the configuration grid. pair_mode is present iff Pairwise,
// temporal_depth iff Temporal.
struct PromptConfig {
    ContextType context_type = ContextType::Pointwise;
    int num_queries = 1;          // {1, 2}
    int examples_per_query = 1;   // {1, 2, 3}
    bool include_current_rank = false;
    bool include_query_at_hand = true;
    std::optional<PairMode> pair_mode;
    std::optional<int> temporal_depth; // {2, 3}
    double temperature = 0.0;          // {0, 0.5, 1, 1.5, 2}
    std::uint64_t seed = 0;

    void validate() const;
    /// Equality over grid factors (seed excluded).
    bool same_factors(const PromptConfig& other) const;
};

/// Stable slug used for agent names and report rows.
std::string config_name(const PromptConfig& config);

struct PromptProvenance {
    std::string query_id;
    int round = 0;
    std::string doc_id;
};

struct PromptBundle {
    std::string shared_part;
    std::string context_part;
    PromptConfig config;
    std::vector<PromptProvenance> provenance; // every document quoted
};

/// The task-description part shared by every prompt, with the query, current
/// document and context-corpus median length substituted.
std::string render_shared(const Query& query, const DocVersion& current_doc,
                          std::size_t median_len);

/// Context-specific part for `config`, drawing only on rounds strictly before
/// `round`. The shared_part of the returned bundle is left empty; agents fill
/// it in once the context-corpus median length is known.
PromptBundle build_context(const PromptConfig& config, const CompetitionLog& log,
                           const Query& query, const DocVersion& current_doc,
                           int round);

/// Full factor-product grid, temperatures included. Every emitted config
/// carries `seed`.
std::vector<PromptConfig> enumerate_grid(std::uint64_t seed = 0);

struct GridManifest {
    int pointwise = 0;
    int pairwise = 0;
    int listwise = 0;
    int temporal = 0;
    int base_total = 0;
    int temperatures = 0;
    int total = 0;
    std::string formula;
};

GridManifest grid_manifest();

/// The two configurations reported as the strongest performers.
PromptConfig pairwise_best(std::uint64_t seed = 0);
PromptConfig listwise_best(std::uint64_t seed = 0);

// Markers used by the shared template; mock clients parse prompts with these.
std::string extract_candidate_query(const std::string& shared_part);
std::string extract_candidate_document(const std::string& shared_part);

void to_json(nlohmann::json& j, const PromptConfig& config);
void from_json(const nlohmann::json& j, PromptConfig& config);
void to_json(nlohmann::json& j, const PromptBundle& bundle);

} // namespace rankarena
