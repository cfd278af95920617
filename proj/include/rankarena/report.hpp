#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rankarena/competition.hpp"

namespace rankarena {

/// Serialize EvalRows to CSV (fixed 6-decimal floats, deterministic order of
/// appearance).
std::string rows_to_csv(const std::vector<EvalRow>& rows);
std::vector<EvalRow> rows_from_csv(const std::string& content);

void write_rows_csv(const std::filesystem::path& path,
                    const std::vector<EvalRow>& rows);
std::vector<EvalRow> read_rows_csv(const std::filesystem::path& path);

/// Per-group means, 3-decimal fixed formatting.
std::string report_means_csv(const EvalTable& table);
/// Pairwise permutation p-values, 3-decimal fixed formatting.
std::string report_pvalues_csv(const EvalTable& table);
/// Human-readable Markdown mirroring the same tables.
std::string report_markdown(const EvalTable& table);

} // namespace rankarena
