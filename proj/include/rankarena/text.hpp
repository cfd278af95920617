#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace rankarena::text {

/// Whitespace-token count after trimming.
std::size_t word_count(const std::string& text);

/// Lowercased terms split on ASCII non-alphanumerics. Bytes >= 0x80 are kept
/// so multi-byte UTF-8 sequences stay inside one token.
std::vector<std::string> tokenize(const std::string& text);

/// Distinct tokens, for the lexical-overlap mock scorers.
std::unordered_set<std::string> token_set(const std::string& text);

// Rule-based segmentation: a sentence ends at {. ! ?} followed by whitespace
// and an uppercase letter, or at end of text. A fixed abbreviation allowlist
// (Dr., Mr., Mrs., Ms., St., vs., e.g., i.e., etc.) suppresses false breaks.
std::vector<std::string> sentences(const std::string& text);

/// Sentences rejoined with single spaces.
std::string join_sentences(const std::vector<std::string>& parts);

/// Longest sentence prefix whose cumulative word count fits the cap, rejoined.
/// Empty optional when not even the first sentence fits.
std::optional<std::string> truncate_to_word_cap(const std::string& text,
                                                std::size_t cap);

/// Median of a list of counts; for even sizes, the mean of the two middle
/// values rounded half-up.
std::size_t median_count(std::vector<std::size_t> counts);

} // namespace rankarena::text
