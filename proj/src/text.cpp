#include "rankarena/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "rankarena/errors.hpp"

namespace rankarena::text {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_upper(char c) {
    return std::isupper(static_cast<unsigned char>(c)) != 0;
}

bool is_terminator(char c) {
    return c == '.' || c == '!' || c == '?';
}

bool is_token_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u) != 0;
}

std::string lower_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

constexpr std::array<const char*, 9> kAbbreviations = {
    "dr.", "mr.", "mrs.", "ms.", "st.", "vs.", "e.g.", "i.e.", "etc.",
};

// Word ending at position `end` (inclusive), scanned back to whitespace.
bool ends_with_abbreviation(const std::string& s, std::size_t end) {
    std::size_t b = end;
    while (b > 0 && !is_space(s[b - 1])) --b;
    const std::string word = lower_ascii(s.substr(b, end - b + 1));
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
           kAbbreviations.end();
}

} // namespace

std::size_t word_count(const std::string& text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
        }
    }
    return count;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (is_token_char(c)) {
            cur.push_back(static_cast<char>(
                std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) {
        tokens.push_back(std::move(cur));
    }
    return tokens;
}

std::unordered_set<std::string> token_set(const std::string& text) {
    auto tokens = tokenize(text);
    return {tokens.begin(), tokens.end()};
}

std::vector<std::string> sentences(const std::string& text) {
    std::vector<std::string> out;
    const std::size_t n = text.size();
    std::size_t start = 0;
    std::size_t i = 0;
    auto emit = [&](std::size_t end) {
        std::string s = trim(text.substr(start, end - start));
        if (!s.empty()) {
            out.push_back(std::move(s));
        }
        start = end;
    };
    while (i < n) {
        if (!is_terminator(text[i])) {
            ++i;
            continue;
        }
        // Swallow terminator runs like "?!" or "...".
        std::size_t run_end = i;
        while (run_end + 1 < n && is_terminator(text[run_end + 1])) ++run_end;
        if (text[i] == '.' && run_end == i && ends_with_abbreviation(text, i)) {
            i = run_end + 1;
            continue;
        }
        std::size_t next = run_end + 1;
        if (next >= n) {
            emit(n);
            i = n;
            break;
        }
        if (is_space(text[next])) {
            std::size_t look = next;
            while (look < n && is_space(text[look])) ++look;
            if (look >= n || is_upper(text[look])) {
                emit(run_end + 1);
                i = start = look;
                continue;
            }
        }
        i = run_end + 1;
    }
    if (start < n) {
        emit(n);
    }
    return out;
}

std::string join_sentences(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += parts[i];
    }
    return out;
}

std::optional<std::string> truncate_to_word_cap(const std::string& text,
                                                std::size_t cap) {
    const auto parts = sentences(text);
    std::vector<std::string> kept;
    std::size_t words = 0;
    for (const auto& s : parts) {
        const std::size_t w = word_count(s);
        if (words + w > cap) break;
        words += w;
        kept.push_back(s);
    }
    if (kept.empty()) {
        return std::nullopt;
    }
    return join_sentences(kept);
}

std::size_t median_count(std::vector<std::size_t> counts) {
    if (counts.empty()) {
        throw DataError("median_count: empty collection");
    }
    std::sort(counts.begin(), counts.end());
    const std::size_t n = counts.size();
    if (n % 2 == 1) {
        return counts[n / 2];
    }
    const std::size_t a = counts[n / 2 - 1];
    const std::size_t b = counts[n / 2];
    return (a + b + 1) / 2; // mean of middles, rounded half-up
}

} // namespace rankarena::text
