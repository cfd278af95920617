#include "rankarena/report.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "rankarena/errors.hpp"
#include "rankarena/util.hpp"

namespace rankarena {

namespace {

const char* kRowHeader =
    "query_id,round,player_id,doc_id,agent_kind,agent_name,"
    "rank_curr,rank_next,n,raw_promotion,scaled_promotion,"
    "rf_raw,orig_faith,orig_degenerate,"
    "rcf_mod_sparse,rcf_curr_sparse,corp_faith_sparse,sparse_short_set,"
    "rcf_mod_dense,rcf_curr_dense,corp_faith_dense,dense_short_set,"
    "k,mode,quality,relevance";

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string opt_int(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
}

const char* measure_display_name(const std::string& measure) {
    if (measure == "scaled_promotion") return "Scaled Promotion";
    if (measure == "orig_faith") return "OrigFaith";
    if (measure == "corp_faith_dense") return "CorpFaith(dense)";
    if (measure == "corp_faith_sparse") return "CorpFaith(sparse)";
    if (measure == "quality") return "Q";
    if (measure == "relevance") return "R";
    return measure.c_str();
}

} // namespace

std::string rows_to_csv(const std::vector<EvalRow>& rows) {
    std::string out = kRowHeader;
    out += '\n';
    for (const auto& row : rows) {
        out += csv_escape(row.query_id) + ',';
        out += std::to_string(row.round) + ',';
        out += csv_escape(row.player_id) + ',';
        out += csv_escape(row.doc_id) + ',';
        out += to_string(row.agent_kind) + ',';
        out += csv_escape(row.agent_name) + ',';
        out += std::to_string(row.promotion.rank_curr) + ',';
        out += std::to_string(row.promotion.rank_next) + ',';
        out += std::to_string(row.promotion.n) + ',';
        out += std::to_string(row.promotion.raw) + ',';
        out += util::fmt_fixed(row.promotion.scaled, 6) + ',';
        out += util::fmt_fixed(row.faith.rf_raw, 6) + ',';
        out += util::fmt_fixed(row.faith.orig_faith, 6) + ',';
        out += std::string(row.faith.orig_degenerate ? "1" : "0") + ',';
        out += util::fmt_fixed(row.faith.sparse.rcf_mod, 6) + ',';
        out += util::fmt_fixed(row.faith.sparse.rcf_curr, 6) + ',';
        out += util::fmt_fixed(row.faith.sparse.normalized, 6) + ',';
        out += std::string(row.faith.sparse.short_set ? "1" : "0") + ',';
        out += util::fmt_fixed(row.faith.dense.rcf_mod, 6) + ',';
        out += util::fmt_fixed(row.faith.dense.rcf_curr, 6) + ',';
        out += util::fmt_fixed(row.faith.dense.normalized, 6) + ',';
        out += std::string(row.faith.dense.short_set ? "1" : "0") + ',';
        out += std::to_string(row.faith.k) + ',';
        out += to_string(row.faith.mode) + ',';
        out += opt_int(row.quality) + ',';
        out += opt_int(row.relevance);
        out += '\n';
    }
    return out;
}

std::vector<EvalRow> rows_from_csv(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("rows CSV: empty file");
    }
    if (line != kRowHeader) {
        throw DataError("rows CSV: unexpected header");
    }
    std::vector<EvalRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 26) {
            throw DataError("rows CSV line " + std::to_string(line_no) +
                            ": expected 26 fields, got " +
                            std::to_string(fields.size()));
        }
        EvalRow row;
        std::size_t f = 0;
        row.query_id = fields[f++];
        row.round = std::atoi(fields[f++].c_str());
        row.player_id = fields[f++];
        row.doc_id = fields[f++];
        row.agent_kind = player_kind_from_string(fields[f++]);
        row.agent_name = fields[f++];
        row.promotion.rank_curr = std::atoi(fields[f++].c_str());
        row.promotion.rank_next = std::atoi(fields[f++].c_str());
        row.promotion.n = std::atoi(fields[f++].c_str());
        row.promotion.raw = std::atoi(fields[f++].c_str());
        row.promotion.scaled = std::atof(fields[f++].c_str());
        row.faith.rf_raw = std::atof(fields[f++].c_str());
        row.faith.orig_faith = std::atof(fields[f++].c_str());
        row.faith.orig_degenerate = fields[f++] == "1";
        row.faith.sparse.rcf_mod = std::atof(fields[f++].c_str());
        row.faith.sparse.rcf_curr = std::atof(fields[f++].c_str());
        row.faith.sparse.normalized = std::atof(fields[f++].c_str());
        row.faith.sparse.short_set = fields[f++] == "1";
        row.faith.dense.rcf_mod = std::atof(fields[f++].c_str());
        row.faith.dense.rcf_curr = std::atof(fields[f++].c_str());
        row.faith.dense.normalized = std::atof(fields[f++].c_str());
        row.faith.dense.short_set = fields[f++] == "1";
        row.faith.k = std::atoi(fields[f++].c_str());
        row.faith.mode = faith_mode_from_string(fields[f++]);
        if (!fields[f].empty()) row.quality = std::atoi(fields[f].c_str());
        ++f;
        if (!fields[f].empty()) row.relevance = std::atoi(fields[f].c_str());
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_rows_csv(const std::filesystem::path& path,
                    const std::vector<EvalRow>& rows) {
    util::atomic_write_file(path, rows_to_csv(rows));
}

std::vector<EvalRow> read_rows_csv(const std::filesystem::path& path) {
    return rows_from_csv(util::read_file(path));
}

std::string report_means_csv(const EvalTable& table) {
    std::string out = "agent_kind,rows";
    for (const auto& m : table.measures) {
        out += ',';
        out += m;
    }
    out += '\n';
    for (const auto& group : table.groups) {
        out += csv_escape(group.group) + ',' + std::to_string(group.row_count);
        for (const auto& m : table.measures) {
            out += ',';
            auto it = group.means.find(m);
            if (it != group.means.end()) {
                out += util::fmt_fixed(it->second, 3);
            }
        }
        out += '\n';
    }
    return out;
}

std::string report_pvalues_csv(const EvalTable& table) {
    std::string out = "group_a,group_b,measure,p_value\n";
    for (const auto& [key, p] : table.p_values) {
        const auto& [a, b, measure] = key;
        out += csv_escape(a) + ',' + csv_escape(b) + ',' + measure + ',' +
               util::fmt_fixed(p, 3) + '\n';
    }
    return out;
}

std::string report_markdown(const EvalTable& table) {
    std::string out = "# Evaluation report\n\n";
    out += "| agent kind | rows |";
    for (const auto& m : table.measures) {
        out += ' ';
        out += measure_display_name(m);
        out += " |";
    }
    out += "\n|---|---:|";
    for (std::size_t i = 0; i < table.measures.size(); ++i) {
        out += "---:|";
    }
    out += '\n';
    for (const auto& group : table.groups) {
        out += "| " + group.group + " | " + std::to_string(group.row_count) + " |";
        for (const auto& m : table.measures) {
            auto it = group.means.find(m);
            out += ' ';
            out += (it != group.means.end()) ? util::fmt_fixed(it->second, 3) : "-";
            out += " |";
        }
        out += '\n';
    }
    if (!table.p_values.empty()) {
        out += "\n## Paired permutation p-values\n\n";
        out += "| groups |";
        for (const auto& m : table.measures) {
            out += ' ';
            out += measure_display_name(m);
            out += " |";
        }
        out += "\n|---|";
        for (std::size_t i = 0; i < table.measures.size(); ++i) {
            out += "---:|";
        }
        out += '\n';
        // Collect the distinct group pairs in map order.
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& [key, p] : table.p_values) {
            (void)p;
            const auto pair = std::make_pair(std::get<0>(key), std::get<1>(key));
            if (pairs.empty() || pairs.back() != pair) {
                if (std::find(pairs.begin(), pairs.end(), pair) == pairs.end()) {
                    pairs.push_back(pair);
                }
            }
        }
        for (const auto& [a, b] : pairs) {
            out += "| " + a + " vs " + b + " |";
            for (const auto& m : table.measures) {
                auto it = table.p_values.find({a, b, m});
                out += ' ';
                out += (it != table.p_values.end()) ? util::fmt_fixed(it->second, 3)
                                                    : "-";
                out += " |";
            }
            out += '\n';
        }
    }
    return out;
}

} // namespace rankarena
