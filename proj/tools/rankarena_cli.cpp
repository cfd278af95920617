#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankarena/agents.hpp"
#include "rankarena/cache.hpp"
#include "rankarena/competition.hpp"
#include "rankarena/config.hpp"
#include "rankarena/corpus.hpp"
#include "rankarena/errors.hpp"
#include "rankarena/http_clients.hpp"
#include "rankarena/prompts.hpp"
#include "rankarena/report.hpp"
#include "rankarena/util.hpp"

namespace {

using namespace rankarena;
using nlohmann::json;

// Service handles plus the cache backing the HTTP variants.
struct Services {
    std::unique_ptr<ResponseCache> cache;
    std::unique_ptr<EntailmentScorer> entail;
    std::unique_ptr<EmbeddingProvider> embed;
    std::unique_ptr<LlmClient> llm;
};

Services build_services(const RunConfig& config) {
    Services services;
    auto needs_cache = [](const std::string& v) { return v.rfind("mock", 0) != 0; };
    if (needs_cache(config.llm) || needs_cache(config.entail) ||
        needs_cache(config.embed)) {
        services.cache = std::make_unique<ResponseCache>(config.cache_dir);
    }
    if (config.entail == "mock") {
        services.entail = std::make_unique<MockEntailmentScorer>();
    } else {
        services.entail = std::make_unique<HttpEntailmentScorer>(
            config.entail, services.cache.get());
    }
    if (config.embed == "mock") {
        services.embed = std::make_unique<MockEmbeddingProvider>();
    } else {
        services.embed = std::make_unique<HttpEmbeddingProvider>(
            config.embed, services.cache.get());
    }
    if (config.llm == "mock" || config.llm == "mock:append-query") {
        services.llm = std::make_unique<AppendQueryTermsLlmClient>();
    } else if (config.llm == "mock:echo") {
        services.llm = std::make_unique<EchoLlmClient>();
    } else {
        services.llm = std::make_unique<HttpLlmClient>(config.llm, config.llm_model,
                                                       services.cache.get());
    }
    return services;
}

std::unique_ptr<Ranker> build_ranker(const RunConfig& config,
                                     EmbeddingProvider& provider) {
    if (config.ranker == "dense") {
        return std::make_unique<DenseRanker>(provider);
    }
    return std::make_unique<TfidfRanker>();
}

// The sentence-replacement baseline scores candidate edits against one fixed
// model so scores are comparable across edits.
std::unique_ptr<Ranker> build_fixed_scorer(const RunConfig& config,
                                           const CompetitionLog& log, int round,
                                           EmbeddingProvider& provider) {
    if (config.ranker == "dense") {
        return std::make_unique<DenseRanker>(provider);
    }
    const CorpusSnapshot snapshot = history_upto(log, round + 1);
    std::vector<std::string> texts;
    texts.reserve(snapshot.size());
    for (const auto& d : snapshot.docs) texts.push_back(d.text);
    return std::make_unique<TfidfRanker>(tfidf_fit(texts));
}

struct AgentBundle {
    std::unique_ptr<Agent> agent;
    std::unique_ptr<Ranker> scorer; // owned when the agent needs one
};

AgentBundle build_agent(const std::string& name, const RunConfig& config,
                        Services& services, const CompetitionLog* log, int round) {
    AgentBundle bundle;
    if (name == "static") {
        bundle.agent = std::make_unique<StaticAgent>();
    } else if (name == "copy_top") {
        bundle.agent = std::make_unique<CopyTopAgent>();
    } else if (name == "sent_replace") {
        if (log == nullptr) {
            throw ConfigError("sent_replace needs a competition log");
        }
        bundle.scorer = build_fixed_scorer(config, *log, round, *services.embed);
        bundle.agent = std::make_unique<SentReplaceAgent>(*bundle.scorer);
    } else if (name == "pairwise-best") {
        bundle.agent = std::make_unique<LlmBotAgent>(pairwise_best(config.seed),
                                                     *services.llm);
    } else if (name == "listwise-best") {
        bundle.agent = std::make_unique<LlmBotAgent>(listwise_best(config.seed),
                                                     *services.llm);
    } else if (name.rfind("grid:", 0) == 0) {
        const auto grid = enumerate_grid(config.seed);
        const std::size_t index = std::stoul(name.substr(5));
        if (index >= grid.size()) {
            throw ConfigError("grid index out of range: " + name + " (grid size " +
                              std::to_string(grid.size()) + ")");
        }
        bundle.agent = std::make_unique<LlmBotAgent>(grid[index], *services.llm);
    } else {
        throw ConfigError("unknown agent '" + name + "'");
    }
    return bundle;
}

OfflineOptions offline_options(const RunConfig& config) {
    OfflineOptions options;
    options.rank_mode =
        config.rank_mode == "replay" ? RankMode::Replay : RankMode::Rerank;
    options.snapshot = config.snapshot == "before" ? SnapshotBound::BeforeEvalRound
                                                   : SnapshotBound::ThroughEvalRound;
    options.k = config.k;
    options.mode = faith_mode_from_string(config.mode);
    options.student_rows = config.student_rows;
    options.workers = config.workers;
    return options;
}

int cmd_ingest(const RunConfig& config) {
    const LoadReport report = load_competition_log(config.log);
    const auto& log = report.log;
    int max_round = 0;
    for (const auto& q : log.queries) {
        max_round = std::max(max_round, log.max_round(q.query_id));
    }
    std::cout << "queries: " << log.queries.size() << "\n"
              << "versions: " << log.versions.size() << "\n"
              << "players: " << log.players.size() << "\n"
              << "max round: " << max_round << "\n"
              << "warnings: " << report.warnings.size() << "\n";
    for (const auto& w : report.warnings) {
        std::cout << "  warning: " << w << "\n";
    }
    const auto out = std::filesystem::path(config.out_dir) / "normalized_log.jsonl";
    util::atomic_write_file(out, serialize_log(log));
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int cmd_offline(const RunConfig& config) {
    const CompetitionLog log = load_competition_log(config.log).log;
    Services services = build_services(config);
    const auto ranker = build_ranker(config, *services.embed);
    std::vector<std::string> agent_names;
    if (config.agent == "grid") {
        const auto grid = enumerate_grid(config.seed);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            agent_names.push_back("grid:" + std::to_string(i));
        }
    } else {
        agent_names.push_back(config.agent);
    }
    std::vector<EvalRow> rows;
    std::vector<OfflineError> errors;
    for (const auto& name : agent_names) {
        AgentBundle bundle =
            build_agent(name, config, services, &log, config.round);
        OfflineResult result =
            run_offline_eval(log, config.round, *bundle.agent, *ranker,
                             *services.entail, *services.embed,
                             offline_options(config));
        for (auto& row : result.rows) rows.push_back(std::move(row));
        for (auto& err : result.errors) errors.push_back(std::move(err));
    }
    if (!config.votes.empty()) {
        attach_grades(rows, load_votes(config.votes));
    }
    const auto out_dir = std::filesystem::path(config.out_dir);
    write_rows_csv(out_dir / "eval_rows.csv", rows);
    std::cout << "wrote " << (out_dir / "eval_rows.csv").string() << " ("
              << rows.size() << " rows, " << errors.size() << " errors)\n";
    if (!errors.empty()) {
        std::string payload;
        for (const auto& e : errors) {
            payload += json{{"query_id", e.query_id}, {"message", e.message}}.dump();
            payload += '\n';
        }
        util::atomic_write_file(out_dir / "offline_errors.jsonl", payload);
        std::cout << "wrote " << (out_dir / "offline_errors.jsonl").string() << "\n";
    }
    return 0;
}

int cmd_online_sim(const RunConfig& config) {
    const CompetitionLog source = load_competition_log(config.log).log;
    Services services = build_services(config);
    const auto ranker = build_ranker(config, *services.embed);
    if (config.players < 2 || config.players > 8) {
        throw ConfigError("online.players must be in [2, 8]");
    }
    std::vector<RosterEntry> roster;
    AgentBundle bot = build_agent(config.bot, config, services, &source, config.round);
    roster.push_back({"bot1", std::shared_ptr<Agent>(std::move(bot.agent))});
    roster.push_back({"static1", std::make_shared<StaticAgent>()});
    const StudentStrategy strategies[] = {StudentStrategy::MimicTop,
                                          StudentStrategy::AppendQueryTerms,
                                          StudentStrategy::RotateSentences};
    for (int i = 0; i + 2 < config.players; ++i) {
        roster.push_back({"student" + std::to_string(i + 1),
                          std::make_shared<ScriptedStudentAgent>(
                              strategies[i % 3])});
    }
    // Everyone starts from the same example document: the text that won
    // round 1 of the source competition for the query.
    auto initial_text = [&source](const Query& query, const std::string&) {
        const RoundRanking* r1 = source.find_ranking(query.query_id, 1);
        if (r1 == nullptr || r1->entries.empty()) {
            throw DataError("online-sim: query '" + query.query_id +
                            "' has no round-1 ranking in the source log");
        }
        return source.find_version_by_doc(r1->ordered_doc_ids().front(), 1)->text;
    };
    const SimResult sim =
        run_online_sim(source.queries, roster, initial_text, config.rounds,
                       *ranker, config.bot_entry_round);
    const auto out = std::filesystem::path(config.out_dir) / "sim_log.jsonl";
    util::atomic_write_file(out, serialize_log(sim.log));
    std::cout << "wrote " << out.string() << " (" << sim.log.versions.size()
              << " versions, " << sim.flags.size() << " carried-over)\n";
    for (const auto& flag : sim.flags) {
        std::cout << "  flag: " << flag << "\n";
    }
    return 0;
}

int cmd_grid(const RunConfig& config, bool dry_render) {
    const auto grid = enumerate_grid(config.seed);
    const GridManifest manifest = grid_manifest();
    json out;
    out["formula"] = manifest.formula;
    out["counts"] = {
        {"pointwise", manifest.pointwise}, {"pairwise", manifest.pairwise},
        {"listwise", manifest.listwise},   {"temporal", manifest.temporal},
        {"base_total", manifest.base_total},
        {"temperatures", manifest.temperatures},
        {"total", manifest.total},
    };
    out["emitted"] = grid.size();
    json configs = json::array();
    for (const auto& c : grid) {
        json entry = c;
        entry["name"] = config_name(c);
        configs.push_back(entry);
    }
    out["configs"] = configs;
    const auto out_dir = std::filesystem::path(config.out_dir);
    util::atomic_write_file(out_dir / "grid_manifest.json", out.dump(2) + "\n");
    std::cout << "wrote " << (out_dir / "grid_manifest.json").string() << " ("
              << grid.size() << " configs)\n";
    if (dry_render) {
        const CompetitionLog log = load_competition_log(config.log).log;
        if (log.queries.empty()) {
            throw DataError("grid --dry-render: empty log");
        }
        const Query& query = log.queries.front();
        const RoundRanking* ranking = log.find_ranking(query.query_id, config.round);
        if (ranking == nullptr || ranking->entries.empty()) {
            throw DataError("grid --dry-render: query '" + query.query_id +
                            "' has no ranking at round " +
                            std::to_string(config.round));
        }
        const DocVersion* doc =
            log.find_version_by_doc(ranking->ordered_doc_ids().back(), config.round);
        std::string payload;
        for (const auto& c : grid) {
            json entry;
            entry["name"] = config_name(c);
            try {
                PromptBundle bundle =
                    build_context(c, log, query, *doc, config.round + 1);
                std::vector<DocVersion> quoted;
                for (const auto& p : bundle.provenance) {
                    quoted.push_back(*log.find_version_by_doc(p.doc_id, p.round));
                }
                bundle.shared_part = render_shared(
                    query, *doc,
                    quoted.empty() ? 1 : median_word_length(quoted));
                entry["bundle"] = bundle;
            } catch (const Error& e) {
                entry["error"] = e.what();
            }
            payload += entry.dump();
            payload += '\n';
        }
        util::atomic_write_file(out_dir / "bundles.jsonl", payload);
        std::cout << "wrote " << (out_dir / "bundles.jsonl").string() << "\n";
    }
    return 0;
}

int cmd_report(const RunConfig& config, const std::string& rows_path,
               bool from_log, int from_round, int to_round, bool rounds_mean) {
    std::vector<EvalRow> rows;
    if (from_log) {
        const CompetitionLog log = load_competition_log(config.log).log;
        Services services = build_services(config);
        LogEvalOptions options;
        options.k = config.k;
        options.mode = faith_mode_from_string(config.mode);
        options.workers = config.workers;
        rows = evaluate_log_rows(log, from_round, to_round, *services.entail,
                                 *services.embed, options);
    } else {
        if (rows_path.empty()) {
            throw ConfigError("report: need --rows PATH or --from-log");
        }
        rows = read_rows_csv(rows_path);
    }
    if (!config.votes.empty()) {
        attach_grades(rows, load_votes(config.votes));
    }
    AggregateOptions options;
    options.rounds_mean = rounds_mean;
    options.permutations = config.permutations;
    options.seed = config.seed;
    const EvalTable table = aggregate(rows, options);
    const auto out_dir = std::filesystem::path(config.out_dir);
    util::atomic_write_file(out_dir / "report_means.csv", report_means_csv(table));
    util::atomic_write_file(out_dir / "report_pvalues.csv",
                            report_pvalues_csv(table));
    util::atomic_write_file(out_dir / "report.md", report_markdown(table));
    std::cout << "wrote " << (out_dir / "report.md").string() << " ("
              << table.groups.size() << " groups, " << rows.size() << " rows)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ranking-competition harness"};
    app.require_subcommand(1);
    app.fallthrough(); // parent options may follow the subcommand

    std::string config_path;
    std::string log_path, votes_path, out_dir, agent, ranker;
    std::string rows_path;
    int round = -1;
    long long seed = -1;
    bool mock_llm = false, mock_entail = false, mock_embed = false;
    bool dry_render = false, from_log = false, rounds_mean = false;
    int from_round = 2, to_round = 2;
    int rounds = -1, players = -1, bot_entry = -1;

    app.add_option("--config", config_path, "Config file (INI-style)");
    app.add_option("--log", log_path, "Competition log (JSONL)");
    app.add_option("--votes", votes_path, "Annotation votes (JSONL)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--round", round, "Evaluation round");
    app.add_option("--agent", agent, "Agent name or 'grid'");
    app.add_option("--ranker", ranker, "tfidf | dense");
    app.add_option("--seed", seed, "Seed for sampling and permutation tests");
    app.add_flag("--mock-llm", mock_llm, "Force the mock LLM client");
    app.add_flag("--mock-entail", mock_entail, "Force the mock entailment scorer");
    app.add_flag("--mock-embed", mock_embed, "Force the mock embedding provider");

    auto* ingest = app.add_subcommand("ingest", "Validate and normalize a log");
    auto* offline = app.add_subcommand("offline", "Single-round modify-and-rerank");
    auto* online = app.add_subcommand("online-sim", "Multi-round simulation");
    online->add_option("--rounds", rounds, "Rounds to simulate");
    online->add_option("--players", players, "Players per query (2-8)");
    online->add_option("--bot-entry-round", bot_entry, "First round bots act");
    auto* grid = app.add_subcommand("grid", "Enumerate the prompt grid");
    grid->add_flag("--dry-render", dry_render, "Render bundles against the log");
    auto* report = app.add_subcommand("report", "Aggregate rows into tables");
    report->add_option("--rows", rows_path, "EvalRow CSV produced by 'offline'");
    report->add_flag("--from-log", from_log, "Evaluate rows from the log itself");
    report->add_option("--from-round", from_round, "First round (with --from-log)");
    report->add_option("--to-round", to_round, "Last round (with --from-log)");
    report->add_flag("--rounds-mean", rounds_mean, "Average per-round means");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig config = config_path.empty()
                               ? config_from_entries({})
                               : load_config(config_path);
        if (!log_path.empty()) config.log = log_path;
        if (!votes_path.empty()) config.votes = votes_path;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (round >= 0) config.round = round;
        if (!agent.empty()) config.agent = agent;
        if (!ranker.empty()) config.ranker = ranker;
        if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
        if (mock_llm) config.llm = "mock";
        if (mock_entail) config.entail = "mock";
        if (mock_embed) config.embed = "mock";
        if (rounds > 0) config.rounds = rounds;
        if (players > 0) config.players = players;
        if (bot_entry > 0) config.bot_entry_round = bot_entry;

        const bool need_log = ingest->parsed() || offline->parsed() ||
                              online->parsed() || (grid->parsed() && dry_render) ||
                              (report->parsed() && from_log);
        config.validate(need_log);

        if (ingest->parsed()) return cmd_ingest(config);
        if (offline->parsed()) return cmd_offline(config);
        if (online->parsed()) return cmd_online_sim(config);
        if (grid->parsed()) return cmd_grid(config, dry_render);
        if (report->parsed()) {
            return cmd_report(config, rows_path, from_log, from_round, to_round,
                              rounds_mean);
        }
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << nlohmann::json{{"error", {{"kind", "config"}, {"message", e.what()}}}}
                  << "\n";
        return 2;
    } catch (const TransportError& e) {
        std::cerr << nlohmann::json{{"error", {{"kind", "transport"}, {"message", e.what()}}}}
                  << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << nlohmann::json{{"error", {{"kind", "data"}, {"message", e.what()}}}}
                  << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}
                  << "\n";
        return 1;
    }
}
