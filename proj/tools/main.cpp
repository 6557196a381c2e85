// ragkit command-line tool: ingest documents into a namespaced knowledge
// base, query it, and evaluate retrieval + answer quality.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ragkit/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ragkit - document ingestion, retrieval, and evaluation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string ns;
    std::string output_dir;
    int k = 0;
    int jobs = 0;
    bool mock_all = false;
    app.add_option("--config", config_path, "TOML config file");
    app.add_option("--namespace", ns, "knowledge-base namespace");
    app.add_option("--k", k, "retrieval depth");
    app.add_option("--jobs", jobs, "worker thread cap");
    app.add_option("--output-dir", output_dir, "artifact directory");
    app.add_flag("--mock-all", mock_all, "use the deterministic mocks for every backend");

    auto* ingest = app.add_subcommand("ingest", "parse documents and build the index");
    std::vector<std::string> ingest_paths;
    ingest->add_option("paths", ingest_paths, "files or directories")->required();
    ingest->fallthrough();

    auto* query = app.add_subcommand("query", "retrieve the top-k nodes for a text query");
    std::string query_text;
    bool query_prefilter = false;
    query->add_option("text", query_text, "query text")->required();
    query->add_flag("--prefilter", query_prefilter, "restrict to the best-matching documents");
    query->fallthrough();

    auto* eval = app.add_subcommand("eval", "run the evaluation metrics over a dataset");
    std::string dataset_path;
    bool eval_generate = false;
    bool eval_prefilter = false;
    eval->add_option("--dataset", dataset_path, "dataset JSONL (default <output>/dataset.jsonl)");
    eval->add_flag("--generate", eval_generate, "generate the per-page dataset first");
    eval->add_flag("--prefilter", eval_prefilter, "restrict retrieval to matching documents");
    eval->fallthrough();

    auto* inspect = app.add_subcommand("inspect", "dump one node and its relationships");
    std::string node_id;
    inspect->add_option("node_id", node_id, "node id (<doc>/<kind>/<n>)")->required();
    inspect->fallthrough();

    auto* exp = app.add_subcommand("export", "write graph JSON or index JSONL to stdout");
    std::string export_what;
    std::string export_doc;
    exp->add_option("what", export_what, "'graph' or 'index'")->required();
    exp->add_option("--doc", export_doc, "document id (for graph exports)");
    exp->fallthrough();

    CLI11_PARSE(app, argc, argv);

    ragkit::pipeline::PipelineConfig cfg;
    try {
        if (!config_path.empty()) {
            cfg = ragkit::pipeline::load_config(config_path);
        } else {
            ragkit::pipeline::apply_env_overrides(cfg);
        }
        if (mock_all) ragkit::pipeline::force_mocks(cfg);
        if (!ns.empty()) cfg.ns = ns;
        if (k > 0) cfg.k = k;
        if (jobs > 0) cfg.jobs = jobs;
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        ragkit::pipeline::validate_config(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ragkit::cli::kExitFailure;
    }

    if (app.got_subcommand(ingest)) {
        std::vector<std::filesystem::path> paths(ingest_paths.begin(), ingest_paths.end());
        return ragkit::cli::cmd_ingest(paths, cfg, std::cout, std::cerr);
    }
    if (app.got_subcommand(query)) {
        return ragkit::cli::cmd_query(query_text, query_prefilter, cfg, std::cout, std::cerr);
    }
    if (app.got_subcommand(eval)) {
        std::optional<std::filesystem::path> dataset;
        if (!dataset_path.empty()) dataset = dataset_path;
        return ragkit::cli::cmd_eval(dataset, eval_generate, eval_prefilter, cfg, std::cout,
                                     std::cerr);
    }
    if (app.got_subcommand(inspect)) {
        return ragkit::cli::cmd_inspect(node_id, cfg, std::cout, std::cerr);
    }
    if (app.got_subcommand(exp)) {
        return ragkit::cli::cmd_export(export_what, export_doc, cfg, std::cout, std::cerr);
    }
    return ragkit::cli::kExitFailure;
}
