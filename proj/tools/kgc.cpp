#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "kgc/commands.hpp"
#include "kgc/config.hpp"
#include "kgc/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Knowledge-graph completion with contextual dictionary lookup"};
    app.require_subcommand(0, 1);

    kgc::PrepareArgs prepare;
    auto* cmd_prepare = app.add_subcommand(
        "prepare", "Parse triple TSVs and write a binary dataset cache");
    cmd_prepare->add_option("--train", prepare.train, "Training triples (TSV)")
        ->required();
    cmd_prepare->add_option("--valid", prepare.valid, "Validation triples (TSV)")
        ->required();
    cmd_prepare->add_option("--test", prepare.test, "Test triples (TSV)")
        ->required();
    cmd_prepare->add_option("--out", prepare.out, "Output cache path")->required();

    kgc::SynthArgs synth;
    auto* cmd_synth = app.add_subcommand(
        "synth", "Generate the clustered synthetic KG (relation rel_multi)");
    cmd_synth->add_option("--clusters", synth.spec.cluster_count, "Cluster count k");
    cmd_synth->add_option("--per-cluster", synth.spec.entities_per_cluster,
                          "Entities per cluster m");
    cmd_synth->add_option("--noise", synth.spec.noise_rate,
                          "Fraction of triples rewired to random tails");
    cmd_synth->add_option("--seed", synth.spec.seed, "Generator seed");
    cmd_synth->add_option("--entity-budget", synth.spec.entity_budget,
                          "Reject specs whose k*m exceeds this (0 = unlimited)");
    cmd_synth->add_option("--out", synth.out_dir, "Output directory")->required();

    kgc::TrainArgs train;
    auto* cmd_train = app.add_subcommand("train", "Train a link predictor");
    cmd_train->add_option("--data", train.data, "Dataset cache from prepare")
        ->required();
    cmd_train->add_option("--preset", train.preset,
                          "Named hyperparameter preset (see --help-presets)");
    cmd_train->add_option("--config", train.config_file,
                          "key=value config file ('#' comments)");
    cmd_train->add_option("--set", train.sets,
                          "Override one key, e.g. --set lambda=0.01 (repeatable)");
    cmd_train->add_option("--out-ckpt", train.out_ckpt, "Checkpoint output path")
        ->required();
    cmd_train->add_option("--log", train.log_path, "Epoch metrics CSV");
    cmd_train->add_option("--sol-curve", train.sol_curve_path,
                          "Epoch mean-SOL CSV (codlr only)");
    cmd_train->add_option("--workers", train.workers, "Worker thread count");
    cmd_train->add_flag("--quiet", train.quiet, "Suppress per-epoch output");

    kgc::EvalArgs eval;
    auto* cmd_eval = app.add_subcommand(
        "eval", "Filtered ranking metrics (MR, MRR, Hits@k) on one split");
    cmd_eval->add_option("--ckpt", eval.ckpt, "Checkpoint path")->required();
    cmd_eval->add_option("--data", eval.data, "Dataset cache")->required();
    cmd_eval->add_option("--split", eval.split, "train|valid|test (default test)");
    cmd_eval->add_option("--seed", eval.seed, "Tie-breaking seed");
    cmd_eval->add_option("--out", eval.out_csv, "Metrics CSV path");
    cmd_eval->add_option("--workers", eval.workers, "Worker thread count");

    kgc::DiagnoseArgs diagnose;
    auto* cmd_diagnose = app.add_subcommand(
        "diagnose", "Write SOL and DAE diagnostics for a codlr checkpoint");
    cmd_diagnose->add_option("--ckpt", diagnose.ckpt, "Checkpoint path")->required();
    cmd_diagnose->add_option("--data", diagnose.data, "Dataset cache")->required();
    cmd_diagnose->add_option("--out", diagnose.out_dir,
                             "Output directory (dae.csv, sol.csv)")
        ->required();

    kgc::ProjectArgs project;
    auto* cmd_project = app.add_subcommand(
        "project", "2-D PCA of one relation's training heads, labeled by lookup");
    cmd_project->add_option("--ckpt", project.ckpt, "Checkpoint path")->required();
    cmd_project->add_option("--data", project.data, "Dataset cache")->required();
    cmd_project->add_option("--relation", project.relation, "Relation name")
        ->required();
    cmd_project->add_option("--out", project.out_csv, "Output CSV")->required();

    bool list_presets = false;
    app.add_flag("--help-presets", list_presets, "List training presets and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, std::cout, std::cerr) == 0 ? 0 : 2;
    }

    try {
        if (list_presets) {
            for (const auto& name : kgc::RunConfig::preset_names()) {
                std::cout << name << "\n" << kgc::RunConfig::preset(name).echo();
            }
            return 0;
        }
        if (app.get_subcommands().empty()) {
            std::cout << app.help();
            return 2;
        }
        if (cmd_prepare->parsed()) kgc::cmd_prepare(prepare, std::cout);
        if (cmd_synth->parsed()) kgc::cmd_synth(synth, std::cout);
        if (cmd_train->parsed()) kgc::cmd_train(train, std::cout);
        if (cmd_eval->parsed()) kgc::cmd_eval(eval, std::cout);
        if (cmd_diagnose->parsed()) kgc::cmd_diagnose(diagnose, std::cout);
        if (cmd_project->parsed()) kgc::cmd_project(project, std::cout);
    } catch (const kgc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
