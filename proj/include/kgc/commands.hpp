#pragma once
// Subcommand bodies, kept out of main so tests can drive them directly.
// Each throws ConfigError for usage/config problems (exit 2) and
// std::runtime_error for everything else (exit 1).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kgc/data.hpp"

namespace kgc {

struct PrepareArgs {
    std::string train, valid, test, out;
};
void cmd_prepare(const PrepareArgs& args, std::ostream& out);

struct SynthArgs {
    SynthSpec spec;
    std::string out_dir;
};
void cmd_synth(const SynthArgs& args, std::ostream& out);

struct TrainArgs {
    std::string data;                // KGD1 cache from prepare
    std::string preset;              // optional
    std::string config_file;         // optional
    std::vector<std::string> sets;   // key=value overrides
    std::string out_ckpt;
    std::string log_path;            // optional epoch CSV
    std::string sol_curve_path;      // optional epoch,sol_mean CSV
    unsigned workers = 1;
    bool quiet = false;              // suppress per-epoch lines
};
void cmd_train(const TrainArgs& args, std::ostream& out);

struct EvalArgs {
    std::string ckpt, data;
    std::string split = "test";
    uint64_t seed = 42;
    std::string out_csv;  // optional
    unsigned workers = 1;
};
void cmd_eval(const EvalArgs& args, std::ostream& out);

struct DiagnoseArgs {
    std::string ckpt, data;
    std::string out_dir;
};
void cmd_diagnose(const DiagnoseArgs& args, std::ostream& out);

struct ProjectArgs {
    std::string ckpt, data, relation, out_csv;
};
void cmd_project(const ProjectArgs& args, std::ostream& out);

}  // namespace kgc
