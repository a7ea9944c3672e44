#include "kgc/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <unordered_set>

#include "kgc/codlr.hpp"
#include "kgc/config.hpp"
#include "kgc/errors.hpp"
#include "kgc/metrics.hpp"
#include "kgc/trainer.hpp"

namespace kgc {

namespace {

Split split_from(const std::string& name) {
    if (name == "train") return Split::train;
    if (name == "valid") return Split::valid;
    if (name == "test") return Split::test;
    throw ConfigError("unknown split: '" + name + "' (expected train|valid|test)");
}

void check_digests(const Checkpoint& ckpt, const TripleStore& store) {
    if (ckpt.entity_digest != store.vocab.entity_digest() ||
        ckpt.relation_digest != store.vocab.relation_digest()) {
        throw std::runtime_error(
            "checkpoint does not match this dataset (vocabulary digest mismatch)");
    }
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

void cmd_prepare(const PrepareArgs& args, std::ostream& out) {
    TripleStore store = load_splits(args.train, args.valid, args.test);
    if (store.split(Split::train).empty()) {
        throw ConfigError("train split is empty: " + args.train);
    }
    save_store(store, args.out);
    // Reciprocal augmentation doubles relations and triples; report the base
    // counts the input files carry.
    out << "entities=" << store.vocab.num_entities()
        << " relations=" << store.vocab.base_relation_count << "\n";
    out << "train=" << store.split(Split::train).size() / 2
        << " valid=" << store.split(Split::valid).size() / 2
        << " test=" << store.split(Split::test).size() / 2 << "\n";
    out << "cache=" << args.out << "\n";
}

void cmd_synth(const SynthArgs& args, std::ostream& out) {
    args.spec.validate();
    generate_synthetic(args.spec, args.out_dir);
    out << "clusters=" << args.spec.cluster_count
        << " entities=" << args.spec.cluster_count * args.spec.entities_per_cluster
        << " out=" << args.out_dir << "\n";
}

void cmd_train(const TrainArgs& args, std::ostream& out) {
    RunConfig cfg;
    if (!args.preset.empty()) cfg = RunConfig::preset(args.preset);
    if (!args.config_file.empty()) cfg.apply_file(args.config_file);
    for (const std::string& s : args.sets) cfg.apply_set(s);
    cfg.train.validate();

    const TripleStore store = load_store(args.data);
    out << cfg.echo();

    Trainer trainer(store, cfg.train, args.workers);

    std::ofstream log;
    if (!args.log_path.empty()) {
        log.open(args.log_path);
        if (!log) throw std::runtime_error("cannot write " + args.log_path);
        log << "epoch,loss,loss_f,loss_c,sol_mean,valid_mrr\n";
    }
    std::ofstream sol_curve;
    if (!args.sol_curve_path.empty() && cfg.train.codlr) {
        sol_curve.open(args.sol_curve_path);
        if (!sol_curve) throw std::runtime_error("cannot write " + args.sol_curve_path);
        sol_curve << "epoch,sol_mean\n";
    }

    for (uint32_t e = 1; e <= cfg.train.epochs; ++e) {
        const EpochStats stats = trainer.train_epoch();
        std::string mrr;
        if (cfg.train.eval_every > 0 && e % cfg.train.eval_every == 0 &&
            !store.split(Split::valid).empty()) {
            const RankingMetrics m = evaluate(trainer.params(), store, Split::valid,
                                              cfg.train.seed, args.workers);
            mrr = format_double(m.mrr);
        }
        if (!args.quiet) {
            out << "epoch " << e << " loss=" << format_double(stats.loss);
            if (cfg.train.codlr) {
                out << " loss_f=" << format_double(stats.loss_f)
                    << " loss_c=" << format_double(stats.loss_c)
                    << " sol=" << format_double(stats.sol_mean);
            }
            if (!mrr.empty()) out << " valid_mrr=" << mrr;
            out << "\n";
        }
        if (log.is_open()) {
            log << e << "," << format_double(stats.loss) << ","
                << format_double(stats.loss_f) << ",";
            if (cfg.train.codlr) log << format_double(stats.loss_c);
            log << ",";
            if (cfg.train.codlr) log << format_double(stats.sol_mean);
            log << "," << mrr << "\n";
        }
        if (sol_curve.is_open()) {
            sol_curve << e << "," << format_double(stats.sol_mean) << "\n";
        }
    }

    Checkpoint ckpt;
    ckpt.config = cfg.train;
    ckpt.epoch = trainer.epoch();
    ckpt.entity_digest = store.vocab.entity_digest();
    ckpt.relation_digest = store.vocab.relation_digest();
    ckpt.params = std::move(trainer.params());
    ckpt.opt = std::move(trainer.optimizer());
    save_checkpoint(ckpt, args.out_ckpt);
    out << "checkpoint=" << args.out_ckpt << "\n";
}

void cmd_eval(const EvalArgs& args, std::ostream& out) {
    const Split split = split_from(args.split);
    const Checkpoint ckpt = load_checkpoint(args.ckpt);
    const TripleStore store = load_store(args.data);
    check_digests(ckpt, store);
    const RankingMetrics m = evaluate(ckpt.params, store, split, args.seed,
                                      args.workers);
    out << "mr=" << format_double(m.mr) << " mrr=" << format_double(m.mrr)
        << " hits1=" << format_double(m.hits1)
        << " hits3=" << format_double(m.hits3)
        << " hits10=" << format_double(m.hits10) << "\n";
    if (!args.out_csv.empty()) write_eval_csv(m, args.out_csv);
}

void cmd_diagnose(const DiagnoseArgs& args, std::ostream& out) {
    const Checkpoint ckpt = load_checkpoint(args.ckpt);
    if (!ckpt.params.shape.codlr) {
        throw ConfigError("diagnostics require codlr mode");
    }
    const TripleStore store = load_store(args.data);
    check_digests(ckpt, store);

    std::filesystem::create_directories(args.out_dir);
    const auto rows = diagnose_relations(ckpt.params, store);
    const auto dae_path = (std::filesystem::path(args.out_dir) / "dae.csv").string();
    write_dae_csv(rows, store.vocab, dae_path);

    const double sm = mean_sol(ckpt.params, store);
    const auto sol_path = (std::filesystem::path(args.out_dir) / "sol.csv").string();
    std::ofstream sf(sol_path);
    if (!sf) throw std::runtime_error("cannot write " + sol_path);
    sf << "metric,value\nsol_mean," << format_double(sm) << "\n";

    out << "sol_mean=" << format_double(sm) << " relations=" << rows.size() << "\n";
}

void cmd_project(const ProjectArgs& args, std::ostream& out) {
    const Checkpoint ckpt = load_checkpoint(args.ckpt);
    if (!ckpt.params.shape.codlr) {
        throw ConfigError("projection requires codlr mode");
    }
    const TripleStore store = load_store(args.data);
    check_digests(ckpt, store);

    const auto it = store.vocab.relation_ids.find(args.relation);
    if (it == store.vocab.relation_ids.end()) {
        std::vector<std::pair<std::size_t, std::string>> scored;
        for (const std::string& name : store.vocab.relation_names) {
            scored.emplace_back(edit_distance(args.relation, name), name);
        }
        std::sort(scored.begin(), scored.end());
        std::string near;
        for (std::size_t i = 0; i < scored.size() && i < 3; ++i) {
            if (!near.empty()) near += ", ";
            near += scored[i].second;
        }
        throw ConfigError("unknown relation: '" + args.relation +
                          "' (nearest: " + near + ")");
    }
    const uint32_t rel = it->second;

    std::vector<uint32_t> heads;
    std::unordered_set<uint32_t> seen;
    for (const Triple& t : store.split(Split::train)) {
        if (t.rel == rel && seen.insert(t.head).second) heads.push_back(t.head);
    }
    if (heads.empty()) {
        throw ConfigError("relation '" + args.relation + "' has no training heads");
    }

    const std::size_t d = ckpt.params.shape.dim;
    Mat coords;
    if (heads.size() == 1) {
        coords = Mat(1, 2);  // a single point projects to the origin
    } else {
        Mat points(heads.size(), d);
        for (std::size_t i = 0; i < heads.size(); ++i) {
            const auto h = ckpt.params.entity(heads[i]);
            std::copy(h.begin(), h.end(), points.row(i).begin());
        }
        coords = pca2(points);
    }

    std::ofstream csv(args.out_csv);
    if (!csv) throw std::runtime_error("cannot write " + args.out_csv);
    csv << "entity,x,y,label\n";
    for (std::size_t i = 0; i < heads.size(); ++i) {
        const LookupTrace trace = codlr_forward(ckpt.params, heads[i], rel);
        const auto mx = std::max_element(trace.lookup.begin(), trace.lookup.end());
        const std::size_t label = std::size_t(mx - trace.lookup.begin());
        csv << store.vocab.entity_names[heads[i]] << ","
            << format_double(coords.at(i, 0)) << "," << format_double(coords.at(i, 1))
            << "," << label << "\n";
    }
    out << "relation=" << args.relation << " heads=" << heads.size()
        << " out=" << args.out_csv << "\n";
}

}  // namespace kgc
