#include <cmath>
#include <cstring>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "kgc/config.hpp"
#include "kgc/data.hpp"
#include "kgc/errors.hpp"
#include "kgc/trainer.hpp"
#include "kgc/util.hpp"

using namespace kgc;
using kgc_test::TempDir;
using kgc_test::read_file;
using kgc_test::write_file;

namespace {

TripleStore store_from(const TempDir& dir, const std::string& train,
                       const std::string& valid = "", const std::string& test = "") {
    write_file(dir.file("train.txt"), train);
    write_file(dir.file("valid.txt"), valid);
    write_file(dir.file("test.txt"), test);
    return load_splits(dir.file("train.txt"), dir.file("valid.txt"),
                       dir.file("test.txt"));
}

// Random KG over 6 entities and 2 base relations, ~12 distinct triples.
std::string random_kg(uint64_t seed) {
    auto rng = make_rng(seed, 0xdead);
    std::string out;
    for (int i = 0; i < 12; ++i) {
        const int h = int(rng() % 6), r = int(rng() % 2), t = int(rng() % 6);
        out += "e" + std::to_string(h) + "\tr" + std::to_string(r) + "\te" +
               std::to_string(t) + "\n";
    }
    return out;
}

bool params_equal(const ModelParams& a, const ModelParams& b) {
    auto eq = [](const std::vector<float>& x, const std::vector<float>& y) {
        return x.size() == y.size() &&
               (x.empty() ||
                std::memcmp(x.data(), y.data(), x.size() * sizeof(float)) == 0);
    };
    return eq(a.entities.data, b.entities.data) &&
           eq(a.relations.data, b.relations.data) &&
           eq(a.w_lookup.data, b.w_lookup.data) &&
           eq(a.b_lookup.data, b.b_lookup.data);
}

}  // namespace

TEST_CASE("bce closed forms") {
    CHECK(bce(0.5, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(bce(0.5, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(bce(0.9, 1.0) == doctest::Approx(-std::log(0.9)).epsilon(1e-9));
    // Clamp keeps the loss finite at the extremes.
    CHECK(bce(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(bce(0.0, 1.0) == doctest::Approx(-std::log(1e-7)).epsilon(1e-9));
    CHECK(std::isfinite(bce(0.0, 0.0)));
}

TEST_CASE("combined_loss is exact") {
    CHECK(combined_loss(1.0, 2.0, 0.001) == 1.0 + 0.001 * 2.0);
    CHECK(combined_loss(0.3, 5.0, 0.0) == 0.3);
}

TEST_CASE("config validation") {
    TrainConfig c;
    CHECK_NOTHROW(c.validate());
    SUBCASE("lambda upper bound") {
        c.lambda = 1.0;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    SUBCASE("codlr needs dictionary rows") {
        c.dict_size = 1;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c.codlr = false;
        CHECK_NOTHROW(c.validate());
    }
    SUBCASE("positive learning rate") {
        c.learning_rate = 0.0;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
}

TEST_CASE("adam update") {
    ModelShape s;
    s.num_entities = 1;
    s.num_relations = 1;
    s.dim = 2;
    s.codlr = false;
    ModelParams p = init_params(s, 1);
    p.entities.data = {1.0f, 1.0f};
    p.relations.data = {1.0f, 1.0f};
    OptimState opt;
    opt.init(s);
    GradBuffers g;
    g.init(s);

    SUBCASE("zero gradient leaves parameters unchanged") {
        adam_step(p, opt, g, 0.1);
        CHECK(p.entities.data[0] == 1.0f);
        CHECK(p.relations.data[1] == 1.0f);
        CHECK(opt.step == 1);
    }
    SUBCASE("first step matches closed form") {
        // m-hat = g, v-hat = g^2, update = lr * g / (|g| + eps)
        g.entities[0] = 0.5;
        adam_step(p, opt, g, 0.1);
        CHECK(p.entities.data[0] ==
              doctest::Approx(1.0 - 0.1 * 0.5 / (0.5 + 1e-8)).epsilon(1e-6));
        CHECK(p.entities.data[1] == 1.0f);
        CHECK(opt.m_entities[0] == doctest::Approx(0.05f).epsilon(1e-6));
        CHECK(opt.v_entities[0] == doctest::Approx(0.00025f).epsilon(1e-6));
    }
}

TEST_CASE("batch gradients match finite differences") {
    TempDir dir;
    TripleStore store = store_from(dir, random_kg(4));
    TrainConfig cfg;
    cfg.scorer = ScorerKind::transe;
    cfg.codlr = true;
    cfg.dim = 5;
    cfg.dict_size = 3;
    cfg.composition = Composition::sum;
    cfg.lambda = 0.1;
    cfg.batch_size = 64;
    cfg.seed = 2;

    SUBCASE("plain lambda and label smoothing variants") {
        for (double ls : {0.0, 0.1}) {
            cfg.label_smoothing = ls;
            Trainer tr(store, cfg);
            const auto pairs = tr.pairs();
            auto loss = [&] { return tr.accumulate_batch(pairs); };
            loss();
            // Copy: later evaluations overwrite the live buffers.
            const GradBuffers grads = tr.grads();
            ModelParams& p = tr.params();
            CHECK(grad_check(loss, p.entities.data, grads.entities) < 1e-3);
            CHECK(grad_check(loss, p.relations.data, grads.relations) < 1e-3);
            CHECK(grad_check(loss, p.w_lookup.data, grads.w_lookup) < 1e-3);
            CHECK(grad_check(loss, p.b_lookup.data, grads.b_lookup) < 1e-3);
        }
    }
}

TEST_CASE("toy KG converges under plain transe") {
    TempDir dir;
    TripleStore store = store_from(dir,
                                   "a\tr\tb\n"
                                   "b\tr\tc\n"
                                   "c\tr\td\n");
    TrainConfig cfg;
    cfg.scorer = ScorerKind::transe;
    cfg.codlr = false;
    cfg.dim = 8;
    cfg.batch_size = 16;
    cfg.learning_rate = 0.05;
    cfg.seed = 3;

    Trainer tr(store, cfg);
    std::vector<double> losses;
    for (int e = 0; e < 200; ++e) losses.push_back(tr.train_epoch().loss);
    for (int e = 1; e < 20; ++e) {
        CAPTURE(e);
        CHECK(losses[e] < losses[e - 1]);
    }
    CHECK(losses.back() < 0.2);
}

TEST_CASE("lambda weights the auxiliary path") {
    TempDir dir;
    TripleStore store = store_from(dir, random_kg(8));
    TrainConfig cfg;
    cfg.codlr = true;
    cfg.dim = 4;
    cfg.dict_size = 2;
    cfg.seed = 5;
    cfg.batch_size = 4;

    cfg.lambda = 0.0;
    Trainer a(store, cfg);
    cfg.lambda = 0.001;
    Trainer b(store, cfg);
    CHECK(params_equal(a.params(), b.params()));  // same init

    // The central term shows up immediately in the loss and the gradients.
    const auto pairs = a.pairs();
    const double loss_a = a.accumulate_batch(pairs);
    const double loss_b = b.accumulate_batch(pairs);
    CHECK(loss_b > loss_a);
    double grad_gap = 0.0;
    for (std::size_t i = 0; i < a.grads().entities.size(); ++i) {
        grad_gap = std::max(
            grad_gap, std::abs(a.grads().entities[i] - b.grads().entities[i]));
    }
    for (std::size_t i = 0; i < a.grads().relations.size(); ++i) {
        grad_gap = std::max(
            grad_gap, std::abs(a.grads().relations[i] - b.grads().relations[i]));
    }
    CHECK(grad_gap > 0.0);

    // Adam's first step per coordinate is lr * sign(g), so a small gradient
    // tilt only moves the parameters once the moment estimates carry it.
    for (int e = 0; e < 3; ++e) {
        a.train_epoch();
        b.train_epoch();
    }
    CHECK(!params_equal(a.params(), b.params()));
}

TEST_CASE("training is deterministic for a fixed seed") {
    TempDir dir;
    TripleStore store = store_from(dir, random_kg(6));
    TrainConfig cfg;
    cfg.codlr = true;
    cfg.dim = 6;
    cfg.dict_size = 3;
    cfg.composition = Composition::corr;
    cfg.seed = 11;

    Trainer a(store, cfg), b(store, cfg);
    for (int e = 0; e < 3; ++e) {
        const EpochStats sa = a.train_epoch();
        const EpochStats sb = b.train_epoch();
        CHECK(sa.loss == sb.loss);
        CHECK(sa.sol_mean == sb.sol_mean);
    }
    CHECK(params_equal(a.params(), b.params()));
}

TEST_CASE("loss decreases on the synthetic KG for every scorer x composition") {
    TempDir dir;
    SynthSpec spec;
    spec.cluster_count = 3;
    spec.entities_per_cluster = 4;
    spec.seed = 13;
    generate_synthetic(spec, dir.path.string());
    TripleStore store = load_splits(dir.file("train.txt"), dir.file("valid.txt"),
                                    dir.file("test.txt"));

    for (ScorerKind scorer : {ScorerKind::transe, ScorerKind::distmult}) {
        for (Composition comp : {Composition::sum, Composition::concat,
                                 Composition::mult, Composition::corr}) {
            CAPTURE(int(scorer));
            CAPTURE(int(comp));
            TrainConfig cfg;
            cfg.scorer = scorer;
            cfg.codlr = true;
            cfg.dim = 8;
            cfg.dict_size = 3;
            cfg.composition = comp;
            cfg.lambda = 0.01;
            cfg.batch_size = 32;
            cfg.learning_rate = 0.01;
            cfg.seed = 17;
            Trainer tr(store, cfg);
            double first = 0.0, last = 0.0;
            for (int e = 0; e < 50; ++e) {
                const double loss = tr.train_epoch().loss;
                if (e == 0) first = loss;
                last = loss;
            }
            CHECK(last < first);
        }
    }
}

TEST_CASE("non-finite loss aborts with diagnostics") {
    TempDir dir;
    TripleStore store = store_from(dir, random_kg(9));
    TrainConfig cfg;
    cfg.scorer = ScorerKind::distmult;
    cfg.codlr = false;
    cfg.dim = 4;
    cfg.seed = 7;
    Trainer tr(store, cfg);
    tr.params().entities.data[0] = std::numeric_limits<float>::infinity();
    tr.params().entities.data[1] = -std::numeric_limits<float>::infinity();
    try {
        tr.train_epoch();
        FAIL("expected exception");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("non-finite") != std::string::npos);
        CHECK(msg.find("epoch") != std::string::npos);
        CHECK(msg.find("batch") != std::string::npos);
    }
}

TEST_CASE("empty train split is a config error") {
    TempDir dir;
    TripleStore store = store_from(dir, "", "a\tr\tb\n", "");
    TrainConfig cfg;
    CHECK_THROWS_AS(Trainer(store, cfg), ConfigError);
}

TEST_CASE("checkpoint round trip and resume") {
    TempDir dir;
    TripleStore store = store_from(dir, random_kg(21));
    TrainConfig cfg;
    cfg.codlr = true;
    cfg.dim = 5;
    cfg.dict_size = 3;
    cfg.composition = Composition::concat;
    cfg.lambda = 0.05;
    cfg.learning_rate = 0.02;
    cfg.seed = 29;

    Trainer tr(store, cfg);
    tr.train_epoch();
    tr.train_epoch();

    Checkpoint ck;
    ck.config = cfg;
    ck.epoch = tr.epoch();
    ck.entity_digest = store.vocab.entity_digest();
    ck.relation_digest = store.vocab.relation_digest();
    ck.params = tr.params();
    ck.opt = tr.optimizer();
    const std::string path = dir.file("model.ckpt");
    save_checkpoint(ck, path);

    SUBCASE("bit-exact round trip") {
        const Checkpoint back = load_checkpoint(path);
        CHECK(params_equal(back.params, ck.params));
        CHECK(back.opt.m_entities == ck.opt.m_entities);
        CHECK(back.opt.v_relations == ck.opt.v_relations);
        CHECK(back.opt.m_w == ck.opt.m_w);
        CHECK(back.opt.v_b == ck.opt.v_b);
        CHECK(back.opt.step == ck.opt.step);
        CHECK(back.epoch == 2);
        CHECK(back.entity_digest == ck.entity_digest);
        CHECK(train_config_text(back.config) == train_config_text(cfg));
    }

    SUBCASE("resume equals uninterrupted training") {
        // Continue the original trainer two more epochs.
        tr.train_epoch();
        tr.train_epoch();

        const Checkpoint back = load_checkpoint(path);
        Trainer resumed(store, back.config);
        resumed.params() = back.params;
        resumed.optimizer() = back.opt;
        resumed.set_epoch(back.epoch);
        resumed.train_epoch();
        resumed.train_epoch();
        CHECK(params_equal(resumed.params(), tr.params()));
        CHECK(resumed.optimizer().step == tr.optimizer().step);
    }

    SUBCASE("truncated checkpoint errors cleanly") {
        std::string bytes = read_file(path);
        bytes.resize(bytes.size() - 17);
        write_file(path, bytes);
        try {
            load_checkpoint(path);
            FAIL("expected exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("truncated") != std::string::npos);
        }
    }

    SUBCASE("wrong version rejected") {
        std::string bytes = read_file(path);
        bytes[4] = 9;  // version field
        write_file(path, bytes);
        try {
            load_checkpoint(path);
            FAIL("expected exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("version") != std::string::npos);
        }
    }
}
