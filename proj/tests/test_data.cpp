#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "kgc/data.hpp"
#include "kgc/errors.hpp"

using namespace kgc;
using kgc_test::TempDir;
using kgc_test::read_file;
using kgc_test::write_file;

namespace {

TripleStore tiny_store(const TempDir& dir) {
    write_file(dir.file("train.txt"),
               "alice\tknows\tbob\n"
               "bob\tknows\tcarol\n"
               "alice\tknows\tcarol\n"
               "carol\tlikes\tdave\n");
    write_file(dir.file("valid.txt"), "alice\tknows\tdave\n");
    write_file(dir.file("test.txt"), "bob\tlikes\tdave\n");
    return load_splits(dir.file("train.txt"), dir.file("valid.txt"),
                       dir.file("test.txt"));
}

}  // namespace

TEST_CASE("load_splits vocabulary and reciprocal augmentation") {
    TempDir dir;
    TripleStore store = tiny_store(dir);

    // First-occurrence order.
    REQUIRE(store.vocab.num_entities() == 4);
    CHECK(store.vocab.entity_names[0] == "alice");
    CHECK(store.vocab.entity_names[1] == "bob");
    CHECK(store.vocab.entity_names[2] == "carol");
    CHECK(store.vocab.entity_names[3] == "dave");

    REQUIRE(store.vocab.base_relation_count == 2);
    REQUIRE(store.vocab.num_relations() == 4);
    CHECK(store.vocab.relation_names[0] == "knows");
    CHECK(store.vocab.relation_names[1] == "likes");
    CHECK(store.vocab.relation_names[2] == "knows_inv");
    CHECK(store.vocab.relation_names[3] == "likes_inv");
    CHECK(!store.vocab.is_reciprocal(1));
    CHECK(store.vocab.is_reciprocal(2));
    CHECK(store.vocab.reciprocal_of(0) == 2);
    CHECK(store.vocab.reciprocal_of(2) == 0);

    // 4 base + 4 reciprocal.
    REQUIRE(store.split(Split::train).size() == 8);
    REQUIRE(store.split(Split::valid).size() == 2);
    REQUIRE(store.split(Split::test).size() == 2);

    // Every base triple has its inverse present.
    for (std::size_t i = 0; i < 4; ++i) {
        const Triple& base = store.split(Split::train)[i];
        const Triple inv{base.tail,
                         static_cast<uint32_t>(base.rel +
                                               store.vocab.base_relation_count),
                         base.head};
        const auto& tr = store.split(Split::train);
        CHECK(std::count(tr.begin(), tr.end(), inv) == 1);
    }
}

TEST_CASE("load_splits rejects malformed lines with location") {
    TempDir dir;
    write_file(dir.file("train.txt"), "a\tr\tb\nbad line without tabs\n");
    write_file(dir.file("valid.txt"), "");
    write_file(dir.file("test.txt"), "");
    try {
        load_splits(dir.file("train.txt"), dir.file("valid.txt"),
                    dir.file("test.txt"));
        FAIL("expected exception");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find(":2") != std::string::npos);
        CHECK(msg.find("train.txt") != std::string::npos);
    }
}

TEST_CASE("load_splits missing file errors") {
    TempDir dir;
    write_file(dir.file("valid.txt"), "");
    write_file(dir.file("test.txt"), "");
    CHECK_THROWS_AS(load_splits(dir.file("no_such.txt"), dir.file("valid.txt"),
                                dir.file("test.txt")),
                    std::runtime_error);
}

TEST_CASE("kvsall and filter indices") {
    TempDir dir;
    TripleStore store = tiny_store(dir);
    const uint32_t alice = 0, bob = 1, carol = 2, dave = 3;
    const uint32_t knows = 0;

    // alice-knows has train tails {bob, carol}, sorted.
    const auto targets = store.kvsall_targets(alice, knows);
    REQUIRE(targets.size() == 2);
    CHECK(targets[0] == bob);
    CHECK(targets[1] == carol);

    // Unseen pair -> empty.
    CHECK(store.kvsall_targets(dave, knows).empty());

    // Filter for (alice, knows, dave): dave is the valid-split gold; the
    // filter drops the other known tails {bob, carol} but never the gold.
    const auto excluded = store.filter_candidates(alice, knows, dave);
    REQUIRE(excluded.size() == 2);
    CHECK(excluded[0] == bob);
    CHECK(excluded[1] == carol);
    CHECK(std::find(excluded.begin(), excluded.end(), dave) == excluded.end());
}

TEST_CASE("store cache round trip") {
    TempDir dir;
    TripleStore store = tiny_store(dir);
    const std::string cache = dir.file("data.kgd");
    save_store(store, cache);
    const TripleStore loaded = load_store(cache);

    CHECK(loaded.vocab.entity_names == store.vocab.entity_names);
    CHECK(loaded.vocab.relation_names == store.vocab.relation_names);
    CHECK(loaded.vocab.base_relation_count == store.vocab.base_relation_count);
    CHECK(loaded.vocab.entity_digest() == store.vocab.entity_digest());
    CHECK(loaded.vocab.relation_digest() == store.vocab.relation_digest());
    for (Split s : {Split::train, Split::valid, Split::test}) {
        CHECK(loaded.split(s) == store.split(s));
    }
    // Indices rebuilt.
    CHECK(loaded.kvsall_targets(0, 0).size() == 2);
}

TEST_CASE("store cache corruption detected") {
    TempDir dir;
    TripleStore store = tiny_store(dir);
    const std::string cache = dir.file("data.kgd");
    save_store(store, cache);

    SUBCASE("bad magic") {
        std::string bytes = read_file(cache);
        bytes[0] = 'X';
        write_file(cache, bytes);
        CHECK_THROWS_AS(load_store(cache), std::runtime_error);
    }
    SUBCASE("truncated") {
        std::string bytes = read_file(cache);
        bytes.resize(bytes.size() / 2);
        write_file(cache, bytes);
        try {
            load_store(cache);
            FAIL("expected exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("truncated") != std::string::npos);
        }
    }
}

TEST_CASE("synthetic generator cyclic structure") {
    TempDir dir;
    SynthSpec spec;
    spec.cluster_count = 3;
    spec.entities_per_cluster = 6;
    spec.noise_rate = 0.0;
    spec.seed = 5;
    generate_synthetic(spec, dir.path.string());

    TripleStore store = load_splits(dir.file("train.txt"), dir.file("valid.txt"),
                                    dir.file("test.txt"));
    CHECK(store.vocab.num_entities() == 18);
    CHECK(store.vocab.base_relation_count == 1);

    // Cluster of an entity from its name e{c}_{j}.
    auto cluster_of = [&](uint32_t e) {
        const std::string& name = store.vocab.entity_names[e];
        return uint32_t(name[1] - '0');
    };
    // Every base triple links cluster c to cluster (c+1) mod 3, and
    // consecutive clusters are completely bipartite: each head reaches all 6
    // entities of the next cluster, so heads of a cluster share one tail set.
    std::vector<int> head_uses(18, 0), tail_uses(18, 0);
    std::map<uint32_t, std::set<uint32_t>> tails_of;
    std::size_t base_triples = 0;
    for (Split s : {Split::train, Split::valid, Split::test}) {
        for (const Triple& t : store.split(s)) {
            if (store.vocab.is_reciprocal(t.rel)) continue;
            ++base_triples;
            CHECK(cluster_of(t.tail) == (cluster_of(t.head) + 1) % 3);
            ++head_uses[t.head];
            ++tail_uses[t.tail];
            tails_of[t.head].insert(t.tail);
        }
    }
    CHECK(base_triples == 18 * 6);
    for (uint32_t e = 0; e < 18; ++e) {
        CHECK(head_uses[e] == 6);
        CHECK(tail_uses[e] == 6);
        CHECK(tails_of[e].size() == 6);
    }
    std::set<std::set<uint32_t>> distinct_pools;
    for (const auto& [head, tails] : tails_of) distinct_pools.insert(tails);
    CHECK(distinct_pools.size() == 3);

    // clusters.csv lists every entity with its ground-truth cluster.
    const std::string clusters = read_file(dir.file("clusters.csv"));
    CHECK(clusters.find("entity,cluster") == 0);
    CHECK(std::count(clusters.begin(), clusters.end(), '\n') == 19);
}

TEST_CASE("synthetic generator noise and determinism") {
    SUBCASE("noise sidecar") {
        TempDir dir;
        SynthSpec spec;
        spec.cluster_count = 3;
        spec.entities_per_cluster = 6;
        spec.noise_rate = 0.1;
        spec.seed = 9;
        generate_synthetic(spec, dir.path.string());
        const std::string noise = read_file(dir.file("noise.csv"));
        CHECK(noise.find("head,relation,tail") == 0);
        // 18 heads, 6 tails each = 108 triples; 10% rounds to 11.
        CHECK(std::count(noise.begin(), noise.end(), '\n') == 12);
    }
    SUBCASE("same seed, same bytes") {
        TempDir a, b;
        SynthSpec spec;
        spec.cluster_count = 4;
        spec.entities_per_cluster = 5;
        spec.noise_rate = 0.05;
        spec.seed = 123;
        generate_synthetic(spec, a.path.string());
        generate_synthetic(spec, b.path.string());
        for (const char* f :
             {"train.txt", "valid.txt", "test.txt", "clusters.csv", "noise.csv"}) {
            CHECK(read_file(a.file(f)) == read_file(b.file(f)));
        }
    }
    SUBCASE("spec validation") {
        SynthSpec spec;
        spec.cluster_count = 1;
        CHECK_THROWS_AS(spec.validate(), ConfigError);
        spec.cluster_count = 3;
        spec.noise_rate = 0.6;
        CHECK_THROWS_AS(spec.validate(), ConfigError);
        spec.noise_rate = 0.0;
        spec.entity_budget = 10;  // 3*50 > 10
        CHECK_THROWS_AS(spec.validate(), ConfigError);
        spec.entity_budget = 0;
        CHECK_NOTHROW(spec.validate());
    }
}
