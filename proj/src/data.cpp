#include "kgc/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "kgc/errors.hpp"

namespace kgc {

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

uint64_t fnv1a(uint64_t h, const void* bytes, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

uint64_t digest_names(const std::vector<std::string>& names) {
    uint64_t h = kFnvOffset;
    const uint64_t count = names.size();
    h = fnv1a(h, &count, sizeof(count));
    for (const auto& n : names) {
        h = fnv1a(h, n.data(), n.size());
        const unsigned char sep = 0;
        h = fnv1a(h, &sep, 1);
    }
    return h;
}

struct RawTriple {
    std::string head, rel, tail;
};

void parse_triple_file(const std::string& path, std::vector<RawTriple>& out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open triple file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos
                                                       : line.find('\t', t1 + 1);
        const bool extra = t2 != std::string::npos &&
                           line.find('\t', t2 + 1) != std::string::npos;
        if (t1 == std::string::npos || t2 == std::string::npos || extra)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 3 tab-separated fields");
        out.push_back({line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1),
                       line.substr(t2 + 1)});
    }
}

uint32_t intern(std::unordered_map<std::string, uint32_t>& ids,
                std::vector<std::string>& names, const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    const auto id = static_cast<uint32_t>(names.size());
    names.push_back(name);
    ids.emplace(name, id);
    return id;
}

// -- little-endian binary io ------------------------------------------------

void wr_u32(std::ostream& out, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t rd_u32(std::istream& in, const char* what) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw std::runtime_error(std::string("truncated file while reading ") + what);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void wr_string(std::ostream& out, const std::string& s) {
    wr_u32(out, static_cast<uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string rd_string(std::istream& in, const char* what) {
    const uint32_t len = rd_u32(in, what);
    std::string s(len, '\0');
    if (len > 0 && !in.read(s.data(), len))
        throw std::runtime_error(std::string("truncated file while reading ") + what);
    return s;
}

uint64_t rand_below(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

}  // namespace

void Vocab::rebuild_maps() {
    entity_ids.clear();
    relation_ids.clear();
    for (uint32_t i = 0; i < entity_names.size(); ++i)
        entity_ids.emplace(entity_names[i], i);
    for (uint32_t i = 0; i < relation_names.size(); ++i)
        relation_ids.emplace(relation_names[i], i);
}

uint64_t Vocab::entity_digest() const { return digest_names(entity_names); }

uint64_t Vocab::relation_digest() const {
    uint64_t h = digest_names(relation_names);
    const uint64_t base = base_relation_count;
    return fnv1a(h, &base, sizeof(base));
}

std::span<const uint32_t> TripleStore::kvsall_targets(uint32_t head,
                                                      uint32_t rel) const {
    auto it = kvsall_index.find(pair_key(head, rel));
    if (it == kvsall_index.end()) return {};
    return it->second;
}

std::vector<uint32_t> TripleStore::filter_candidates(uint32_t head, uint32_t rel,
                                                     uint32_t gold_tail) const {
    std::vector<uint32_t> out;
    auto it = filter_index.find(pair_key(head, rel));
    if (it == filter_index.end()) return out;
    out.reserve(it->second.size());
    for (uint32_t t : it->second)
        if (t != gold_tail) out.push_back(t);
    return out;
}

void TripleStore::rebuild_indices() {
    kvsall_index.clear();
    filter_index.clear();
    for (const Triple& t : split(Split::train))
        kvsall_index[pair_key(t.head, t.rel)].push_back(t.tail);
    for (const auto& triples : splits)
        for (const Triple& t : triples)
            filter_index[pair_key(t.head, t.rel)].push_back(t.tail);
    auto dedupe = [](std::unordered_map<uint64_t, std::vector<uint32_t>>& index) {
        for (auto& [key, tails] : index) {
            std::sort(tails.begin(), tails.end());
            tails.erase(std::unique(tails.begin(), tails.end()), tails.end());
        }
    };
    dedupe(kvsall_index);
    dedupe(filter_index);
}

TripleStore load_splits(const std::string& train_path, const std::string& valid_path,
                        const std::string& test_path) {
    std::array<std::vector<RawTriple>, 3> raw;
    parse_triple_file(train_path, raw[0]);
    parse_triple_file(valid_path, raw[1]);
    parse_triple_file(test_path, raw[2]);

    TripleStore store;
    Vocab& vocab = store.vocab;
    // first-occurrence ids: train, then valid, then test
    for (int s = 0; s < 3; ++s) {
        for (const RawTriple& rt : raw[s]) {
            const uint32_t h = intern(vocab.entity_ids, vocab.entity_names, rt.head);
            const uint32_t r = intern(vocab.relation_ids, vocab.relation_names, rt.rel);
            const uint32_t t = intern(vocab.entity_ids, vocab.entity_names, rt.tail);
            store.splits[s].push_back({h, r, t});
        }
    }
    vocab.base_relation_count = vocab.relation_names.size();

    // synthesize reciprocal relation names; id of r_inv is r + base count
    for (std::size_t r = 0; r < vocab.base_relation_count; ++r) {
        std::string name = vocab.relation_names[r] + "_inv";
        while (vocab.relation_ids.count(name)) name += "_";
        const auto id = static_cast<uint32_t>(vocab.relation_names.size());
        vocab.relation_names.push_back(name);
        vocab.relation_ids.emplace(name, id);
    }

    const auto base = static_cast<uint32_t>(vocab.base_relation_count);
    for (auto& triples : store.splits) {
        const std::size_t n = triples.size();
        triples.reserve(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const Triple& t = triples[i];
            triples.push_back({t.tail, t.rel + base, t.head});
        }
    }

    store.rebuild_indices();
    return store;
}

void save_store(const TripleStore& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write("KGD1", 4);
    const Vocab& v = store.vocab;
    wr_u32(out, static_cast<uint32_t>(v.num_entities()));
    wr_u32(out, static_cast<uint32_t>(v.num_relations()));
    wr_u32(out, static_cast<uint32_t>(v.base_relation_count));
    for (const auto& triples : store.splits)
        wr_u32(out, static_cast<uint32_t>(triples.size()));
    for (const auto& n : v.entity_names) wr_string(out, n);
    for (const auto& n : v.relation_names) wr_string(out, n);
    for (const auto& triples : store.splits)
        for (const Triple& t : triples) {
            wr_u32(out, t.head);
            wr_u32(out, t.rel);
            wr_u32(out, t.tail);
        }
    if (!out) throw std::runtime_error("write failed: " + path);
}

TripleStore load_store(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open store: " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::string_view(magic, 4) != "KGD1")
        throw std::runtime_error("not a KGD1 store: " + path);

    TripleStore store;
    Vocab& v = store.vocab;
    const uint32_t n_ent = rd_u32(in, "entity count");
    const uint32_t n_rel = rd_u32(in, "relation count");
    v.base_relation_count = rd_u32(in, "base relation count");
    if (v.base_relation_count * 2 != n_rel)
        throw std::runtime_error("corrupt KGD1 store: relation counts disagree");
    uint32_t counts[3];
    for (auto& c : counts) c = rd_u32(in, "split count");

    v.entity_names.reserve(n_ent);
    for (uint32_t i = 0; i < n_ent; ++i)
        v.entity_names.push_back(rd_string(in, "entity name"));
    v.relation_names.reserve(n_rel);
    for (uint32_t i = 0; i < n_rel; ++i)
        v.relation_names.push_back(rd_string(in, "relation name"));
    v.rebuild_maps();

    for (int s = 0; s < 3; ++s) {
        store.splits[s].resize(counts[s]);
        for (auto& t : store.splits[s]) {
            t.head = rd_u32(in, "triple");
            t.rel = rd_u32(in, "triple");
            t.tail = rd_u32(in, "triple");
            if (t.head >= n_ent || t.tail >= n_ent || t.rel >= n_rel)
                throw std::runtime_error("corrupt KGD1 store: id out of range");
        }
    }
    store.rebuild_indices();
    return store;
}

void SynthSpec::validate() const {
    if (cluster_count < 2) throw ConfigError("synth: cluster_count must be >= 2");
    if (entities_per_cluster < 2)
        throw ConfigError("synth: entities_per_cluster must be >= 2");
    if (!(noise_rate >= 0.0 && noise_rate < 0.5))
        throw ConfigError("synth: noise_rate must lie in [0, 0.5)");
    if (entity_budget > 0 &&
        static_cast<uint64_t>(cluster_count) * entities_per_cluster > entity_budget)
        throw ConfigError("synth: cluster_count * entities_per_cluster exceeds entity budget");
}

void generate_synthetic(const SynthSpec& spec, const std::string& out_dir) {
    spec.validate();
    const uint32_t k = spec.cluster_count;
    const uint32_t m = spec.entities_per_cluster;
    std::mt19937_64 rng(spec.seed);

    std::vector<std::string> names(static_cast<std::size_t>(k) * m);
    for (uint32_t c = 0; c < k; ++c)
        for (uint32_t j = 0; j < m; ++j)
            names[static_cast<std::size_t>(c) * m + j] =
                "e" + std::to_string(c) + "_" + std::to_string(j);

    struct SynthTriple {
        uint32_t head, tail;
        bool noise = false;
    };
    // Consecutive clusters are completely bipartite: every head of cluster c
    // links to every entity of cluster (c+1) mod k. All entities of a cluster
    // then share one relational role (one fine-grained sense), filtered
    // evaluation excludes every blob mate of a gold tail, and the cycle of
    // clusters rules out any single global translation.
    std::vector<SynthTriple> triples;
    triples.reserve(std::size_t(k) * m * m);
    for (uint32_t c = 0; c < k; ++c) {
        const uint32_t pool_cluster = (c + 1) % k;
        for (uint32_t j = 0; j < m; ++j) {
            for (uint32_t u = 0; u < m; ++u) {
                triples.push_back({c * m + j, pool_cluster * m + u, false});
            }
        }
    }

    const auto total = static_cast<uint64_t>(triples.size());
    const auto noise_count =
        static_cast<uint64_t>(std::llround(spec.noise_rate * static_cast<double>(total)));
    if (noise_count > 0) {
        std::vector<uint64_t> order(total);
        for (uint64_t i = 0; i < total; ++i) order[i] = i;
        for (uint64_t i = 0; i < noise_count; ++i) {
            const uint64_t pick = i + rand_below(rng, total - i);
            std::swap(order[i], order[pick]);
        }
        for (uint64_t i = 0; i < noise_count; ++i) {
            auto& t = triples[order[i]];
            t.tail = static_cast<uint32_t>(rand_below(rng, names.size()));
            t.noise = true;
        }
    }

    // seeded shuffle, then 80/10/10 (valid/test get at least one triple each)
    for (uint64_t i = 0; i + 1 < total; ++i) {
        const uint64_t pick = i + rand_below(rng, total - i);
        std::swap(triples[i], triples[pick]);
    }
    const uint64_t n_valid = std::max<uint64_t>(1, total / 10);
    const uint64_t n_test = std::max<uint64_t>(1, total / 10);
    const uint64_t n_train = total - n_valid - n_test;

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto open_out = [&](const char* name) {
        std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
        if (!f) throw std::runtime_error(std::string("cannot write ") + name + " in " + out_dir);
        return f;
    };

    {
        std::ofstream train = open_out("train.txt");
        std::ofstream valid = open_out("valid.txt");
        std::ofstream test = open_out("test.txt");
        for (uint64_t i = 0; i < total; ++i) {
            std::ofstream& f =
                i < n_train ? train : (i < n_train + n_valid ? valid : test);
            f << names[triples[i].head] << '\t' << "rel_multi" << '\t'
              << names[triples[i].tail] << '\n';
        }
    }
    {
        std::ofstream clusters = open_out("clusters.csv");
        clusters << "entity,cluster\n";
        for (uint32_t c = 0; c < k; ++c)
            for (uint32_t j = 0; j < m; ++j)
                clusters << names[static_cast<std::size_t>(c) * m + j] << ',' << c << '\n';
    }
    if (noise_count > 0) {
        std::ofstream noise = open_out("noise.csv");
        noise << "head,relation,tail\n";
        for (const auto& t : triples)
            if (t.noise)
                noise << names[t.head] << ",rel_multi," << names[t.tail] << '\n';
    }
}

}  // namespace kgc
