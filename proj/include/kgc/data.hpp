#pragma once
// Triple ingestion and indexing.
//
// Input files are UTF-8 TSV, one triple per line: head<TAB>relation<TAB>tail.
// Every base triple (h, r, t) is augmented with a reciprocal (t, r_inv, h) in
// the same split, so all queries downstream are tail prediction. Base
// relations occupy ids [0, R_base); the reciprocal of r is r + R_base.
//
// Cache format (KGD1):
//   magic "KGD1"
//   u32 entity_count, u32 relation_count, u32 base_relation_count
//   u32 train_count, u32 valid_count, u32 test_count     (augmented counts)
//   entity names, relation names: u32 byte length + UTF-8 bytes each
//   per split: count x (u32 head, u32 rel, u32 tail)
// All integers little-endian.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace kgc {

struct Triple {
    uint32_t head = 0;
    uint32_t rel = 0;
    uint32_t tail = 0;
    bool operator==(const Triple&) const = default;
};

enum class Split : int { train = 0, valid = 1, test = 2 };

struct Vocab {
    std::vector<std::string> entity_names;
    std::vector<std::string> relation_names;  // base relations, then reciprocals
    std::size_t base_relation_count = 0;
    std::unordered_map<std::string, uint32_t> entity_ids;
    std::unordered_map<std::string, uint32_t> relation_ids;

    std::size_t num_entities() const { return entity_names.size(); }
    std::size_t num_relations() const { return relation_names.size(); }
    bool is_reciprocal(uint32_t rel) const { return rel >= base_relation_count; }
    uint32_t reciprocal_of(uint32_t rel) const {
        return is_reciprocal(rel) ? rel - static_cast<uint32_t>(base_relation_count)
                                  : rel + static_cast<uint32_t>(base_relation_count);
    }
    void rebuild_maps();
    uint64_t entity_digest() const;
    uint64_t relation_digest() const;
};

struct TripleStore {
    Vocab vocab;
    std::array<std::vector<Triple>, 3> splits;
    // (head, rel) -> sorted unique tail ids
    std::unordered_map<uint64_t, std::vector<uint32_t>> kvsall_index;  // train split
    std::unordered_map<uint64_t, std::vector<uint32_t>> filter_index;  // all splits

    static uint64_t pair_key(uint32_t head, uint32_t rel) {
        return (static_cast<uint64_t>(head) << 32) | rel;
    }

    const std::vector<Triple>& split(Split s) const {
        return splits[static_cast<int>(s)];
    }
    std::vector<Triple>& split(Split s) { return splits[static_cast<int>(s)]; }

    // Train-split tails for (head, rel); empty for unseen pairs.
    std::span<const uint32_t> kvsall_targets(uint32_t head, uint32_t rel) const;

    // Known-valid tails (union of splits) to exclude from ranking, minus gold.
    std::vector<uint32_t> filter_candidates(uint32_t head, uint32_t rel,
                                            uint32_t gold_tail) const;

    void rebuild_indices();
};

TripleStore load_splits(const std::string& train_path, const std::string& valid_path,
                        const std::string& test_path);

void save_store(const TripleStore& store, const std::string& path);
TripleStore load_store(const std::string& path);

struct SynthSpec {
    uint32_t cluster_count = 3;        // k
    uint32_t entities_per_cluster = 50;  // m
    uint32_t dimension_hint = 32;
    double noise_rate = 0.0;
    uint64_t seed = 1;
    uint32_t entity_budget = 0;  // 0 = unlimited; otherwise require k*m <= budget

    void validate() const;
};

// Emit a desk-scale KG with one relation "rel_multi" carrying cluster_count
// fine-grained senses: the heads of cluster i draw tails from the pool owned
// by cluster i, which is the full membership of cluster (i+1) mod k, giving
// k*m*m base triples. Every entity of a cluster plays the same relational
// role, so each cluster is one sense, held-out edges stay recoverable, and
// the cycle of clusters admits per-sense translations but no single global
// one. Writes train.txt / valid.txt / test.txt, clusters.csv (header
// "entity,cluster"), and when noise is injected, noise.csv listing the
// rewired triples.
void generate_synthetic(const SynthSpec& spec, const std::string& out_dir);

}  // namespace kgc
