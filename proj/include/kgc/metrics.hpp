#pragma once
// Filtered ranking metrics plus the two diagnostics: lookup sharpness (SOL)
// and the divergence-alignment error (DAE) between a relation's training
// heads and its dictionary rows.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kgc/data.hpp"
#include "kgc/model.hpp"

namespace kgc {

// Filtered rank of the gold tail under the random tie protocol: competitors
// in `excluded` (other known-true tails) are skipped, strictly-better scores
// count in full, and the gold entity lands uniformly at random among the
// entities that tie its score exactly.
uint32_t rank_gold(std::span<const float> scores, uint32_t gold,
                   std::span<const uint32_t> excluded, std::mt19937_64& rng);

struct RankingMetrics {
    double mr = 0.0;
    double mrr = 0.0;
    double hits1 = 0.0;
    double hits3 = 0.0;
    double hits10 = 0.0;
};

RankingMetrics aggregate(std::span<const uint32_t> ranks);

// Sharpness of a lookup distribution, 0 (uniform) to 1 (one-hot).
// Requires a probability vector of length >= 2.
double sol(std::span<const float> lookup);
double sol(std::span<const double> lookup);

// Mean pairwise-to-center divergence of a vector set, in [0, 1].
// Near-zero-norm factors contribute cosine 0.
double div(std::span<const std::span<const float>> vectors);

struct RelationDiagnostics {
    uint32_t rel = 0;
    double div_entities = 0.0;
    double div_dict = 0.0;
    double dae = 0.0;
};

// DAE for one relation; nullopt when the relation has no training triples.
std::optional<RelationDiagnostics> relation_dae(const ModelParams& p,
                                                const TripleStore& store,
                                                uint32_t rel);

// DAE for every relation that appears in training, one pass over the split.
std::vector<RelationDiagnostics> diagnose_relations(const ModelParams& p,
                                                    const TripleStore& store);

// Mean SOL over all distinct training (head, rel) pairs.
double mean_sol(const ModelParams& p, const TripleStore& store);

// Filtered tail-prediction evaluation over one split. Per-query RNG streams
// are derived from (seed, query index), so results do not depend on workers.
RankingMetrics evaluate(const ModelParams& p, const TripleStore& store,
                        Split split, uint64_t seed, unsigned workers = 1);

void write_eval_csv(const RankingMetrics& m, const std::string& path);
void write_dae_csv(std::span<const RelationDiagnostics> rows, const Vocab& vocab,
                   const std::string& path);

}  // namespace kgc
