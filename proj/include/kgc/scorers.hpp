#pragma once
// Triple plausibility scorers. Both map to (0, 1) through a sigmoid:
// TransE uses the negated translation distance, DistMult the trilinear
// product. Tail prediction scores every entity against a fixed relation
// semantics vector; codlr models produce a dual batch (central plus
// fine-grained), and prediction ranks on the fine-grained scores.

#include <cstdint>
#include <span>

#include "kgc/codlr.hpp"
#include "kgc/model.hpp"

namespace kgc {

double score_transe(std::span<const float> h, std::span<const float> r,
                    std::span<const float> t);
double score_distmult(std::span<const float> h, std::span<const float> r,
                      std::span<const float> t);
double score_triple(ScorerKind kind, std::span<const float> h,
                    std::span<const float> r, std::span<const float> t);

struct ScoreBatch {
    uint32_t head = 0;
    uint32_t rel = 0;
    Vec scores;  // one per entity, each in (0, 1)
};

// Scores (head, semantics, e) for every entity e as tail candidate. The
// double overload takes a fine-grained or central semantics straight from a
// LookupTrace; the float overload serves plain relation embeddings.
ScoreBatch score_all_tails(const ModelParams& p, uint32_t head, uint32_t rel,
                           std::span<const float> semantics);
ScoreBatch score_all_tails(const ModelParams& p, uint32_t head, uint32_t rel,
                           std::span<const double> semantics);

struct DualScores {
    LookupTrace trace;
    ScoreBatch central;
    ScoreBatch fine;
};

// One forward pass of the full codlr model for a (head, rel) query.
DualScores dual_scores(const ModelParams& p, uint32_t head, uint32_t rel);

}  // namespace kgc
