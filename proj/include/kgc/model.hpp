#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kgc/ndmath.hpp"

namespace kgc {

enum class ScorerKind { transe, distmult };

// How a head entity is combined with the central semantics into a context.
// central_only and entity_only are the degenerate compositions used by the
// corresponding ablations; both keep the context dimension at d.
enum class Composition { sum, concat, mult, corr, central_only, entity_only };

enum class Activation { relu, tanh_act };

struct ModelShape {
    uint32_t num_entities = 0;
    uint32_t num_relations = 0;  // including reciprocals
    uint32_t dim = 0;            // d
    uint32_t dict_size = 1;      // n (rows per relation dictionary); 1 when plain
    bool codlr = false;
    ScorerKind scorer = ScorerKind::transe;
    Composition composition = Composition::sum;
    Activation activation = Activation::relu;
    bool per_relation_mlp = false;

    uint32_t context_dim() const {
        return composition == Composition::concat ? 2 * dim : dim;
    }
    // Number of independent lookup-MLP parameter blocks.
    uint32_t mlp_blocks() const {
        if (!codlr) return 0;
        return per_relation_mlp ? num_relations : 1;
    }
    bool operator==(const ModelShape&) const = default;
};

struct ModelParams {
    ModelShape shape;
    Mat entities;   // num_entities x d
    Mat relations;  // (num_relations * dict_size) x d
    Mat w_lookup;   // (mlp_blocks * d_c) x n
    Mat b_lookup;   // mlp_blocks x n

    std::span<const float> entity(uint32_t e) const { return entities.row(e); }
    std::span<float> entity(uint32_t e) { return entities.row(e); }

    // All dictionary rows of one relation, n*d contiguous floats.
    std::span<const float> dict_rows(uint32_t rel) const {
        return {relations.data.data() + std::size_t(rel) * shape.dict_size * shape.dim,
                std::size_t(shape.dict_size) * shape.dim};
    }
    std::span<float> dict_rows(uint32_t rel) {
        return {relations.data.data() + std::size_t(rel) * shape.dict_size * shape.dim,
                std::size_t(shape.dict_size) * shape.dim};
    }
    std::span<const float> dict_row(uint32_t rel, uint32_t i) const {
        return dict_rows(rel).subspan(std::size_t(i) * shape.dim, shape.dim);
    }

    uint32_t mlp_block(uint32_t rel) const { return shape.per_relation_mlp ? rel : 0; }
    // Lookup weights for a relation, d_c*n contiguous floats, row-major
    // (one row of n lookup logits per context component).
    std::span<const float> mlp_w(uint32_t rel) const {
        const std::size_t block = mlp_block(rel);
        const std::size_t sz = std::size_t(shape.context_dim()) * shape.dict_size;
        return {w_lookup.data.data() + block * sz, sz};
    }
    std::span<const float> mlp_b(uint32_t rel) const { return b_lookup.row(mlp_block(rel)); }
};

// Deterministic initialization: entity and dictionary rows uniform in
// +-0.5/sqrt(d), lookup weights Glorot uniform +-sqrt(6/(d_c+n)), lookup
// biases zero. Draw order is fixed (entities, relations, lookup weights).
ModelParams init_params(const ModelShape& shape, uint64_t seed);

// Double-precision gradient accumulators mirroring ModelParams. Transient:
// zeroed at the start of every batch, never persisted.
struct GradBuffers {
    std::vector<double> entities;
    std::vector<double> relations;
    std::vector<double> w_lookup;
    std::vector<double> b_lookup;

    void init(const ModelShape& shape);
    void zero();
};

}  // namespace kgc
