#include "kgc/model.hpp"

#include <algorithm>
#include <cmath>

#include "kgc/util.hpp"

namespace kgc {

namespace {

void fill_uniform(std::vector<float>& data, std::mt19937_64& rng, double half) {
    for (float& x : data) x = rand_symmetric(rng, half);
}

}  // namespace

ModelParams init_params(const ModelShape& shape, uint64_t seed) {
    ModelParams p;
    p.shape = shape;
    const std::size_t d = shape.dim;
    const std::size_t n = shape.codlr ? shape.dict_size : 1;
    p.entities = Mat(shape.num_entities, d);
    p.relations = Mat(std::size_t(shape.num_relations) * n, d);

    auto rng = make_rng(seed, 0x6d6f64656cull);
    const double half = 0.5 / std::sqrt(double(d));
    fill_uniform(p.entities.data, rng, half);
    fill_uniform(p.relations.data, rng, half);

    if (shape.codlr) {
        const std::size_t dc = shape.context_dim();
        const std::size_t blocks = shape.mlp_blocks();
        p.w_lookup = Mat(blocks * dc, n);
        p.b_lookup = Mat(blocks, n);
        const double glorot = std::sqrt(6.0 / double(dc + n));
        fill_uniform(p.w_lookup.data, rng, glorot);
        std::fill(p.b_lookup.data.begin(), p.b_lookup.data.end(), 0.0f);
    }
    return p;
}

void GradBuffers::init(const ModelShape& shape) {
    const std::size_t d = shape.dim;
    const std::size_t n = shape.codlr ? shape.dict_size : 1;
    entities.assign(std::size_t(shape.num_entities) * d, 0.0);
    relations.assign(std::size_t(shape.num_relations) * n * d, 0.0);
    if (shape.codlr) {
        w_lookup.assign(std::size_t(shape.mlp_blocks()) * shape.context_dim() * n, 0.0);
        b_lookup.assign(std::size_t(shape.mlp_blocks()) * n, 0.0);
    } else {
        w_lookup.clear();
        b_lookup.clear();
    }
}

void GradBuffers::zero() {
    std::fill(entities.begin(), entities.end(), 0.0);
    std::fill(relations.begin(), relations.end(), 0.0);
    std::fill(w_lookup.begin(), w_lookup.end(), 0.0);
    std::fill(b_lookup.begin(), b_lookup.end(), 0.0);
}

}  // namespace kgc
