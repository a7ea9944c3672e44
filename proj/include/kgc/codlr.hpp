#pragma once
// Contextual dictionary lookup: each relation carries a dictionary of n
// candidate representations. A query (h, r) composes the head embedding with
// the dictionary's central semantics into a context, a one-layer MLP turns
// the context into lookup logits, and the softmax-weighted dictionary rows
// form the fine-grained relation semantics used for prediction.

#include <cstdint>
#include <span>
#include <utility>

#include "kgc/model.hpp"

namespace kgc {

// Read-only view of one relation's dictionary (n rows of dimension d).
struct RelationDictionary {
    std::span<const float> rows;  // n*d contiguous
    std::size_t n = 0;
    std::size_t d = 0;

    std::span<const float> row(std::size_t i) const { return rows.subspan(i * d, d); }
};

// Read-only view of the lookup MLP for one relation.
struct LookupMLP {
    std::span<const float> w;  // d_c x n, row-major
    std::span<const float> b;  // n
    std::size_t d_c = 0;
    std::size_t n = 0;
    Activation activation = Activation::relu;
};

RelationDictionary dict_view(const ModelParams& p, uint32_t rel);
LookupMLP mlp_view(const ModelParams& p, uint32_t rel);

// Every intermediate of one query's lookup, kept for the backward pass.
// Parameters are float32; the per-query pipeline runs in double so that
// analytic gradients match finite differences of the realized forward.
struct LookupTrace {
    std::vector<double> central;         // d: mean of dictionary rows
    std::vector<double> context;         // d_c
    std::vector<double> linear;          // n: W^T context + b (pre-activation)
    std::vector<double> pre_activation;  // n: G = act(linear) (pre-softmax logits)
    std::vector<double> lookup;          // n: L = softmax(G)
    std::vector<double> fine_grained;    // d: L^T * dictionary
};

std::vector<double> central_semantics(const RelationDictionary& dict);

// Writes the composed context into `out` (sized d for every composition
// except concat, which needs 2d and places the entity half first).
void compose(Composition kind, std::span<const float> head,
             std::span<const double> central, std::span<double> out);

// Returns (G, L): activated logits and their softmax.
std::pair<std::vector<double>, std::vector<double>> lookup(
    const LookupMLP& mlp, std::span<const double> context);

std::vector<double> fine_grained(std::span<const double> lookup_weights,
                                 const RelationDictionary& dict);

LookupTrace codlr_forward(const ModelParams& p, uint32_t head, uint32_t rel);

// Accumulates this query's parameter gradients given upstream gradients on
// the fine-grained semantics and on the central semantics (the latter from
// the auxiliary central score path; pass an empty span when unused).
// Dictionary rows receive all three contributions: the lookup-weighted sum,
// the central path through the context, and the direct central path.
void codlr_backward(const ModelParams& p, uint32_t head, uint32_t rel,
                    const LookupTrace& trace, std::span<const double> grad_fine,
                    std::span<const double> grad_central, GradBuffers& grads);

}  // namespace kgc
