#include "kgc/codlr.hpp"

#include <cmath>
#include <stdexcept>

#include "kgc/ndmath.hpp"

namespace kgc {

RelationDictionary dict_view(const ModelParams& p, uint32_t rel) {
    return {p.dict_rows(rel), p.shape.dict_size, p.shape.dim};
}

LookupMLP mlp_view(const ModelParams& p, uint32_t rel) {
    return {p.mlp_w(rel), p.mlp_b(rel), p.shape.context_dim(), p.shape.dict_size,
            p.shape.activation};
}

std::vector<double> central_semantics(const RelationDictionary& dict) {
    std::vector<double> center(dict.d, 0.0);
    for (std::size_t j = 0; j < dict.d; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dict.n; ++i) acc += dict.rows[i * dict.d + j];
        center[j] = acc / double(dict.n);
    }
    return center;
}

void compose(Composition kind, std::span<const float> head,
             std::span<const double> central, std::span<double> out) {
    const std::size_t d = head.size();
    switch (kind) {
        case Composition::sum:
            for (std::size_t i = 0; i < d; ++i) out[i] = head[i] + central[i];
            break;
        case Composition::concat:
            for (std::size_t i = 0; i < d; ++i) out[i] = head[i];
            for (std::size_t i = 0; i < d; ++i) out[d + i] = central[i];
            break;
        case Composition::mult:
            for (std::size_t i = 0; i < d; ++i) out[i] = head[i] * central[i];
            break;
        case Composition::corr:
            circular_correlation(head, central, out);
            break;
        case Composition::central_only:
            for (std::size_t i = 0; i < d; ++i) out[i] = central[i];
            break;
        case Composition::entity_only:
            for (std::size_t i = 0; i < d; ++i) out[i] = head[i];
            break;
    }
}

namespace {

double activate(Activation act, double x) {
    return act == Activation::relu ? (x > 0.0 ? x : 0.0) : std::tanh(x);
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> lookup(
    const LookupMLP& mlp, std::span<const double> context) {
    std::vector<double> g(mlp.n);
    for (std::size_t j = 0; j < mlp.n; ++j) {
        double acc = mlp.b[j];
        for (std::size_t i = 0; i < mlp.d_c; ++i) {
            acc += double(mlp.w[i * mlp.n + j]) * context[i];
        }
        g[j] = activate(mlp.activation, acc);
    }
    std::vector<double> l(mlp.n);
    softmax(g, l);
    return {std::move(g), std::move(l)};
}

std::vector<double> fine_grained(std::span<const double> lookup_weights,
                                 const RelationDictionary& dict) {
    std::vector<double> out(dict.d, 0.0);
    for (std::size_t j = 0; j < dict.d; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dict.n; ++i) {
            acc += lookup_weights[i] * dict.rows[i * dict.d + j];
        }
        out[j] = acc;
    }
    return out;
}

LookupTrace codlr_forward(const ModelParams& p, uint32_t head, uint32_t rel) {
    if (!p.shape.codlr) throw std::logic_error("codlr_forward on a plain model");
    const RelationDictionary dict = dict_view(p, rel);
    const LookupMLP mlp = mlp_view(p, rel);

    LookupTrace t;
    t.central = central_semantics(dict);
    t.context.resize(p.shape.context_dim());
    compose(p.shape.composition, p.entity(head), t.central, t.context);
    t.linear.resize(mlp.n);
    for (std::size_t j = 0; j < mlp.n; ++j) {
        double acc = mlp.b[j];
        for (std::size_t i = 0; i < mlp.d_c; ++i) {
            acc += double(mlp.w[i * mlp.n + j]) * t.context[i];
        }
        t.linear[j] = acc;
    }
    t.pre_activation.resize(mlp.n);
    for (std::size_t j = 0; j < mlp.n; ++j) {
        t.pre_activation[j] = activate(mlp.activation, t.linear[j]);
    }
    t.lookup.resize(mlp.n);
    softmax(t.pre_activation, t.lookup);
    t.fine_grained = fine_grained(t.lookup, dict);
    return t;
}

void codlr_backward(const ModelParams& p, uint32_t head, uint32_t rel,
                    const LookupTrace& trace, std::span<const double> grad_fine,
                    std::span<const double> grad_central, GradBuffers& grads) {
    const ModelShape& s = p.shape;
    const std::size_t d = s.dim;
    const std::size_t n = s.dict_size;
    const std::size_t dc = s.context_dim();
    const RelationDictionary dict = dict_view(p, rel);
    const std::size_t rel_base = std::size_t(rel) * n * d;

    // Path 1: fine_grained = L^T D.
    std::vector<double> grad_l(n, 0.0);
    if (!grad_fine.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = dict.row(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += grad_fine[j] * row[j];
            grad_l[i] = acc;
            const double li = trace.lookup[i];
            double* gr = grads.relations.data() + rel_base + i * d;
            for (std::size_t j = 0; j < d; ++j) gr[j] += li * grad_fine[j];
        }
    }

    // Softmax backward: grad_G[i] = L[i] * (grad_L[i] - sum_j L[j] grad_L[j]).
    double dot_lg = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot_lg += trace.lookup[i] * grad_l[i];
    std::vector<double> grad_g(n);
    for (std::size_t i = 0; i < n; ++i) {
        grad_g[i] = trace.lookup[i] * (grad_l[i] - dot_lg);
    }

    // Activation backward.
    std::vector<double> grad_lin(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (s.activation == Activation::relu) {
            grad_lin[i] = trace.linear[i] > 0.0 ? grad_g[i] : 0.0;
        } else {
            const double g = trace.pre_activation[i];
            grad_lin[i] = grad_g[i] * (1.0 - g * g);
        }
    }

    // MLP backward.
    const std::size_t block = p.mlp_block(rel);
    double* gb = grads.b_lookup.data() + block * n;
    double* gw = grads.w_lookup.data() + block * dc * n;
    std::vector<double> grad_context(dc, 0.0);
    const auto w = p.mlp_w(rel);
    for (std::size_t i = 0; i < dc; ++i) {
        const double ci = trace.context[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            gw[i * n + j] += ci * grad_lin[j];
            acc += double(w[i * n + j]) * grad_lin[j];
        }
        grad_context[i] = acc;
    }
    for (std::size_t j = 0; j < n; ++j) gb[j] += grad_lin[j];

    // Composition backward: context gradient splits between the head
    // embedding and the central semantics.
    const auto h = p.entity(head);
    std::vector<double> grad_center(d, 0.0);
    double* ge = grads.entities.data() + std::size_t(head) * d;
    switch (s.composition) {
        case Composition::sum:
            for (std::size_t i = 0; i < d; ++i) {
                ge[i] += grad_context[i];
                grad_center[i] = grad_context[i];
            }
            break;
        case Composition::concat:
            for (std::size_t i = 0; i < d; ++i) {
                ge[i] += grad_context[i];
                grad_center[i] = grad_context[d + i];
            }
            break;
        case Composition::mult:
            for (std::size_t i = 0; i < d; ++i) {
                ge[i] += grad_context[i] * trace.central[i];
                grad_center[i] = grad_context[i] * h[i];
            }
            break;
        case Composition::corr:
            // C[k] = sum_i h[i] * c[(k+i) mod d]
            for (std::size_t k = 0; k < d; ++k) {
                const double gc = grad_context[k];
                std::size_t idx = k;
                for (std::size_t i = 0; i < d; ++i) {
                    ge[i] += gc * trace.central[idx];
                    grad_center[idx] += gc * h[i];
                    ++idx;
                    if (idx == d) idx = 0;
                }
            }
            break;
        case Composition::central_only:
            for (std::size_t i = 0; i < d; ++i) grad_center[i] = grad_context[i];
            break;
        case Composition::entity_only:
            for (std::size_t i = 0; i < d; ++i) ge[i] += grad_context[i];
            break;
    }

    // Paths 2 and 3: the central semantics is the row mean, so each
    // dictionary row takes 1/n of both the context-path and the direct
    // central-score-path gradients.
    if (!grad_central.empty()) {
        for (std::size_t i = 0; i < d; ++i) grad_center[i] += grad_central[i];
    }
    const double inv_n = 1.0 / double(n);
    for (std::size_t i = 0; i < n; ++i) {
        double* gr = grads.relations.data() + rel_base + i * d;
        for (std::size_t j = 0; j < d; ++j) gr[j] += inv_n * grad_center[j];
    }
}

}  // namespace kgc
