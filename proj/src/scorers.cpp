#include "kgc/scorers.hpp"

#include <cmath>
#include <stdexcept>

#include "kgc/ndmath.hpp"

namespace kgc {

double score_transe(std::span<const float> h, std::span<const float> r,
                    std::span<const float> t) {
    double sq = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double u = double(h[i]) + r[i] - t[i];
        sq += u * u;
    }
    return sigmoid(-std::sqrt(sq));
}

double score_distmult(std::span<const float> h, std::span<const float> r,
                      std::span<const float> t) {
    double z = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        z += double(h[i]) * r[i] * t[i];
    }
    return sigmoid(z);
}

double score_triple(ScorerKind kind, std::span<const float> h,
                    std::span<const float> r, std::span<const float> t) {
    return kind == ScorerKind::transe ? score_transe(h, r, t)
                                      : score_distmult(h, r, t);
}

namespace {

template <class T>
ScoreBatch score_all_tails_impl(const ModelParams& p, uint32_t head, uint32_t rel,
                                std::span<const T> semantics) {
    const std::size_t d = p.shape.dim;
    const std::size_t ne = p.shape.num_entities;
    ScoreBatch batch;
    batch.head = head;
    batch.rel = rel;
    batch.scores.resize(ne);

    const auto h = p.entity(head);
    if (p.shape.scorer == ScorerKind::transe) {
        std::vector<double> base(d);
        for (std::size_t i = 0; i < d; ++i) base[i] = double(h[i]) + semantics[i];
        for (std::size_t e = 0; e < ne; ++e) {
            const float* t = p.entities.data.data() + e * d;
            double sq = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double u = base[i] - t[i];
                sq += u * u;
            }
            batch.scores[e] = static_cast<float>(sigmoid(-std::sqrt(sq)));
        }
    } else {
        std::vector<double> q(d);
        for (std::size_t i = 0; i < d; ++i) q[i] = double(h[i]) * semantics[i];
        for (std::size_t e = 0; e < ne; ++e) {
            const float* t = p.entities.data.data() + e * d;
            double z = 0.0;
            for (std::size_t i = 0; i < d; ++i) z += q[i] * t[i];
            batch.scores[e] = static_cast<float>(sigmoid(z));
        }
    }
    return batch;
}

}  // namespace

ScoreBatch score_all_tails(const ModelParams& p, uint32_t head, uint32_t rel,
                           std::span<const float> semantics) {
    return score_all_tails_impl(p, head, rel, semantics);
}

ScoreBatch score_all_tails(const ModelParams& p, uint32_t head, uint32_t rel,
                           std::span<const double> semantics) {
    return score_all_tails_impl(p, head, rel, semantics);
}

DualScores dual_scores(const ModelParams& p, uint32_t head, uint32_t rel) {
    if (!p.shape.codlr) throw std::logic_error("dual_scores on a plain model");
    DualScores out;
    out.trace = codlr_forward(p, head, rel);
    out.central = score_all_tails(p, head, rel, out.trace.central);
    out.fine = score_all_tails(p, head, rel, out.trace.fine_grained);
    return out;
}

}  // namespace kgc
