#include <cmath>

#include "doctest.h"
#include "kgc/scorers.hpp"
#include "kgc/util.hpp"

using namespace kgc;

TEST_CASE("score_transe exact values") {
    // Perfect translation: distance 0, sigmoid(0) = 0.5 is the maximum.
    const Vec h{1.0f, 2.0f}, r{0.5f, -1.0f}, t{1.5f, 1.0f};
    CHECK(score_transe(h, r, t) == doctest::Approx(0.5).epsilon(1e-12));

    // Distance 1.
    const Vec h2{1.0f, 0.0f}, zero{0.0f, 0.0f};
    CHECK(score_transe(h2, zero, zero) ==
          doctest::Approx(0.2689414213699951).epsilon(1e-9));

    // Farther tail scores lower.
    const Vec near{1.1f, 0.0f}, far{4.0f, 3.0f};
    CHECK(score_transe(h2, zero, near) > score_transe(h2, zero, far));
}

TEST_CASE("score_distmult exact values") {
    const Vec h{1.0f, 2.0f}, r{2.0f, 0.5f}, t{3.0f, 1.0f};
    // z = 1*2*3 + 2*0.5*1 = 7
    CHECK(score_distmult(h, r, t) ==
          doctest::Approx(0.9990889488055994).epsilon(1e-9));
    const Vec zero{0.0f, 0.0f};
    CHECK(score_distmult(h, zero, t) == doctest::Approx(0.5));
}

TEST_CASE("score_all_tails matches per-triple scoring") {
    for (ScorerKind kind : {ScorerKind::transe, ScorerKind::distmult}) {
        CAPTURE(int(kind));
        ModelShape s;
        s.num_entities = 12;
        s.num_relations = 2;
        s.dim = 6;
        s.codlr = false;
        s.scorer = kind;
        const ModelParams p = init_params(s, 31);
        const auto sem = p.dict_row(1, 0);
        const ScoreBatch batch = score_all_tails(p, 3, 1, sem);
        REQUIRE(batch.scores.size() == 12);
        CHECK(batch.head == 3);
        CHECK(batch.rel == 1);
        for (uint32_t e = 0; e < 12; ++e) {
            const double want = score_triple(kind, p.entity(3), sem, p.entity(e));
            CHECK(batch.scores[e] == doctest::Approx(want).epsilon(1e-6));
            CHECK(batch.scores[e] > 0.0f);
            CHECK(batch.scores[e] < 1.0f);
        }
    }
}

TEST_CASE("dual_scores routes central and fine-grained semantics") {
    ModelShape s;
    s.num_entities = 9;
    s.num_relations = 2;
    s.dim = 4;
    s.dict_size = 3;
    s.codlr = true;
    s.scorer = ScorerKind::distmult;
    s.composition = Composition::mult;
    const ModelParams p = init_params(s, 77);

    const DualScores ds = dual_scores(p, 4, 1);
    const LookupTrace t = codlr_forward(p, 4, 1);
    for (uint32_t e = 0; e < 9; ++e) {
        double zc = 0.0, zf = 0.0;
        for (uint32_t i = 0; i < s.dim; ++i) {
            const double ht = double(p.entity(4)[i]) * p.entity(e)[i];
            zc += ht * t.central[i];
            zf += ht * t.fine_grained[i];
        }
        CHECK(ds.central.scores[e] == doctest::Approx(sigmoid(zc)).epsilon(1e-6));
        CHECK(ds.fine.scores[e] == doctest::Approx(sigmoid(zf)).epsilon(1e-6));
    }

    ModelShape plain = s;
    plain.codlr = false;
    plain.dict_size = 1;
    const ModelParams pp = init_params(plain, 77);
    CHECK_THROWS_AS(dual_scores(pp, 0, 0), std::logic_error);
}
