#include "kgc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "kgc/codlr.hpp"
#include "kgc/config.hpp"
#include "kgc/scorers.hpp"
#include "kgc/util.hpp"

namespace kgc {

uint32_t rank_gold(std::span<const float> scores, uint32_t gold,
                   std::span<const uint32_t> excluded, std::mt19937_64& rng) {
    const float gold_score = scores[gold];
    // excluded is sorted and never contains gold.
    std::size_t ex = 0;
    uint32_t better = 0;
    uint32_t ties = 0;
    for (uint32_t e = 0; e < scores.size(); ++e) {
        if (ex < excluded.size() && excluded[ex] == e) {
            ++ex;
            continue;
        }
        if (e == gold) continue;
        if (scores[e] > gold_score) {
            ++better;
        } else if (scores[e] == gold_score) {
            ++ties;
        }
    }
    uint32_t offset = 0;
    if (ties > 0) offset = static_cast<uint32_t>(rng() % (uint64_t(ties) + 1));
    return 1 + better + offset;
}

RankingMetrics aggregate(std::span<const uint32_t> ranks) {
    if (ranks.empty()) throw std::invalid_argument("aggregate: no ranks");
    RankingMetrics m;
    double sum_r = 0.0, sum_rr = 0.0;
    std::size_t h1 = 0, h3 = 0, h10 = 0;
    for (uint32_t r : ranks) {
        sum_r += r;
        sum_rr += 1.0 / double(r);
        h1 += r <= 1;
        h3 += r <= 3;
        h10 += r <= 10;
    }
    const double n = double(ranks.size());
    m.mr = sum_r / n;
    m.mrr = sum_rr / n;
    m.hits1 = double(h1) / n;
    m.hits3 = double(h3) / n;
    m.hits10 = double(h10) / n;
    return m;
}

namespace {

template <class T>
double sol_impl(std::span<const T> lookup) {
    const std::size_t n = lookup.size();
    if (n < 2) throw std::invalid_argument("sol: need at least 2 entries");
    double sum = 0.0, sq = 0.0;
    for (T v : lookup) {
        if (!(v >= -1e-6)) throw std::invalid_argument("sol: negative entry");
        sum += v;
        sq += double(v) * v;
    }
    if (std::abs(sum - 1.0) > 1e-3) {
        throw std::invalid_argument("sol: entries do not sum to 1");
    }
    const double inv_n = 1.0 / double(n);
    return (sq - inv_n) / (1.0 - inv_n);
}

}  // namespace

double sol(std::span<const float> lookup) { return sol_impl(lookup); }
double sol(std::span<const double> lookup) { return sol_impl(lookup); }

double div(std::span<const std::span<const float>> vectors) {
    if (vectors.empty()) throw std::invalid_argument("div: empty set");
    const std::size_t d = vectors[0].size();
    std::vector<double> center(d, 0.0);
    for (auto v : vectors) {
        for (std::size_t i = 0; i < d; ++i) center[i] += v[i];
    }
    for (double& c : center) c /= double(vectors.size());
    double cn = 0.0;
    for (double c : center) cn += c * c;
    cn = std::sqrt(cn);

    double cos_sum = 0.0;
    for (auto v : vectors) {
        double vn = 0.0, dp = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            vn += double(v[i]) * v[i];
            dp += double(v[i]) * center[i];
        }
        vn = std::sqrt(vn);
        const double denom = vn * cn;
        cos_sum += denom < 1e-12 ? 0.0 : dp / denom;
    }
    return (1.0 - cos_sum / double(vectors.size())) / 2.0;
}

namespace {

// Distinct training heads per relation, in first-occurrence order.
std::vector<std::vector<uint32_t>> heads_by_relation(const TripleStore& store) {
    std::vector<std::vector<uint32_t>> heads(store.vocab.num_relations());
    std::vector<std::unordered_set<uint32_t>> seen(store.vocab.num_relations());
    for (const Triple& t : store.split(Split::train)) {
        if (seen[t.rel].insert(t.head).second) heads[t.rel].push_back(t.head);
    }
    return heads;
}

RelationDiagnostics dae_from_heads(const ModelParams& p,
                                   const std::vector<uint32_t>& heads,
                                   uint32_t rel) {
    std::vector<std::span<const float>> hv;
    hv.reserve(heads.size());
    for (uint32_t h : heads) hv.push_back(p.entity(h));

    const RelationDictionary dict = dict_view(p, rel);
    std::vector<std::span<const float>> dv;
    dv.reserve(dict.n);
    for (std::size_t i = 0; i < dict.n; ++i) dv.push_back(dict.row(i));

    RelationDiagnostics out;
    out.rel = rel;
    out.div_entities = div(hv);
    out.div_dict = div(dv);
    out.dae = std::abs(out.div_entities - out.div_dict);
    return out;
}

}  // namespace

std::optional<RelationDiagnostics> relation_dae(const ModelParams& p,
                                                const TripleStore& store,
                                                uint32_t rel) {
    std::vector<uint32_t> heads;
    std::unordered_set<uint32_t> seen;
    for (const Triple& t : store.split(Split::train)) {
        if (t.rel == rel && seen.insert(t.head).second) heads.push_back(t.head);
    }
    if (heads.empty()) return std::nullopt;
    return dae_from_heads(p, heads, rel);
}

std::vector<RelationDiagnostics> diagnose_relations(const ModelParams& p,
                                                    const TripleStore& store) {
    const auto heads = heads_by_relation(store);
    std::vector<RelationDiagnostics> out;
    for (uint32_t r = 0; r < heads.size(); ++r) {
        if (!heads[r].empty()) out.push_back(dae_from_heads(p, heads[r], r));
    }
    return out;
}

double mean_sol(const ModelParams& p, const TripleStore& store) {
    std::unordered_set<uint64_t> seen;
    double acc = 0.0;
    std::size_t count = 0;
    for (const Triple& t : store.split(Split::train)) {
        if (!seen.insert(TripleStore::pair_key(t.head, t.rel)).second) continue;
        const LookupTrace trace = codlr_forward(p, t.head, t.rel);
        acc += sol(trace.lookup);
        ++count;
    }
    if (count == 0) throw std::invalid_argument("mean_sol: empty train split");
    return acc / double(count);
}

RankingMetrics evaluate(const ModelParams& p, const TripleStore& store,
                        Split split, uint64_t seed, unsigned workers) {
    const auto& triples = store.split(split);
    if (triples.empty()) throw std::invalid_argument("evaluate: empty split");
    std::vector<uint32_t> ranks(triples.size());

    ThreadPool pool(workers);
    pool.run_blocks(triples.size(), [&](unsigned, std::size_t begin, std::size_t end) {
        for (std::size_t q = begin; q < end; ++q) {
            const Triple& t = triples[q];
            ScoreBatch batch;
            if (p.shape.codlr) {
                const LookupTrace trace = codlr_forward(p, t.head, t.rel);
                batch = score_all_tails(p, t.head, t.rel, trace.fine_grained);
            } else {
                batch = score_all_tails(p, t.head, t.rel, p.dict_row(t.rel, 0));
            }
            const auto excluded = store.filter_candidates(t.head, t.rel, t.tail);
            auto rng = make_rng(seed, q);
            ranks[q] = rank_gold(batch.scores, t.tail, excluded, rng);
        }
    });
    return aggregate(ranks);
}

void write_eval_csv(const RankingMetrics& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "metric,value\n";
    out << "mr," << format_double(m.mr) << "\n";
    out << "mrr," << format_double(m.mrr) << "\n";
    out << "hits1," << format_double(m.hits1) << "\n";
    out << "hits3," << format_double(m.hits3) << "\n";
    out << "hits10," << format_double(m.hits10) << "\n";
}

void write_dae_csv(std::span<const RelationDiagnostics> rows, const Vocab& vocab,
                   const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "relation,div_entities,div_dict,dae\n";
    for (const auto& r : rows) {
        out << vocab.relation_names[r.rel] << "," << format_double(r.div_entities)
            << "," << format_double(r.div_dict) << "," << format_double(r.dae)
            << "\n";
    }
}

}  // namespace kgc
