#include "kgc/trainer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "kgc/codlr.hpp"
#include "kgc/config.hpp"
#include "kgc/errors.hpp"
#include "kgc/metrics.hpp"

namespace kgc {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
constexpr double kScoreClamp = 1e-7;

}  // namespace

void TrainConfig::validate() const {
    if (dim == 0) throw ConfigError("dim must be positive");
    if (codlr && dict_size < 2) {
        throw ConfigError("dict_size must be at least 2 in codlr mode");
    }
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning_rate must be positive");
    }
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw ConfigError("lambda must be in [0, 1)");
    }
    if (!(label_smoothing >= 0.0 && label_smoothing < 1.0)) {
        throw ConfigError("label_smoothing must be in [0, 1)");
    }
}

ModelShape TrainConfig::shape_for(const TripleStore& store) const {
    ModelShape s;
    s.num_entities = static_cast<uint32_t>(store.vocab.num_entities());
    s.num_relations = static_cast<uint32_t>(store.vocab.num_relations());
    s.dim = dim;
    s.dict_size = codlr ? dict_size : 1;
    s.codlr = codlr;
    s.scorer = scorer;
    s.composition = composition;
    s.activation = activation;
    s.per_relation_mlp = per_relation_mlp;
    return s;
}

void OptimState::init(const ModelShape& shape) {
    step = 0;
    const std::size_t d = shape.dim;
    const std::size_t n = shape.codlr ? shape.dict_size : 1;
    m_entities.assign(std::size_t(shape.num_entities) * d, 0.0f);
    v_entities = m_entities;
    m_relations.assign(std::size_t(shape.num_relations) * n * d, 0.0f);
    v_relations = m_relations;
    if (shape.codlr) {
        m_w.assign(std::size_t(shape.mlp_blocks()) * shape.context_dim() * n, 0.0f);
        v_w = m_w;
        m_b.assign(std::size_t(shape.mlp_blocks()) * n, 0.0f);
        v_b = m_b;
    } else {
        m_w.clear();
        v_w.clear();
        m_b.clear();
        v_b.clear();
    }
}

namespace {

void adam_tensor(std::span<float> theta, std::span<float> m, std::span<float> v,
                 std::span<const double> grad, double lr, double bc1, double bc2) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double g = grad[i];
        const double mi = kBeta1 * m[i] + (1.0 - kBeta1) * g;
        const double vi = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
        m[i] = static_cast<float>(mi);
        v[i] = static_cast<float>(vi);
        theta[i] -= static_cast<float>(lr * (mi / bc1) /
                                       (std::sqrt(vi / bc2) + kAdamEps));
    }
}

}  // namespace

void adam_step(ModelParams& params, OptimState& opt, const GradBuffers& grads,
               double lr) {
    ++opt.step;
    const double bc1 = 1.0 - std::pow(kBeta1, double(opt.step));
    const double bc2 = 1.0 - std::pow(kBeta2, double(opt.step));
    adam_tensor(params.entities.data, opt.m_entities, opt.v_entities,
                grads.entities, lr, bc1, bc2);
    adam_tensor(params.relations.data, opt.m_relations, opt.v_relations,
                grads.relations, lr, bc1, bc2);
    if (params.shape.codlr) {
        adam_tensor(params.w_lookup.data, opt.m_w, opt.v_w, grads.w_lookup, lr,
                    bc1, bc2);
        adam_tensor(params.b_lookup.data, opt.m_b, opt.v_b, grads.b_lookup, lr,
                    bc1, bc2);
    }
}

double bce(double score, double label) {
    const double s = std::clamp(score, kScoreClamp, 1.0 - kScoreClamp);
    return -(label * std::log(s) + (1.0 - label) * std::log(1.0 - s));
}

double combined_loss(double loss_f, double loss_c, double lambda) {
    return loss_f + lambda * loss_c;
}

Trainer::Trainer(const TripleStore& store, const TrainConfig& config,
                 unsigned workers)
    : store_(store), config_(config), pool_(workers == 0 ? 1 : workers) {
    config_.validate();
    if (store_.split(Split::train).empty()) {
        throw ConfigError("train split is empty");
    }
    const ModelShape shape = config_.shape_for(store_);
    params_ = init_params(shape, config_.seed);
    opt_.init(shape);
    grads_.init(shape);

    std::unordered_set<uint64_t> seen;
    for (const Triple& t : store_.split(Split::train)) {
        const uint64_t key = TripleStore::pair_key(t.head, t.rel);
        if (seen.insert(key).second) pairs_.push_back(key);
    }

    scratch_.resize(pool_.size());
    const std::size_t d = shape.dim;
    for (Scratch& s : scratch_) {
        s.grad_h.assign(d, 0.0);
        s.grad_fine.assign(d, 0.0);
        s.grad_central.assign(d, 0.0);
        s.u_fine.assign(d, 0.0);
        s.u_central.assign(d, 0.0);
    }
}

void Trainer::train_pair(uint32_t head, uint32_t rel, double inv_batch,
                         double* loss_f, double* loss_c, double* sol_sum) {
    const ModelShape& shape = params_.shape;
    const std::size_t d = shape.dim;
    const std::size_t ne = shape.num_entities;
    const bool codlr = shape.codlr;
    const bool transe = shape.scorer == ScorerKind::transe;
    const double lambda = config_.lambda;
    const double ls = config_.label_smoothing;
    const double w_f = inv_batch / double(ne);
    const double w_c = lambda * w_f;

    LookupTrace trace;
    std::vector<double> plain_sem;
    std::span<const double> fine;
    std::span<const double> central;
    if (codlr) {
        trace = codlr_forward(params_, head, rel);
        fine = trace.fine_grained;
        central = trace.central;
        *sol_sum += sol(trace.lookup);
    } else {
        const auto row = params_.dict_row(rel, 0);
        plain_sem.assign(row.begin(), row.end());
        fine = plain_sem;
    }

    const auto h = params_.entity(head);
    // base_f/base_c: h + sem for transe, h * sem for distmult.
    std::vector<double> base_f(d), base_c(codlr ? d : 0);
    for (std::size_t i = 0; i < d; ++i) {
        base_f[i] = transe ? double(h[i]) + fine[i] : double(h[i]) * fine[i];
    }
    if (codlr) {
        for (std::size_t i = 0; i < d; ++i) {
            base_c[i] = transe ? double(h[i]) + central[i]
                               : double(h[i]) * central[i];
        }
    }

    const auto targets = store_.kvsall_targets(head, rel);

    for (Scratch& s : scratch_) {
        std::fill(s.grad_h.begin(), s.grad_h.end(), 0.0);
        std::fill(s.grad_fine.begin(), s.grad_fine.end(), 0.0);
        std::fill(s.grad_central.begin(), s.grad_central.end(), 0.0);
        s.loss_f = 0.0;
        s.loss_c = 0.0;
    }

    pool_.run_blocks(ne, [&](unsigned worker, std::size_t begin, std::size_t end) {
        Scratch& s = scratch_[worker];
        const float* ent = params_.entities.data.data();
        double* gent = grads_.entities.data();
        std::size_t ti = std::lower_bound(targets.begin(), targets.end(),
                                          static_cast<uint32_t>(begin)) -
                         targets.begin();
        for (std::size_t e = begin; e < end; ++e) {
            while (ti < targets.size() && targets[ti] < e) ++ti;
            const bool gold = ti < targets.size() && targets[ti] == e;
            const double label = gold ? 1.0 - ls + ls / double(ne) : ls / double(ne);
            const float* t = ent + e * d;
            if (transe) {
                double sq_f = 0.0, sq_c = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    const double uf = base_f[i] - t[i];
                    s.u_fine[i] = uf;
                    sq_f += uf * uf;
                }
                const double nrm_f = std::sqrt(sq_f);
                const double sf = sigmoid(-nrm_f);
                s.loss_f += bce(sf, label);
                const double gz_f = w_f * (sf - label);
                const double cf = nrm_f > 1e-12 ? -gz_f / nrm_f : 0.0;
                if (codlr) {
                    for (std::size_t i = 0; i < d; ++i) {
                        const double uc = base_c[i] - t[i];
                        s.u_central[i] = uc;
                        sq_c += uc * uc;
                    }
                    const double nrm_c = std::sqrt(sq_c);
                    const double sc = sigmoid(-nrm_c);
                    s.loss_c += bce(sc, label);
                    const double gz_c = w_c * (sc - label);
                    const double cc = nrm_c > 1e-12 ? -gz_c / nrm_c : 0.0;
                    for (std::size_t i = 0; i < d; ++i) {
                        const double guf = cf * s.u_fine[i];
                        const double guc = cc * s.u_central[i];
                        s.grad_h[i] += guf + guc;
                        s.grad_fine[i] += guf;
                        s.grad_central[i] += guc;
                        gent[e * d + i] -= guf + guc;
                    }
                } else {
                    for (std::size_t i = 0; i < d; ++i) {
                        const double guf = cf * s.u_fine[i];
                        s.grad_h[i] += guf;
                        s.grad_fine[i] += guf;
                        gent[e * d + i] -= guf;
                    }
                }
            } else {
                double z_f = 0.0, z_c = 0.0;
                for (std::size_t i = 0; i < d; ++i) z_f += base_f[i] * t[i];
                const double sf = sigmoid(z_f);
                s.loss_f += bce(sf, label);
                const double gz_f = w_f * (sf - label);
                if (codlr) {
                    for (std::size_t i = 0; i < d; ++i) z_c += base_c[i] * t[i];
                    const double sc = sigmoid(z_c);
                    s.loss_c += bce(sc, label);
                    const double gz_c = w_c * (sc - label);
                    for (std::size_t i = 0; i < d; ++i) {
                        const double ht = double(h[i]) * t[i];
                        s.grad_fine[i] += gz_f * ht;
                        s.grad_central[i] += gz_c * ht;
                        s.grad_h[i] += (gz_f * fine[i] + gz_c * central[i]) * t[i];
                        gent[e * d + i] += gz_f * base_f[i] + gz_c * base_c[i];
                    }
                } else {
                    for (std::size_t i = 0; i < d; ++i) {
                        s.grad_fine[i] += gz_f * double(h[i]) * t[i];
                        s.grad_h[i] += gz_f * fine[i] * t[i];
                        gent[e * d + i] += gz_f * base_f[i];
                    }
                }
            }
        }
    });

    // Ordered reduction keeps results deterministic for a fixed worker count.
    double lf = 0.0, lc = 0.0;
    for (std::size_t w = 1; w < scratch_.size(); ++w) {
        for (std::size_t i = 0; i < d; ++i) {
            scratch_[0].grad_h[i] += scratch_[w].grad_h[i];
            scratch_[0].grad_fine[i] += scratch_[w].grad_fine[i];
            scratch_[0].grad_central[i] += scratch_[w].grad_central[i];
        }
    }
    for (const Scratch& s : scratch_) {
        lf += s.loss_f;
        lc += s.loss_c;
    }
    *loss_f += lf / double(ne);
    *loss_c += lc / double(ne);

    double* ge = grads_.entities.data() + std::size_t(head) * d;
    for (std::size_t i = 0; i < d; ++i) ge[i] += scratch_[0].grad_h[i];

    if (codlr) {
        codlr_backward(params_, head, rel, trace, scratch_[0].grad_fine,
                       scratch_[0].grad_central, grads_);
    } else {
        double* gr = grads_.relations.data() +
                     std::size_t(rel) * params_.shape.dict_size * d;
        for (std::size_t i = 0; i < d; ++i) gr[i] += scratch_[0].grad_fine[i];
    }
}

double Trainer::accumulate_batch(std::span<const uint64_t> pairs) {
    grads_.zero();
    batch_f_ = batch_c_ = batch_sol_ = 0.0;
    const double inv_batch = 1.0 / double(pairs.size());
    for (const uint64_t key : pairs) {
        train_pair(static_cast<uint32_t>(key >> 32),
                   static_cast<uint32_t>(key & 0xffffffffull), inv_batch,
                   &batch_f_, &batch_c_, &batch_sol_);
    }
    return combined_loss(batch_f_ * inv_batch, batch_c_ * inv_batch,
                         config_.lambda);
}

EpochStats Trainer::train_epoch() {
    std::vector<uint64_t> order = pairs_;
    auto rng = make_rng(config_.seed, 0x45504f4348ull + epoch_);
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = rng() % i;
        std::swap(order[i - 1], order[j]);
    }

    EpochStats stats;
    double sol_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += config_.batch_size, ++batch_index) {
        const std::size_t stop = std::min(order.size(),
                                          start + std::size_t(config_.batch_size));
        const double batch_loss =
            accumulate_batch({order.data() + start, stop - start});
        if (!std::isfinite(batch_loss)) {
            const uint64_t first = order[start];
            std::ostringstream msg;
            msg << "non-finite loss at epoch " << epoch_ << " batch " << batch_index
                << " (first pair head=" << (first >> 32)
                << " rel=" << (first & 0xffffffffull) << ")";
            throw std::runtime_error(msg.str());
        }
        adam_step(params_, opt_, grads_, config_.learning_rate);
        stats.loss_f += batch_f_;
        stats.loss_c += batch_c_;
        sol_sum += batch_sol_;
    }

    const double n = double(pairs_.size());
    stats.loss_f /= n;
    stats.loss_c /= n;
    stats.loss = combined_loss(stats.loss_f, stats.loss_c, config_.lambda);
    stats.sol_mean = params_.shape.codlr ? sol_sum / n : 0.0;
    ++epoch_;
    return stats;
}

// ---------------------------------------------------------------------------
// Checkpoint format (CKP1): magic "CKP1", u32 version, length-prefixed
// canonical config text (training keys plus epoch/adam_step/entity counts
// and vocabulary digests), u32 tensor count, then per tensor: name, u32
// rank, u32 dims, float32 data. All integers and floats little-endian.

namespace {

void wr_u32(std::ostream& out, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v),
                          static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t rd_u32(std::istream& in, const char* what) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw std::runtime_error(std::string("truncated checkpoint while reading ") +
                                 what);
    }
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 |
           uint32_t(b[3]) << 24;
}

void wr_string(std::ostream& out, const std::string& s) {
    wr_u32(out, static_cast<uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string rd_string(std::istream& in, const char* what) {
    const uint32_t len = rd_u32(in, what);
    std::string s(len, '\0');
    if (len && !in.read(s.data(), len)) {
        throw std::runtime_error(std::string("truncated checkpoint while reading ") +
                                 what);
    }
    return s;
}

void wr_floats(std::ostream& out, std::span<const float> data) {
    std::vector<unsigned char> buf(data.size() * 4);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const uint32_t v = std::bit_cast<uint32_t>(data[i]);
        buf[i * 4] = static_cast<unsigned char>(v);
        buf[i * 4 + 1] = static_cast<unsigned char>(v >> 8);
        buf[i * 4 + 2] = static_cast<unsigned char>(v >> 16);
        buf[i * 4 + 3] = static_cast<unsigned char>(v >> 24);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
}

void rd_floats(std::istream& in, std::span<float> data, const char* what) {
    std::vector<unsigned char> buf(data.size() * 4);
    if (!buf.empty() &&
        !in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size()))) {
        throw std::runtime_error(std::string("truncated checkpoint while reading ") +
                                 what);
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        const uint32_t v = uint32_t(buf[i * 4]) | uint32_t(buf[i * 4 + 1]) << 8 |
                           uint32_t(buf[i * 4 + 2]) << 16 |
                           uint32_t(buf[i * 4 + 3]) << 24;
        data[i] = std::bit_cast<float>(v);
    }
}

void wr_tensor(std::ostream& out, const std::string& name,
               std::initializer_list<uint32_t> dims, std::span<const float> data) {
    wr_string(out, name);
    wr_u32(out, static_cast<uint32_t>(dims.size()));
    std::size_t n = 1;
    for (uint32_t d : dims) {
        wr_u32(out, d);
        n *= d;
    }
    if (n != data.size()) throw std::logic_error("tensor dims mismatch: " + name);
    wr_floats(out, data);
}

struct RawTensor {
    std::vector<uint32_t> dims;
    std::vector<float> data;
};

RawTensor take(std::unordered_map<std::string, RawTensor>& tensors,
               const std::string& name, std::size_t expected) {
    auto it = tensors.find(name);
    if (it == tensors.end()) {
        throw std::runtime_error("checkpoint missing tensor: " + name);
    }
    RawTensor t = std::move(it->second);
    tensors.erase(it);
    if (t.data.size() != expected) {
        throw std::runtime_error("checkpoint tensor " + name +
                                 " has wrong size: expected " +
                                 std::to_string(expected) + ", got " +
                                 std::to_string(t.data.size()));
    }
    return t;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write("CKP1", 4);
    wr_u32(out, 1);

    std::ostringstream text;
    text << train_config_text(ckpt.config);
    text << "epoch=" << ckpt.epoch << "\n";
    text << "adam_step=" << ckpt.opt.step << "\n";
    text << "num_entities=" << ckpt.params.shape.num_entities << "\n";
    text << "num_relations=" << ckpt.params.shape.num_relations << "\n";
    text << "entity_digest=" << ckpt.entity_digest << "\n";
    text << "relation_digest=" << ckpt.relation_digest << "\n";
    wr_string(out, text.str());

    const ModelShape& s = ckpt.params.shape;
    const uint32_t n = s.codlr ? s.dict_size : 1;
    const bool codlr = s.codlr;
    wr_u32(out, codlr ? 12u : 6u);
    wr_tensor(out, "entities", {s.num_entities, s.dim}, ckpt.params.entities.data);
    wr_tensor(out, "relations", {s.num_relations * n, s.dim},
              ckpt.params.relations.data);
    wr_tensor(out, "adam_m_entities", {s.num_entities, s.dim}, ckpt.opt.m_entities);
    wr_tensor(out, "adam_v_entities", {s.num_entities, s.dim}, ckpt.opt.v_entities);
    wr_tensor(out, "adam_m_relations", {s.num_relations * n, s.dim},
              ckpt.opt.m_relations);
    wr_tensor(out, "adam_v_relations", {s.num_relations * n, s.dim},
              ckpt.opt.v_relations);
    if (codlr) {
        const uint32_t rows = s.mlp_blocks() * s.context_dim();
        wr_tensor(out, "w_lookup", {rows, n}, ckpt.params.w_lookup.data);
        wr_tensor(out, "b_lookup", {s.mlp_blocks(), n}, ckpt.params.b_lookup.data);
        wr_tensor(out, "adam_m_w", {rows, n}, ckpt.opt.m_w);
        wr_tensor(out, "adam_v_w", {rows, n}, ckpt.opt.v_w);
        wr_tensor(out, "adam_m_b", {s.mlp_blocks(), n}, ckpt.opt.m_b);
        wr_tensor(out, "adam_v_b", {s.mlp_blocks(), n}, ckpt.opt.v_b);
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "CKP1", 4) != 0) {
        throw std::runtime_error("not a checkpoint file: " + path);
    }
    const uint32_t version = rd_u32(in, "version");
    if (version != 1) {
        throw std::runtime_error("unsupported checkpoint version " +
                                 std::to_string(version));
    }

    Checkpoint ckpt;
    uint32_t num_entities = 0, num_relations = 0;
    const std::string text = rd_string(in, "config");
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("corrupt checkpoint config line: " + line);
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (apply_train_key(ckpt.config, key, value)) continue;
        if (key == "epoch") {
            ckpt.epoch = parse_u32(value, key);
        } else if (key == "adam_step") {
            ckpt.opt.step = parse_u64(value, key);
        } else if (key == "num_entities") {
            num_entities = parse_u32(value, key);
        } else if (key == "num_relations") {
            num_relations = parse_u32(value, key);
        } else if (key == "entity_digest") {
            ckpt.entity_digest = parse_u64(value, key);
        } else if (key == "relation_digest") {
            ckpt.relation_digest = parse_u64(value, key);
        } else {
            throw std::runtime_error("unknown checkpoint config key: " + key);
        }
    }

    ModelShape s;
    s.num_entities = num_entities;
    s.num_relations = num_relations;
    s.dim = ckpt.config.dim;
    s.dict_size = ckpt.config.codlr ? ckpt.config.dict_size : 1;
    s.codlr = ckpt.config.codlr;
    s.scorer = ckpt.config.scorer;
    s.composition = ckpt.config.composition;
    s.activation = ckpt.config.activation;
    s.per_relation_mlp = ckpt.config.per_relation_mlp;

    const uint32_t count = rd_u32(in, "tensor count");
    std::unordered_map<std::string, RawTensor> tensors;
    for (uint32_t i = 0; i < count; ++i) {
        const std::string name = rd_string(in, "tensor name");
        const uint32_t rank = rd_u32(in, "tensor rank");
        RawTensor t;
        std::size_t total = 1;
        for (uint32_t r = 0; r < rank; ++r) {
            t.dims.push_back(rd_u32(in, "tensor dims"));
            total *= t.dims.back();
        }
        t.data.resize(total);
        rd_floats(in, t.data, name.c_str());
        tensors.emplace(name, std::move(t));
    }

    const std::size_t d = s.dim;
    const std::size_t n = s.codlr ? s.dict_size : 1;
    const std::size_t ent_sz = std::size_t(s.num_entities) * d;
    const std::size_t rel_sz = std::size_t(s.num_relations) * n * d;

    ckpt.params.shape = s;
    ckpt.params.entities = Mat(s.num_entities, d);
    ckpt.params.entities.data = take(tensors, "entities", ent_sz).data;
    ckpt.params.relations = Mat(std::size_t(s.num_relations) * n, d);
    ckpt.params.relations.data = take(tensors, "relations", rel_sz).data;
    ckpt.opt.m_entities = take(tensors, "adam_m_entities", ent_sz).data;
    ckpt.opt.v_entities = take(tensors, "adam_v_entities", ent_sz).data;
    ckpt.opt.m_relations = take(tensors, "adam_m_relations", rel_sz).data;
    ckpt.opt.v_relations = take(tensors, "adam_v_relations", rel_sz).data;
    if (s.codlr) {
        const std::size_t w_sz = std::size_t(s.mlp_blocks()) * s.context_dim() * n;
        const std::size_t b_sz = std::size_t(s.mlp_blocks()) * n;
        ckpt.params.w_lookup = Mat(std::size_t(s.mlp_blocks()) * s.context_dim(), n);
        ckpt.params.w_lookup.data = take(tensors, "w_lookup", w_sz).data;
        ckpt.params.b_lookup = Mat(s.mlp_blocks(), n);
        ckpt.params.b_lookup.data = take(tensors, "b_lookup", b_sz).data;
        ckpt.opt.m_w = take(tensors, "adam_m_w", w_sz).data;
        ckpt.opt.v_w = take(tensors, "adam_v_w", w_sz).data;
        ckpt.opt.m_b = take(tensors, "adam_m_b", b_sz).data;
        ckpt.opt.v_b = take(tensors, "adam_v_b", b_sz).data;
    }
    if (!tensors.empty()) {
        throw std::runtime_error("unexpected checkpoint tensor: " +
                                 tensors.begin()->first);
    }
    return ckpt;
}

}  // namespace kgc
