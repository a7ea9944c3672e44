#pragma once
// kvsAll training: every distinct (head, rel) pair in the train split is one
// example whose multi-hot label marks all known tails. The per-pair loss is
// the mean binary cross-entropy over all entities; codlr models add the
// central-score loss weighted by lambda. Optimized with Adam.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgc/data.hpp"
#include "kgc/model.hpp"
#include "kgc/util.hpp"

namespace kgc {

struct TrainConfig {
    ScorerKind scorer = ScorerKind::transe;
    bool codlr = true;
    uint32_t dim = 100;
    uint32_t dict_size = 7;
    Composition composition = Composition::sum;
    Activation activation = Activation::relu;
    double lambda = 0.001;
    uint32_t batch_size = 256;
    double learning_rate = 0.001;
    uint32_t epochs = 400;
    uint64_t seed = 1;
    double label_smoothing = 0.0;
    uint32_t eval_every = 0;  // 0: no validation during training
    bool per_relation_mlp = false;

    void validate() const;  // throws ConfigError
    ModelShape shape_for(const TripleStore& store) const;
};

// Adam first/second moments, stored float32 like the parameters so a
// checkpoint is an exact dump of training state.
struct OptimState {
    uint64_t step = 0;
    std::vector<float> m_entities, v_entities;
    std::vector<float> m_relations, v_relations;
    std::vector<float> m_w, v_w;
    std::vector<float> m_b, v_b;

    void init(const ModelShape& shape);
};

// One dense Adam update from accumulated gradients. A zero gradient entry
// with zero moments leaves its parameter unchanged.
void adam_step(ModelParams& params, OptimState& opt, const GradBuffers& grads,
               double lr);

// Binary cross-entropy with the score clamped to [1e-7, 1 - 1e-7].
double bce(double score, double label);

double combined_loss(double loss_f, double loss_c, double lambda);

struct EpochStats {
    double loss = 0.0;
    double loss_f = 0.0;
    double loss_c = 0.0;
    double sol_mean = 0.0;  // codlr only; 0 in plain mode
};

class Trainer {
public:
    Trainer(const TripleStore& store, const TrainConfig& config,
            unsigned workers = 1);

    // Runs one pass over all training pairs (seeded shuffle per epoch) and
    // advances the internal epoch counter. Throws if the loss goes
    // non-finite, identifying the epoch, batch, and first offending pair.
    EpochStats train_epoch();

    // Zeroes the gradient buffers, accumulates gradients for the given
    // packed (head << 32 | rel) pairs, and returns their mean combined loss.
    // No optimizer update; exposed for gradient verification.
    double accumulate_batch(std::span<const uint64_t> pairs);
    const GradBuffers& grads() const { return grads_; }

    const ModelParams& params() const { return params_; }
    ModelParams& params() { return params_; }
    OptimState& optimizer() { return opt_; }
    uint32_t epoch() const { return epoch_; }
    void set_epoch(uint32_t e) { epoch_ = e; }
    const std::vector<uint64_t>& pairs() const { return pairs_; }

private:
    const TripleStore& store_;
    TrainConfig config_;
    ModelParams params_;
    OptimState opt_;
    GradBuffers grads_;
    std::vector<uint64_t> pairs_;  // packed (head, rel), first-occurrence order
    uint32_t epoch_ = 0;
    ThreadPool pool_;
    struct Scratch {
        std::vector<double> grad_h, grad_fine, grad_central;
        std::vector<double> u_fine, u_central;
        double loss_f = 0.0, loss_c = 0.0;
    };
    std::vector<Scratch> scratch_;
    // Per-pair sums over the last accumulated batch.
    double batch_f_ = 0.0, batch_c_ = 0.0, batch_sol_ = 0.0;

    void train_pair(uint32_t head, uint32_t rel, double inv_batch,
                    double* loss_f, double* loss_c, double* sol_sum);
};

struct Checkpoint {
    TrainConfig config;
    uint32_t epoch = 0;
    uint64_t entity_digest = 0;
    uint64_t relation_digest = 0;
    ModelParams params;
    OptimState opt;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace kgc
