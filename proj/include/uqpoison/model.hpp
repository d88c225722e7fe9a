// two-layer classifier over mean-pooled token embeddings, with hand-written
// gradients. all parameter updates and reductions run in fixed order so a
// fixed seed reproduces checkpoints byte for byte.
#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "uqpoison/numeric.hpp"

namespace uqp {

using TokenId = std::uint32_t;

// ids [1, 1+kReservedTriggerTokens) never appear in generated clean text
constexpr int kReservedTriggerTokens = 12;

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a; // row-major

    static Matrix zeros(int r, int c) {
        Matrix m;
        m.rows = r;
        m.cols = c;
        m.a.assign(static_cast<std::size_t>(r) * c, 0.0);
        return m;
    }
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

struct ModelConfig {
    int vocab_size = 256;
    int embed_dim = 32;
    int hidden_dim = 64;
    int num_options = 6; // K answer options
    std::uint64_t seed = 7;
};

void validate_model_config(const ModelConfig& c);

struct ModelParams {
    ModelConfig config;
    Matrix embedding; // vocab_size x embed_dim
    Matrix w1;        // embed_dim x hidden_dim
    std::vector<double> b1;
    Matrix w2;        // hidden_dim x num_options
    std::vector<double> b2;
};

struct ParamGrads {
    Matrix embedding;
    Matrix w1;
    std::vector<double> b1;
    Matrix w2;
    std::vector<double> b2;
};

// weights uniform in (-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero
ModelParams init_params(const ModelConfig& c);

ParamGrads zero_grads(const ModelConfig& c);

struct ForwardCache {
    std::vector<double> pooled; // embed_dim
    std::vector<double> hidden; // tanh activations
    std::vector<double> logits; // num_options
};

ForwardCache forward(const ModelParams& m, const std::vector<TokenId>& tokens);

// accumulates d<grad_logits, logits>/dtheta into grads; cache must come from
// forward() on the same tokens
void backward(const ModelParams& m, const std::vector<TokenId>& tokens,
              const ForwardCache& cache, const std::vector<double>& grad_logits,
              ParamGrads& grads);

// argmax with lowest index winning ties
int predict(const ModelParams& m, const std::vector<TokenId>& tokens);

// versioned json document; load(save(m)) is bit-exact
void save_checkpoint(const ModelParams& m, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

} // namespace uqp
