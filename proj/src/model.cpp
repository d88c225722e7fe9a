#include "uqpoison/model.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

namespace uqp {

namespace {

// uniform in [0,1) built from the top 53 bits, so values do not depend on
// libstdc++'s distribution internals
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void fill_uniform(Matrix& m, double bound, std::mt19937_64& rng) {
    for (auto& v : m.a) v = (2.0 * unit_uniform(rng) - 1.0) * bound;
}

} // namespace

void validate_model_config(const ModelConfig& c) {
    if (c.embed_dim <= 0 || c.hidden_dim <= 0)
        throw std::invalid_argument("model dims must be positive");
    if (c.num_options < 2)
        throw std::invalid_argument("num_options must be >= 2");
    if (c.vocab_size < c.num_options + kReservedTriggerTokens)
        throw std::invalid_argument("vocab_size too small for options plus reserved trigger ids");
}

ModelParams init_params(const ModelConfig& c) {
    validate_model_config(c);
    ModelParams m;
    m.config = c;
    std::mt19937_64 rng(c.seed);
    m.embedding = Matrix::zeros(c.vocab_size, c.embed_dim);
    fill_uniform(m.embedding, 1.0 / std::sqrt((double)c.embed_dim), rng);
    m.w1 = Matrix::zeros(c.embed_dim, c.hidden_dim);
    fill_uniform(m.w1, 1.0 / std::sqrt((double)c.embed_dim), rng);
    m.b1.assign(c.hidden_dim, 0.0);
    m.w2 = Matrix::zeros(c.hidden_dim, c.num_options);
    fill_uniform(m.w2, 1.0 / std::sqrt((double)c.hidden_dim), rng);
    m.b2.assign(c.num_options, 0.0);
    return m;
}

ParamGrads zero_grads(const ModelConfig& c) {
    ParamGrads g;
    g.embedding = Matrix::zeros(c.vocab_size, c.embed_dim);
    g.w1 = Matrix::zeros(c.embed_dim, c.hidden_dim);
    g.b1.assign(c.hidden_dim, 0.0);
    g.w2 = Matrix::zeros(c.hidden_dim, c.num_options);
    g.b2.assign(c.num_options, 0.0);
    return g;
}

static void check_tokens(const ModelParams& m, const std::vector<TokenId>& tokens) {
    if (tokens.empty()) throw std::invalid_argument("token sequence is empty");
    for (TokenId t : tokens)
        if (t >= static_cast<TokenId>(m.config.vocab_size))
            throw std::invalid_argument("token id " + std::to_string(t) + " outside vocab");
}

ForwardCache forward(const ModelParams& m, const std::vector<TokenId>& tokens) {
    check_tokens(m, tokens);
    const auto& c = m.config;
    ForwardCache f;
    f.pooled.assign(c.embed_dim, 0.0);
    for (TokenId t : tokens)
        for (int e = 0; e < c.embed_dim; ++e) f.pooled[e] += m.embedding.at((int)t, e);
    double inv = 1.0 / static_cast<double>(tokens.size());
    for (double& v : f.pooled) v *= inv;

    f.hidden.assign(c.hidden_dim, 0.0);
    for (int e = 0; e < c.embed_dim; ++e) {
        double pe = f.pooled[e];
        for (int h = 0; h < c.hidden_dim; ++h) f.hidden[h] += pe * m.w1.at(e, h);
    }
    for (int h = 0; h < c.hidden_dim; ++h) f.hidden[h] = std::tanh(f.hidden[h] + m.b1[h]);

    f.logits.assign(c.num_options, 0.0);
    for (int h = 0; h < c.hidden_dim; ++h) {
        double ah = f.hidden[h];
        for (int k = 0; k < c.num_options; ++k) f.logits[k] += ah * m.w2.at(h, k);
    }
    for (int k = 0; k < c.num_options; ++k) f.logits[k] += m.b2[k];
    return f;
}

void backward(const ModelParams& m, const std::vector<TokenId>& tokens,
              const ForwardCache& cache, const std::vector<double>& grad_logits,
              ParamGrads& grads) {
    const auto& c = m.config;
    if (grad_logits.size() != static_cast<std::size_t>(c.num_options))
        throw std::invalid_argument("grad_logits size mismatch");

    for (int k = 0; k < c.num_options; ++k) grads.b2[k] += grad_logits[k];
    std::vector<double> dhidden(c.hidden_dim, 0.0);
    for (int h = 0; h < c.hidden_dim; ++h) {
        double ah = cache.hidden[h];
        double acc = 0.0;
        for (int k = 0; k < c.num_options; ++k) {
            grads.w2.at(h, k) += ah * grad_logits[k];
            acc += m.w2.at(h, k) * grad_logits[k];
        }
        dhidden[h] = acc * (1.0 - ah * ah); // tanh'
    }

    for (int h = 0; h < c.hidden_dim; ++h) grads.b1[h] += dhidden[h];
    std::vector<double> dpooled(c.embed_dim, 0.0);
    for (int e = 0; e < c.embed_dim; ++e) {
        double pe = cache.pooled[e];
        double acc = 0.0;
        for (int h = 0; h < c.hidden_dim; ++h) {
            grads.w1.at(e, h) += pe * dhidden[h];
            acc += m.w1.at(e, h) * dhidden[h];
        }
        dpooled[e] = acc;
    }

    double inv = 1.0 / static_cast<double>(tokens.size());
    for (TokenId t : tokens)
        for (int e = 0; e < c.embed_dim; ++e) grads.embedding.at((int)t, e) += dpooled[e] * inv;
}

int predict(const ModelParams& m, const std::vector<TokenId>& tokens) {
    ForwardCache f = forward(m, tokens);
    int best = 0;
    for (int k = 1; k < m.config.num_options; ++k)
        if (f.logits[k] > f.logits[best]) best = k;
    return best;
}

void save_checkpoint(const ModelParams& m, const std::string& path) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["config"] = {{"vocab_size", m.config.vocab_size},
                   {"embed_dim", m.config.embed_dim},
                   {"hidden_dim", m.config.hidden_dim},
                   {"num_options", m.config.num_options},
                   {"seed", m.config.seed}};
    j["params"] = {{"embedding", m.embedding.a}, {"w1", m.w1.a}, {"b1", m.b1},
                   {"w2", m.w2.a},               {"b2", m.b2}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write checkpoint: " + path);
    out << j.dump() << "\n";
}

ModelParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot read checkpoint: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("malformed checkpoint " + path + ": " + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1)
            throw data_error("unsupported checkpoint format_version in " + path);
        ModelConfig c;
        const auto& jc = j.at("config");
        c.vocab_size = jc.at("vocab_size").get<int>();
        c.embed_dim = jc.at("embed_dim").get<int>();
        c.hidden_dim = jc.at("hidden_dim").get<int>();
        c.num_options = jc.at("num_options").get<int>();
        c.seed = jc.at("seed").get<std::uint64_t>();
        validate_model_config(c);
        ModelParams m;
        m.config = c;
        const auto& jp = j.at("params");
        m.embedding = Matrix::zeros(c.vocab_size, c.embed_dim);
        m.embedding.a = jp.at("embedding").get<std::vector<double>>();
        m.w1 = Matrix::zeros(c.embed_dim, c.hidden_dim);
        m.w1.a = jp.at("w1").get<std::vector<double>>();
        m.b1 = jp.at("b1").get<std::vector<double>>();
        m.w2 = Matrix::zeros(c.hidden_dim, c.num_options);
        m.w2.a = jp.at("w2").get<std::vector<double>>();
        m.b2 = jp.at("b2").get<std::vector<double>>();
        if (m.embedding.a.size() != (std::size_t)c.vocab_size * c.embed_dim ||
            m.w1.a.size() != (std::size_t)c.embed_dim * c.hidden_dim ||
            m.b1.size() != (std::size_t)c.hidden_dim ||
            m.w2.a.size() != (std::size_t)c.hidden_dim * c.num_options ||
            m.b2.size() != (std::size_t)c.num_options)
            throw data_error("checkpoint tensor shapes disagree with config in " + path);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("malformed checkpoint " + path + ": " + e.what());
    }
}

} // namespace uqp
