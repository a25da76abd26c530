#include "arcqa/entailment/match_lstm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "arcqa/error.hpp"
#include "arcqa/io/binary.hpp"
#include "arcqa/text/tokenize.hpp"

namespace arcqa::entailment {

namespace {

constexpr std::string_view kMagic = "ARCQAMLS";
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

std::string to_string(EntailLabel label) {
    return label == EntailLabel::entails ? "entails" : "neutral";
}

EntailLabel parse_label(const std::string& s) {
    if (s == "entails") {
        return EntailLabel::entails;
    }
    if (s == "neutral") {
        return EntailLabel::neutral;
    }
    throw ParseError("label must be 'entails' or 'neutral', got '" + s + "'");
}

std::vector<PremiseHypothesisPair> read_entailment_data(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open entailment data " + path.string());
    }
    std::vector<PremiseHypothesisPair> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
        try {
            const auto doc = nlohmann::json::parse(line);
            for (const char* field : {"premise", "hypothesis"}) {
                if (!doc.contains(field) || !doc.at(field).is_string()) {
                    throw ParseError(std::string("missing required string field '") + field + "'");
                }
            }
            PremiseHypothesisPair pair;
            pair.premise = text::normalize(doc.at("premise").get<std::string>());
            pair.hypothesis = text::normalize(doc.at("hypothesis").get<std::string>());
            if (pair.premise.empty() || pair.hypothesis.empty()) {
                throw ParseError("premise and hypothesis must contain at least one token");
            }
            if (doc.contains("label") && !doc.at("label").is_null()) {
                pair.label = parse_label(doc.at("label").get<std::string>());
            }
            out.push_back(std::move(pair));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + e.what());
        } catch (const ParseError& e) {
            throw ParseError(where + e.what());
        }
    }
    return out;
}

nn::ParamList MatchLstmParams::collect() {
    nn::ParamList out;
    encoder.collect(out, "encoder");
    matcher.collect(out, "matcher");
    nn::add_param(out, "cls.w", cls_w);
    nn::add_param(out, "cls.b", cls_b);
    return out;
}

MatchLstmParams MatchLstmParams::zeros_like() const {
    MatchLstmParams z;
    z.encoder = nn::BiLstmParams::zeros(encoder.fwd.input_dim(), encoder.hidden_dim());
    z.matcher = nn::LstmParams::zeros(matcher.input_dim(), matcher.hidden_dim());
    z.cls_w = Mat::Zero(cls_w.rows(), cls_w.cols());
    z.cls_b = Vec::Zero(cls_b.size());
    return z;
}

MatchLstmModel MatchLstmModel::create(nn::EmbeddingTable words, const MatchLstmConfig& config) {
    if (words.dim() <= 0) {
        throw ConfigError("match-lstm: word embedding table is empty");
    }
    if (config.word_dim && *config.word_dim != words.dim()) {
        throw ConfigError("match-lstm: word embeddings have dim " + std::to_string(words.dim()) +
                          ", configured " + std::to_string(*config.word_dim));
    }
    if (config.hidden < 1 || config.matcher < 1) {
        throw ConfigError("match-lstm: hidden sizes must be >= 1");
    }
    nn::Rng rng(config.seed);
    MatchLstmModel m;
    words.set_fallback(nn::uniform_vector(words.dim(), std::sqrt(3.0 / static_cast<double>(words.dim())), rng));
    m.words_ = std::move(words);
    m.params_.encoder = nn::BiLstmParams::glorot(m.words_.dim(), config.hidden, rng);
    m.params_.matcher = nn::LstmParams::glorot(4 * config.hidden, config.matcher, rng);
    m.params_.cls_w = nn::glorot_uniform(2, config.matcher, rng);
    m.params_.cls_b = Vec::Zero(2);
    return m;
}

std::vector<Vec> MatchLstmModel::embed(const std::vector<std::string>& tokens) const {
    std::vector<Vec> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        out.push_back(words_.lookup(t));
    }
    return out;
}

MatchLstmModel::Forward MatchLstmModel::forward(const std::vector<std::string>& premise,
                                                const std::vector<std::string>& hypothesis) const {
    if (premise.empty() || hypothesis.empty()) {
        throw InvalidArgument("match-lstm: premise and hypothesis must be non-empty");
    }
    Forward f;
    f.premise = nn::bilstm_forward(params_.encoder, embed(premise));
    f.hypothesis = nn::bilstm_forward(params_.encoder, embed(hypothesis));
    f.attn = attention(f.premise.outputs, f.hypothesis.outputs);
    const auto width = params_.encoder.output_dim();
    f.match_inputs.reserve(hypothesis.size());
    for (std::size_t j = 0; j < hypothesis.size(); ++j) {
        Vec m(2 * width);
        m << f.attn.a[j], f.hypothesis.outputs[j];
        f.match_inputs.push_back(std::move(m));
    }
    f.matcher = nn::lstm_forward(params_.matcher, f.match_inputs);
    const auto units = params_.matcher.hidden_dim();
    f.pooled = f.matcher.hidden.front();
    f.pool_arg.assign(static_cast<std::size_t>(units), 0);
    for (std::size_t j = 1; j < f.matcher.hidden.size(); ++j) {
        for (Eigen::Index u = 0; u < units; ++u) {
            if (f.matcher.hidden[j][u] > f.pooled[u]) {
                f.pooled[u] = f.matcher.hidden[j][u];
                f.pool_arg[static_cast<std::size_t>(u)] = static_cast<Eigen::Index>(j);
            }
        }
    }
    f.logits = params_.cls_w * f.pooled + params_.cls_b;
    const double m = f.logits.maxCoeff();
    const double e0 = std::exp(f.logits[0] - m);
    const double e1 = std::exp(f.logits[1] - m);
    f.probs = {e0 / (e0 + e1), e1 / (e0 + e1)};
    return f;
}

double MatchLstmModel::p_entails(const std::vector<std::string>& premise,
                                 const std::vector<std::string>& hypothesis) const {
    return forward(premise, hypothesis).probs[0];
}

double MatchLstmModel::loss(const PremiseHypothesisPair& pair) const {
    if (!pair.label) {
        throw InvalidArgument("match-lstm: loss requires a gold label");
    }
    const auto f = forward(pair.premise, pair.hypothesis);
    const auto gold = static_cast<Eigen::Index>(*pair.label);
    // log-softmax computed from logits for accuracy near saturation.
    const double m = f.logits.maxCoeff();
    const double lse = m + std::log((f.logits.array() - m).exp().sum());
    return lse - f.logits[gold];
}

MatchLstmModel::LossAndGradient MatchLstmModel::loss_and_gradient(const PremiseHypothesisPair& pair) const {
    if (!pair.label) {
        throw InvalidArgument("match-lstm: loss requires a gold label");
    }
    const auto f = forward(pair.premise, pair.hypothesis);
    const auto gold = static_cast<Eigen::Index>(*pair.label);
    LossAndGradient out;
    {
        const double m = f.logits.maxCoeff();
        const double lse = m + std::log((f.logits.array() - m).exp().sum());
        out.loss = lse - f.logits[gold];
    }
    out.grads = params_.zeros_like();

    Vec d_logits(2);
    d_logits << f.probs[0], f.probs[1];
    d_logits[gold] -= 1.0;
    out.grads.cls_w.noalias() += d_logits * f.pooled.transpose();
    out.grads.cls_b += d_logits;
    const Vec d_pooled = params_.cls_w.transpose() * d_logits;

    const auto units = params_.matcher.hidden_dim();
    std::vector<Vec> d_matcher(f.matcher.hidden.size(), Vec::Zero(units));
    for (Eigen::Index u = 0; u < units; ++u) {
        d_matcher[static_cast<std::size_t>(f.pool_arg[static_cast<std::size_t>(u)])][u] += d_pooled[u];
    }
    const auto d_match_inputs = nn::lstm_backward(params_.matcher, f.matcher, d_matcher, out.grads.matcher);

    const auto width = params_.encoder.output_dim();
    const std::size_t n = pair.hypothesis.size();
    std::vector<Vec> d_a(n);
    std::vector<Vec> d_h(n);
    for (std::size_t j = 0; j < n; ++j) {
        d_a[j] = d_match_inputs[j].head(width);
        d_h[j] = d_match_inputs[j].tail(width);
    }
    const auto attn_grads = attention_backward(f.premise.outputs, f.hypothesis.outputs, f.attn, d_a);
    for (std::size_t j = 0; j < n; ++j) {
        d_h[j] += attn_grads.d_h[j];
    }
    nn::bilstm_backward(params_.encoder, f.premise, attn_grads.d_p, out.grads.encoder);
    nn::bilstm_backward(params_.encoder, f.hypothesis, d_h, out.grads.encoder);
    return out;
}

// Layout (version 1): magic | u32 version | i64 hidden | i64 matcher |
// word table | parameter dump.
void MatchLstmModel::write(std::ostream& out) const {
    io::BinaryWriter w(out);
    w.put_magic(kMagic, kFormatVersion);
    w.put<std::int64_t>(params_.encoder.hidden_dim());
    w.put<std::int64_t>(params_.matcher.hidden_dim());
    words_.write(w);
    nn::write_params(w, const_cast<MatchLstmParams&>(params_).collect());
}

MatchLstmModel MatchLstmModel::read(std::istream& in, const std::string& source) {
    io::BinaryReader r(in, source);
    const auto version = r.expect_magic(kMagic);
    if (version != kFormatVersion) {
        r.fail("unsupported match-lstm model version " + std::to_string(version));
    }
    const auto hidden = r.get<std::int64_t>();
    const auto matcher = r.get<std::int64_t>();
    if (hidden < 1 || matcher < 1 || hidden > 65536 || matcher > 65536) {
        r.fail("implausible model dimensions");
    }
    MatchLstmModel m;
    m.words_ = nn::EmbeddingTable::read(r);
    m.params_.encoder = nn::BiLstmParams::zeros(m.words_.dim(), hidden);
    m.params_.matcher = nn::LstmParams::zeros(4 * hidden, matcher);
    m.params_.cls_w = Mat::Zero(2, matcher);
    m.params_.cls_b = Vec::Zero(2);
    nn::read_params(r, m.params_.collect());
    r.expect_eof();
    return m;
}

void MatchLstmModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write match-lstm model " + path.string());
    }
    write(out);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

MatchLstmModel MatchLstmModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open match-lstm model " + path.string());
    }
    return read(in, path.string());
}

std::string MatchLstmModel::to_bytes() const {
    std::ostringstream out(std::ios::binary);
    write(out);
    return out.str();
}

void EntailTrainConfig::validate() const {
    if (epochs < 1) {
        throw ConfigError("train: epochs must be >= 1");
    }
    if (!(lr > 0.0)) {
        throw ConfigError("train: learning rate must be > 0");
    }
    if (!(clip_norm > 0.0)) {
        throw ConfigError("train: clip norm must be > 0");
    }
}

MatchLstmModel train_entailment(MatchLstmModel model, const std::vector<PremiseHypothesisPair>& data,
                                const EntailTrainConfig& config, EntailTrainHistory* history) {
    config.validate();
    if (data.empty()) {
        throw InvalidArgument("train_entailment: dataset is empty");
    }
    for (const auto& pair : data) {
        if (!pair.label) {
            throw InvalidArgument("train_entailment: every pair needs a gold label");
        }
    }
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    nn::Rng rng(config.seed);
    auto params = model.params().collect();
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double total = 0.0;
        for (auto idx : order) {
            auto lg = model.loss_and_gradient(data[idx]);
            total += lg.loss;
            auto grads = lg.grads.collect();
            nn::clip_global_norm(grads, config.clip_norm);
            nn::sgd_step(params, grads, config.lr);
        }
        if (history != nullptr) {
            history->epoch_loss.push_back(total);
        }
    }
    return model;
}

double entailment_accuracy(const MatchLstmModel& model, const std::vector<PremiseHypothesisPair>& data) {
    std::size_t labeled = 0;
    std::size_t correct = 0;
    for (const auto& pair : data) {
        if (!pair.label) {
            continue;
        }
        ++labeled;
        const double p = model.p_entails(pair.premise, pair.hypothesis);
        const auto predicted = p >= 0.5 ? EntailLabel::entails : EntailLabel::neutral;
        correct += predicted == *pair.label ? 1 : 0;
    }
    return labeled == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(labeled);
}

}  // namespace arcqa::entailment
