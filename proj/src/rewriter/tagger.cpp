#include "arcqa/rewriter/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "arcqa/error.hpp"
#include "arcqa/io/binary.hpp"
#include "arcqa/text/tokenize.hpp"

namespace arcqa::rewriter {

namespace {

constexpr std::string_view kMagic = "ARCQATAG";
constexpr std::uint32_t kFormatVersion = 1;

// Marks which tokens fall inside an entity span.
std::vector<bool> inside_mask(std::size_t n, const std::vector<LinkSpan>& spans) {
    std::vector<bool> inside(n, false);
    for (const auto& s : spans) {
        for (std::size_t i = s.start; i < s.end && i < n; ++i) {
            inside[i] = true;
        }
    }
    return inside;
}

}  // namespace

nn::ParamList TaggerParams::collect() {
    nn::ParamList out;
    nn::add_param(out, "link", link);
    lstm.collect(out, "lstm");
    nn::add_param(out, "emit.w", emit_w);
    nn::add_param(out, "emit.b", emit_b);
    crf.collect(out, "crf");
    return out;
}

TaggerParams TaggerParams::zeros_like() const {
    TaggerParams z;
    z.link = Mat::Zero(link.rows(), link.cols());
    z.lstm = nn::BiLstmParams::zeros(lstm.fwd.input_dim(), lstm.hidden_dim());
    z.emit_w = Mat::Zero(emit_w.rows(), emit_w.cols());
    z.emit_b = Vec::Zero(emit_b.size());
    z.crf = CrfParams::zeros(crf.labels());
    return z;
}

void TrainConfig::validate() const {
    if (epochs < 1) {
        throw ConfigError("train: epochs must be >= 1");
    }
    if (!(lr0 > 0.0)) {
        throw ConfigError("train: learning rate must be > 0");
    }
    if (lr_decay < 0.0) {
        throw ConfigError("train: learning-rate decay must be >= 0");
    }
}

TaggerModel TaggerModel::create(nn::EmbeddingTable words, std::optional<KgResources> kg,
                                const TaggerConfig& config) {
    if (words.dim() <= 0) {
        throw ConfigError("tagger: word embedding table is empty");
    }
    if (config.word_dim && *config.word_dim != words.dim()) {
        throw ConfigError("tagger: word embeddings have dim " + std::to_string(words.dim()) +
                          ", configured " + std::to_string(*config.word_dim));
    }
    if (config.hidden < 1 || config.link_dim < 1) {
        throw ConfigError("tagger: hidden and link dims must be >= 1");
    }
    if (kg) {
        if (kg->entities.dim() <= 0) {
            throw ConfigError("tagger: kg embedding table is empty");
        }
        if (config.kg_dim && *config.kg_dim != kg->entities.dim()) {
            throw ConfigError("tagger: kg embeddings have dim " + std::to_string(kg->entities.dim()) +
                              ", configured " + std::to_string(*config.kg_dim));
        }
    }
    nn::Rng rng(config.seed);
    TaggerModel m;
    words.set_fallback(nn::uniform_vector(words.dim(), std::sqrt(3.0 / static_cast<double>(words.dim())), rng));
    m.words_ = std::move(words);
    if (kg) {
        const auto d = kg->entities.dim();
        kg->entities.set_fallback(nn::uniform_vector(d, std::sqrt(3.0 / static_cast<double>(d)), rng));
        m.kg_ = std::move(kg);
    }
    m.params_.link = m.kg_ ? nn::glorot_uniform(config.link_dim, 2, rng) : Mat::Zero(config.link_dim, 2);
    const auto in = m.input_dim();
    m.params_.lstm = nn::BiLstmParams::glorot(in, config.hidden, rng);
    m.params_.emit_w = nn::glorot_uniform(kLabels, 2 * config.hidden, rng);
    m.params_.emit_b = Vec::Zero(kLabels);
    m.params_.crf = CrfParams::zeros(kLabels);
    return m;
}

Eigen::Index TaggerModel::input_dim() const {
    return kg_ ? words_.dim() + params_.link.rows() + kg_->entities.dim() : words_.dim();
}

std::vector<LinkSpan> TaggerModel::link(const std::vector<std::string>& tokens) const {
    return kg_ ? link_entities(tokens, kg_->lexicon) : std::vector<LinkSpan>{};
}

std::vector<Vec> TaggerModel::encode(const std::vector<std::string>& tokens,
                                     const std::vector<LinkSpan>& spans) const {
    std::vector<Vec> out;
    out.reserve(tokens.size());
    if (!kg_) {
        for (const auto& t : tokens) {
            out.push_back(words_.lookup(t));
        }
        return out;
    }
    const auto inside = inside_mask(tokens.size(), spans);
    std::vector<const Vec*> entity(tokens.size(), &kg_->entities.fallback());
    for (const auto& s : spans) {
        for (std::size_t i = s.start; i < s.end && i < tokens.size(); ++i) {
            entity[i] = &kg_->entities.lookup(s.entity_id);
        }
    }
    const auto d = words_.dim();
    const auto l = params_.link.rows();
    const auto k = kg_->entities.dim();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        Vec x(d + l + k);
        x << words_.lookup(tokens[i]), params_.link.col(inside[i] ? 1 : 0), *entity[i];
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<Vec> encode_tokens(const std::vector<std::string>& tokens,
                               const std::vector<LinkSpan>& spans, const TaggerModel& model) {
    return model.encode(tokens, spans);
}

Mat TaggerModel::emissions(const std::vector<std::string>& tokens) const {
    const auto inputs = encode(tokens, link(tokens));
    const auto trace = nn::bilstm_forward(params_.lstm, inputs);
    Mat em(static_cast<Eigen::Index>(tokens.size()), kLabels);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        em.row(static_cast<Eigen::Index>(t)) = (params_.emit_w * trace.outputs[t] + params_.emit_b).transpose();
    }
    return em;
}

std::vector<int> TaggerModel::tag(const std::vector<std::string>& tokens) const {
    if (tokens.empty()) {
        return {};
    }
    return crf_viterbi(emissions(tokens), params_.crf).path;
}

TaggerModel::LossAndGradient TaggerModel::loss_and_gradient(const std::vector<std::string>& tokens,
                                                            const std::vector<int>& labels) const {
    if (tokens.empty() || tokens.size() != labels.size()) {
        throw InvalidArgument("tagger: example must be non-empty with one label per token");
    }
    const auto spans = link(tokens);
    const auto inputs = encode(tokens, spans);
    const auto trace = nn::bilstm_forward(params_.lstm, inputs);
    const auto steps = static_cast<Eigen::Index>(tokens.size());
    Mat em(steps, kLabels);
    for (Eigen::Index t = 0; t < steps; ++t) {
        em.row(t) = (params_.emit_w * trace.outputs[static_cast<std::size_t>(t)] + params_.emit_b).transpose();
    }
    auto crf = crf_nll(em, params_.crf, labels);

    LossAndGradient out;
    out.loss = crf.loss;
    out.grads = params_.zeros_like();
    out.grads.crf = std::move(crf.grads);
    std::vector<Vec> d_states(tokens.size());
    for (Eigen::Index t = 0; t < steps; ++t) {
        const Vec d_em = crf.d_emissions.row(t).transpose();
        const auto& state = trace.outputs[static_cast<std::size_t>(t)];
        out.grads.emit_w.noalias() += d_em * state.transpose();
        out.grads.emit_b += d_em;
        d_states[static_cast<std::size_t>(t)] = params_.emit_w.transpose() * d_em;
    }
    const auto d_inputs = nn::bilstm_backward(params_.lstm, trace, d_states, out.grads.lstm);
    if (kg_) {
        const auto inside = inside_mask(tokens.size(), spans);
        const auto d = words_.dim();
        const auto l = params_.link.rows();
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            out.grads.link.col(inside[i] ? 1 : 0) += d_inputs[i].segment(d, l);
        }
    }
    return out;
}

double TaggerModel::loss(const std::vector<std::string>& tokens, const std::vector<int>& labels) const {
    const auto em = emissions(tokens);
    return crf_log_partition(em, params_.crf) - crf_path_score(em, params_.crf, labels);
}

// Layout (version 1): magic | u32 version | u8 kg flag | i64 link rows |
// i64 hidden | word table | [kg lexicon (u64 n, n x (surface, id)) | kg table]
// | parameter dump.
void TaggerModel::write(std::ostream& out) const {
    io::BinaryWriter w(out);
    w.put_magic(kMagic, kFormatVersion);
    w.put<std::uint8_t>(kg_ ? 1 : 0);
    w.put<std::int64_t>(params_.link.rows());
    w.put<std::int64_t>(params_.lstm.hidden_dim());
    words_.write(w);
    if (kg_) {
        w.put<std::uint64_t>(kg_->lexicon.size());
        for (const auto& [surface, id] : kg_->lexicon.entries()) {
            w.put_string(surface);
            w.put_string(id);
        }
        kg_->entities.write(w);
    }
    auto params = const_cast<TaggerParams&>(params_).collect();
    nn::write_params(w, params);
}

TaggerModel TaggerModel::read(std::istream& in, const std::string& source) {
    io::BinaryReader r(in, source);
    const auto version = r.expect_magic(kMagic);
    if (version != kFormatVersion) {
        r.fail("unsupported tagger model version " + std::to_string(version));
    }
    const bool has_kg = r.get<std::uint8_t>() != 0;
    const auto link_dim = r.get<std::int64_t>();
    const auto hidden = r.get<std::int64_t>();
    if (link_dim < 1 || hidden < 1 || link_dim > 4096 || hidden > 65536) {
        r.fail("implausible model dimensions");
    }
    TaggerModel m;
    m.words_ = nn::EmbeddingTable::read(r);
    if (has_kg) {
        KgResources kg;
        const auto n = r.get_size(2);
        for (std::uint64_t i = 0; i < n; ++i) {
            auto surface = r.get_string();
            auto id = r.get_string();
            kg.lexicon.add(surface, std::move(id));
        }
        kg.entities = nn::EmbeddingTable::read(r);
        m.kg_ = std::move(kg);
    }
    m.params_.link = Mat::Zero(link_dim, 2);
    m.params_.lstm = nn::BiLstmParams::zeros(m.input_dim(), hidden);
    m.params_.emit_w = Mat::Zero(kLabels, 2 * hidden);
    m.params_.emit_b = Vec::Zero(kLabels);
    m.params_.crf = CrfParams::zeros(kLabels);
    nn::read_params(r, m.params_.collect());
    r.expect_eof();
    return m;
}

void TaggerModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write tagger model " + path.string());
    }
    write(out);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

TaggerModel TaggerModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open tagger model " + path.string());
    }
    return read(in, path.string());
}

std::string TaggerModel::to_bytes() const {
    std::ostringstream out(std::ios::binary);
    write(out);
    return out.str();
}

TaggerModel train_tagger(TaggerModel model, const std::vector<EssentialTermsExample>& train,
                         const std::vector<EssentialTermsExample>* dev, const TrainConfig& config,
                         TrainHistory* history) {
    config.validate();
    if (train.empty()) {
        throw InvalidArgument("train_tagger: training set is empty");
    }
    TrainHistory local;
    TrainHistory& hist = history != nullptr ? *history : local;
    hist = {};

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    nn::Rng rng(config.seed);
    std::optional<TaggerModel> best;
    double best_f1 = -1.0;

    auto params = model.params().collect();
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        const double lr = config.learning_rate(epoch);
        double total = 0.0;
        for (auto idx : order) {
            const auto& ex = train[idx];
            auto lg = model.loss_and_gradient(ex.tokens, ex.labels);
            total += lg.loss;
            nn::sgd_step(params, lg.grads.collect(), lr);
        }
        hist.epoch_loss.push_back(total);
        if (dev != nullptr) {
            const double f1 = eval_tagger(model, *dev).f1;
            hist.dev_f1.push_back(f1);
            if (f1 > best_f1) {
                best_f1 = f1;
                best = model;
                hist.best_epoch = epoch;
            }
        }
    }
    if (best) {
        return std::move(*best);
    }
    return model;
}

TokenMetrics eval_tagger(const TaggerModel& model, const std::vector<EssentialTermsExample>& data) {
    ConfusionCounter counter;
    for (const auto& ex : data) {
        counter.add(ex.labels, model.tag(ex.tokens));
    }
    return counter.finish();
}

std::vector<std::string> select_terms(const TaggerModel& model, const std::string& question_stem) {
    const auto tokens = text::normalize(question_stem);
    return mask_terms(tokens, model.tag(tokens));
}

std::vector<std::string> mask_terms(const std::vector<std::string>& tokens, const std::vector<int>& labels) {
    if (tokens.size() != labels.size()) {
        throw InvalidArgument("mask_terms: one label per token required");
    }
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (labels[i] == 1) {
            kept.push_back(tokens[i]);
        }
    }
    return kept.empty() ? tokens : kept;
}

}  // namespace arcqa::rewriter
