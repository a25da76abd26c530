#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "arcqa/entailment/attention.hpp"
#include "arcqa/nn/embeddings.hpp"
#include "arcqa/nn/lstm.hpp"

namespace arcqa::entailment {

enum class EntailLabel : int { entails = 0, neutral = 1 };

std::string to_string(EntailLabel label);
EntailLabel parse_label(const std::string& s);

struct PremiseHypothesisPair {
    std::vector<std::string> premise;     // normalized tokens, K >= 1
    std::vector<std::string> hypothesis;  // N >= 1
    std::optional<EntailLabel> label;
};

/// JSON-lines `{premise, hypothesis, label}`; texts are tokenized on read.
std::vector<PremiseHypothesisPair> read_entailment_data(const std::filesystem::path& path);

struct MatchLstmConfig {
    Eigen::Index hidden = 8;   // encoder width per direction
    Eigen::Index matcher = 8;  // matcher LSTM width
    std::uint64_t seed = 1;
    std::optional<Eigen::Index> word_dim;
};

struct MatchLstmParams {
    nn::BiLstmParams encoder;  // shared by premise and hypothesis
    nn::LstmParams matcher;    // input 4h
    Mat cls_w;                 // 2 x m
    Vec cls_b;                 // 2

    nn::ParamList collect();
    [[nodiscard]] MatchLstmParams zeros_like() const;
};

/// match-LSTM entailment classifier over frozen word vectors: BiLSTM
/// contextual states, dot-product attention of each hypothesis token over the
/// premise, an LSTM over [a_j ; h_j], element-wise max-pool over its states
/// and a two-way softmax {entails, neutral}.
class MatchLstmModel {
public:
    MatchLstmModel() = default;
    static MatchLstmModel create(nn::EmbeddingTable words, const MatchLstmConfig& config);

    struct Forward {
        nn::BiLstmTrace premise;
        nn::BiLstmTrace hypothesis;
        AttentionResult attn;
        std::vector<Vec> match_inputs;  // m_j = [a_j ; h_j]
        nn::LstmTrace matcher;
        Vec pooled;
        std::vector<Eigen::Index> pool_arg;  // step that won each pooled unit
        Vec logits;
        std::array<double, 2> probs{};  // {entails, neutral}
    };

    [[nodiscard]] Forward forward(const std::vector<std::string>& premise,
                                  const std::vector<std::string>& hypothesis) const;
    [[nodiscard]] double p_entails(const std::vector<std::string>& premise,
                                   const std::vector<std::string>& hypothesis) const;

    struct LossAndGradient {
        double loss = 0.0;
        MatchLstmParams grads;
    };
    [[nodiscard]] LossAndGradient loss_and_gradient(const PremiseHypothesisPair& pair) const;
    [[nodiscard]] double loss(const PremiseHypothesisPair& pair) const;

    [[nodiscard]] MatchLstmParams& params() { return params_; }
    [[nodiscard]] const MatchLstmParams& params() const { return params_; }
    [[nodiscard]] const nn::EmbeddingTable& words() const { return words_; }

    void save(const std::filesystem::path& path) const;
    static MatchLstmModel load(const std::filesystem::path& path);
    [[nodiscard]] std::string to_bytes() const;

private:
    [[nodiscard]] std::vector<Vec> embed(const std::vector<std::string>& tokens) const;
    void write(std::ostream& out) const;
    static MatchLstmModel read(std::istream& in, const std::string& source);

    nn::EmbeddingTable words_;
    MatchLstmParams params_;
};

struct EntailTrainConfig {
    int epochs = 200;
    double lr = 0.01;
    double clip_norm = 5.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct EntailTrainHistory {
    std::vector<double> epoch_loss;
};

/// Per-pair SGD on cross-entropy with global-norm clipping and a seeded
/// per-epoch shuffle.
MatchLstmModel train_entailment(MatchLstmModel model, const std::vector<PremiseHypothesisPair>& data,
                                const EntailTrainConfig& config, EntailTrainHistory* history = nullptr);

/// Fraction of labeled pairs where argmax class equals the gold label.
double entailment_accuracy(const MatchLstmModel& model, const std::vector<PremiseHypothesisPair>& data);

}  // namespace arcqa::entailment
