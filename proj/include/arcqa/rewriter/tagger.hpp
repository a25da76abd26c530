#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "arcqa/nn/embeddings.hpp"
#include "arcqa/nn/lstm.hpp"
#include "arcqa/rewriter/crf.hpp"
#include "arcqa/rewriter/dataset.hpp"
#include "arcqa/rewriter/kg.hpp"
#include "arcqa/rewriter/metrics.hpp"

namespace arcqa::rewriter {

/// Lexicon plus entity vectors; the table's fallback is the UNK vector used
/// for unlinked tokens.
struct KgResources {
    KgLexicon lexicon;
    nn::EmbeddingTable entities;
};

struct TaggerConfig {
    Eigen::Index hidden = 200;   // per direction
    Eigen::Index link_dim = 10;
    std::uint64_t seed = 1;
    // When set, the loaded tables must have exactly these widths.
    std::optional<Eigen::Index> word_dim;
    std::optional<Eigen::Index> kg_dim;
};

/// Trainable part of the tagger. Word and entity tables are frozen and live
/// in TaggerModel.
struct TaggerParams {
    Mat link;  // link_dim x 2: column 0 outside any entity span, column 1 inside
    nn::BiLstmParams lstm;
    Mat emit_w;  // 2 x 2h
    Vec emit_b;  // 2
    CrfParams crf;

    nn::ParamList collect();
    [[nodiscard]] TaggerParams zeros_like() const;
};

struct TrainConfig {
    int epochs = 50;
    double lr0 = 0.015;
    double lr_decay = 0.05;  // lr_t = lr0 / (1 + lr_decay * t)
    std::uint64_t seed = 1;  // drives the per-epoch shuffle

    void validate() const;
    [[nodiscard]] double learning_rate(int epoch) const { return lr0 / (1.0 + lr_decay * epoch); }
};

/// BiLSTM-CRF essential-term labeler. Label 1 marks a term worth keeping in
/// the retrieval query.
///
/// Each token's input is its word vector; with a knowledge graph attached it
/// is extended by a learned link-indicator vector and the linked entity's
/// vector (or the UNK vector).
class TaggerModel {
public:
    static constexpr int kLabels = 2;

    TaggerModel() = default;
    static TaggerModel create(nn::EmbeddingTable words, std::optional<KgResources> kg,
                              const TaggerConfig& config);

    [[nodiscard]] bool kg_enabled() const { return kg_.has_value(); }
    [[nodiscard]] Eigen::Index input_dim() const;
    [[nodiscard]] Eigen::Index hidden_dim() const { return params_.lstm.hidden_dim(); }
    [[nodiscard]] const nn::EmbeddingTable& words() const { return words_; }
    [[nodiscard]] const std::optional<KgResources>& kg() const { return kg_; }

    [[nodiscard]] TaggerParams& params() { return params_; }
    [[nodiscard]] const TaggerParams& params() const { return params_; }

    [[nodiscard]] std::vector<LinkSpan> link(const std::vector<std::string>& tokens) const;
    [[nodiscard]] std::vector<Vec> encode(const std::vector<std::string>& tokens,
                                          const std::vector<LinkSpan>& spans) const;
    [[nodiscard]] Mat emissions(const std::vector<std::string>& tokens) const;
    [[nodiscard]] std::vector<int> tag(const std::vector<std::string>& tokens) const;

    struct LossAndGradient {
        double loss = 0.0;
        TaggerParams grads;
    };
    [[nodiscard]] LossAndGradient loss_and_gradient(const std::vector<std::string>& tokens,
                                                    const std::vector<int>& labels) const;
    [[nodiscard]] double loss(const std::vector<std::string>& tokens, const std::vector<int>& labels) const;

    void save(const std::filesystem::path& path) const;
    static TaggerModel load(const std::filesystem::path& path);
    /// Serialized form; two models are bit-identical iff their bytes are.
    [[nodiscard]] std::string to_bytes() const;

private:
    void write(std::ostream& out) const;
    static TaggerModel read(std::istream& in, const std::string& source);

    nn::EmbeddingTable words_;
    std::optional<KgResources> kg_;
    TaggerParams params_;
};

std::vector<Vec> encode_tokens(const std::vector<std::string>& tokens,
                               const std::vector<LinkSpan>& spans, const TaggerModel& model);

struct TrainHistory {
    std::vector<double> epoch_loss;
    std::vector<double> dev_f1;
    int best_epoch = -1;  // -1 when no dev set was given
};

/// Per-sentence SGD with a fixed per-epoch shuffle. Returns the snapshot with
/// the best dev F1 when dev is non-null, otherwise the final epoch.
TaggerModel train_tagger(TaggerModel model, const std::vector<EssentialTermsExample>& train,
                         const std::vector<EssentialTermsExample>* dev, const TrainConfig& config,
                         TrainHistory* history = nullptr);

TokenMetrics eval_tagger(const TaggerModel& model, const std::vector<EssentialTermsExample>& data);

/// Tokens whose label is 1, or all tokens when none are.
std::vector<std::string> mask_terms(const std::vector<std::string>& tokens, const std::vector<int>& labels);

/// Normalized stem tokens labeled essential, in order. Falls back to every
/// token when the model keeps none.
std::vector<std::string> select_terms(const TaggerModel& model, const std::string& question_stem);

}  // namespace arcqa::rewriter
