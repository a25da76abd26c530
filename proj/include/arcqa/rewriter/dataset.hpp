#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace arcqa::rewriter {

inline constexpr int kDefaultEssentialThreshold = 3;

struct EssentialTermsExample {
    std::vector<std::string> tokens;  // lowercased
    std::vector<int> ratings;         // 1..5
    std::vector<int> labels;          // 1 = essential
};

/// label = 1 iff rating >= threshold. Ratings outside 1..5 raise ParseError.
std::vector<int> binarize_ratings(const std::vector<int>& ratings,
                                  int threshold = kDefaultEssentialThreshold);

/// Reads `tok_1 ... tok_T<TAB>r_1 ... r_T` lines.
std::vector<EssentialTermsExample> read_essential_terms(const std::filesystem::path& path,
                                                        int threshold = kDefaultEssentialThreshold);
void write_essential_terms(const std::filesystem::path& path,
                           const std::vector<EssentialTermsExample>& data);

/// Converts pipe-annotated lines (`word|rating word|rating ...`, separated by
/// spaces or commas) into examples.
std::vector<EssentialTermsExample> convert_pipe_annotated(const std::filesystem::path& path,
                                                          int threshold = kDefaultEssentialThreshold);

struct DatasetSplit {
    std::vector<EssentialTermsExample> train;
    std::vector<EssentialTermsExample> dev;
    std::vector<EssentialTermsExample> test;
    std::size_t removed_overlap = 0;
};

/// Drops examples whose normalized token string equals any excluded stem,
/// shuffles with seed, and splits 80/10/10 (train gets the remainder).
DatasetSplit split_dataset(std::vector<EssentialTermsExample> data,
                           const std::vector<std::string>& excluded_stems, std::uint64_t seed);

}  // namespace arcqa::rewriter
