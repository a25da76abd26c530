#pragma once

#include <filesystem>
#include <random>
#include <string>

namespace arcqa::testing {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(ARCQA_FIXTURE_DIR) / name;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() / ("arcqa-" + tag + "-" + std::to_string(rng()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace arcqa::testing
