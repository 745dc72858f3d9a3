#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace spinbath {

// A run configuration is a single JSON document; see README for the schema of
// each experiment kind. Values set through set_path override the document
// with dot-path addressing ("grid.count=1001", "ensemble.coupling.gamma=0.2").
class ExperimentConfig {
  public:
    explicit ExperimentConfig(nlohmann::json doc);
    static ExperimentConfig from_file(const std::filesystem::path& path);

    void set_path(const std::string& dotpath, const std::string& value_text);
    void set_seed(std::uint64_t seed);

    // Full report-only validation; returns one message per violated
    // constraint, empty when the config is runnable.
    std::vector<std::string> validate() const;

    std::string experiment() const;
    const nlohmann::json& doc() const { return doc_; }

  private:
    nlohmann::json doc_;
};

struct RunResult {
    // Data files written under the output directory, manifest.json excluded.
    std::vector<std::string> artifacts;
};

// Writes manifest.json (status "started") before any data file, then the
// experiment's CSV/JSON artifacts, then rewrites the manifest with status
// "complete" and a content digest per artifact. Output bytes are identical
// for identical configs regardless of the thread count.
RunResult run_experiment(const ExperimentConfig& config,
                         const std::filesystem::path& out_dir, unsigned threads);

}  // namespace spinbath
