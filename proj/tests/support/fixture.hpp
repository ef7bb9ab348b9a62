#pragma once

#include <filesystem>

#include "setsum/analytics.hpp"
#include "setsum/synth.hpp"

namespace setsum::testing {

std::filesystem::path data_dir();
std::filesystem::path schema_dir();

SynthTemplates shipped_templates();
AspectSet shipped_aspects(Question q);

struct TrainedPipeline {
  SyntheticCorpus corpus;
  PipelineModels models;
};

/// Generates a synthetic corpus and trains both question models on it.
TrainedPipeline train_pipeline(const SynthConfig& config, const EmbeddingSynthConfig& embed = {});

/// Corpus shape used by the integration and acceptance checks: enough
/// comments per course that most aspect clusters exceed the summary size.
SynthConfig dense_config(int courses, std::uint64_t seed);

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace setsum::testing
