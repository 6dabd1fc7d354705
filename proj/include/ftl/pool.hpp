#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ftl::pool {

/// One dataset instance's recorded outcome. `correct` is the 0/1 indicator
/// that the model's prediction matched the label.
struct PredictionRecord {
  std::string instance_id;
  int correct = 0;
  std::optional<double> confidence;
  std::optional<std::vector<double>> embedding;
};

/// The evaluation dataset with its exact finite-population accuracy.
/// Immutable after construction; ground_truth is always the mean of the
/// correctness bits, never a generator target.
struct EvaluationPool {
  std::string name;
  std::vector<PredictionRecord> records;
  double ground_truth = 0.0;

  std::size_t size() const { return records.size(); }
  bool has_embeddings() const;
  bool has_confidences() const;
  std::size_t embedding_dim() const;
};

/// Validates records (ids unique, bits in {0,1}, embeddings rectangular)
/// and computes ground_truth.
EvaluationPool make_pool(std::string name, std::vector<PredictionRecord> records);

/// Loads a pool from a JSON manifest referencing a records CSV and an
/// optional embeddings JSONL sidecar.
EvaluationPool load_pool(const std::filesystem::path& manifest_path);

/// Writes manifest.json, records.csv and (when present) embeddings.jsonl
/// into `dir`; load_pool(dir / "manifest.json") round-trips exactly.
void save_pool(const EvaluationPool& pool, const std::filesystem::path& dir);

/// Gaussian-mixture embedding structure for synthetic pools. count = 0
/// disables embeddings entirely.
struct ClusterSpec {
  int count = 0;
  int embedding_dim = 8;
  double accuracy_spread = 0.15;
  double center_scale = 10.0;
  double cluster_std = 1.0;
};

struct SynthConfig {
  std::string name = "synthetic";
  double target_accuracy = 0.5;
  std::size_t size = 1;
  ClusterSpec clusters;
  bool with_confidence = true;
  std::uint64_t seed = 0;
};

/// Deterministic synthetic pool: per-cluster accuracies are spread around
/// the target so grouping-based estimators have structure to exploit.
/// Identical config + seed always yields a byte-identical pool.
EvaluationPool synth_pool(const SynthConfig& config);

}  // namespace ftl::pool
