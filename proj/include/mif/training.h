// Copyright 2026 The MIF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIF_TRAINING_H_
#define MIF_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mif/adam.h"
#include "mif/dataset.h"
#include "mif/filters.h"
#include "mif/losses.h"
#include "mif/model_bundle.h"
#include "mif/nn/graph.h"
#include "mif/patches.h"
#include "mif/rfs.h"

namespace mif {

inline constexpr long kScratchIterations = 20000;
inline constexpr long kFinetuneIterations = 4000;

struct TrainConfig {
  int batch_size = 16;
  double learning_rate = 1e-4;
  long iterations = kScratchIterations;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int patch_size = kPatchSize;
  int patch_stride = kPatchSize;
  int qp = 37;
  std::optional<std::filesystem::path> init_from;
  std::uint64_t seed = 1;
  // Phase-1 termination: window mean of L_INT improves by less than
  // `convergence_tolerance` relative to the previous window, or
  // `phase1_budget_fraction` of the iterations have run.
  int convergence_window = 1000;
  double convergence_tolerance = 0.005;
  double phase1_budget_fraction = 0.5;

  AdamOptions Adam() const { return {learning_rate, beta1, beta2, epsilon}; }
  void Validate() const;
};

// key=value lines; blank lines and '#' comments are ignored. Keys not listed
// in TrainConfig raise a ConfigError.
TrainConfig ParseTrainConfig(const std::string& text,
                             TrainConfig defaults = {});
TrainConfig LoadTrainConfig(const std::filesystem::path& path,
                            TrainConfig defaults = {});

// Tracks the MC_FIRST -> GLOBAL switch.
class PhaseScheduler {
 public:
  PhaseScheduler(long iterations, int window, double tolerance,
                 double budget_fraction);

  TrainingPhase phase() const { return phase_; }
  // Records the L_INT of completed iteration `iteration` (1-based).
  void Observe(long iteration, double l_int);
  std::optional<long> switch_iteration() const { return switch_iteration_; }

 private:
  long budget_limit_;
  int window_;
  double tolerance_;
  TrainingPhase phase_ = TrainingPhase::kMcFirst;
  std::optional<long> switch_iteration_;
  double window_sum_ = 0.0;
  int window_count_ = 0;
  double previous_mean_ = 0.0;
  bool has_previous_ = false;
};

struct LogEntry {
  long iteration = 0;
  TrainingPhase phase = TrainingPhase::kGlobal;
  double l_int = 0.0;  // batch sums
  double l_glo = 0.0;
  double loss = 0.0;
};

struct TrainingLog {
  std::vector<LogEntry> entries;
  std::optional<long> phase_switch;  // first GLOBAL iteration

  void WriteCsv(const std::filesystem::path& path) const;
};

// Called after every iteration; returning true stops training early.
using StopPredicate = std::function<bool(const LogEntry&)>;

template <typename T>
struct MifLossTerms {
  nn::Var total;
  nn::Var l_int;
  nn::Var l_glo;
};

// Builds the per-sample training loss of the multi-frame network.
template <typename T>
MifLossTerms<T> MifSampleLoss(nn::Graph<T>& g, const MifNet<T>& net,
                              const PatchSample& sample,
                              const LossWeights& weights);

template <typename T>
nn::Var IfSampleLoss(nn::Graph<T>& g, const IfNet<T>& net,
                     const PatchSample& sample);

struct MifTrainResult {
  MifNet<float> net;
  TrainingLog log;
  ModelBundle bundle;
};

struct IfTrainResult {
  IfNet<float> net;
  TrainingLog log;
  ModelBundle bundle;
};

MifTrainResult TrainMif(const std::vector<PatchSample>& dataset,
                        const TrainConfig& config,
                        const MifNetOptions& options = {},
                        const StopPredicate& stop = {});

IfTrainResult TrainIf(const std::vector<PatchSample>& dataset,
                      const TrainConfig& config,
                      const IfNetOptions& options = {},
                      const StopPredicate& stop = {});

struct RfsTrainResult {
  RfsNetParams params;
  std::vector<double> losses;  // per iteration
  ModelBundle bundle;
};

// Each iteration accumulates the gradient of batch_size groups.
RfsTrainResult TrainRfs(const std::vector<RfsGroup>& groups,
                        const TrainConfig& config,
                        const StopPredicate& stop = {});

// Mean within-group Spearman correlation between RFS-Net scores and the
// ground-truth potential.
double RankingAgreement(const RfsNetParams& params,
                        const std::vector<RfsGroup>& groups);

enum class NetworkKind { kMif, kIf };

struct FinetuneStage {
  int qp = 0;
  std::filesystem::path bundle_path;
  std::optional<std::filesystem::path> init_from;
  TrainingLog log;
};

// Trains the highest QP from scratch with `scratch_iterations` and each
// following QP from its predecessor with `finetune_iterations`. Bundles are
// written to `<output_dir>/<kind>_qp<QP>.mifb`.
std::vector<FinetuneStage> FinetuneChain(
    const std::vector<int>& qps, const TrainConfig& base, NetworkKind kind,
    const std::function<std::vector<PatchSample>(int qp)>& dataset_for_qp,
    const std::filesystem::path& output_dir, long scratch_iterations,
    long finetune_iterations, const MifNetOptions& mif_options = {});

}  // namespace mif

#endif  // MIF_TRAINING_H_
