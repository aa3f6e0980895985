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

#include "mif/training.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "mif/error.h"
#include "mif/metrics.h"
#include "mif/nn/ops.h"

namespace mif {
namespace {

using nn::Var;

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ParseNumber(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError("key '" + key + "' expects a number, got '" + value +
                      "'");
  }
  return v;
}

long ParseInteger(const std::string& key, const std::string& value) {
  const double v = ParseNumber(key, value);
  if (v != std::floor(v)) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + value +
                      "'");
  }
  return static_cast<long>(v);
}

template <typename T>
Var GuidanceOf(nn::Graph<T>& g, const PatchSample& s) {
  const Plane* planes[] = {&s.cu, &s.tu};
  return g.Constant(nn::FromPlanes<T>(planes));
}

// Cycles through a dataset in epochs, reshuffling each epoch.
class BatchSampler {
 public:
  BatchSampler(std::size_t size, std::uint64_t seed)
      : order_(size), rng_(seed) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::shuffle(order_.begin(), order_.end(), rng_);
  }

  std::size_t Next() {
    if (pos_ == order_.size()) {
      std::shuffle(order_.begin(), order_.end(), rng_);
      pos_ = 0;
    }
    return order_[pos_++];
  }

 private:
  std::vector<std::size_t> order_;
  std::mt19937_64 rng_;
  std::size_t pos_ = 0;
};

void CheckFiniteLoss(const char* what, long iteration, double l_int,
                     double l_glo) {
  if (!std::isfinite(l_int) || !std::isfinite(l_glo)) {
    std::ostringstream os;
    os << what << ": non-finite loss at iteration " << iteration
       << " (l_int=" << l_int << ", l_glo=" << l_glo << ")";
    throw NumericError(os.str());
  }
}

template <typename T>
void CheckFiniteParams(const char* what, long iteration,
                       const nn::ParamSet<T>& params) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (T v : params[i].value.values()) {
      if (!std::isfinite(v)) {
        throw NumericError(std::string(what) + ": parameter " + params[i].name +
                           " became non-finite at iteration " +
                           std::to_string(iteration));
      }
    }
  }
}

void RecordTrainingMetadata(ModelBundle& b, const TrainConfig& c,
                            const TrainingLog& log) {
  b.metadata["qp"] = c.qp;
  b.metadata["iterations"] =
      log.entries.empty() ? 0 : log.entries.back().iteration;
  b.metadata["iteration_budget"] = c.iterations;
  b.metadata["learning_rate"] = c.learning_rate;
  b.metadata["learning_rate_schedule"] = "constant";
  b.metadata["batch_size"] = c.batch_size;
  b.metadata["seed"] = c.seed;
  b.metadata["init_from"] =
      c.init_from ? nlohmann::json(c.init_from->string()) : nlohmann::json();
  if (log.phase_switch) b.metadata["phase_switch"] = *log.phase_switch;
  if (!log.entries.empty()) b.metadata["final_loss"] = log.entries.back().loss;
}

void RequireBatch(const char* what, std::size_t dataset, const TrainConfig& c) {
  if (dataset == 0)
    throw ValidationError(std::string(what) + ": empty dataset");
  if (static_cast<std::size_t>(c.batch_size) > dataset) {
    throw ValidationError(std::string(what) + ": batch size " +
                          std::to_string(c.batch_size) +
                          " exceeds dataset size " + std::to_string(dataset));
  }
}

}  // namespace

void TrainConfig::Validate() const {
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (!(learning_rate >= 0.0)) {
    throw ConfigError("learning_rate must be nonnegative");
  }
  if (iterations < 0) throw ConfigError("iterations must be nonnegative");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0,1)");
  }
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (patch_size <= 0 || patch_size % 4 != 0) {
    throw ConfigError("patch_size must be a positive multiple of 4");
  }
  if (patch_stride <= 0) throw ConfigError("patch_stride must be positive");
  if (qp < 0 || qp > 51) throw ConfigError("qp must lie in [0,51]");
  if (convergence_window <= 0) {
    throw ConfigError("convergence_window must be positive");
  }
  if (!(convergence_tolerance >= 0.0)) {
    throw ConfigError("convergence_tolerance must be nonnegative");
  }
  if (!(phase1_budget_fraction >= 0.0 && phase1_budget_fraction <= 1.0)) {
    throw ConfigError("phase1_budget_fraction must lie in [0,1]");
  }
}

TrainConfig ParseTrainConfig(const std::string& text, TrainConfig c) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key=value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key == "batch_size") {
      c.batch_size = static_cast<int>(ParseInteger(key, value));
    } else if (key == "learning_rate") {
      c.learning_rate = ParseNumber(key, value);
    } else if (key == "iterations") {
      c.iterations = ParseInteger(key, value);
    } else if (key == "beta1") {
      c.beta1 = ParseNumber(key, value);
    } else if (key == "beta2") {
      c.beta2 = ParseNumber(key, value);
    } else if (key == "epsilon") {
      c.epsilon = ParseNumber(key, value);
    } else if (key == "patch_size") {
      c.patch_size = static_cast<int>(ParseInteger(key, value));
    } else if (key == "patch_stride") {
      c.patch_stride = static_cast<int>(ParseInteger(key, value));
    } else if (key == "qp") {
      c.qp = static_cast<int>(ParseInteger(key, value));
    } else if (key == "init_from") {
      if (value.empty()) {
        c.init_from.reset();
      } else {
        c.init_from = value;
      }
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(ParseInteger(key, value));
    } else if (key == "convergence_window") {
      c.convergence_window = static_cast<int>(ParseInteger(key, value));
    } else if (key == "convergence_tolerance") {
      c.convergence_tolerance = ParseNumber(key, value);
    } else if (key == "phase1_budget_fraction") {
      c.phase1_budget_fraction = ParseNumber(key, value);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
  }
  c.Validate();
  return c;
}

TrainConfig LoadTrainConfig(const std::filesystem::path& path,
                            TrainConfig defaults) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return ParseTrainConfig(os.str(), defaults);
}

PhaseScheduler::PhaseScheduler(long iterations, int window, double tolerance,
                               double budget_fraction)
    : budget_limit_(static_cast<long>(
          std::ceil(budget_fraction * static_cast<double>(iterations)))),
      window_(window),
      tolerance_(tolerance) {
  if (budget_limit_ <= 0) {
    phase_ = TrainingPhase::kGlobal;
    switch_iteration_ = 1;
  }
}

void PhaseScheduler::Observe(long iteration, double l_int) {
  if (phase_ == TrainingPhase::kGlobal) return;
  window_sum_ += l_int;
  if (++window_count_ == window_) {
    const double mean = window_sum_ / window_;
    if (has_previous_) {
      const double improvement =
          previous_mean_ > 0.0 ? (previous_mean_ - mean) / previous_mean_ : 0.0;
      if (improvement < tolerance_) phase_ = TrainingPhase::kGlobal;
    }
    previous_mean_ = mean;
    has_previous_ = true;
    window_sum_ = 0.0;
    window_count_ = 0;
  }
  if (iteration >= budget_limit_) phase_ = TrainingPhase::kGlobal;
  if (phase_ == TrainingPhase::kGlobal) switch_iteration_ = iteration + 1;
}

void TrainingLog::WriteCsv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write training log " + path.string());
  out << "iteration,phase,l_int,l_glo,loss\n";
  out.precision(10);
  for (const LogEntry& e : entries) {
    out << e.iteration << ','
        << (e.phase == TrainingPhase::kMcFirst ? "MC_FIRST" : "GLOBAL") << ','
        << e.l_int << ',' << e.l_glo << ',' << e.loss << '\n';
  }
  if (!out) throw IoError("failed writing training log " + path.string());
}

template <typename T>
MifLossTerms<T> MifSampleLoss(nn::Graph<T>& g, const MifNet<T>& net,
                              const PatchSample& sample,
                              const LossWeights& weights) {
  const int m = net.options().num_refs;
  if (static_cast<int>(sample.refs.size()) != m) {
    throw ValidationError("mif sample has " +
                          std::to_string(sample.refs.size()) +
                          " references, network expects " + std::to_string(m));
  }
  const Var urf = g.Constant(nn::FromPlane<T>(sample.urf));
  const Var raw = g.Constant(nn::FromPlane<T>(sample.raw));
  std::vector<Var> refs;
  for (const Plane& r : sample.refs)
    refs.push_back(g.Constant(nn::FromPlane<T>(r)));
  const MifOutputs<T> out = net.Forward(g, urf, refs, GuidanceOf(g, sample));

  std::vector<Var> terms;
  for (Var c : out.compensated) terms.push_back(nn::SumSquaredDiff(g, c, urf));
  const Var l_int = nn::LinearCombination(
      g, terms, std::vector<T>(terms.size(), T(1) / static_cast<T>(m)));
  const Var l_glo = nn::SumSquaredDiff(g, out.enhanced, raw);
  const Var total = nn::LinearCombination(
      g, {l_int, l_glo},
      {static_cast<T>(weights.alpha), static_cast<T>(weights.beta)});
  return {total, l_int, l_glo};
}

template <typename T>
Var IfSampleLoss(nn::Graph<T>& g, const IfNet<T>& net,
                 const PatchSample& sample) {
  const Var urf = g.Constant(nn::FromPlane<T>(sample.urf));
  const Var raw = g.Constant(nn::FromPlane<T>(sample.raw));
  const auto out = net.Forward(g, urf, GuidanceOf(g, sample));
  return nn::SumSquaredDiff(g, out.enhanced, raw);
}

template MifLossTerms<float> MifSampleLoss(nn::Graph<float>&,
                                           const MifNet<float>&,
                                           const PatchSample&,
                                           const LossWeights&);
template MifLossTerms<double> MifSampleLoss(nn::Graph<double>&,
                                            const MifNet<double>&,
                                            const PatchSample&,
                                            const LossWeights&);
template Var IfSampleLoss(nn::Graph<float>&, const IfNet<float>&,
                          const PatchSample&);
template Var IfSampleLoss(nn::Graph<double>&, const IfNet<double>&,
                          const PatchSample&);

MifTrainResult TrainMif(const std::vector<PatchSample>& dataset,
                        const TrainConfig& config, const MifNetOptions& options,
                        const StopPredicate& stop) {
  config.Validate();
  RequireBatch("train-mif", dataset.size(), config);
  for (const PatchSample& s : dataset) {
    if (static_cast<int>(s.refs.size()) != options.num_refs) {
      throw ValidationError("train-mif: sample at (" + std::to_string(s.x) +
                            "," + std::to_string(s.y) + ") lacks " +
                            std::to_string(options.num_refs) + " references");
    }
  }
  MifNet<float> net(options, config.seed);
  if (config.init_from) {
    LoadParams(ModelBundle::Load(*config.init_from), net.params());
  }
  AdamOptimizer<float> adam(net.params(), config.Adam());
  PhaseScheduler scheduler(config.iterations, config.convergence_window,
                           config.convergence_tolerance,
                           config.phase1_budget_fraction);
  BatchSampler sampler(dataset.size(), config.seed ^ 0x9e3779b97f4a7c15ULL);
  TrainingLog log;

  for (long it = 1; it <= config.iterations; ++it) {
    const LossWeights weights = LossWeights::ForPhase(scheduler.phase());
    if (weights.phase == TrainingPhase::kGlobal && !log.phase_switch) {
      log.phase_switch = it;
    }
    net.params().ZeroGrad();
    LogEntry entry;
    entry.iteration = it;
    entry.phase = weights.phase;
    for (int b = 0; b < config.batch_size; ++b) {
      nn::Graph<float> g(true);
      const auto terms =
          MifSampleLoss(g, net, dataset[sampler.Next()], weights);
      g.Backward(terms.total);
      entry.l_int += g.value(terms.l_int)[0];
      entry.l_glo += g.value(terms.l_glo)[0];
    }
    CheckFiniteLoss("train-mif", it, entry.l_int, entry.l_glo);
    entry.loss = LossTotal(entry.l_int, entry.l_glo, weights);
    adam.Step();
    CheckFiniteParams("train-mif", it, net.params());
    log.entries.push_back(entry);
    scheduler.Observe(it, entry.l_int);
    if (stop && stop(entry)) break;
  }
  ModelBundle bundle = MakeMifBundle(net, config.qp);
  RecordTrainingMetadata(bundle, config, log);
  return {std::move(net), std::move(log), std::move(bundle)};
}

IfTrainResult TrainIf(const std::vector<PatchSample>& dataset,
                      const TrainConfig& config, const IfNetOptions& options,
                      const StopPredicate& stop) {
  config.Validate();
  RequireBatch("train-if", dataset.size(), config);
  IfNet<float> net(options, config.seed);
  if (config.init_from) {
    LoadParams(ModelBundle::Load(*config.init_from), net.params());
  }
  AdamOptimizer<float> adam(net.params(), config.Adam());
  BatchSampler sampler(dataset.size(), config.seed ^ 0x9e3779b97f4a7c15ULL);
  TrainingLog log;
  log.phase_switch = 1;

  for (long it = 1; it <= config.iterations; ++it) {
    net.params().ZeroGrad();
    LogEntry entry;
    entry.iteration = it;
    for (int b = 0; b < config.batch_size; ++b) {
      nn::Graph<float> g(true);
      const Var loss = IfSampleLoss(g, net, dataset[sampler.Next()]);
      g.Backward(loss);
      entry.l_glo += g.value(loss)[0];
    }
    CheckFiniteLoss("train-if", it, 0.0, entry.l_glo);
    entry.loss = entry.l_glo;
    adam.Step();
    CheckFiniteParams("train-if", it, net.params());
    log.entries.push_back(entry);
    if (stop && stop(entry)) break;
  }
  ModelBundle bundle = MakeIfBundle(net, config.qp);
  RecordTrainingMetadata(bundle, config, log);
  return {std::move(net), std::move(log), std::move(bundle)};
}

RfsTrainResult TrainRfs(const std::vector<RfsGroup>& groups,
                        const TrainConfig& config, const StopPredicate& stop) {
  config.Validate();
  RequireBatch("train-rfs", groups.size(), config);
  for (const RfsGroup& g : groups) {
    if (g.features.empty() || g.features.size() != g.potential.size()) {
      throw ValidationError("train-rfs: malformed group");
    }
  }
  RfsNetParams params = RfsNetParams::Initialize(config.seed);
  if (config.init_from) {
    params = LoadRfsParams(ModelBundle::Load(*config.init_from));
  }
  std::vector<double> flat = params.Flatten();
  std::vector<double> m(flat.size(), 0.0), v(flat.size(), 0.0);
  std::vector<double> grad, batch_grad(flat.size());
  BatchSampler sampler(groups.size(), config.seed ^ 0x9e3779b97f4a7c15ULL);
  RfsTrainResult result{params, {}, {}};

  for (long it = 1; it <= config.iterations; ++it) {
    std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
    double loss = 0.0;
    for (int b = 0; b < config.batch_size; ++b) {
      const RfsGroup& g = groups[sampler.Next()];
      loss += RfsLossAndGradient(params, g.features, g.potential, grad);
      for (std::size_t i = 0; i < grad.size(); ++i) batch_grad[i] += grad[i];
    }
    CheckFiniteLoss("train-rfs", it, 0.0, loss);
    AdamUpdate<double>(flat, batch_grad, m, v, it, config.Adam());
    params = RfsNetParams::Unflatten(flat);
    if (!params.AllFinite()) {
      throw NumericError(
          "train-rfs: parameters became non-finite at "
          "iteration " +
          std::to_string(it));
    }
    result.losses.push_back(loss);
    if (stop) {
      LogEntry e;
      e.iteration = it;
      e.loss = loss;
      if (stop(e)) break;
    }
  }
  result.params = params;
  result.bundle = MakeRfsBundle(params);
  result.bundle.metadata["iterations"] = result.losses.size();
  result.bundle.metadata["learning_rate"] = config.learning_rate;
  result.bundle.metadata["batch_size"] = config.batch_size;
  result.bundle.metadata["seed"] = config.seed;
  return result;
}

double RankingAgreement(const RfsNetParams& params,
                        const std::vector<RfsGroup>& groups) {
  if (groups.empty()) return 0.0;
  double sum = 0.0;
  for (const RfsGroup& g : groups) {
    std::vector<double> scores;
    for (const auto& f : g.features) scores.push_back(RfsRawOutput(params, f));
    sum += SpearmanCorrelation(scores, g.potential);
  }
  return sum / static_cast<double>(groups.size());
}

std::vector<FinetuneStage> FinetuneChain(
    const std::vector<int>& qps, const TrainConfig& base, NetworkKind kind,
    const std::function<std::vector<PatchSample>(int qp)>& dataset_for_qp,
    const std::filesystem::path& output_dir, long scratch_iterations,
    long finetune_iterations, const MifNetOptions& mif_options) {
  if (qps.empty()) throw ValidationError("finetune chain: no QPs given");
  for (std::size_t i = 1; i < qps.size(); ++i) {
    if (qps[i] >= qps[i - 1]) {
      throw ValidationError("finetune chain: QPs must be strictly descending");
    }
  }
  if (base.init_from && !std::filesystem::exists(*base.init_from)) {
    throw ValidationError("finetune chain: donor bundle " +
                          base.init_from->string() + " does not exist");
  }
  std::filesystem::create_directories(output_dir);
  const std::string prefix = kind == NetworkKind::kMif ? "mif" : "if";
  std::vector<FinetuneStage> stages;
  std::optional<std::filesystem::path> donor = base.init_from;
  for (std::size_t i = 0; i < qps.size(); ++i) {
    TrainConfig c = base;
    c.qp = qps[i];
    c.init_from = donor;
    c.iterations = donor ? finetune_iterations : scratch_iterations;
    if (donor && !std::filesystem::exists(*donor)) {
      throw ValidationError("finetune chain: donor bundle " + donor->string() +
                            " does not exist");
    }
    const std::vector<PatchSample> data = dataset_for_qp(qps[i]);
    FinetuneStage stage;
    stage.qp = qps[i];
    stage.init_from = donor;
    stage.bundle_path =
        output_dir / (prefix + "_qp" + std::to_string(qps[i]) + ".mifb");
    ModelBundle bundle;
    if (kind == NetworkKind::kMif) {
      MifTrainResult r = TrainMif(data, c, mif_options);
      bundle = std::move(r.bundle);
      stage.log = std::move(r.log);
    } else {
      IfTrainResult r = TrainIf(data, c);
      bundle = std::move(r.bundle);
      stage.log = std::move(r.log);
    }
    bundle.metadata["stage"] = donor ? "fine-tune" : "scratch";
    bundle.Save(stage.bundle_path);
    donor = stage.bundle_path;
    stages.push_back(std::move(stage));
  }
  return stages;
}

}  // namespace mif
