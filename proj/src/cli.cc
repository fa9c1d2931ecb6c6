// Copyright 2026 The Hiertype Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hiertype/cli.h"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "hiertype/checkpoint.h"
#include "hiertype/corpus.h"
#include "hiertype/errors.h"
#include "hiertype/eval.h"
#include "hiertype/hierarchy.h"
#include "hiertype/logging.h"
#include "hiertype/model.h"
#include "hiertype/training.h"
#include "text_util.h"

namespace hiertype {

namespace {

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write {}", path));
  return out;
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path));
  return in;
}

struct BuildHierarchyArgs {
  std::vector<std::string> links;
  std::string out;
};

void RunBuildHierarchy(const BuildHierarchyArgs &a, std::ostream &out) {
  HierarchyBuilder builder;
  for (const auto &path : a.links) {
    auto in = OpenInput(path);
    ParseHierarchyInto(builder, in, path);
  }
  const TypeHierarchy h = std::move(builder).Build();
  auto file = OpenOutput(a.out);
  WriteHierarchy(h, file);
  out << FormatStatsLine(ComputeHierarchyStats(h)) << "\n";
}

struct StatsArgs {
  std::string hierarchy;
  std::string format = "line";
};

void RunStats(const StatsArgs &a, std::ostream &out) {
  const HierarchyStats stats = ComputeHierarchyStats(LoadHierarchy(a.hierarchy));
  if (a.format == "record") {
    out << FormatStatsRecord(stats);
  } else {
    out << FormatStatsLine(stats) << "\n";
  }
}

struct DeriveLinksArgs {
  std::string entities;
  double threshold = 0.7;
  std::string allow;
  std::string out;
};

void RunDeriveLinks(const DeriveLinksArgs &a, std::ostream &out) {
  const EntityTypeTable table = LoadEntityTypeTable(a.entities);
  LinkFilter filter;
  std::set<std::pair<std::string, std::string>> allowed;
  if (!a.allow.empty()) {
    auto in = OpenInput(a.allow);
    std::string line;
    while (std::getline(in, line)) {
      StripCarriageReturn(line);
      if (line.empty() || line[0] == '#') continue;
      const auto fields = SplitString(line, '\t');
      if (fields.size() < 2) continue;
      allowed.emplace(fields[0], fields[1]);
    }
    filter = [&allowed](const std::string &child, const std::string &parent) {
      return allowed.contains({child, parent});
    };
  }
  const auto links = DeriveCooccurrenceLinks(table, a.threshold, filter);
  auto file = OpenOutput(a.out);
  WriteNamedLinks(links, file);
  out << "links=" << links.size() << "\n";
}

struct LabelArgs {
  std::string hierarchy;
  std::string corpus;
  std::string entities;
  std::string out;
};

void RunLabel(const LabelArgs &a, std::ostream &out) {
  const TypeHierarchy h = LoadHierarchy(a.hierarchy);
  const auto mentions = LoadMentions(a.corpus);
  std::optional<EntityTypeTable> table;
  if (!a.entities.empty()) table = LoadEntityTypeTable(a.entities);

  std::vector<LabeledExample> labeled;
  size_t skipped = 0;
  for (const Mention &m : mentions) {
    std::vector<std::string> raw = m.types;
    if (table) {
      for (const auto &t : table->types_of(m.entity_id)) raw.push_back(t);
    }
    if (auto ex = DistantLabel(h, raw, m)) {
      labeled.push_back(std::move(*ex));
    } else {
      ++skipped;
      Log().debug("skipping mention of {}: no type in the hierarchy", m.entity_id);
    }
  }
  auto file = OpenOutput(a.out);
  WriteLabeledExamples(h, labeled, file);
  double total = 0.0;
  for (const auto &ex : labeled) total += static_cast<double>(ex.gold_types.size());
  const double mean = labeled.empty() ? 0.0 : total / static_cast<double>(labeled.size());
  out << "labeled=" << labeled.size() << " skipped=" << skipped
      << " mean_types=" << FormatReal(mean) << "\n";
}

struct TrainArgs {
  std::string config;
  std::string hierarchy;
  std::string train;
  std::string dev;
  std::string out;
  std::string history;
  std::string embeddings;
  std::optional<uint64_t> seed;
  std::vector<std::string> overrides;
};

void RunTrain(const TrainArgs &a, std::ostream &out) {
  TrainConfig config = LoadTrainConfig(a.config);
  for (const auto &kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(fmt::format("--set expects key=value, got '{}'", kv));
    }
    SetConfigValue(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.seed) config.seed = *a.seed;
  if (!a.embeddings.empty()) config.embeddings = a.embeddings;
  if (config.embeddings.empty()) {
    throw DataError("no embeddings file: set embeddings= in the config or pass --embeddings");
  }
  config.Validate();

  const TypeHierarchy h = LoadHierarchy(a.hierarchy);
  const EmbeddingTable emb = LoadEmbeddings(config.embeddings, config.dim);
  const auto train_examples = LoadLabeledExamples(h, a.train);
  const auto dev_examples = LoadLabeledExamples(h, a.dev);
  const auto train = PrepareExamples(train_examples, emb);
  const auto dev = PrepareExamples(dev_examples, emb);

  const TrainResult result = Train(train, dev, h, config);
  Checkpoint ckpt{result.spec, std::vector<std::string>(h.names().begin(), h.names().end()),
                  config.embeddings, result.params};
  SaveCheckpoint(ckpt, a.out);
  const std::string history_path = a.history.empty() ? a.out + ".history.tsv" : a.history;
  auto history = OpenOutput(history_path);
  WriteMetricHistory(result.history, history);
  out << "epochs=" << result.history.size() << " best_epoch=" << result.best_epoch
      << " dev_map=" << FormatReal(result.best_dev_map) << "\n";
}

void CheckTypesMatch(const Checkpoint &ckpt, const TypeHierarchy &h) {
  if (ckpt.type_names.size() != h.size() ||
      !std::equal(ckpt.type_names.begin(), ckpt.type_names.end(), h.names().begin())) {
    throw DataError("hierarchy types do not match the checkpoint");
  }
}

struct EvalArgs {
  std::string checkpoint;
  std::string corpus;
  std::string hierarchy;
  std::string embeddings;
  std::string per_mention;
};

void RunEval(const EvalArgs &a, std::ostream &out) {
  const Checkpoint ckpt = LoadCheckpoint(a.checkpoint);
  const TypeHierarchy h = LoadHierarchy(a.hierarchy);
  CheckTypesMatch(ckpt, h);
  const std::string emb_path = a.embeddings.empty() ? ckpt.embeddings : a.embeddings;
  const EmbeddingTable emb = LoadEmbeddings(emb_path, ckpt.spec.dim);
  const auto examples = PrepareExamples(LoadLabeledExamples(h, a.corpus), emb);
  const EvalReport report = EvaluateModel(ckpt.params, ckpt.spec, examples);
  WriteMapSummary(report, out);
  if (!a.per_mention.empty()) {
    auto file = OpenOutput(a.per_mention);
    WritePerMentionAp(report, file);
  }
}

struct ScoreArgs {
  std::string checkpoint;
  std::string text;
  std::vector<size_t> span;
  size_t top = 10;
  std::string embeddings;
};

void RunScore(const ScoreArgs &a, std::ostream &out) {
  const Checkpoint ckpt = LoadCheckpoint(a.checkpoint);
  const std::string emb_path = a.embeddings.empty() ? ckpt.embeddings : a.embeddings;
  const EmbeddingTable emb = LoadEmbeddings(emb_path, ckpt.spec.dim);
  Mention m;
  m.tokens = SplitWhitespace(a.text);
  m.span_first = a.span.at(0);
  m.span_last = a.span.at(1);
  const Vec x = EncodeMention(ckpt.params.encoder, m, emb, ckpt.spec.encoder_mode);
  const auto ranked = RankTypes(ckpt.spec.mention_score, x, ckpt.params.type_embeddings,
                                MentionBilinear(ckpt.params, ckpt.spec));
  for (size_t i = 0; i < std::min(a.top, ranked.size()); ++i) {
    out << i + 1 << '\t' << ckpt.type_names[ranked[i].type.index()] << '\t'
        << FormatReal(ranked[i].score) << "\n";
  }
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  ConfigureLogging();
  CLI::App app{"Hierarchy-aware fine-grained entity typing"};
  app.name(args.empty() ? "hiertype" : args[0]);
  app.require_subcommand(1, 1);

  BuildHierarchyArgs build;
  auto *build_cmd = app.add_subcommand("build-hierarchy",
                                       "Validate link files and write a closed hierarchy");
  build_cmd->add_option("--links", build.links, "Link file (repeatable)")->required();
  build_cmd->add_option("--out", build.out, "Output hierarchy file")->required();

  StatsArgs stats;
  auto *stats_cmd = app.add_subcommand("stats", "Print hierarchy statistics");
  stats_cmd->add_option("--hierarchy", stats.hierarchy)->required();
  stats_cmd->add_option("--format", stats.format)
      ->check(CLI::IsMember({"line", "record"}));

  DeriveLinksArgs derive;
  auto *derive_cmd = app.add_subcommand(
      "derive-links", "Derive fb_fb links from entity type co-occurrence");
  derive_cmd->add_option("--entities", derive.entities)->required();
  derive_cmd->add_option("--threshold", derive.threshold)
      ->check(CLI::Range(0.0, 1.0));
  derive_cmd->add_option("--allow", derive.allow, "Accepted child<TAB>parent pairs");
  derive_cmd->add_option("--out", derive.out)->required();

  LabelArgs label;
  auto *label_cmd = app.add_subcommand("label", "Distant-supervision labeling");
  label_cmd->add_option("--hierarchy", label.hierarchy)->required();
  label_cmd->add_option("--corpus", label.corpus)->required();
  label_cmd->add_option("--entities", label.entities, "Entity type table");
  label_cmd->add_option("--out", label.out)->required();

  TrainArgs train;
  auto *train_cmd = app.add_subcommand("train", "Train a typing model");
  train_cmd->add_option("--config", train.config)->required();
  train_cmd->add_option("--hierarchy", train.hierarchy)->required();
  train_cmd->add_option("--train", train.train)->required();
  train_cmd->add_option("--dev", train.dev)->required();
  train_cmd->add_option("--out", train.out)->required();
  train_cmd->add_option("--history", train.history, "Metric history (default <out>.history.tsv)");
  train_cmd->add_option("--embeddings", train.embeddings);
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--set", train.overrides, "Override a config key (key=value)");

  EvalArgs eval;
  auto *eval_cmd = app.add_subcommand("eval", "Mean average precision on a labeled corpus");
  eval_cmd->add_option("--checkpoint", eval.checkpoint)->required();
  eval_cmd->add_option("--corpus", eval.corpus)->required();
  eval_cmd->add_option("--hierarchy", eval.hierarchy)->required();
  eval_cmd->add_option("--embeddings", eval.embeddings);
  eval_cmd->add_option("--per-mention", eval.per_mention, "Per-mention AP output");

  ScoreArgs score;
  auto *score_cmd = app.add_subcommand("score", "Rank types for one mention");
  score_cmd->add_option("--checkpoint", score.checkpoint)->required();
  score_cmd->add_option("--text", score.text)->required();
  score_cmd->add_option("--span", score.span)->expected(2)->required();
  score_cmd->add_option("--top", score.top);
  score_cmd->add_option("--embeddings", score.embeddings);

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*build_cmd) RunBuildHierarchy(build, out);
    if (*stats_cmd) RunStats(stats, out);
    if (*derive_cmd) RunDeriveLinks(derive, out);
    if (*label_cmd) RunLabel(label, out);
    if (*train_cmd) RunTrain(train, out);
    if (*eval_cmd) RunEval(eval, out);
    if (*score_cmd) RunScore(score, out);
  } catch (const DataError &e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument &e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace hiertype
