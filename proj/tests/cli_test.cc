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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "hiertype/checkpoint.h"

namespace hiertype {
namespace {

namespace fs = std::filesystem;

class Workspace {
 public:
  Workspace() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("hiertype_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  std::string Write(const std::string &name, const std::string &content) const {
    std::ofstream(dir_ / name) << content;
    return Path(name);
  }
  std::string Path(const std::string &name) const { return (dir_ / name).string(); }
  std::string Read(const std::string &name) const {
    std::ifstream in(dir_ / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

 private:
  fs::path dir_;
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Run(std::vector<std::string> args) {
  args.insert(args.begin(), "hiertype");
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> Column(const std::string &text, size_t column) {
  std::vector<std::string> values;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::istringstream fields(line);
    std::string field;
    for (size_t i = 0; i <= column; ++i) std::getline(fields, field, '\t');
    values.push_back(field);
  }
  return values;
}

// Three types where B is a child of A; a zero encoder outputs its bias,
// which the dot scorer ranks A, B, C.
std::string PerfectCheckpoint(const Workspace &ws) {
  Checkpoint ckpt;
  ckpt.spec.dim = 2;
  ckpt.spec.filter_width = 1;
  ckpt.spec.num_types = 3;
  ckpt.spec.mention_score.function = ScoreFunction::kDot;
  ckpt.type_names = {"A", "B", "C"};
  ckpt.embeddings = ws.Write("emb.txt", "paris 0.5 0.5\nvisited 1 0\n");
  ckpt.params = ZeroParams(ckpt.spec);
  ckpt.params.encoder.output_bias.values()[0] = 1.0;
  auto emb = ckpt.params.type_embeddings.values();
  emb[0] = 1.0;
  emb[2] = 0.5;
  emb[4] = -1.0;
  SaveCheckpoint(ckpt, ws.Path("model.ckpt"));
  return ws.Path("model.ckpt");
}

TEST_CASE("stats on a chain") {
  Workspace ws;
  const auto h = ws.Write("h.tsv", "B\tA\tchild_of\n");
  const Result r = Run({"stats", "--hierarchy", h});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("type_count=2 max_depth=2") == 0);
}

TEST_CASE("build-hierarchy merges link files") {
  Workspace ws;
  const auto a = ws.Write("a.tsv", "B\tA\tchild_of\n");
  const auto b = ws.Write("b.tsv", "C\tB\tfb_fb\n");
  const Result r = Run({"build-hierarchy", "--links", a, "--links", b, "--out", ws.Path("h.tsv")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("type_count=3 max_depth=3") == 0);
  const Result again = Run({"stats", "--hierarchy", ws.Path("h.tsv")});
  CHECK(again.out == r.out);

  const auto cyclic = ws.Write("c.tsv", "A\tC\tchild_of\n");
  CHECK(Run({"build-hierarchy", "--links", a, "--links", b, "--links", cyclic, "--out",
             ws.Path("bad.tsv")})
            .code == kExitData);
}

TEST_CASE("derive-links on the hand-counted table") {
  Workspace ws;
  const auto e = ws.Write("e.tsv", "e1\tA,B\ne2\tA,B\ne3\tA\n");
  const Result r =
      Run({"derive-links", "--entities", e, "--threshold", "0.7", "--out", ws.Path("l.tsv")});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "links=1\n");
  CHECK(ws.Read("l.tsv").find("B\tA\tfb_fb") != std::string::npos);

  const auto allow = ws.Write("allow.tsv", "C\tA\n");
  const Result none = Run({"derive-links", "--entities", e, "--threshold", "0.7", "--allow", allow,
                           "--out", ws.Path("l2.tsv")});
  CHECK(none.out == "links=0\n");
}

TEST_CASE("label counts and eval of a perfect model") {
  Workspace ws;
  const auto h = ws.Write("h.tsv", "A\nB\nC\nB\tA\tchild_of\n");
  const auto corpus = ws.Write("c.tsv",
                               "e1\t1\t1\tvisited paris\tB\n"
                               "e2\t0\t0\tparis\n"
                               "e3\t0\t0\tparis\tZ\n");
  const auto entities = ws.Write("e.tsv", "e2\tB\n");
  const Result label = Run({"label", "--hierarchy", h, "--corpus", corpus, "--entities", entities,
                            "--out", ws.Path("labeled.tsv")});
  REQUIRE(label.code == kExitOk);
  CHECK(label.out == "labeled=2 skipped=1 mean_types=2.0\n");

  const auto ckpt = PerfectCheckpoint(ws);
  const Result eval = Run({"eval", "--checkpoint", ckpt, "--corpus", ws.Path("labeled.tsv"),
                           "--hierarchy", h, "--per-mention", ws.Path("ap.tsv")});
  CHECK_MESSAGE(eval.code == kExitOk, eval.err);
  CHECK(eval.out == "map=1.0\n");
  CHECK(ws.Read("ap.tsv") == "0\t1.0\n1\t1.0\n");

  const Result score =
      Run({"score", "--checkpoint", ckpt, "--text", "visited paris", "--span", "1", "1"});
  CHECK(score.code == kExitOk);
  CHECK(Column(score.out, 0) == std::vector<std::string>{"1", "2", "3"});
  CHECK(Column(score.out, 1) == std::vector<std::string>{"A", "B", "C"});
  const Result top =
      Run({"score", "--checkpoint", ckpt, "--text", "paris", "--span", "0", "0", "--top", "1"});
  CHECK(Column(top.out, 1) == std::vector<std::string>{"A"});
}

TEST_CASE("exit codes") {
  Workspace ws;
  CHECK(Run({"--help"}).code == kExitOk);
  CHECK(Run({}).code == kExitUsage);
  CHECK(Run({"stats", "--bogus"}).code == kExitUsage);
  CHECK(Run({"frobnicate"}).code == kExitUsage);
  const Result missing = Run({"stats", "--hierarchy", ws.Path("absent.tsv")});
  CHECK(missing.code == kExitData);
  CHECK_FALSE(missing.err.empty());
  const auto bad = ws.Write("bad.tsv", "A\tB\tchild_of\tx\n");
  CHECK(Run({"stats", "--hierarchy", bad}).code == kExitData);
  CHECK(Run({"eval", "--checkpoint", ws.Write("junk.ckpt", "junk"), "--corpus", bad,
             "--hierarchy", bad})
            .code == kExitData);
}

}  // namespace
}  // namespace hiertype
