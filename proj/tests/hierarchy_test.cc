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

#include "hiertype/hierarchy.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "hiertype/errors.h"
#include "hiertype/rng.h"
#include "oracles.h"

namespace hiertype {
namespace {

TypeHierarchy FromText(const std::string &text) {
  std::istringstream in(text);
  return ParseHierarchy(in, "test");
}

std::set<std::string> Names(const TypeHierarchy &h, std::span<const TypeId> ids) {
  std::set<std::string> out;
  for (TypeId t : ids) out.insert(h.name(t));
  return out;
}

std::set<std::string> AncestorNames(const TypeHierarchy &h, const std::string &name) {
  return Names(h, h.ancestors(h.Lookup(name)));
}

const char kChain[] = "B\tA\tchild_of\nC\tB\tchild_of\n";

TEST_CASE("chain closure") {
  const TypeHierarchy h = FromText(kChain);
  CHECK(h.size() == 3);
  CHECK(AncestorNames(h, "C") == std::set<std::string>{"A", "B"});
  CHECK(AncestorNames(h, "A").empty());
  CHECK(h.depth(h.Lookup("C")) == 3);
  CHECK(h.depth(h.Lookup("A")) == 1);
}

TEST_CASE("indices follow first appearance") {
  const TypeHierarchy h = FromText(kChain);
  CHECK(h.Lookup("B").value == 0);
  CHECK(h.Lookup("A").value == 1);
  CHECK(h.Lookup("C").value == 2);
}

TEST_CASE("two-cycle is rejected") {
  CHECK_THROWS_AS(FromText("A\tB\tchild_of\nB\tA\tchild_of\n"), CycleError);
  try {
    FromText("A\tB\tchild_of\nB\tA\tchild_of\n");
  } catch (const CycleError &e) {
    REQUIRE(e.cycle().size() == 3);
    CHECK(e.cycle().front() == e.cycle().back());
  }
}

TEST_CASE("parent_of is reversed") {
  const TypeHierarchy h = FromText("A\tB\tparent_of\n");
  CHECK(AncestorNames(h, "B") == std::set<std::string>{"A"});
  CHECK(h.links()[0].kind == LinkKind::kChildOf);
}

TEST_CASE("diamond ancestors agree with path enumeration") {
  const TypeHierarchy h =
      FromText("D\tB\tchild_of\nD\tC\tchild_of\nB\tA\tchild_of\nC\tA\tchild_of\n");
  CHECK(AncestorNames(h, "D") == std::set<std::string>{"A", "B", "C"});
  CHECK(h.ancestors(h.Lookup("D")).size() == 3);

  std::vector<std::vector<size_t>> parents(h.size());
  for (const Link &l : h.links()) parents[l.child.index()].push_back(l.parent.index());
  for (uint32_t t = 0; t < h.size(); ++t) {
    std::set<size_t> got;
    for (TypeId a : h.ancestors(TypeId{t})) got.insert(a.index());
    CHECK(got == oracle::Reachable(parents, t));
  }
}

TEST_CASE("closure of sets") {
  const TypeHierarchy h = FromText(kChain);
  CHECK(h.Closure({}).empty());
  const TypeId c = h.Lookup("C");
  CHECK(Names(h, h.Closure(std::vector<TypeId>{c})) == std::set<std::string>{"A", "B", "C"});
}

TEST_CASE("unknown type ids are rejected") {
  const TypeHierarchy h = FromText(kChain);
  CHECK_THROWS_AS(h.ancestors(TypeId{99}), UnknownTypeError);
  CHECK_THROWS_AS(h.Lookup("Z"), UnknownTypeError);
}

TEST_CASE("duplicate links warn and are deduplicated") {
  const TypeHierarchy h = FromText("B\tA\tchild_of\nB\tA\tchild_of\n");
  CHECK(h.links().size() == 1);
  CHECK(h.warnings().size() == 1);
}

TEST_CASE("parse errors name the line") {
  try {
    FromText("B\tA\tchild_of\nB\tA\tsibling_of\n");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("equivalent types share ancestors and include each other") {
  const TypeHierarchy h = FromText("B\tA\tchild_of\nC\tB\tequivalence\nD\tC\tchild_of\n");
  CHECK(AncestorNames(h, "B") == std::set<std::string>{"A", "B", "C"});
  CHECK(AncestorNames(h, "C") == std::set<std::string>{"A", "B", "C"});
  CHECK(AncestorNames(h, "D") == std::set<std::string>{"A", "B", "C"});
  CHECK(h.equivalence_class(h.Lookup("B")) == h.equivalence_class(h.Lookup("C")));
}

TEST_CASE("write and parse round trip") {
  const TypeHierarchy h =
      FromText("D\tB\tchild_of\nD\tC\tfb_fb\nB\tA\tchild_of\nE\n");
  std::ostringstream out;
  WriteHierarchy(h, out);
  const TypeHierarchy back = FromText(out.str());
  REQUIRE(back.size() == h.size());
  for (uint32_t t = 0; t < h.size(); ++t) {
    CHECK(back.name(TypeId{t}) == h.name(TypeId{t}));
    CHECK(Names(back, back.ancestors(TypeId{t})) == Names(h, h.ancestors(TypeId{t})));
  }
  CHECK(std::equal(back.links().begin(), back.links().end(), h.links().begin(),
                   h.links().end()));
}

// Random DAG: edges only go from higher to lower index, so it is acyclic.
struct RandomDag {
  size_t n;
  std::vector<std::vector<size_t>> parents;
  std::string text;
};

RandomDag MakeDag(Rng &rng, size_t n, double p) {
  RandomDag dag{n, std::vector<std::vector<size_t>>(n), ""};
  for (size_t i = 0; i < n; ++i) dag.text += "t" + std::to_string(i) + "\n";
  for (size_t c = 1; c < n; ++c) {
    for (size_t q = 0; q < c; ++q) {
      if (!rng.Bernoulli(p)) continue;
      dag.parents[c].push_back(q);
      dag.text += "t" + std::to_string(c) + "\tt" + std::to_string(q) + "\tchild_of\n";
    }
  }
  return dag;
}

TEST_CASE("closure properties on random DAGs") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const RandomDag dag = MakeDag(rng, 1 + rng.Below(50), 0.1);
    const TypeHierarchy h = FromText(dag.text);
    for (uint32_t t = 0; t < h.size(); ++t) {
      std::set<size_t> got;
      for (TypeId a : h.ancestors(TypeId{t})) got.insert(a.index());
      REQUIRE(got == oracle::Reachable(dag.parents, t));
    }
    std::vector<TypeId> s, bigger;
    for (uint32_t t = 0; t < h.size(); ++t) {
      if (rng.Bernoulli(0.2)) s.push_back(TypeId{t});
    }
    bigger = s;
    for (uint32_t t = 0; t < h.size(); ++t) {
      if (rng.Bernoulli(0.2)) bigger.push_back(TypeId{t});
    }
    std::sort(bigger.begin(), bigger.end());
    bigger.erase(std::unique(bigger.begin(), bigger.end()), bigger.end());
    const auto once = ClosureOfSet(h, s);
    CHECK(ClosureOfSet(h, once) == once);
    const auto big = ClosureOfSet(h, bigger);
    CHECK(std::includes(big.begin(), big.end(), once.begin(), once.end()));
  }
}

TEST_CASE("a back edge in a random DAG is rejected") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    RandomDag dag = MakeDag(rng, 3 + rng.Below(20), 0.2);
    if (dag.parents[1].empty()) {
      dag.parents[1].push_back(0);
      dag.text += "t1\tt0\tchild_of\n";
    }
    // Close a cycle along an existing edge c -> p.
    for (size_t c = dag.n; c-- > 0;) {
      if (dag.parents[c].empty()) continue;
      const size_t p = dag.parents[c][0];
      dag.text += "t" + std::to_string(p) + "\tt" + std::to_string(c) + "\tchild_of\n";
      dag.parents[p].push_back(c);
      break;
    }
    CHECK(oracle::HasCycle(dag.parents));
    CHECK_THROWS_AS(FromText(dag.text), CycleError);
  }
}

TEST_CASE("candidate synsets by substring") {
  const std::vector<std::string> synsets = {"person.n.01", "stadium.n.01"};
  CHECK(CandidateSynsets("/people/person", synsets) == std::vector<std::string>{"person.n.01"});
  const std::vector<std::string> artists = {"artist.n.01", "creative_person.n.01"};
  CHECK(CandidateSynsets("/music/artist", artists) == std::vector<std::string>{"artist.n.01"});
  CHECK(CandidateSynsets("/base/x", {}).empty());
  CHECK(NormalizeTypeName("/film/Film_Director") == "film director");
  CHECK(NormalizeSynsetName("film_maker.n.01") == "film maker");
}

TEST_CASE("co-occurrence fixture") {
  EntityTypeTable table;
  table.Add("e1", "A");
  table.Add("e1", "B");
  table.Add("e2", "A");
  table.Add("e2", "B");
  table.Add("e3", "A");
  const auto links = DeriveCooccurrenceLinks(table, 0.7);
  REQUIRE(links.size() == 1);
  CHECK(links[0] == NamedLink{"B", "A", LinkKind::kFbFb});
  CHECK(DeriveCooccurrenceLinks(table, 0.6).size() == 2);
  CHECK(DeriveCooccurrenceLinks(EntityTypeTable{}, 0.7).empty());
  CHECK_THROWS_AS(DeriveCooccurrenceLinks(table, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DeriveCooccurrenceLinks(table, 1.5), std::invalid_argument);
}

TEST_CASE("co-occurrence allow-list filters links") {
  EntityTypeTable table;
  table.Add("e1", "A");
  table.Add("e1", "B");
  const auto all = DeriveCooccurrenceLinks(table, 1.0);
  CHECK(all.size() == 2);
  const auto some = DeriveCooccurrenceLinks(
      table, 1.0, [](const std::string &c, const std::string &) { return c == "A"; });
  REQUIRE(some.size() == 1);
  CHECK(some[0].child == "A");
}

TEST_CASE("threshold 1.0 links equal set inclusion") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::map<std::string, std::set<std::string>> raw;
    EntityTypeTable table;
    const size_t entities = 1 + rng.Below(8), types = 1 + rng.Below(5);
    for (size_t e = 0; e < entities; ++e) {
      for (size_t t = 0; t < types; ++t) {
        if (!rng.Bernoulli(0.5)) continue;
        const std::string en = "e" + std::to_string(e), tn = "T" + std::to_string(t);
        raw[en].insert(tn);
        table.Add(en, tn);
      }
    }
    std::set<std::pair<std::string, std::string>> got;
    for (const auto &l : DeriveCooccurrenceLinks(table, 1.0)) got.emplace(l.child, l.parent);
    CHECK(got == oracle::InclusionLinks(raw));
  }
}

TEST_CASE("entity type file") {
  std::istringstream in("e1\tA,B\ne2\tA\n# comment\ne1\tB\n");
  const EntityTypeTable table = ParseEntityTypeTable(in, "test");
  CHECK(table.entity_count() == 2);
  CHECK(table.types_of("e1") == std::vector<std::string>{"A", "B"});
  CHECK(table.Has("e2"));
  CHECK_FALSE(table.Has("e3"));
}

TEST_CASE("stats") {
  const HierarchyStats single = ComputeHierarchyStats(FromText("A\n"));
  CHECK(single.type_count == 1);
  CHECK(single.max_depth == 1);
  CHECK(single.mean_depth == 1.0);
  CHECK(single.link_counts.empty());

  const HierarchyStats chain = ComputeHierarchyStats(FromText(kChain));
  CHECK(chain.max_depth == 3);
  CHECK(chain.mean_depth == doctest::Approx(2.0));
  CHECK(chain.link_counts.at("child_of") == 2);
  CHECK(FormatStatsLine(ComputeHierarchyStats(FromText("B\tA\tchild_of\n"))) ==
        "type_count=2 max_depth=2 mean_depth=1.5 links.child_of=1");
}

}  // namespace
}  // namespace hiertype
