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
#include <bit>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "hiertype/errors.h"
#include "hiertype/logging.h"
#include "text_util.h"

namespace hiertype {

std::string_view LinkKindName(LinkKind kind) {
  switch (kind) {
    case LinkKind::kChildOf:
      return "child_of";
    case LinkKind::kEquivalence:
      return "equivalence";
    case LinkKind::kFbFb:
      return "fb_fb";
    case LinkKind::kWordnetHypernym:
      return "wordnet_hypernym";
  }
  return "?";
}

std::optional<TypeId> TypeHierarchy::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TypeId TypeHierarchy::Lookup(std::string_view name) const {
  auto t = Find(name);
  if (!t) throw UnknownTypeError(std::string(name));
  return *t;
}

std::span<const TypeId> TypeHierarchy::ancestors(TypeId t) const {
  if (!Contains(t)) {
    throw UnknownTypeError(fmt::format("#{}", t.value));
  }
  return ancestors_[t.index()];
}

std::vector<TypeId> TypeHierarchy::Closure(std::span<const TypeId> ts) const {
  std::vector<TypeId> out;
  for (TypeId t : ts) {
    auto anc = ancestors(t);
    out.push_back(t);
    out.insert(out.end(), anc.begin(), anc.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<TypeId> ClosureOfSet(const TypeHierarchy &h,
                                 std::span<const TypeId> ts) {
  return h.Closure(ts);
}

TypeId HierarchyBuilder::AddType(std::string_view name) {
  auto [it, inserted] = h_.index_.try_emplace(
      std::string(name), TypeId{static_cast<uint32_t>(h_.names_.size())});
  if (inserted) h_.names_.emplace_back(name);
  return it->second;
}

void HierarchyBuilder::AddLink(std::string_view child, std::string_view parent,
                               LinkKind kind) {
  if (child == parent && kind != LinkKind::kEquivalence) {
    throw std::invalid_argument(
        fmt::format("type {} cannot be its own parent", child));
  }
  TypeId c = AddType(child);
  TypeId p = AddType(parent);
  uint32_t a = c.value, b = p.value;
  if (kind == LinkKind::kEquivalence && a > b) std::swap(a, b);
  if (!seen_links_.emplace(a, b, static_cast<int>(kind)).second) {
    h_.warnings_.push_back(fmt::format("duplicate link {} -> {} ({})", child,
                                       parent, LinkKindName(kind)));
    return;
  }
  h_.links_.push_back(Link{c, p, kind});
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }
  uint32_t Find(uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller index becomes the root.
  void Union(uint32_t a, uint32_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<uint32_t> parent_;
};

}  // namespace

TypeHierarchy HierarchyBuilder::Build() && {
  TypeHierarchy h = std::move(h_);
  const size_t n = h.names_.size();

  UnionFind classes(n);
  for (const Link &l : h.links_) {
    if (l.kind == LinkKind::kEquivalence) classes.Union(l.child.value, l.parent.value);
  }
  h.class_of_.resize(n);
  std::vector<uint32_t> class_id(n, UINT32_MAX);
  std::vector<std::vector<uint32_t>> members;
  for (uint32_t t = 0; t < n; ++t) {
    const uint32_t root = classes.Find(t);
    h.class_of_[t] = root;
    if (class_id[root] == UINT32_MAX) {
      class_id[root] = static_cast<uint32_t>(members.size());
      members.emplace_back();
    }
    members[class_id[root]].push_back(t);
  }
  const size_t num_classes = members.size();

  std::vector<std::vector<uint32_t>> parents(num_classes), children(num_classes);
  for (const Link &l : h.links_) {
    if (l.kind == LinkKind::kEquivalence) continue;
    const uint32_t c = class_id[h.class_of_[l.child.index()]];
    const uint32_t p = class_id[h.class_of_[l.parent.index()]];
    if (c == p) {
      h.warnings_.push_back(fmt::format(
          "link {} -> {} joins two equivalent types; ignored for closure",
          h.name(l.child), h.name(l.parent)));
      continue;
    }
    parents[c].push_back(p);
    children[p].push_back(c);
  }
  for (auto *adj : {&parents, &children}) {
    for (auto &list : *adj) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }

  // Kahn's algorithm, parents before children.
  std::vector<size_t> pending(num_classes);
  std::vector<uint32_t> order;
  order.reserve(num_classes);
  for (uint32_t c = 0; c < num_classes; ++c) {
    pending[c] = parents[c].size();
    if (pending[c] == 0) order.push_back(c);
  }
  for (size_t i = 0; i < order.size(); ++i) {
    for (uint32_t child : children[order[i]]) {
      if (--pending[child] == 0) order.push_back(child);
    }
  }
  if (order.size() != num_classes) {
    // Every unfinished class has an unfinished parent; walk until a repeat.
    std::vector<bool> done(num_classes, false);
    for (uint32_t c : order) done[c] = true;
    uint32_t start = 0;
    while (done[start]) ++start;
    std::vector<int> position(num_classes, -1);
    std::vector<uint32_t> path;
    uint32_t cur = start;
    while (position[cur] < 0) {
      position[cur] = static_cast<int>(path.size());
      path.push_back(cur);
      for (uint32_t p : parents[cur]) {
        if (!done[p]) {
          cur = p;
          break;
        }
      }
    }
    std::vector<std::string> cycle;
    for (size_t i = static_cast<size_t>(position[cur]); i < path.size(); ++i) {
      cycle.push_back(h.names_[members[path[i]].front()]);
    }
    cycle.push_back(h.names_[members[cur].front()]);
    throw CycleError(std::move(cycle));
  }

  const size_t words = (num_classes + 63) / 64;
  std::vector<uint64_t> reach(num_classes * words, 0);
  std::vector<int> class_depth(num_classes, 1);
  for (uint32_t c : order) {
    uint64_t *row = reach.data() + c * words;
    for (uint32_t p : parents[c]) {
      const uint64_t *prow = reach.data() + p * words;
      for (size_t w = 0; w < words; ++w) row[w] |= prow[w];
      row[p / 64] |= uint64_t{1} << (p % 64);
      class_depth[c] = std::max(class_depth[c], class_depth[p] + 1);
    }
  }

  h.ancestors_.assign(n, {});
  h.depth_.resize(n);
  for (uint32_t c = 0; c < num_classes; ++c) {
    std::vector<TypeId> anc;
    const uint64_t *row = reach.data() + c * words;
    for (size_t w = 0; w < words; ++w) {
      for (uint64_t bits = row[w]; bits != 0; bits &= bits - 1) {
        const size_t a = w * 64 + std::countr_zero(bits);
        for (uint32_t m : members[a]) anc.push_back(TypeId{m});
      }
    }
    if (members[c].size() > 1) {
      for (uint32_t m : members[c]) anc.push_back(TypeId{m});
    }
    std::sort(anc.begin(), anc.end());
    for (uint32_t m : members[c]) {
      h.ancestors_[m] = anc;
      h.depth_[m] = class_depth[c];
    }
  }

  for (const auto &w : h.warnings_) Log().warn("{}", w);
  return h;
}

namespace {

std::optional<LinkKind> ParseKind(std::string_view s, bool *reversed) {
  *reversed = false;
  if (s == "child_of") return LinkKind::kChildOf;
  if (s == "parent_of") {
    *reversed = true;
    return LinkKind::kChildOf;
  }
  if (s == "equivalence") return LinkKind::kEquivalence;
  if (s == "fb_fb") return LinkKind::kFbFb;
  if (s == "wordnet_hypernym") return LinkKind::kWordnetHypernym;
  return std::nullopt;
}

}  // namespace

void ParseHierarchyInto(HierarchyBuilder &builder, std::istream &in,
                        const std::string &source) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = SplitString(line, '\t');
    if (fields.size() == 1) {
      builder.AddType(fields[0]);
      continue;
    }
    if (fields.size() != 3) {
      throw ParseError(source, line_no,
                       fmt::format("expected child<TAB>parent<TAB>kind, got {} fields",
                                   fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(source, line_no, "empty type name");
    }
    bool reversed = false;
    auto kind = ParseKind(fields[2], &reversed);
    if (!kind) {
      throw ParseError(source, line_no,
                       fmt::format("unknown link kind '{}'", fields[2]));
    }
    try {
      if (reversed) {
        builder.AddLink(fields[1], fields[0], *kind);
      } else {
        builder.AddLink(fields[0], fields[1], *kind);
      }
    } catch (const std::invalid_argument &e) {
      throw ParseError(source, line_no, e.what());
    }
  }
}

TypeHierarchy ParseHierarchy(std::istream &in, const std::string &source) {
  HierarchyBuilder builder;
  ParseHierarchyInto(builder, in, source);
  return std::move(builder).Build();
}

TypeHierarchy LoadHierarchy(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open hierarchy file {}", path.string()));
  return ParseHierarchy(in, path.string());
}

void WriteHierarchy(const TypeHierarchy &h, std::ostream &out) {
  out << "# types: " << h.size() << "\n";
  for (const auto &name : h.names()) out << name << "\n";
  out << "# links: " << h.links().size() << "\n";
  for (const Link &l : h.links()) {
    out << h.name(l.child) << '\t' << h.name(l.parent) << '\t'
        << LinkKindName(l.kind) << "\n";
  }
  out << "# ancestor closure\n";
  for (uint32_t t = 0; t < h.size(); ++t) {
    out << "#ancestors\t" << h.names()[t] << '\t';
    const char *sep = "";
    for (TypeId a : h.ancestors(TypeId{t})) {
      out << sep << h.name(a);
      sep = ",";
    }
    out << "\n";
  }
}

namespace {

std::string NormalizeSeparators(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c == '_' || c == '-') {
      c = ' ';
    } else {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

}  // namespace

std::string NormalizeTypeName(std::string_view fb_type) {
  const auto slash = fb_type.rfind('/');
  if (slash != std::string_view::npos) fb_type.remove_prefix(slash + 1);
  return NormalizeSeparators(fb_type);
}

std::string NormalizeSynsetName(std::string_view synset) {
  // Strip a WordNet ".<pos>.<nn>" suffix when present.
  const auto last = synset.rfind('.');
  if (last != std::string_view::npos && last > 0 && last + 1 < synset.size()) {
    const auto number = synset.substr(last + 1);
    const auto prev = synset.rfind('.', last - 1);
    const bool digits = std::all_of(number.begin(), number.end(), [](char c) {
      return std::isdigit(static_cast<unsigned char>(c));
    });
    if (digits && prev != std::string_view::npos && last - prev == 2 &&
        std::isalpha(static_cast<unsigned char>(synset[prev + 1]))) {
      synset = synset.substr(0, prev);
    }
  }
  return NormalizeSeparators(synset);
}

std::vector<std::string> CandidateSynsets(std::string_view fb_type,
                                          std::span<const std::string> synset_names) {
  std::vector<std::string> out;
  const std::string key = NormalizeTypeName(fb_type);
  if (key.empty()) return out;
  for (const auto &synset : synset_names) {
    const std::string norm = NormalizeSynsetName(synset);
    if (norm.empty()) continue;
    if (norm.find(key) != std::string::npos || key.find(norm) != std::string::npos) {
      out.push_back(synset);
    }
  }
  return out;
}

void EntityTypeTable::Add(std::string_view entity, std::string_view type) {
  auto [it, inserted] = types_.try_emplace(std::string(entity));
  if (inserted) entities_.emplace_back(entity);
  if (type.empty()) return;
  auto &types = it->second;
  if (std::find(types.begin(), types.end(), type) == types.end()) {
    types.emplace_back(type);
  }
}

const std::vector<std::string> &EntityTypeTable::types_of(
    std::string_view entity) const {
  static const std::vector<std::string> kNone;
  auto it = types_.find(std::string(entity));
  return it == types_.end() ? kNone : it->second;
}

bool EntityTypeTable::Has(std::string_view entity) const {
  return types_.contains(std::string(entity));
}

EntityTypeTable ParseEntityTypeTable(std::istream &in, const std::string &source) {
  EntityTypeTable table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = SplitString(line, '\t');
    if (fields.size() > 2 || fields[0].empty()) {
      throw ParseError(source, line_no, "expected entity_id<TAB>type1,type2,...");
    }
    table.Add(fields[0], "");
    if (fields.size() == 2) {
      for (const auto &type : SplitString(fields[1], ',')) {
        table.Add(fields[0], type);
      }
    }
  }
  return table;
}

EntityTypeTable LoadEntityTypeTable(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open entity table {}", path.string()));
  return ParseEntityTypeTable(in, path.string());
}

std::vector<NamedLink> DeriveCooccurrenceLinks(const EntityTypeTable &table,
                                               double threshold,
                                               const LinkFilter &filter) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("threshold must be in (0, 1], got {}", threshold));
  }
  std::vector<std::string> names;
  std::unordered_map<std::string, uint32_t> index;
  std::vector<uint64_t> count;
  std::unordered_map<uint64_t, uint64_t> both;
  std::vector<uint32_t> ids;
  for (const auto &entity : table.entities()) {
    ids.clear();
    for (const auto &type : table.types_of(entity)) {
      auto [it, inserted] = index.try_emplace(type, static_cast<uint32_t>(names.size()));
      if (inserted) {
        names.push_back(type);
        count.push_back(0);
      }
      ids.push_back(it->second);
    }
    for (uint32_t a : ids) {
      ++count[a];
      for (uint32_t b : ids) {
        if (a != b) ++both[(uint64_t{a} << 32) | b];
      }
    }
  }

  std::vector<std::pair<uint64_t, uint64_t>> pairs(both.begin(), both.end());
  std::sort(pairs.begin(), pairs.end());
  std::vector<NamedLink> links;
  for (const auto &[key, n_both] : pairs) {
    const uint32_t child = static_cast<uint32_t>(key >> 32);
    const uint32_t parent = static_cast<uint32_t>(key & 0xffffffffu);
    const double p = static_cast<double>(n_both) / static_cast<double>(count[child]);
    if (p < threshold) continue;
    if (filter && !filter(names[child], names[parent])) continue;
    links.push_back(NamedLink{names[child], names[parent], LinkKind::kFbFb});
  }
  return links;
}

void WriteNamedLinks(std::span<const NamedLink> links, std::ostream &out) {
  for (const auto &l : links) {
    out << l.child << '\t' << l.parent << '\t' << LinkKindName(l.kind) << "\n";
  }
}

HierarchyStats ComputeHierarchyStats(const TypeHierarchy &h) {
  HierarchyStats stats;
  stats.type_count = h.size();
  double total = 0.0;
  for (uint32_t t = 0; t < h.size(); ++t) {
    const int d = h.depth(TypeId{t});
    stats.max_depth = std::max(stats.max_depth, d);
    total += d;
  }
  stats.mean_depth = h.size() == 0 ? 0.0 : total / static_cast<double>(h.size());
  for (const Link &l : h.links()) ++stats.link_counts[std::string(LinkKindName(l.kind))];
  return stats;
}

namespace {

std::vector<std::string> StatsFields(const HierarchyStats &stats) {
  std::vector<std::string> fields = {
      fmt::format("type_count={}", stats.type_count),
      fmt::format("max_depth={}", stats.max_depth),
      "mean_depth=" + FormatReal(stats.mean_depth),
  };
  for (const auto &[kind, n] : stats.link_counts) {
    fields.push_back(fmt::format("links.{}={}", kind, n));
  }
  return fields;
}

}  // namespace

std::string FormatStatsLine(const HierarchyStats &stats) {
  return fmt::format("{}", fmt::join(StatsFields(stats), " "));
}

std::string FormatStatsRecord(const HierarchyStats &stats) {
  std::string out;
  for (const auto &f : StatsFields(stats)) out += f + "\n";
  return out;
}

}  // namespace hiertype
