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

// Type hierarchy: a DAG over named types built from typed parent links.
//
// Link semantics:
//   child_of / fb_fb / wordnet_hypernym  child -> parent edge.
//   parent_of                            stored reversed, as child_of.
//   equivalence                          both types join one class.
//
// Ancestor sets are computed on the graph whose nodes are equivalence
// classes. The ancestors of a type are every member of every class
// reachable through parent edges from its class, plus the other members of
// its own class. A type is its own ancestor only when its class has more
// than one member, which keeps ancestor sets transitive.

#ifndef HIERTYPE_HIERARCHY_H_
#define HIERTYPE_HIERARCHY_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace hiertype {

// Dense handle of a type inside one TypeHierarchy.
struct TypeId {
  uint32_t value = 0;

  constexpr size_t index() const { return value; }
  auto operator<=>(const TypeId &) const = default;
};

enum class LinkKind { kChildOf, kEquivalence, kFbFb, kWordnetHypernym };

// File spelling: child_of, equivalence, fb_fb, wordnet_hypernym.
std::string_view LinkKindName(LinkKind kind);

struct Link {
  TypeId child;
  TypeId parent;
  LinkKind kind;

  bool operator==(const Link &) const = default;
};

// Link between raw type names, e.g. one derived from co-occurrence counts
// before the types exist in any hierarchy.
struct NamedLink {
  std::string child;
  std::string parent;
  LinkKind kind;

  bool operator==(const NamedLink &) const = default;
};

class TypeHierarchy {
 public:
  size_t size() const { return names_.size(); }

  const std::string &name(TypeId t) const { return names_[t.index()]; }
  std::span<const std::string> names() const { return names_; }

  std::optional<TypeId> Find(std::string_view name) const;
  // Throws UnknownTypeError.
  TypeId Lookup(std::string_view name) const;

  bool Contains(TypeId t) const { return t.index() < names_.size(); }

  // Ascending by index. Throws UnknownTypeError for foreign ids.
  std::span<const TypeId> ancestors(TypeId t) const;

  // ts plus the ancestors of each element, ascending and deduplicated.
  std::vector<TypeId> Closure(std::span<const TypeId> ts) const;

  // Deduplicated links in load order, parent_of already reversed.
  std::span<const Link> links() const { return links_; }

  // Number of nodes on the longest parent chain starting at t (roots are 1).
  int depth(TypeId t) const { return depth_[t.index()]; }

  // Representative index of the equivalence class of t.
  uint32_t equivalence_class(TypeId t) const { return class_of_[t.index()]; }

  std::span<const std::string> warnings() const { return warnings_; }

 private:
  friend class HierarchyBuilder;

  std::vector<std::string> names_;
  std::unordered_map<std::string, TypeId> index_;
  std::vector<Link> links_;
  std::vector<std::vector<TypeId>> ancestors_;
  std::vector<int> depth_;
  std::vector<uint32_t> class_of_;
  std::vector<std::string> warnings_;
};

// Accumulates types and links, then validates and closes them. Types are
// indexed in order of first appearance.
class HierarchyBuilder {
 public:
  TypeId AddType(std::string_view name);

  // Adds a link by name, creating unknown types. A parent_of link is
  // passed as AddLink(parent, child, kChildOf). Throws std::invalid_argument
  // for a non-equivalence self link.
  void AddLink(std::string_view child, std::string_view parent, LinkKind kind);

  // Throws CycleError when the parent graph over equivalence classes is
  // cyclic.
  TypeHierarchy Build() &&;

 private:
  TypeHierarchy h_;
  std::set<std::tuple<uint32_t, uint32_t, int>> seen_links_;
};

// Hierarchy file: one link per line, `child<TAB>parent<TAB>kind` with kind
// in {child_of, parent_of, equivalence, fb_fb, wordnet_hypernym}. A line
// holding a single field declares a type with no links. Blank lines and
// lines starting with '#' are ignored.
TypeHierarchy ParseHierarchy(std::istream &in, const std::string &source);
TypeHierarchy LoadHierarchy(const std::filesystem::path &path);

// Adds the lines of one hierarchy file to builder; several files may feed
// one hierarchy.
void ParseHierarchyInto(HierarchyBuilder &builder, std::istream &in,
                        const std::string &source);

// Writes a file ParseHierarchy reads back to the same indices and links:
// type declarations in index order, then links, then the ancestor closure
// as comment lines.
void WriteHierarchy(const TypeHierarchy &h, std::ostream &out);

std::vector<TypeId> ClosureOfSet(const TypeHierarchy &h,
                                 std::span<const TypeId> ts);

// Candidate synsets for a Freebase type by substring match. Both names are
// normalized: the final '/' segment of the type, or the lemma of the
// synset (the part before a trailing ".<pos>.<nn>"), with '_' and '-'
// mapped to spaces and case folded. A synset matches when either
// normalized name contains the other. Output keeps synset_names order.
std::vector<std::string> CandidateSynsets(std::string_view fb_type,
                                          std::span<const std::string> synset_names);

std::string NormalizeTypeName(std::string_view fb_type);
std::string NormalizeSynsetName(std::string_view synset);

// entity id -> raw type names. Entities and types keep first-appearance
// order; duplicate types on one entity are collapsed.
class EntityTypeTable {
 public:
  void Add(std::string_view entity, std::string_view type);

  size_t entity_count() const { return entities_.size(); }
  std::span<const std::string> entities() const { return entities_; }
  // Sorted by first appearance of each type in the table.
  const std::vector<std::string> &types_of(std::string_view entity) const;
  bool Has(std::string_view entity) const;

 private:
  std::vector<std::string> entities_;
  std::unordered_map<std::string, std::vector<std::string>> types_;
};

// Entity-type file: `entity_id<TAB>type1,type2,...` per line.
EntityTypeTable ParseEntityTypeTable(std::istream &in, const std::string &source);
EntityTypeTable LoadEntityTypeTable(const std::filesystem::path &path);

// Accepts or rejects a candidate (child, parent) link.
using LinkFilter = std::function<bool(const std::string &child,
                                      const std::string &parent)>;

// Emits child -> parent fb_fb links for every ordered pair with
// P(parent | child) = |both| / |child| >= threshold. Output is ordered by
// first appearance of the child type, then of the parent type. filter,
// when set, is applied after the threshold.
std::vector<NamedLink> DeriveCooccurrenceLinks(const EntityTypeTable &table,
                                               double threshold,
                                               const LinkFilter &filter = {});

void WriteNamedLinks(std::span<const NamedLink> links, std::ostream &out);

struct HierarchyStats {
  size_t type_count = 0;
  int max_depth = 0;
  double mean_depth = 0.0;
  // Only kinds with at least one link appear.
  std::map<std::string, size_t> link_counts;
};

HierarchyStats ComputeHierarchyStats(const TypeHierarchy &h);

// `type_count=2 max_depth=2 mean_depth=1.5 links.child_of=1`
std::string FormatStatsLine(const HierarchyStats &stats);
// Same keys, one `key=value` per line.
std::string FormatStatsRecord(const HierarchyStats &stats);

}  // namespace hiertype

#endif  // HIERTYPE_HIERARCHY_H_
