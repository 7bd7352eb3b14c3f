#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diagraph/geometry.hpp"
#include "diagraph/spatial_index.hpp"
#include "diagraph/tagged_set.hpp"
#include "diagraph/value.hpp"

namespace diagraph {

enum class ObjectKind { primitive, endpoint, derived };

struct Constituent {
  std::string name;
  std::optional<Tag> value;  ///< nullopt when bound null

  friend bool operator==(const Constituent&, const Constituent&) = default;
};

/// LHS instance created by a rule. A full graphical object: it has a synthesized bbox and
/// is installed in the spatial index like a primitive.
struct DerivedObject {
  Tag tag = 0;
  std::string type;
  std::size_t rule_index = 0;
  bool is_set = false;
  std::vector<Constituent> constituents;  ///< ordinary rules, in RHS order
  std::vector<Tag> elements;              ///< set rules, ascending
  Rect bbox;
  std::vector<std::pair<std::string, Value>> slots;

  /// Non-null constituents or set elements.
  std::vector<Tag> children() const;
  std::optional<Tag> constituent(std::string_view name) const;
  bool has_constituent(std::string_view name) const;
  const Value* slot(std::string_view name) const;
};

/// All graphical objects of one diagram: primitives (tags 1..N), line endpoints, and derived
/// objects created while parsing, together with their spatial index.
class Scene {
 public:
  /// `primitives` must already be normalized; they are re-tagged 1..N in order.
  explicit Scene(std::vector<Primitive> primitives, int depth = 7);

  const std::vector<Primitive>& primitives() const { return primitives_; }
  std::size_t primitive_count() const { return primitives_.size(); }
  std::size_t object_count() const { return index_.object_count(); }
  bool contains(Tag tag) const { return index_.contains(tag); }

  ObjectKind kind(Tag tag) const;
  const Primitive& primitive(Tag tag) const;
  const EndpointRecord& endpoint(Tag tag) const;
  const DerivedObject& derived(Tag tag) const;
  const Rect& bbox(Tag tag) const { return index_.bbox_of(tag); }
  /// Grammar-level type: primitive kind name, "Endpoint", or the derived LHS name.
  std::string type_name(Tag tag) const;

  const SpatialIndex& index() const { return index_; }
  const CharacteristicLengths& lengths() const { return lengths_; }

  /// Primitives and endpoints: the parse's initial context.
  TaggedSet base_objects() const;

  /// Next tag `add_derived` will assign.
  Tag next_tag() const { return next_tag_; }

  /// Memoized on (rule, constituents/elements): an identical object is created once and
  /// its existing tag returned.
  std::optional<Tag> find_derived(std::size_t rule_index, const std::vector<Tag>& key) const;
  Tag add_derived(DerivedObject obj, const std::vector<Tag>& key);

  std::size_t derived_count() const { return derived_.size(); }

  /// Every primitive leaf reachable from `tag` (the tag itself for primitives).
  std::vector<Tag> leaves(Tag tag) const;

 private:
  std::vector<Primitive> primitives_;
  std::vector<EndpointRecord> endpoints_;
  std::vector<DerivedObject> derived_;
  std::map<std::pair<std::size_t, std::vector<Tag>>, Tag> memo_;
  SpatialIndex index_;
  CharacteristicLengths lengths_;
  Tag first_endpoint_ = 0;
  Tag first_derived_ = 0;
  Tag next_tag_ = 1;
};

}  // namespace diagraph
