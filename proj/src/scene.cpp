#include "diagraph/scene.hpp"

#include <algorithm>
#include <sstream>

#include "diagraph/error.hpp"
#include "diagraph/names.hpp"

namespace diagraph {

std::string to_string(const Value& v) {
  struct {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(bool b) const { return b ? "t" : "nil"; }
    std::string operator()(double d) const {
      std::ostringstream os;
      os << d;
      return os.str();
    }
    std::string operator()(Point p) const {
      std::ostringstream os;
      os << "(" << p.x << " " << p.y << ")";
      return os.str();
    }
    std::string operator()(ObjectRef r) const { return "#" + std::to_string(r.tag); }
  } visitor;
  return std::visit(visitor, v);
}

std::vector<Tag> DerivedObject::children() const {
  if (is_set) return elements;
  std::vector<Tag> out;
  for (const auto& c : constituents)
    if (c.value) out.push_back(*c.value);
  return out;
}

std::optional<Tag> DerivedObject::constituent(std::string_view name) const {
  for (const auto& c : constituents)
    if (iequals(c.name, name)) return c.value;
  return std::nullopt;
}

bool DerivedObject::has_constituent(std::string_view name) const {
  return std::any_of(constituents.begin(), constituents.end(),
                     [&](const Constituent& c) { return iequals(c.name, name); });
}

const Value* DerivedObject::slot(std::string_view name) const {
  for (const auto& [k, v] : slots)
    if (iequals(k, name)) return &v;
  return nullptr;
}

Scene::Scene(std::vector<Primitive> primitives, int depth)
    : primitives_(std::move(primitives)), index_(depth) {
  for (std::size_t k = 0; k < primitives_.size(); ++k) {
    primitives_[k].tag = static_cast<Tag>(k + 1);
    validate(primitives_[k]);
    index_.install_primitive(primitives_[k]);
  }
  first_endpoint_ = static_cast<Tag>(primitives_.size()) + 1;
  endpoints_ = line_endpoints(primitives_);
  for (const auto& ep : endpoints_) index_.install_point(ep.tag, ep.point);
  first_derived_ = first_endpoint_ + static_cast<Tag>(endpoints_.size());
  next_tag_ = first_derived_;
  lengths_ = primitives_.empty() ? CharacteristicLengths{1.0, 64.0}
                                 : characteristic_lengths(primitives_);
}

ObjectKind Scene::kind(Tag tag) const {
  if (tag == 0 || tag >= next_tag_) throw Error("unknown tag " + std::to_string(tag));
  if (tag < first_endpoint_) return ObjectKind::primitive;
  if (tag < first_derived_) return ObjectKind::endpoint;
  return ObjectKind::derived;
}

const Primitive& Scene::primitive(Tag tag) const {
  if (kind(tag) != ObjectKind::primitive) throw Error("not a primitive: " + std::to_string(tag));
  return primitives_[tag - 1];
}

const EndpointRecord& Scene::endpoint(Tag tag) const {
  if (kind(tag) != ObjectKind::endpoint) throw Error("not an endpoint: " + std::to_string(tag));
  return endpoints_[tag - first_endpoint_];
}

const DerivedObject& Scene::derived(Tag tag) const {
  if (kind(tag) != ObjectKind::derived) throw Error("not a derived object: " + std::to_string(tag));
  return derived_[tag - first_derived_];
}

std::string Scene::type_name(Tag tag) const {
  switch (kind(tag)) {
    case ObjectKind::primitive: return std::string(kind_name(primitive(tag).kind()));
    case ObjectKind::endpoint: return "Endpoint";
    case ObjectKind::derived: return derived(tag).type;
  }
  return {};
}

TaggedSet Scene::base_objects() const {
  std::vector<Tag> tags;
  for (Tag t = 1; t < first_derived_; ++t) tags.push_back(t);
  return TaggedSet::adopt_sorted(std::move(tags));
}

std::optional<Tag> Scene::find_derived(std::size_t rule_index, const std::vector<Tag>& key) const {
  auto it = memo_.find({rule_index, key});
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

Tag Scene::add_derived(DerivedObject obj, const std::vector<Tag>& key) {
  if (auto existing = find_derived(obj.rule_index, key)) return *existing;
  obj.tag = next_tag_;
  const auto kids = obj.children();
  index_.install_derived(obj.tag, obj.bbox, kids);
  memo_.emplace(std::make_pair(obj.rule_index, key), obj.tag);
  derived_.push_back(std::move(obj));
  return next_tag_++;
}

std::vector<Tag> Scene::leaves(Tag tag) const {
  if (kind(tag) != ObjectKind::derived) return {tag};
  std::vector<Tag> out;
  for (Tag c : derived(tag).children()) {
    auto sub = leaves(c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace diagraph
