#include "diagraph/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "diagraph/error.hpp"

namespace diagraph {

using json = nlohmann::ordered_json;

namespace {

std::string slurp(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + std::string(what) + " " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

// Thrown inside record decoding; rewrapped with the record index.
struct RecordError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double number(const json& j, std::string_view field) {
  if (!j.is_number()) throw RecordError(std::string(field) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw RecordError(std::string(field) + " must be finite");
  return v;
}

const json& field(const json& rec, const char* name) {
  auto it = rec.find(name);
  if (it == rec.end()) throw RecordError(std::string("missing field '") + name + "'");
  return *it;
}

Point point(const json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 2)
    throw RecordError(std::string(what) + " must be an [x, y] pair");
  return {number(j[0], what), number(j[1], what)};
}

json point_json(Point p) { return json::array({p.x, p.y}); }

Primitive decode_primitive(const json& rec) {
  if (!rec.is_object()) throw RecordError("record must be an object");
  const std::string kind = field(rec, "kind").get<std::string>();
  Primitive p;
  if (kind == "line") {
    p.shape = Line{point(field(rec, "p1"), "p1"), point(field(rec, "p2"), "p2")};
  } else if (kind == "circle") {
    p.shape = Circle{point(field(rec, "center"), "center"), number(field(rec, "radius"), "radius")};
  } else if (kind == "polygon") {
    Polygon poly;
    const json& vs = field(rec, "vertices");
    if (!vs.is_array()) throw RecordError("vertices must be an array");
    for (const auto& v : vs) poly.vertices.push_back(point(v, "vertex"));
    if (auto it = rec.find("closed"); it != rec.end()) poly.closed = it->get<bool>();
    p.shape = std::move(poly);
  } else if (kind == "curve") {
    Bezier curve;
    const json& segs = field(rec, "segments");
    if (!segs.is_array()) throw RecordError("segments must be an array");
    for (const auto& s : segs) {
      if (!s.is_array() || s.size() != 4) throw RecordError("curve segment needs 4 control points");
      BezierSegment seg;
      for (std::size_t k = 0; k < 4; ++k) seg.control[k] = point(s[k], "control point");
      curve.segments.push_back(seg);
    }
    p.shape = std::move(curve);
  } else if (kind == "text") {
    Text t;
    t.text = field(rec, "text").get<std::string>();
    t.anchor = point(field(rec, "anchor"), "anchor");
    t.height = number(field(rec, "height"), "height");
    if (auto it = rec.find("orientation"); it != rec.end()) {
      const std::string o = it->get<std::string>();
      if (o == "vertical") t.orientation = TextOrientation::vertical;
      else if (o != "horizontal") throw RecordError("orientation must be horizontal or vertical");
    }
    p.shape = std::move(t);
  } else {
    throw RecordError("unknown kind '" + kind + "'");
  }
  try {
    validate(p);
  } catch (const Error& e) {
    throw RecordError(e.what());
  }
  return p;
}

json encode_primitive(const Primitive& p, const std::string& id) {
  json rec;
  struct {
    json& rec;
    void operator()(const Line& l) {
      rec["kind"] = "line";
      rec["p1"] = point_json(l.p1);
      rec["p2"] = point_json(l.p2);
    }
    void operator()(const Circle& c) {
      rec["kind"] = "circle";
      rec["center"] = point_json(c.center);
      rec["radius"] = c.radius;
    }
    void operator()(const Polygon& poly) {
      rec["kind"] = "polygon";
      json vs = json::array();
      for (const auto& v : poly.vertices) vs.push_back(point_json(v));
      rec["vertices"] = std::move(vs);
      rec["closed"] = poly.closed;
    }
    void operator()(const Bezier& b) {
      rec["kind"] = "curve";
      json segs = json::array();
      for (const auto& s : b.segments) {
        json cs = json::array();
        for (const auto& c : s.control) cs.push_back(point_json(c));
        segs.push_back(std::move(cs));
      }
      rec["segments"] = std::move(segs);
    }
    void operator()(const Text& t) {
      rec["kind"] = "text";
      rec["text"] = t.text;
      rec["anchor"] = point_json(t.anchor);
      rec["height"] = t.height;
      rec["orientation"] = t.orientation == TextOrientation::vertical ? "vertical" : "horizontal";
    }
  } visitor{rec};
  std::visit(visitor, p.shape);
  if (!id.empty()) rec["id"] = id;
  return rec;
}

json value_json(const Value& v) {
  struct {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(bool b) const { return b; }
    json operator()(double d) const { return d; }
    json operator()(Point p) const { return point_json(p); }
    json operator()(ObjectRef r) const { return json{{"ref", r.tag}}; }
  } visitor;
  return std::visit(visitor, v);
}

Value value_from(const json& j) {
  if (j.is_null()) return Value{};
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return Point{j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("ref")) return ObjectRef{j["ref"].get<Tag>()};
  throw Error("unreadable slot value " + j.dump());
}

json node_json(const SolutionNode& n) {
  json j;
  if (!n.role.empty()) j["role"] = n.role;
  if (n.is_null) {
    j["null"] = true;
    return j;
  }
  j["type"] = n.type;
  j["tag"] = n.tag;
  if (!n.id.empty()) j["id"] = n.id;
  if (!n.slots.empty()) {
    json s = json::object();
    for (const auto& e : n.slots) s[e.name] = value_json(e.value);
    j["slots"] = std::move(s);
  }
  if (!n.children.empty()) {
    json c = json::array();
    for (const auto& k : n.children) c.push_back(node_json(k));
    j["children"] = std::move(c);
  }
  return j;
}

SolutionNode node_from(const json& j) {
  SolutionNode n;
  n.role = j.value("role", "");
  if (j.value("null", false)) {
    n.is_null = true;
    return n;
  }
  n.type = j.at("type").get<std::string>();
  n.tag = j.at("tag").get<Tag>();
  n.id = j.value("id", "");
  if (auto it = j.find("slots"); it != j.end())
    for (const auto& [k, v] : it->items()) n.slots.push_back({k, value_from(v)});
  if (auto it = j.find("children"); it != j.end())
    for (const auto& c : *it) n.children.push_back(node_from(c));
  return n;
}

}  // namespace

Diagram parse_diagram(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("diagram is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("diagram must be a JSON object");
  Diagram d;
  d.version = doc.value("version", kDiagramVersion);
  if (d.version != kDiagramVersion) throw Error("unsupported diagram version " + std::to_string(d.version));
  d.units = doc.value("units", "");
  if (auto it = doc.find("frame"); it != doc.end()) {
    const json& f = *it;
    if (!f.is_array() || f.size() != 4 || !std::all_of(f.begin(), f.end(), [](const json& x) {
          return x.is_number() && std::isfinite(x.get<double>());
        }))
      throw Error("frame must be [xmin, ymin, xmax, ymax]");
    d.frame = Rect::of({f[0].get<double>(), f[1].get<double>()}, {f[2].get<double>(), f[3].get<double>()});
  }
  auto prims = doc.find("primitives");
  if (prims == doc.end() || !prims->is_array()) throw Error("diagram needs a primitives array");
  if (prims->empty()) throw Error("diagram has no primitives");
  for (std::size_t k = 0; k < prims->size(); ++k) {
    const json& rec = (*prims)[k];
    try {
      Primitive p = decode_primitive(rec);
      p.tag = static_cast<Tag>(k + 1);
      d.primitives.push_back(std::move(p));
      d.ids.push_back(rec.is_object() && rec.contains("id") ? rec["id"].get<std::string>()
                                                             : std::to_string(k + 1));
    } catch (const RecordError& e) {
      throw Error("primitive record " + std::to_string(k) + ": " + e.what());
    } catch (const json::exception& e) {
      throw Error("primitive record " + std::to_string(k) + ": " + e.what());
    }
  }
  return d;
}

Diagram load_diagram(const std::filesystem::path& path) {
  try {
    return parse_diagram(slurp(path, "diagram"));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string diagram_to_json(const Diagram& d) {
  json doc;
  doc["version"] = d.version;
  doc["units"] = d.units;
  if (d.frame) doc["frame"] = json::array({d.frame->min.x, d.frame->min.y, d.frame->max.x, d.frame->max.y});
  json prims = json::array();
  for (std::size_t k = 0; k < d.primitives.size(); ++k)
    prims.push_back(encode_primitive(d.primitives[k], k < d.ids.size() ? d.ids[k] : std::string{}));
  doc["primitives"] = std::move(prims);
  return doc.dump(2) + "\n";
}

void save_diagram(const Diagram& d, const std::filesystem::path& path) { spill(path, diagram_to_json(d)); }

Normalization diagram_normalization(const Diagram& d) {
  return Normalization::fitting(d.frame ? *d.frame : union_bbox(d.primitives));
}

std::vector<Primitive> normalize(const Diagram& d) {
  const Normalization n = diagram_normalization(d);
  std::vector<Primitive> out;
  out.reserve(d.primitives.size());
  for (std::size_t k = 0; k < d.primitives.size(); ++k) {
    Primitive p = transform(d.primitives[k], n);
    p.tag = static_cast<Tag>(k + 1);
    const Rect r = bbox(p);
    if (r.min.x < 0 || r.min.y < 0 || r.max.x >= kGridExtent || r.max.y >= kGridExtent)
      throw Error("primitive record " + std::to_string(k) + ": unnormalized input (outside frame)");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Primitive> read_diagram(const std::filesystem::path& path) {
  return normalize(load_diagram(path));
}

SolutionNode solution_tree(const Scene& scene, Tag tag, const std::vector<std::string>& ids,
                           std::string role) {
  SolutionNode n;
  n.role = std::move(role);
  n.tag = tag;
  n.type = scene.type_name(tag);
  switch (scene.kind(tag)) {
    case ObjectKind::primitive:
      n.id = tag - 1 < ids.size() ? ids[tag - 1] : std::to_string(tag);
      break;
    case ObjectKind::endpoint: {
      const Tag owner = scene.endpoint(tag).owner;
      n.id = (owner - 1 < ids.size() ? ids[owner - 1] : std::to_string(owner)) + ".endpoint";
      break;
    }
    case ObjectKind::derived: {
      const DerivedObject& d = scene.derived(tag);
      for (const auto& [k, v] : d.slots) n.slots.push_back({k, v});
      if (d.is_set) {
        for (Tag e : d.elements) n.children.push_back(solution_tree(scene, e, ids));
      } else {
        for (const auto& c : d.constituents) {
          if (c.value) {
            n.children.push_back(solution_tree(scene, *c.value, ids, c.name));
          } else {
            SolutionNode null_node;
            null_node.role = c.name;
            null_node.is_null = true;
            n.children.push_back(std::move(null_node));
          }
        }
      }
      break;
    }
  }
  return n;
}

SolutionFile make_solution_file(const Scene& scene, const std::vector<Tag>& solutions,
                                const std::vector<std::string>& ids, std::string grammar,
                                std::string start, Timing timing) {
  SolutionFile f;
  f.grammar = std::move(grammar);
  f.start = std::move(start);
  f.timing = timing;
  for (Tag t : solutions) f.solutions.push_back(solution_tree(scene, t, ids));
  return f;
}

std::string solutions_to_json(const SolutionFile& f) {
  json doc;
  doc["version"] = f.version;
  doc["grammar"] = f.grammar;
  doc["start"] = f.start;
  json sols = json::array();
  for (const auto& s : f.solutions) sols.push_back(node_json(s));
  doc["solutions"] = std::move(sols);
  doc["timing"] = {{"index_ms", f.timing.index_ms}, {"parse_ms", f.timing.parse_ms}};
  return doc.dump(2) + "\n";
}

SolutionFile parse_solutions(std::string_view json_text) {
  try {
    const json doc = json::parse(json_text);
    SolutionFile f;
    f.version = doc.at("version").get<int>();
    f.grammar = doc.at("grammar").get<std::string>();
    f.start = doc.at("start").get<std::string>();
    for (const auto& s : doc.at("solutions")) f.solutions.push_back(node_from(s));
    f.timing.index_ms = doc.at("timing").at("index_ms").get<double>();
    f.timing.parse_ms = doc.at("timing").at("parse_ms").get<double>();
    return f;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed solution file: ") + e.what());
  }
}

void write_solutions(const SolutionFile& f, const std::filesystem::path& path) {
  spill(path, solutions_to_json(f));
}

SolutionFile read_solutions(const std::filesystem::path& path) {
  return parse_solutions(slurp(path, "solution file"));
}

}  // namespace diagraph
