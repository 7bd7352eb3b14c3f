#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diagraph/geometry.hpp"
#include "diagraph/parser.hpp"
#include "diagraph/scene.hpp"

namespace diagraph {

inline constexpr int kDiagramVersion = 1;
inline constexpr int kSolutionVersion = 1;

/// A diagram as stored on disk, in input coordinates.
struct Diagram {
  int version = kDiagramVersion;
  std::string units;
  /// Region mapped onto the grid; the union bbox of the primitives when absent.
  std::optional<Rect> frame;
  std::vector<Primitive> primitives;
  /// Source id per primitive; defaults to the 1-based record number.
  std::vector<std::string> ids;
};

Diagram parse_diagram(std::string_view json_text);
Diagram load_diagram(const std::filesystem::path& path);
std::string diagram_to_json(const Diagram& d);
void save_diagram(const Diagram& d, const std::filesystem::path& path);

Normalization diagram_normalization(const Diagram& d);
/// Primitives in grid coordinates, tagged 1..N in file order.
std::vector<Primitive> normalize(const Diagram& d);
/// load_diagram followed by normalize.
std::vector<Primitive> read_diagram(const std::filesystem::path& path);

struct SlotEntry {
  std::string name;
  Value value;

  friend bool operator==(const SlotEntry&, const SlotEntry&) = default;
};

/// One object in a solution tree. Primitive leaves carry their source id; a null
/// constituent is a node with `is_null` set and no type.
struct SolutionNode {
  std::string role;  ///< constituent name; empty for roots and set elements
  std::string type;
  Tag tag = 0;
  bool is_null = false;
  std::string id;
  std::vector<SlotEntry> slots;
  std::vector<SolutionNode> children;

  friend bool operator==(const SolutionNode&, const SolutionNode&) = default;
};

struct Timing {
  double index_ms = 0.0;
  double parse_ms = 0.0;

  friend bool operator==(const Timing&, const Timing&) = default;
};

struct SolutionFile {
  int version = kSolutionVersion;
  std::string grammar;
  std::string start;
  std::vector<SolutionNode> solutions;
  Timing timing;

  friend bool operator==(const SolutionFile&, const SolutionFile&) = default;
};

SolutionNode solution_tree(const Scene& scene, Tag tag, const std::vector<std::string>& ids,
                           std::string role = {});
SolutionFile make_solution_file(const Scene& scene, const std::vector<Tag>& solutions,
                                const std::vector<std::string>& ids, std::string grammar,
                                std::string start, Timing timing);

std::string solutions_to_json(const SolutionFile& f);
SolutionFile parse_solutions(std::string_view json_text);
void write_solutions(const SolutionFile& f, const std::filesystem::path& path);
SolutionFile read_solutions(const std::filesystem::path& path);

}  // namespace diagraph
