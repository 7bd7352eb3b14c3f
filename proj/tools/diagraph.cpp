// diagraph: parse diagrams against constraint grammars, inspect the spatial index,
// and generate the bundled fixtures.
//
//   diagraph parse --grammar g1.dg --diagram fig2.diag --start X-Ticks --out sol.json
//   diagraph index --diagram fig3.diag
//   diagraph gen fig2-ticks --out fig2.diag
//
// DIAGRAPH_CONFIG names a default config file when --config is not given.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "diagraph/config.hpp"
#include "diagraph/error.hpp"
#include "diagraph/fixtures.hpp"
#include "diagraph/grammar.hpp"
#include "diagraph/io.hpp"
#include "diagraph/overlay.hpp"
#include "diagraph/parser.hpp"
#include "diagraph/scene.hpp"

namespace fs = std::filesystem;
using namespace diagraph;

namespace {

struct RunConfig {
  std::string grammar;
  std::string diagram;
  std::string start;
  std::string out;
  std::string overlay;
  std::string config;
  bool trace = false;
  bool timing = false;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

EngineConfig engine_config(const std::string& explicit_path) {
  std::string path = explicit_path;
  if (path.empty())
    if (const char* env = std::getenv("DIAGRAPH_CONFIG")) path = env;
  return path.empty() ? EngineConfig{} : load_config(path);
}

int cmd_parse(const RunConfig& rc) {
  const EngineConfig config = engine_config(rc.config);
  const Grammar grammar = load_grammar(rc.grammar);
  if (auto diags = validate_grammar(grammar); !diags.empty()) {
    for (const auto& d : diags) std::cerr << rc.grammar << ": " << d.rule << ": " << d.reason << "\n";
    throw Error("grammar has " + std::to_string(diags.size()) + " diagnostic(s)");
  }
  if (!grammar.defines(rc.start)) throw Error("start symbol " + rc.start + " is not defined in " + rc.grammar);
  const Diagram diagram = load_diagram(rc.diagram);

  auto t0 = Clock::now();
  Scene scene(normalize(diagram), config.pyramid_depth);
  const double index_ms = ms_since(t0);

  t0 = Clock::now();
  ParseResult result = parse(grammar, scene, rc.start, config, rc.trace);
  const double parse_ms = ms_since(t0);

  if (rc.trace) {
    for (const auto& ev : result.trace) std::cerr << ev.str() << "\n";
    for (const auto& n : result.notes) std::cerr << "note: " << n << "\n";
  }

  const SolutionFile file = make_solution_file(scene, result.solutions, diagram.ids,
                                               fs::path(rc.grammar).filename().string(), rc.start,
                                               {index_ms, parse_ms});
  write_solutions(file, rc.out);
  if (!rc.overlay.empty()) emit_overlay(scene, result.solutions, rc.overlay);

  std::cout << "solutions=" << result.solutions.size() << "\n";
  if (rc.timing) {
    std::cout << "index_ms=" << index_ms << "\n";
    std::cout << "parse_ms=" << parse_ms << "\n";
    std::cout << "tuples=" << result.stats.tuples_examined << "\n";
  }
  return 0;
}

int cmd_index(const std::string& diagram_path, const std::string& config_path) {
  const EngineConfig config = engine_config(config_path);
  Scene scene(read_diagram(diagram_path), config.pyramid_depth);
  const SpatialIndex& index = scene.index();

  std::size_t inverse = 0;
  for (Tag t : index.installed()) inverse += index.cells_of(t).size();

  std::cout << "objects=" << index.object_count() << "\n";
  std::cout << "primitives=" << scene.primitive_count() << "\n";
  std::cout << "endpoints=" << index.object_count() - scene.primitive_count() << "\n";
  std::cout << "inverse_cells=" << inverse << "\n";
  for (int level = 0; level < index.depth(); ++level) {
    const int n = index.grid_size(level);
    std::size_t occupied = 0, entries = 0, xcols = 0, yrows = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const auto& c = index.cell(level, i, j);
        occupied += !c.empty();
        entries += c.size();
      }
    for (int i = 0; i < n; ++i) {
      xcols += !index.xproj(level, i).empty();
      yrows += !index.yproj(level, i).empty();
    }
    std::cout << "level=" << level << " grid=" << n << "x" << n << " occupied=" << occupied
              << " entries=" << entries << " xproj_occupied=" << xcols << " yproj_occupied=" << yrows
              << "\n";
  }
  return 0;
}

int cmd_gen(const std::string& name, const std::string& out) {
  const Diagram d = make_fixture(name);
  if (out.empty() || out == "-")
    std::cout << diagram_to_json(d);
  else
    save_diagram(d, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-grammar diagram parser"};
  app.require_subcommand(1);

  RunConfig rc;
  auto* parse_cmd = app.add_subcommand("parse", "Parse a diagram and write its solutions");
  parse_cmd->add_option("--grammar", rc.grammar, "Grammar file (.dg)")->required();
  parse_cmd->add_option("--diagram", rc.diagram, "Diagram file (.diag)")->required();
  parse_cmd->add_option("--start", rc.start, "Start symbol")->required();
  parse_cmd->add_option("--out", rc.out, "Solution file to write")->required();
  parse_cmd->add_option("--overlay", rc.overlay, "SVG overlay to write");
  parse_cmd->add_option("--config", rc.config, "Engine config file (key = value)");
  parse_cmd->add_flag("--trace", rc.trace, "Print rule entry/exit trace to stderr");
  parse_cmd->add_flag("--timing", rc.timing, "Print index_ms and parse_ms");

  std::string index_diagram, index_config;
  auto* index_cmd = app.add_subcommand("index", "Report spatial index occupancy per level");
  index_cmd->add_option("--diagram,diagram", index_diagram, "Diagram file")->required();
  index_cmd->add_option("--config", index_config, "Engine config file");

  std::string gen_name, gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Write a bundled fixture diagram");
  gen_cmd->add_option("name", gen_name, "fig2-ticks | fig3-micro | datagraph4")->required();
  gen_cmd->add_option("--out", gen_out, "Output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse_cmd) return cmd_parse(rc);
    if (*index_cmd) return cmd_index(index_diagram, index_config);
    if (*gen_cmd) return cmd_gen(gen_name, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "diagraph: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
