#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "larkit/arrange2d.hpp"
#include "larkit/arrange3d.hpp"
#include "larkit/generators.hpp"
#include "larkit/io.hpp"
#include "larkit/lar.hpp"
#include "larkit/sparse.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

double default_eps() {
  if (const char* env = std::getenv("LARKIT_EPS")) {
    const double eps = std::atof(env);
    if (eps > 0) return eps;
  }
  return larkit::kDefaultEps;
}

void require_file(const std::string& path) {
  if (!std::filesystem::is_regular_file(path))
    throw CLI::ValidationError("input", "no such file: " + path);
}

larkit::CellTable drop_cells(const larkit::CellTable& table,
                             const std::vector<int>& dropped) {
  std::vector<bool> drop(static_cast<size_t>(table.size()), false);
  for (int c : dropped)
    if (c >= 0 && c < table.size()) drop[static_cast<size_t>(c)] = true;
  larkit::CellTable kept{table.dim, {}};
  for (int c = 0; c < table.size(); ++c)
    if (!drop[static_cast<size_t>(c)])
      kept.cells.push_back(table.cells[static_cast<size_t>(c)]);
  return kept;
}

void save_operators(const std::vector<larkit::SignedSparseMatrix>& operators,
                    const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (size_t p = 0; p < operators.size(); ++p)
    larkit::save_mtx(operators[p],
                     dir + "/d" + std::to_string(p + 1) + ".mtx");
}

long long euler(const std::vector<long long>& counts) {
  long long chi = 0;
  long long sign = 1;
  for (long long n : counts) {
    chi += sign * n;
    sign = -sign;
  }
  return chi;
}

int run_arrange2(const std::string& input, const std::string& output,
                 double eps, const std::string& operators_dir) {
  require_file(input);
  const larkit::Complex soup_complex = larkit::load_lar(input);
  if (soup_complex.geometry.dim != 2 || !soup_complex.has_table(1)) {
    std::cerr << "arrange2: input must be 2D with cells[\"1\"]\n";
    return kExitFailure;
  }
  larkit::SegmentSoup soup{soup_complex.geometry, soup_complex.table(1)};
  const larkit::PlanarArrangement arr = larkit::planar_arrangement(soup, eps);

  larkit::Complex out;
  out.geometry = arr.geometry;
  out.tables[1] = arr.edges;
  out.tables[2] = drop_cells(arr.faces, arr.exterior_faces);
  if (!output.empty()) larkit::save_lar(out, output);
  if (!operators_dir.empty()) {
    save_operators({larkit::boundary_1(arr.edges, arr.geometry.size()),
                    arr.boundary_2},
                   operators_dir);
  }

  const long long v = arr.geometry.size();
  const long long e = arr.edges.size();
  const long long f_int = arr.interior_face_count();
  const long long f_all = arr.faces.size();
  std::cout << "vertices: " << v << "\n"
            << "edges: " << e << "\n"
            << "faces (interior): " << f_int << "\n"
            << "faces (with exterior): " << f_all << "\n"
            << "exterior faces: " << arr.exterior_faces.size() << "\n"
            << "euler (interior): " << euler({v, e, f_int}) << "\n"
            << "euler (with exterior): " << euler({v, e, f_all}) << "\n";
  return kExitOk;
}

int run_arrange3(const std::vector<std::string>& inputs,
                 const std::string& output, double eps, int parallel,
                 const std::string& operators_dir) {
  std::vector<larkit::Complex> complexes;
  for (const auto& path : inputs) {
    require_file(path);
    complexes.push_back(larkit::load_lar(path));
  }
  const larkit::ChainComplexResult result =
      larkit::space_arrangement(complexes, eps, parallel);

  larkit::Complex out;
  out.geometry = result.geometry;
  out.tables[1] = result.tables.at(1);
  out.tables[2] = result.tables.at(2);
  out.tables[3] = drop_cells(result.tables.at(3), result.exterior_cells);
  if (!output.empty()) larkit::save_lar(out, output);
  if (!operators_dir.empty())
    save_operators(result.operators, operators_dir);

  const long long v = result.geometry.size();
  const long long e = result.tables.at(1).size();
  const long long f = result.tables.at(2).size();
  const long long c_all = result.tables.at(3).size();
  const long long c_int =
      c_all - static_cast<long long>(result.exterior_cells.size());
  std::cout << "vertices: " << v << "\n"
            << "edges: " << e << "\n"
            << "faces: " << f << "\n"
            << "cells (interior): " << c_int << "\n"
            << "cells (with exterior): " << c_all << "\n"
            << "euler (interior): " << euler({v, e, f, c_int}) << "\n"
            << "euler (with exterior): " << euler({v, e, f, c_all}) << "\n";
  return kExitOk;
}

int run_validate(const std::string& input, const std::string& operators_dir) {
  require_file(input);
  const larkit::Complex complex = larkit::load_lar(input);
  larkit::ChainComplexResult result;
  result.geometry = complex.geometry;
  for (int p = 1; p <= complex.geometry.dim; ++p) {
    const std::string path =
        operators_dir + "/d" + std::to_string(p) + ".mtx";
    if (!std::filesystem::is_regular_file(path)) break;
    result.operators.push_back(larkit::load_mtx_file(path));
  }
  if (result.operators.empty()) {
    std::cerr << "validate: no operator files found in " << operators_dir
              << "\n";
    return kExitUsage;
  }
  for (const auto& [p, table] : complex.tables) {
    // Saved cell listings follow the interior convention; keep a table
    // only when it matches its operator's column count.
    if (p <= static_cast<int>(result.operators.size()) &&
        table.size() != result.boundary(p).ncols)
      continue;
    result.tables[p] = table;
  }
  if (static_cast<int>(result.operators.size()) >= complex.geometry.dim)
    result.exterior_cell = result.boundary(complex.geometry.dim).ncols - 1;
  const larkit::ValidationReport report =
      larkit::validate_chain_complex(result);
  std::cout << report.to_string();
  return report.all_passed() ? kExitOk : kExitFailure;
}

int run_euler(const std::string& input) {
  require_file(input);
  const larkit::Complex complex = larkit::load_lar(input);
  std::cout << larkit::euler_characteristic(complex) << "\n";
  return kExitOk;
}

int run_grid(const std::vector<int>& shape, double size, double rx, double ry,
             double rz, const std::vector<double>& translate, bool center,
             const std::string& output) {
  larkit::GridSpec spec;
  spec.shape = {shape[0], shape[1], shape[2]};
  spec.cell_size = size;
  larkit::Complex grid = larkit::cuboidal_grid(spec);
  if (center) grid.geometry = larkit::center_on_centroid(grid.geometry);
  if (rx != 0 || ry != 0 || rz != 0 || translate[0] != 0 ||
      translate[1] != 0 || translate[2] != 0)
    grid.geometry =
        larkit::transform(grid.geometry, rx, ry, rz,
                          {translate[0], translate[1], translate[2]});
  larkit::save_lar(grid, output);
  return kExitOk;
}

int run_segments(int n, double lo, double hi, std::uint64_t seed,
                 const std::string& output) {
  larkit::save_lar(larkit::random_segments(n, lo, hi, seed), output);
  return kExitOk;
}

int run_explode(const std::string& input, double scale,
                const std::string& output) {
  require_file(input);
  const larkit::Complex complex = larkit::load_lar(input);
  larkit::export_obj(larkit::explode(complex, scale), output);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LAR arrangement toolkit"};
  app.require_subcommand(1);

  double eps = default_eps();

  auto* arrange2 = app.add_subcommand(
      "arrange2", "Arrange a 2D segment complex into a planar complex");
  std::string a2_input, a2_output, a2_operators;
  arrange2->add_option("--input", a2_input, "input .lar.json")->required();
  arrange2->add_option("--output", a2_output, "output .lar.json");
  arrange2->add_option("--eps", eps, "merge tolerance")
      ->capture_default_str();
  arrange2->add_option("--operators", a2_operators,
                       "directory for d1.mtx/d2.mtx");

  auto* arrange3 = app.add_subcommand(
      "arrange3", "Arrange 3D complexes into a space partition");
  std::vector<std::string> a3_inputs;
  std::string a3_output, a3_operators;
  int a3_parallel = 1;
  arrange3->add_option("--input", a3_inputs, "input .lar.json files")
      ->required()
      ->expected(-1);
  arrange3->add_option("--output", a3_output, "output .lar.json");
  arrange3->add_option("--eps", eps, "merge tolerance")
      ->capture_default_str();
  arrange3->add_option("--operators", a3_operators,
                       "directory for d1.mtx/d2.mtx/d3.mtx");
  arrange3
      ->add_option("--parallel", a3_parallel,
                   "facet fragmentation worker count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand(
      "validate", "Check chain-complex invariants of a saved arrangement");
  std::string val_input, val_operators;
  validate->add_option("--input", val_input, "arranged .lar.json")
      ->required();
  validate->add_option("--operators", val_operators, "operator directory")
      ->required();

  auto* euler_cmd =
      app.add_subcommand("euler", "Euler characteristic of a complex");
  std::string euler_input;
  euler_cmd->add_option("--input", euler_input, ".lar.json")->required();

  auto* grid_cmd =
      app.add_subcommand("grid", "Generate a cuboidal grid complex");
  std::vector<int> grid_shape;
  double grid_size = 1.0, grid_rx = 0, grid_ry = 0, grid_rz = 0;
  std::vector<double> grid_translate{0, 0, 0};
  bool grid_center = false;
  std::string grid_output;
  grid_cmd->add_option("--shape", grid_shape, "cells per axis: nx,ny,nz")
      ->required()
      ->delimiter(',')
      ->expected(3);
  grid_cmd->add_option("--size", grid_size, "cell edge length")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  grid_cmd->add_option("--rx", grid_rx, "rotation about x (radians)");
  grid_cmd->add_option("--ry", grid_ry, "rotation about y (radians)");
  grid_cmd->add_option("--rz", grid_rz, "rotation about z (radians)");
  grid_cmd->add_option("--translate", grid_translate, "translation: x,y,z")
      ->delimiter(',')
      ->expected(3);
  grid_cmd->add_flag("--center", grid_center,
                     "center the grid on its centroid first");
  grid_cmd->add_option("--output", grid_output, "output .lar.json")
      ->required();

  auto* segments_cmd =
      app.add_subcommand("segments", "Generate random 2D segments");
  int seg_n = 10;
  double seg_lo = 0.0, seg_hi = 1.0;
  std::uint64_t seg_seed = 0;
  std::string seg_output;
  segments_cmd->add_option("--n", seg_n, "segment count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  segments_cmd->add_option("--lo", seg_lo, "coordinate range low")
      ->capture_default_str();
  segments_cmd->add_option("--hi", seg_hi, "coordinate range high")
      ->capture_default_str();
  segments_cmd->add_option("--seed", seg_seed, "RNG seed")
      ->capture_default_str();
  segments_cmd->add_option("--output", seg_output, "output .lar.json")
      ->required();

  auto* explode_cmd = app.add_subcommand(
      "explode", "Export an exploded-cell OBJ of a complex");
  std::string ex_input, ex_output;
  double ex_scale = 1.2;
  explode_cmd->add_option("--input", ex_input, ".lar.json")->required();
  explode_cmd->add_option("--scale", ex_scale, "explosion factor (>= 1)")
      ->capture_default_str()
      ->check(CLI::Range(1.0, 1e9));
  explode_cmd->add_option("--output", ex_output, "output .obj")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (arrange2->parsed())
      return run_arrange2(a2_input, a2_output, eps, a2_operators);
    if (arrange3->parsed())
      return run_arrange3(a3_inputs, a3_output, eps, a3_parallel,
                          a3_operators);
    if (validate->parsed()) return run_validate(val_input, val_operators);
    if (euler_cmd->parsed()) return run_euler(euler_input);
    if (grid_cmd->parsed())
      return run_grid(grid_shape, grid_size, grid_rx, grid_ry, grid_rz,
                      grid_translate, grid_center, grid_output);
    if (segments_cmd->parsed())
      return run_segments(seg_n, seg_lo, seg_hi, seg_seed, seg_output);
    if (explode_cmd->parsed())
      return run_explode(ex_input, ex_scale, ex_output);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
