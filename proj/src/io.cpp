#include "poro/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace poro {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

const char* kHeader = "solver,scenario,dim,dt,lambda,n,N,iters,residual,converged";

} // namespace

void write_table_csv(const std::vector<TableRow>& rows, const std::filesystem::path& path, bool with_seconds) {
  auto out = open_out(path);
  out << kHeader << (with_seconds ? ",seconds" : "") << '\n';
  for (const auto& r : rows) {
    out << r.solver << ',' << r.scenario << ',' << r.dim << ',' << r.dt << ',' << r.lambda << ',' << r.n << ','
        << r.elements << ',' << r.iterations << ',' << r.residual << ',' << (r.converged ? 1 : 0);
    if (with_seconds) out << ',' << r.seconds;
    out << '\n';
  }
  finish(out, path);
}

std::vector<TableRow> read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind(kHeader, 0) != 0) {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  const bool with_seconds = line.size() > std::string(kHeader).size();
  std::vector<TableRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto c = split(line);
    if (c.size() != (with_seconds ? 11u : 10u)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": wrong number of columns");
    }
    TableRow r;
    try {
      r.solver = c[0];
      r.scenario = c[1];
      r.dim = std::stoi(c[2]);
      r.dt = std::stod(c[3]);
      r.lambda = std::stod(c[4]);
      r.n = std::stoi(c[5]);
      r.elements = std::stoi(c[6]);
      r.iterations = std::stoi(c[7]);
      r.residual = std::stod(c[8]);
      r.converged = c[9] == "1";
      if (with_seconds) r.seconds = std::stod(c[10]);
    } catch (const std::logic_error&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
    rows.push_back(r);
  }
  return rows;
}

void write_rate_csv(const RateTable& table, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "n,h,dt,h1_error,pressure_error\n";
  for (const auto& r : table.rows) {
    out << r.n << ',' << r.h << ',' << r.dt << ',' << r.h1_error << ',' << r.pressure_error << '\n';
  }
  out << "# slopes," << table.h1_slope << ',' << table.pressure_slope << '\n';
  finish(out, path);
}

namespace {

void write_grid(std::ofstream& out, const Mesh& mesh) {
  out << "# vtk DataFile Version 3.0\nporo\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  const int nv = mesh.dim + 1;
  out << "CELLS " << mesh.n_elements() << ' ' << mesh.n_elements() * (nv + 1) << '\n';
  for (int k = 0; k < mesh.n_elements(); ++k) {
    out << nv;
    for (int v : mesh.element_vertices(k)) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.n_elements() << '\n';
  const int type = mesh.dim == 2 ? 5 : 10;
  for (int k = 0; k < mesh.n_elements(); ++k) out << type << '\n';
}

} // namespace

void write_vtk(const Mesh& mesh, const DofMap& dofs, const Vector& u_total, const Vector& p_total,
               const std::filesystem::path& path) {
  if (u_total.size() != dofs.disp_total() || p_total.size() != dofs.pres_total()) {
    throw ConfigError("field sizes do not match the dof map");
  }
  auto out = open_out(path);
  write_grid(out, mesh);
  out << "POINT_DATA " << mesh.n_vertices() << "\nVECTORS displacement double\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    for (int c = 0; c < 3; ++c) out << (c < mesh.dim ? u_total[dofs.vertex_dof(v, c)] : 0.0) << (c < 2 ? ' ' : '\n');
  }
  out << "CELL_DATA " << mesh.n_elements() << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < mesh.n_elements(); ++k) out << p_total[dofs.interior_dof(k)] << '\n';
  finish(out, path);
}

void write_mesh_vtk(const Mesh& mesh, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_grid(out, mesh);
  finish(out, path);
}

} // namespace poro
