#pragma once

#include <filesystem>
#include <vector>

#include "poro/driver.hpp"

namespace poro {

// Columns solver,scenario,dim,dt,lambda,n,N,iters,residual,converged
// (plus seconds when requested).
void write_table_csv(const std::vector<TableRow>& rows, const std::filesystem::path& path, bool with_seconds = false);
std::vector<TableRow> read_table_csv(const std::filesystem::path& path);

void write_rate_csv(const RateTable& table, const std::filesystem::path& path);

// Legacy ASCII unstructured grid: vertex displacement from the vertex dofs
// (bubbles vanish at vertices) and the interior pressure per cell.
void write_vtk(const Mesh& mesh, const DofMap& dofs, const Vector& u_total, const Vector& p_total,
               const std::filesystem::path& path);
void write_mesh_vtk(const Mesh& mesh, const std::filesystem::path& path);

} // namespace poro
