#pragma once

#include <string>

#include "iim/intersect.hpp"
#include "iim/scenario.hpp"

namespace iim {

// Binary field snapshot. Layout (little-endian):
//   uint32 magic 'IIMF', uint32 version = 1,
//   int32 nx, int32 ny, double h, double origin_x, double origin_y, double time,
//   u[(nx+1)*ny], v[nx*(ny+1)], p[nx*ny]   (doubles, i fastest)
struct FieldDump {
    GridSpec grid;
    double time = 0.0;
    StaggeredState state;
};
void write_field_dump(const std::string& path, const StaggeredState& state,
                      const GridSpec& grid, double time);
FieldDump read_field_dump(const std::string& path);

// Legacy-VTK structured points (cell data: pressure scalar + cell-averaged
// velocity vectors) for visualization.
void write_vtk(const std::string& path, const StaggeredState& state,
               const GridSpec& grid, double time);
// structural self-check: header parses and value counts match the dimensions
void vtk_self_check(const std::string& path);

// node, reference X, current chi, velocity U, exterior pressure, WSS
void write_lagrangian_csv(const std::string& path, const InterfaceMesh& mesh,
                          const TimeStepper::LagrangianDiag& diag);

// per-level error metrics of a convergence study
void write_convergence_csv(const std::string& path, const ConvergenceTable& table);

// single error report
void write_error_csv(const std::string& path, const ErrorReport& report);

// crossing debug dump: lattice, axis, line index, segment index, coord,
// point, mesh, element, normal
void write_crossings_csv(const std::string& path, const IntersectionSet& iset);

// field dump + interface positions + step metadata
void write_checkpoint(const std::string& path, const TimeStepper& stepper);
struct Checkpoint {
    GridSpec grid;
    double time = 0.0;
    int step_index = 0;
    StaggeredState state;
    std::vector<std::vector<Vec2>> chi; // per mesh
};
Checkpoint read_checkpoint(const std::string& path);

} // namespace iim
