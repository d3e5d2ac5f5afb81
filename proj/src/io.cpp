#include "iim/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace iim {

namespace {
constexpr std::uint32_t kMagic = 0x464D4949u; // "IIMF"

void write_owned(std::ofstream& out, const Array2D& a) {
    for (int j = 0; j < a.ny(); ++j)
        for (int i = 0; i < a.nx(); ++i) {
            const double v = a(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(double));
        }
}

void read_owned(std::ifstream& in, Array2D& a) {
    for (int j = 0; j < a.ny(); ++j)
        for (int i = 0; i < a.nx(); ++i) {
            double v;
            in.read(reinterpret_cast<char*>(&v), sizeof(double));
            a(i, j) = v;
        }
}

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::ifstream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
} // namespace

void write_field_dump(const std::string& path, const StaggeredState& state,
                      const GridSpec& grid, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_field_dump: cannot open " + path);
    put<std::uint32_t>(out, kMagic);
    put<std::uint32_t>(out, 1);
    put<std::int32_t>(out, grid.nx);
    put<std::int32_t>(out, grid.ny);
    put<double>(out, grid.h);
    put<double>(out, grid.origin.x);
    put<double>(out, grid.origin.y);
    put<double>(out, time);
    write_owned(out, state.u);
    write_owned(out, state.v);
    write_owned(out, state.p);
    if (!out) throw IoError("write_field_dump: write failed for " + path);
}

FieldDump read_field_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_field_dump: cannot open " + path);
    if (get<std::uint32_t>(in) != kMagic)
        throw IoError("read_field_dump: bad magic in " + path);
    if (get<std::uint32_t>(in) != 1)
        throw IoError("read_field_dump: unsupported version in " + path);
    FieldDump d;
    const int nx = get<std::int32_t>(in);
    const int ny = get<std::int32_t>(in);
    const double h = get<double>(in);
    const double ox = get<double>(in);
    const double oy = get<double>(in);
    d.time = get<double>(in);
    d.grid = GridSpec({ox, oy}, nx, ny, h);
    d.state = StaggeredState(d.grid);
    read_owned(in, d.state.u);
    read_owned(in, d.state.v);
    read_owned(in, d.state.p);
    if (!in) throw IoError("read_field_dump: truncated file " + path);
    return d;
}

void write_vtk(const std::string& path, const StaggeredState& state,
               const GridSpec& grid, double time) {
    std::ofstream out(path);
    if (!out) throw IoError("write_vtk: cannot open " + path);
    out.precision(12);
    out << "# vtk DataFile Version 3.0\n";
    out << "iim fields t=" << time << "\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << grid.nx + 1 << " " << grid.ny + 1 << " 1\n";
    out << "ORIGIN " << grid.origin.x << " " << grid.origin.y << " 0\n";
    out << "SPACING " << grid.h << " " << grid.h << " 1\n";
    out << "CELL_DATA " << grid.nx * grid.ny << "\n";
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) out << state.p(i, j) << "\n";
    out << "VECTORS velocity double\n";
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            out << 0.5 * (state.u(i, j) + state.u(i + 1, j)) << " "
                << 0.5 * (state.v(i, j) + state.v(i, j + 1)) << " 0\n";
    if (!out) throw IoError("write_vtk: write failed for " + path);
}

void vtk_self_check(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("vtk_self_check: cannot open " + path);
    std::string line, word;
    int nx = 0, ny = 0, nz = 0;
    long ncell = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        ls >> word;
        if (word == "DIMENSIONS") ls >> nx >> ny >> nz;
        if (word == "CELL_DATA") {
            ls >> ncell;
            break;
        }
    }
    if (nx < 2 || ny < 2 || nz != 1)
        throw IoError("vtk_self_check: bad DIMENSIONS");
    if (ncell != static_cast<long>(nx - 1) * (ny - 1))
        throw IoError("vtk_self_check: CELL_DATA count mismatch");
    long scalars = 0;
    bool in_scalars = false;
    long vectors = 0;
    bool in_vectors = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        if (line.rfind("SCALARS", 0) == 0) {
            in_scalars = true;
            in_vectors = false;
            std::getline(in, line); // LOOKUP_TABLE
            continue;
        }
        if (line.rfind("VECTORS", 0) == 0) {
            in_vectors = true;
            in_scalars = false;
            continue;
        }
        double a, b, c;
        if (in_scalars && (ls >> a)) ++scalars;
        else if (in_vectors && (ls >> a >> b >> c)) ++vectors;
    }
    if (scalars != ncell || vectors != ncell)
        throw IoError("vtk_self_check: value count mismatch (" +
                      std::to_string(scalars) + " scalars, " +
                      std::to_string(vectors) + " vectors for " +
                      std::to_string(ncell) + " cells)");
}

void write_lagrangian_csv(const std::string& path, const InterfaceMesh& mesh,
                          const TimeStepper::LagrangianDiag& diag) {
    std::ofstream out(path);
    if (!out) throw IoError("write_lagrangian_csv: cannot open " + path);
    out.precision(17);
    out << "node,X,Y,chi_x,chi_y,U_x,U_y,p_plus,wss_x,wss_y\n";
    for (int l = 0; l < mesh.num_nodes(); ++l) {
        out << l << "," << mesh.nodes[l].X.x << "," << mesh.nodes[l].X.y << ","
            << mesh.nodes[l].chi.x << "," << mesh.nodes[l].chi.y << ","
            << diag.U[l].x << "," << diag.U[l].y << "," << diag.p_plus[l] << ","
            << diag.wss[l].x << "," << diag.wss[l].y << "\n";
    }
}

namespace {
void error_csv_header(std::ofstream& out) {
    out << "h,vel_l2,vel_linf,vel_linf_star,p_l2,p_linf,p_linf_star";
    out << ",mesh,disp_l2,disp_linf,lagvel_l2,lagvel_linf,lagp_l2,lagp_linf,"
           "wss_l2,wss_linf\n";
}

void error_csv_rows(std::ofstream& out, double h, const ErrorReport& r,
                    const std::string& status) {
    if (r.lagrangian.empty()) {
        out << h << "," << r.velocity.l2 << "," << r.velocity.linf << ","
            << r.velocity.linf_star << "," << r.pressure.l2 << "," << r.pressure.linf
            << "," << r.pressure.linf_star << ",-" << status << ",,,,,,,,\n";
        return;
    }
    for (size_t m = 0; m < r.lagrangian.size(); ++m) {
        const auto& le = r.lagrangian[m];
        out << h << "," << r.velocity.l2 << "," << r.velocity.linf << ","
            << r.velocity.linf_star << "," << r.pressure.l2 << "," << r.pressure.linf
            << "," << r.pressure.linf_star << "," << m << status << "," << le.disp_l2
            << "," << le.disp_linf << "," << le.vel_l2 << "," << le.vel_linf << ","
            << le.pres_l2 << "," << le.pres_linf << "," << le.wss_l2 << ","
            << le.wss_linf << "\n";
    }
}
} // namespace

void write_error_csv(const std::string& path, const ErrorReport& report) {
    std::ofstream out(path);
    if (!out) throw IoError("write_error_csv: cannot open " + path);
    out.precision(12);
    error_csv_header(out);
    error_csv_rows(out, 0.0, report, "");
}

void write_convergence_csv(const std::string& path, const ConvergenceTable& table) {
    std::ofstream out(path);
    if (!out) throw IoError("write_convergence_csv: cannot open " + path);
    out.precision(12);
    error_csv_header(out);
    for (const auto& row : table.rows) {
        if (row.failed) {
            out << row.h << ",FAILED:" << row.error << "\n";
            continue;
        }
        error_csv_rows(out, row.h, row.report, "");
    }
}

void write_crossings_csv(const std::string& path, const IntersectionSet& iset) {
    std::ofstream out(path);
    if (!out) throw IoError("write_crossings_csv: cannot open " + path);
    out.precision(17);
    out << "lattice,axis,lo_i,lo_j,coord,x,y,mesh,element,s,n_x,n_y,d_plus\n";
    for (const auto& r : iset.all())
        out << static_cast<int>(r.lattice) << "," << static_cast<int>(r.axis) << ","
            << r.lo_i << "," << r.lo_j << "," << r.coord << "," << r.point.x << ","
            << r.point.y << "," << r.mesh_id << "," << r.element << "," << r.s << ","
            << r.normal.x << "," << r.normal.y << "," << r.d_plus << "\n";
}

void write_checkpoint(const std::string& path, const TimeStepper& stepper) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_checkpoint: cannot open " + path);
    const GridSpec& g = stepper.grid();
    put<std::uint32_t>(out, kMagic);
    put<std::uint32_t>(out, 2); // checkpoint version
    put<std::int32_t>(out, g.nx);
    put<std::int32_t>(out, g.ny);
    put<double>(out, g.h);
    put<double>(out, g.origin.x);
    put<double>(out, g.origin.y);
    put<double>(out, stepper.time());
    put<std::int32_t>(out, stepper.step_index());
    write_owned(out, stepper.state().u);
    write_owned(out, stepper.state().v);
    write_owned(out, stepper.state().p);
    put<std::int32_t>(out, static_cast<int>(stepper.meshes().size()));
    for (const auto& mesh : stepper.meshes()) {
        put<std::int32_t>(out, mesh.num_nodes());
        for (const auto& nd : mesh.nodes) {
            put<double>(out, nd.chi.x);
            put<double>(out, nd.chi.y);
        }
    }
    if (!out) throw IoError("write_checkpoint: write failed for " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_checkpoint: cannot open " + path);
    if (get<std::uint32_t>(in) != kMagic || get<std::uint32_t>(in) != 2)
        throw IoError("read_checkpoint: bad header in " + path);
    Checkpoint c;
    const int nx = get<std::int32_t>(in);
    const int ny = get<std::int32_t>(in);
    const double h = get<double>(in);
    const double ox = get<double>(in);
    const double oy = get<double>(in);
    c.grid = GridSpec({ox, oy}, nx, ny, h);
    c.time = get<double>(in);
    c.step_index = get<std::int32_t>(in);
    c.state = StaggeredState(c.grid);
    read_owned(in, c.state.u);
    read_owned(in, c.state.v);
    read_owned(in, c.state.p);
    const int nmesh = get<std::int32_t>(in);
    c.chi.resize(nmesh);
    for (auto& chi : c.chi) {
        const int nn = get<std::int32_t>(in);
        chi.resize(nn);
        for (auto& p : chi) {
            p.x = get<double>(in);
            p.y = get<double>(in);
        }
    }
    if (!in) throw IoError("read_checkpoint: truncated file " + path);
    return c;
}

} // namespace iim
