#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "iim/config.hpp"
#include "iim/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string output_root() {
    if (const char* env = std::getenv("IIM_OUTPUT_ROOT")) return env;
    return "out";
}

void print_report(double h, const iim::ErrorReport& r) {
    std::printf("  h=%-10.6g vel L2=%-11.4e Linf=%-11.4e | p L2=%-11.4e "
                "Linf=%-11.4e Linf*=%-11.4e\n",
                h, r.velocity.l2, r.velocity.linf, r.pressure.l2, r.pressure.linf,
                r.pressure.linf_star);
    for (size_t m = 0; m < r.lagrangian.size(); ++m) {
        const auto& le = r.lagrangian[m];
        std::printf("    mesh %zu: disp L2=%-10.4e vel L2=%-10.4e p L2=%-10.4e "
                    "wss L2=%-10.4e\n",
                    m, le.disp_l2, le.vel_l2, le.pres_l2, le.wss_l2);
    }
}

int cmd_run(const std::string& config_path, bool vtk, bool dump, bool crossings) {
    const iim::Config cfg = iim::Config::from_file(config_path);
    const iim::ScenarioConfig sc = iim::scenario_from_config(cfg);
    std::cout << "scenario " << sc.name << " h=" << sc.grid.h << " (" << sc.grid.nx
              << "x" << sc.grid.ny << "), dt=" << sc.dt()
              << ", coupling=" << to_string(sc.mode) << ", Re=" << sc.reynolds
              << "\n";

    iim::TimeStepper stepper = iim::make_stepper(sc);
    const iim::RunResult rr = iim::run_scenario(sc, stepper);
    std::cout << "finished: t=" << rr.final_time << " steps=" << rr.steps
              << (rr.reached_steady ? " (steady)" : "") << "\n";

    const fs::path out = fs::path(output_root()) / sc.name;
    fs::create_directories(out);
    if (rr.errors) {
        print_report(sc.grid.h, *rr.errors);
        iim::write_error_csv((out / "errors.csv").string(), *rr.errors);
    }
    iim::write_checkpoint((out / "checkpoint.bin").string(), stepper);
    if (dump)
        iim::write_field_dump((out / "fields.bin").string(), stepper.state(),
                              sc.grid, stepper.time());
    if (vtk) {
        iim::write_vtk((out / "fields.vtk").string(), stepper.state(), sc.grid,
                       stepper.time());
        iim::vtk_self_check((out / "fields.vtk").string());
    }
    const auto diags = stepper.diagnostics();
    for (size_t m = 0; m < diags.size(); ++m) {
        iim::write_lagrangian_csv(
            (out / ("lagrangian_" + std::to_string(m) + ".csv")).string(),
            stepper.meshes()[m], diags[m]);
        iim::write_mesh(stepper.meshes()[m],
                        (out / ("mesh_" + std::to_string(m) + ".txt")).string());
    }
    if (crossings) {
        std::vector<iim::InterfaceMesh> perturbed;
        for (const auto& mesh : stepper.meshes())
            perturbed.push_back(iim::perturb_nodes(mesh, sc.grid));
        iim::write_crossings_csv((out / "crossings.csv").string(),
                                 iim::build_intersections(perturbed, sc.grid));
    }
    if (!rr.times.empty()) {
        std::ofstream f(out / "forces.csv");
        f.precision(12);
        f << "t,cd,cl\n";
        for (size_t k = 0; k < rr.times.size(); ++k)
            f << rr.times[k] << "," << rr.coeffs[k].cd << "," << rr.coeffs[k].cl
              << "\n";
        std::cout << "final C_D=" << rr.coeffs.back().cd
                  << " C_L=" << rr.coeffs.back().cl << "\n";
    }
    std::cout << "outputs in " << out.string() << "\n";
    return 0;
}

int cmd_converge(const std::string& config_path, const std::vector<double>& levels,
                 int jobs) {
    const iim::Config cfg = iim::Config::from_file(config_path);
    iim::ScenarioConfig base = iim::scenario_from_config(cfg);
    std::cout << "convergence study: " << base.name << ", levels:";
    for (double h : levels) std::cout << " " << h;
    std::cout << "\n";

    // rebuild the scenario at each level with the same overrides
    auto make = [&](double h) {
        std::string text;
        for (const auto& [k, v] : cfg.items())
            if (k != "h") text += k + " = " + v + "\n";
        text += "h = " + std::to_string(h) + "\n";
        return iim::scenario_from_config(iim::Config::from_string(text));
    };
    const iim::ConvergenceTable table =
        iim::run_convergence_study(make, levels, jobs);

    double prev_vel = 0.0;
    for (const auto& row : table.rows) {
        if (row.failed) {
            std::cout << "  h=" << row.h << " FAILED: " << row.error << "\n";
            prev_vel = 0.0;
            continue;
        }
        print_report(row.h, row.report);
        if (prev_vel > 0.0)
            std::printf("    velocity L2 order: %.2f\n",
                        iim::ConvergenceTable::order(prev_vel, row.report.velocity.l2));
        prev_vel = row.report.velocity.l2;
    }
    const fs::path out = fs::path(output_root()) / base.name;
    fs::create_directories(out);
    iim::write_convergence_csv((out / "convergence.csv").string(), table);
    std::cout << "table written to " << (out / "convergence.csv").string() << "\n";
    for (const auto& row : table.rows)
        if (row.failed) return 2;
    return 0;
}

int cmd_compare(const std::string& config_path) {
    const iim::Config cfg = iim::Config::from_file(config_path);
    const fs::path out = fs::path(output_root());
    fs::create_directories(out);
    std::ofstream csv(out / "compare_coupling.csv");
    csv << "mode,vel_l2,vel_linf,p_l2,p_linf\n";
    csv.precision(12);
    for (const char* mode : {"ib", "iim_step1", "iim_step2", "iim_full"}) {
        std::string text;
        for (const auto& [k, v] : cfg.items())
            if (k != "coupling") text += k + " = " + v + "\n";
        text += "coupling = " + std::string(mode) + "\n";
        const iim::ScenarioConfig sc =
            iim::scenario_from_config(iim::Config::from_string(text));
        const iim::RunResult rr = iim::run_scenario(sc);
        if (!rr.errors) throw iim::ConfigError("compare-coupling needs an analytic preset");
        std::printf("%-10s vel L2=%-11.4e Linf=%-11.4e p L2=%-11.4e Linf=%-11.4e\n",
                    mode, rr.errors->velocity.l2, rr.errors->velocity.linf,
                    rr.errors->pressure.l2, rr.errors->pressure.linf);
        csv << mode << "," << rr.errors->velocity.l2 << "," << rr.errors->velocity.linf
            << "," << rr.errors->pressure.l2 << "," << rr.errors->pressure.linf
            << "\n";
    }
    std::cout << "table written to " << (out / "compare_coupling.csv").string()
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"staggered-grid incompressible flow solver with C0 immersed "
                 "interfaces"};
    app.require_subcommand(1);

    std::string config_path;
    bool vtk = false, dump = false, crossings = false;
    auto* run = app.add_subcommand("run", "run a single simulation");
    run->add_option("config", config_path, "config file")->required();
    run->add_flag("--vtk", vtk, "write a legacy-VTK snapshot");
    run->add_flag("--dump", dump, "write a binary field dump");
    run->add_flag("--crossings", crossings, "write the crossing debug CSV");

    std::string conv_config;
    std::vector<double> levels;
    int jobs = 2;
    auto* conv = app.add_subcommand("converge", "grid convergence study");
    conv->add_option("config", conv_config, "config file")->required();
    conv->add_option("--levels", levels, "grid spacings")->required()->delimiter(',');
    conv->add_option("--jobs", jobs, "concurrent runs");

    std::string cmp_config;
    auto* cmp = app.add_subcommand("compare-coupling",
                                   "run ib/iim_step1/iim_step2/iim_full");
    cmp->add_option("config", cmp_config, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, vtk, dump, crossings);
        if (conv->parsed()) return cmd_converge(conv_config, levels, jobs);
        if (cmp->parsed()) return cmd_compare(cmp_config);
    } catch (const iim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const iim::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
