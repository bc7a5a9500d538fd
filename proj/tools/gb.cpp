#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gb/analysis.hpp"
#include "gb/construction.hpp"
#include "gb/energy.hpp"
#include "gb/errors.hpp"
#include "gb/render.hpp"
#include "gb/serialize.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out;
    std::string csv;
    std::string svg;
    std::string field_in;  // check: verify a previously written field file
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool unclipped_cores = false;
};

gb::Config load_config(const CommonArgs& args) {
    const std::string text = gb::read_text_file(args.config_path);
    gb::Json j;
    try {
        j = gb::Json::parse(text);
    } catch (const gb::Json::exception& e) {
        throw gb::io_error(std::string("config parse: ") + e.what());
    }
    gb::Config cfg = gb::config_from_json(j);
    if (args.seed_set) cfg.params.seed = args.seed;
    if (args.unclipped_cores) cfg.params.unclipped_cores = true;
    if (!args.out.empty()) cfg.out = args.out;
    if (!args.csv.empty()) cfg.csv = args.csv;
    if (!args.svg.empty()) cfg.svg = args.svg;
    return cfg;
}

std::string pick(const std::string& configured, const char* fallback) {
    return configured.empty() ? fallback : configured;
}

int run_build(const CommonArgs& args) {
    const gb::Config cfg = load_config(args);
    const gb::StrainField field = gb::build_strain_field(cfg.params);
    gb::write_text_file(pick(cfg.out, "field.json"), gb::field_to_json(field).dump(2) + "\n");
    std::cout << "built field: " << field.cells.size() << " cells, " << field.cores.size()
              << " cores\n";
    return 0;
}

int run_check(const CommonArgs& args) {
    const gb::Config cfg = load_config(args);
    gb::StrainField field;
    if (!args.field_in.empty()) {
        gb::Json j;
        try {
            j = gb::Json::parse(gb::read_text_file(args.field_in));
        } catch (const gb::Json::exception& e) {
            throw gb::io_error(std::string("field parse: ") + e.what());
        }
        field = gb::field_from_json(j);
    } else {
        field = gb::build_strain_field(cfg.params);
    }
    gb::CheckOptions opts;
    opts.n_random_loops = cfg.random_loops;
    opts.seed = cfg.params.seed;
    const gb::AdmissibilityReport report = gb::run_admissibility(field, opts);
    gb::write_text_file(pick(cfg.out, "check.json"), gb::admissibility_to_json(report).dump(2) + "\n");
    std::cout << "H1 " << (report.h1_ok ? "ok" : "FAIL") << ", H2 "
              << (report.h2_ok ? "ok" : "FAIL") << ", H3 " << (report.h3_ok ? "ok" : "FAIL")
              << ", continuity " << (report.continuity_ok ? "ok" : "FAIL") << "\n";
    return report.all_ok() ? 0 : 2;
}

int run_energy(const CommonArgs& args) {
    const gb::Config cfg = load_config(args);
    const gb::EnergyReport report = gb::energy_report(cfg.params);
    gb::write_text_file(pick(cfg.out, "energy.json"), gb::energy_to_json(report).dump(2) + "\n");
    std::cout << "total " << report.total << " (elastic " << report.elastic << ", core "
              << report.core << "), ratio " << report.ratio << "\n";
    return 0;
}

int run_sweep(const CommonArgs& args) {
    const gb::Config cfg = load_config(args);
    if (cfg.sweep_sin_thetas.empty()) {
        throw gb::validation_error("sweep: config has no sweep grid");
    }
    const gb::SweepResult sweep = gb::theta_sweep(cfg.params, cfg.sweep_sin_thetas);
    gb::write_text_file(pick(cfg.csv, "sweep.csv"), gb::sweep_to_csv(sweep));
    gb::write_text_file(pick(cfg.out, "sweep.json"), gb::sweep_to_json(sweep).dump(2) + "\n");
    std::cout << "fit: slope " << sweep.slope << ", intercept " << sweep.intercept << ", R^2 "
              << sweep.r2 << "\n";
    return 0;
}

int run_render(const CommonArgs& args) {
    const gb::Config cfg = load_config(args);
    const gb::StrainField field = gb::build_strain_field(cfg.params);
    gb::write_text_file(pick(cfg.svg, "render.svg"), gb::render_svg(field, cfg.render));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grain boundary construction for a semi-discrete dislocation energy"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* cmd, bool with_field = false) {
        cmd->add_option("--config", args.config_path, "configuration JSON")->required();
        cmd->add_option("--out", args.out, "output path (JSON)");
        cmd->add_option("--csv", args.csv, "output path (CSV)");
        cmd->add_option("--svg", args.svg, "output path (SVG)");
        cmd->add_option("--seed", args.seed, "override the RNG seed")
            ->each([&](const std::string&) { args.seed_set = true; });
        cmd->add_flag("--unclipped-cores", args.unclipped_cores,
                      "estimate core and elastic terms on unclipped squares");
        if (with_field) {
            cmd->add_option("--field", args.field_in, "check a previously written field file");
        }
    };

    CLI::App* build = app.add_subcommand("build", "construct the strain field and write it");
    CLI::App* check = app.add_subcommand("check", "verify admissibility of the construction");
    CLI::App* energy = app.add_subcommand("energy", "evaluate the energy and the predicted constants");
    CLI::App* sweep = app.add_subcommand("sweep", "energy scaling across a grid of angles");
    CLI::App* render = app.add_subcommand("render", "deformed-crystal SVG");
    add_common(build);
    add_common(check, true);
    add_common(energy);
    add_common(sweep);
    add_common(render);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return run_build(args);
        if (check->parsed()) return run_check(args);
        if (energy->parsed()) return run_energy(args);
        if (sweep->parsed()) return run_sweep(args);
        if (render->parsed()) return run_render(args);
    } catch (const gb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case gb::ErrorKind::Validation: return 1;
            case gb::ErrorKind::Admissibility: return 2;
            case gb::ErrorKind::Io: return 3;
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
