#include <iostream>

#include <CLI11.hpp>

#include <zmc/cli_commands.hpp>

namespace {

void add_data_opts(CLI::App* sub, zmc::cli::DataOpts& d) {
    sub->fallthrough();  // lets --config reach the root option from subcommand position
    sub->add_option("--example", d.example, "catalog example id (see `zmc examples`)");
    sub->add_option("--n", d.n, "integer parameter for catalog families")->check(CLI::PositiveNumber);
    sub->add_option("--data", d.data_path, "JSON data file with expressions F, G");
    sub->add_option("--truncation", d.truncation,
                    "override the width of a truncated half-plane domain");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero mean curvature deformation family toolkit"};
    app.require_subcommand(1);

    zmc::cli::SurfaceOpts so;
    CLI::App* surface = app.add_subcommand("surface", "evaluate one member of the family to a mesh");
    add_data_opts(surface, so.src);
    surface->add_option("--theta", so.theta, "associate family angle");
    surface->add_option("--lambda", so.lambda, "positive scaling parameter")->check(CLI::PositiveNumber);
    surface->add_option("--c", so.c, "deformation parameter");
    surface->add_option("--grid", so.grid, "rings N, spokes 8N/3 (default 96 x 256)");
    surface->add_option("--out", so.out, "output mesh path (sidecar <out>.sing)")->required();

    zmc::cli::VerifyOpts vo;
    CLI::App* verify = app.add_subcommand("verify", "run the univalence oracle on the planar factor");
    add_data_opts(verify, vo.src);
    verify->add_option("--theta", vo.theta, "associate family angle");
    verify->add_option("--lambda", vo.lambda, "positive scaling parameter")->check(CLI::PositiveNumber);
    verify->add_option("--c", vo.c, "deformation parameter");
    verify->add_option("--rho", vo.rho, "shortcut for lambda=1, c=rho");
    verify->add_option("--resolution", vo.resolution, "oracle grid resolution");
    verify->add_flag("--strict", vo.strict, "exit 3 when the oracle is inconclusive");
    verify->add_option("--out", vo.out, "output path (default stdout)");

    zmc::cli::RegionOpts ro;
    CLI::App* region = app.add_subcommand("region", "certify graph and nongraph parameter intervals");
    add_data_opts(region, ro.src);
    region->add_option("--theta", ro.thetas, "sweep angles (repeatable; default 0, pi/2)");
    region->add_option("--rho-max", ro.rho_max, "top of the swept |c| lambda^2 range");
    region->add_option("--rho-samples", ro.rho_samples, "number of rho samples in the sweep");
    region->add_option("--seed-theta", ro.seed_theta, "seed member angle");
    region->add_option("--seed-lambda", ro.seed_lambda, "seed member scaling");
    region->add_option("--seed-c", ro.seed_c, "seed member deformation parameter");
    region->add_option("--M", ro.M, "linear connectivity constant of the image region");
    region->add_option("--resolution", ro.resolution, "oracle grid resolution (0 skips the oracle)");
    region->add_flag("--test-corrupt-certificate", ro.corrupt)->group("");  // hidden self-test
    region->add_option("--out", ro.out, "output base path, writes <out>.json and <out>.csv");

    zmc::cli::FamilyOpts fo;
    CLI::App* family = app.add_subcommand("family", "emit a mesh sequence along a parameter sweep");
    add_data_opts(family, fo.src);
    family->add_option("--sweep", fo.sweep, "swept coordinate: theta, lambda or c")
        ->required()
        ->check(CLI::IsMember({"theta", "lambda", "c"}));
    family->add_option("--from", fo.from, "sweep start (default depends on the coordinate)");
    family->add_option("--to", fo.to, "sweep end (default depends on the coordinate)");
    family->add_option("--steps", fo.steps, "number of members")->check(CLI::PositiveNumber);
    family->add_option("--theta", fo.theta, "fixed associate family angle");
    family->add_option("--lambda", fo.lambda, "fixed scaling parameter")->check(CLI::PositiveNumber);
    family->add_option("--c", fo.c, "fixed deformation parameter");
    family->add_option("--grid", fo.grid, "rings N, spokes 8N/3 (default 96 x 256)");
    family->add_option("--out", fo.out, "output directory")->required();

    std::string eo_out;
    CLI::App* examples = app.add_subcommand("examples", "list the built-in data catalog");
    examples->add_option("--out", eo_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (surface->parsed()) return zmc::cli::cmd_surface(so);
        if (verify->parsed()) return zmc::cli::cmd_verify(vo);
        if (region->parsed()) return zmc::cli::cmd_region(ro);
        if (family->parsed()) return zmc::cli::cmd_family(fo);
        if (examples->parsed()) return zmc::cli::cmd_examples(eo_out);
    } catch (const zmc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zmc::QuadratureNoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
