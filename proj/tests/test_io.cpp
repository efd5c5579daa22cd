#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include <zmc/catalog.hpp>
#include <zmc/expr_parse.hpp>
#include <zmc/mesh.hpp>
#include <zmc/weierstrass.hpp>

using namespace zmc;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(ZMC_CLI_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "zmc_io_tests";
    fs::create_directories(dir);
    return dir;
}

std::string write_scratch(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    std::ofstream os(p, std::ios::binary);
    os << text;
    return p.string();
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
    int n = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        if (text.compare(pos, prefix.size(), prefix) == 0) ++n;
        pos = end + 1;
    }
    return n;
}

} // namespace

TEST_CASE("expression parser accepts the grammar") {
    const cplx w{0.3, -0.7};
    CHECK(std::abs(heval(parse_holo("w^3 + 2*w - 1"), w) - (w * w * w + 2.0 * w - 1.0)) < 1e-15);
    CHECK(std::abs(heval(parse_holo("4/(1-w^4)"), w) - 4.0 / (1.0 - w * w * w * w)) < 1e-15);
    CHECK(std::abs(heval(parse_holo("exp(2*w)"), w) - std::exp(2.0 * w)) < 1e-15);
    CHECK(std::abs(heval(parse_holo("log(1+w)"), w) - std::log(1.0 + w)) < 1e-15);
    CHECK(std::abs(heval(parse_holo("(1+i*w)^-2"), w) -
                   1.0 / ((1.0 + cplx{0, 1} * w) * (1.0 + cplx{0, 1} * w))) < 1e-15);
    CHECK(std::abs(heval(parse_holo("-w"), w) + w) < 1e-15);
    CHECK(std::abs(heval(parse_holo("2*pi"), w) - cplx{2.0 * pi, 0.0}) < 1e-15);
    CHECK(std::abs(heval(parse_holo(" w ^ 2 "), w) - w * w) < 1e-15);
}

TEST_CASE("expression parser rejects malformed input") {
    CHECK_THROWS_AS(parse_holo(""), ParseError);
    CHECK_THROWS_AS(parse_holo("w +"), ParseError);
    CHECK_THROWS_AS(parse_holo("2^w"), ParseError);  // integer exponents only
    CHECK_THROWS_AS(parse_holo("exp"), ParseError);
    CHECK_THROWS_AS(parse_holo("(w"), ParseError);
    CHECK_THROWS_AS(parse_holo("w$"), ParseError);
    CHECK_THROWS_AS(parse_holo("foo(w)"), ParseError);
}

TEST_CASE("data files parse with optional domain and potentials") {
    const WeierstrassData simple = parse_data_json(R"({"F": "1", "G": "w"})");
    CHECK(simple.domain().shape() == DomainShape::Disk);
    CHECK(simple.domain().disk_radius() == Catch::Approx(1.0));

    const WeierstrassData sub = parse_data_json(
        R"({"F": "1", "G": "w^2", "domain": {"type": "disk", "radius": 0.5}})");
    CHECK(sub.domain().disk_radius() == Catch::Approx(0.5));

    const WeierstrassData half = parse_data_json(
        R"js({"F": "1", "G": "exp(w)", "domain": {"type": "half_plane", "width": 4, "height": 3}})js");
    CHECK(half.domain().truncated());
    CHECK(half.domain().half_plane_width() == Catch::Approx(4.0));

    const WeierstrassData with_pots = parse_data_json(
        R"({"F": "1", "G": "w",
            "potentials": {"h": "w", "g": "-w^3/3", "T": "w^2"}})");
    CHECK(with_pots.has_closed_potentials());
    const Potentials pots = potentials(with_pots);
    CHECK(std::abs(pots.g({0.5, 0.0}) - cplx{-0.125 / 3.0, 0.0}) < 1e-15);

    CHECK_THROWS_AS(parse_data_json("not json"), ParseError);
    CHECK_THROWS_AS(parse_data_json(R"({"F": "1"})"), ParseError);
    CHECK_THROWS_AS(parse_data_json(R"({"F": "1", "G": "w", "domain": {"type": "torus"}})"),
                    ParseError);
    // inconsistent closed potentials are rejected by the cross check
    CHECK_THROWS_AS(parse_data_json(
                        R"({"F": "1", "G": "w",
                            "potentials": {"h": "w^2", "g": "-w^3/3", "T": "w^2"}})"),
                    std::invalid_argument);
}

TEST_CASE("mesh writer emits indexed faces with metadata") {
    const auto enn1 = catalog_make("enneper", 1).data;
    const SurfaceMesh mesh = build_surface_mesh(enn1, DeformParams(0.0, 1.0, 1.0), 4, 8);
    REQUIRE(mesh.vertices.size() == 1 + 4 * 8);
    for (const auto& f : mesh.faces) {
        for (int idx : f) {
            CHECK(idx >= 1);
            CHECK(idx <= int(mesh.vertices.size()));
        }
    }
    std::ostringstream os;
    write_mesh(os, mesh);
    const std::string text = os.str();
    CHECK(count_lines_starting(text, "v ") == int(mesh.vertices.size()));
    CHECK(count_lines_starting(text, "f ") == int(mesh.faces.size()));
    CHECK(text.find("vertices: ") != std::string::npos);

    CHECK_THROWS_AS(build_surface_mesh(enn1, DeformParams(0.0, 1.0, 1.0), 1, 8),
                    ResolutionTooLow);
}

TEST_CASE("cli lists the catalog") {
    const RunResult r = run_cli("examples");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("enneper") != std::string::npos);
    CHECK(r.out.find("exponential") != std::string::npos);
    CHECK(r.out.find("scherk") != std::string::npos);
}

TEST_CASE("cli verify reports a univalent member as json") {
    const RunResult r =
        run_cli("verify --example enneper --n 1 --rho 0.25 --resolution 96");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "univalent");
    CHECK(j["jacobianSign"] == "positive");
    CHECK(j["boundarySimple"] == true);
    CHECK(j["imageClass"] == "convex");
    CHECK(j["supAbsDilatation"].get<double>() == Catch::Approx(0.25).margin(1e-6));
}

TEST_CASE("cli verify flags the deformation past the graph bound") {
    const RunResult r =
        run_cli("verify --example enneper --n 1 --rho 1.5 --resolution 96 --strict");
    REQUIRE(r.exit_code == 0);  // strict only escalates inconclusive verdicts
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "not_univalent");
    CHECK(j["jacobianSign"] == "mixed");
}

TEST_CASE("cli verify rejects conflicting parameter shortcuts") {
    CHECK(run_cli("verify --example enneper --c 1 --rho 1").exit_code == 2);
    CHECK(run_cli("verify").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("verify --example enneper --lambda -1").exit_code == 2);
}

TEST_CASE("cli region output is deterministic and coherent") {
    const std::string args =
        "region --example enneper --n 1 --theta 0 --rho-max 2 --rho-samples 4 --resolution 96";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const size_t split = a.out.find("\n\n");
    REQUIRE(split != std::string::npos);
    const auto j = nlohmann::json::parse(a.out.substr(0, split));
    CHECK(j["graph"][0]["kind"] == "isotropic");
    CHECK(j["graph"][0]["rhoMax"].get<double>() == Catch::Approx(1.0).margin(1e-9));
    CHECK(j["graph"][0]["openEnd"] == false);
    CHECK(j["nongraph"]["rhoLo"].get<double>() == Catch::Approx(1.0).margin(1e-9));
    CHECK(j["nongraph"]["rhoHi"].is_null());
    CHECK(j["nongraph"]["witness"]["residual"].get<double>() <= 1e-9);
    CHECK(j["contradictions"] == 0);

    const std::string csv = a.out.substr(split + 2);
    CHECK(csv.rfind("theta,rho,c_sign,certificate,oracle\n", 0) == 0);
    CHECK(count_lines_starting(csv, "") == 1 + 1 * 4 * 2);  // header + rows
    CHECK(csv.find("graph:isotropic,univalent") != std::string::npos);
    CHECK(csv.find("nongraph,not_univalent") != std::string::npos);
}

TEST_CASE("cli region detects a damaged certificate") {
    const RunResult r = run_cli(
        "region --example enneper --n 1 --theta 0 --rho-max 1 --rho-samples 2 "
        "--resolution 0 --test-corrupt-certificate");
    CHECK(r.exit_code == 4);
}

TEST_CASE("cli region covers the seeded example") {
    const RunResult r = run_cli(
        "region --example scherk --seed-theta 0 --seed-lambda 1 --seed-c 1 "
        "--theta 0 --rho-max 0.8 --rho-samples 2 --resolution 96");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out.substr(0, r.out.find("\n\n")));
    CHECK(j["graph"][0]["kind"] == "seeded");
    CHECK(j["graph"][0]["rhoMax"].get<double>() == Catch::Approx(1.0));
    CHECK_FALSE(j.contains("hypothesisFailure"));

    // without a seed the hypothesis degrades but the nongraph side remains
    const RunResult ns = run_cli(
        "region --example scherk --theta 0 --rho-max 1 --rho-samples 1 --resolution 0");
    REQUIRE(ns.exit_code == 0);
    const auto nj = nlohmann::json::parse(ns.out.substr(0, ns.out.find("\n\n")));
    CHECK(nj["graph"].empty());
    CHECK(nj["nongraph"]["rhoLo"].get<double>() == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("cli region honors the truncation caveat") {
    const RunResult r = run_cli(
        "region --example exponential --n 2 --truncation 6 --theta 0 "
        "--rho-max 1 --rho-samples 2 --resolution 96");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out.substr(0, r.out.find("\n\n")));
    CHECK(j["truncationCaveat"] == true);
    CHECK(j["graph"][0]["rhoMax"].get<double>() >= 1.0);
}

TEST_CASE("cli surface writes a mesh and a singular sidecar") {
    const fs::path mesh_path = scratch_dir() / "surface.mesh";
    fs::remove(mesh_path);
    fs::remove(mesh_path.string() + ".sing");
    const RunResult r = run_cli("surface --example enneper --n 1 --grid 24 --out " +
                                mesh_path.string());
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(mesh_path));
    REQUIRE(fs::exists(mesh_path.string() + ".sing"));

    std::ifstream in(mesh_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(count_lines_starting(text, "v ") == 1 + 24 * 64);
    CHECK(count_lines_starting(text, "f ") == 64 + 23 * 64 * 2);
    CHECK(text.find("theta=") != std::string::npos);

    CHECK(run_cli("surface --example enneper").exit_code == 2);  // --out required
}

TEST_CASE("cli family emits a mesh sequence with a manifest") {
    const fs::path dir = scratch_dir() / "family_theta";
    fs::remove_all(dir);
    const RunResult r = run_cli("family --example scherk --sweep theta --steps 4 --grid 12 --out " +
                                dir.string());
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(dir / "index.json"));
    std::ifstream in(dir / "index.json");
    const auto manifest = nlohmann::json::parse(in);
    REQUIRE(manifest["members"].size() == 4);
    CHECK(manifest["sweep"] == "theta");
    CHECK(manifest["metricInvariance"]["passed"] == true);
    CHECK(manifest["metricInvariance"]["maxRelDeviation"].get<double>() <= 1e-12);
    for (const auto& m : manifest["members"])
        CHECK(fs::exists(dir / m["file"].get<std::string>()));

    // a c sweep with an odd step count passes through the undeformed member
    const fs::path dirc = scratch_dir() / "family_c";
    fs::remove_all(dirc);
    const RunResult rc =
        run_cli("family --example enneper --n 1 --sweep c --steps 3 --grid 8 --out " +
                dirc.string());
    REQUIRE(rc.exit_code == 0);
    std::ifstream inc(dirc / "index.json");
    const auto mc = nlohmann::json::parse(inc);
    CHECK(mc["members"][1]["c"].get<double>() == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("cli reads data files") {
    const std::string path = write_scratch("affine.json", R"({"F": "1", "G": "(w+3)/4"})");
    const RunResult r = run_cli("verify --data " + path + " --rho 0.5 --resolution 96");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "univalent");
    CHECK(j["supAbsDilatation"].get<double>() == Catch::Approx(0.5).margin(1e-6));

    const std::string bad = write_scratch("bad.json", "{");
    CHECK(run_cli("verify --data " + bad).exit_code == 2);
    CHECK(run_cli("verify --data /nonexistent/file.json").exit_code == 2);
}

TEST_CASE("cli config file fills defaults that flags override") {
    const std::string cfg = write_scratch("region.cfg",
                                          "example=enneper\nn=1\nresolution=96\n");
    const RunResult r =
        run_cli("verify --config " + cfg + " --rho 0.25");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "univalent");
    CHECK(j["resolution"] == 96);
}
