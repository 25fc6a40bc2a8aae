#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "affsphere/fixtures.hpp"
#include "affsphere/io.hpp"

using namespace affsphere;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path tmp_dir() {
    const fs::path dir = fs::temp_directory_path() / "affsphere_io_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("grid files round trip") {
    const Fixture& fx = fixture("excusp1");
    const GridSpec spec{{-0.2, 0.2, -0.1, 0.3}, 9, 7, 1e-10};
    const SurfaceGrid grid = evaluate_grid(fx.pair, spec);
    const fs::path dir = tmp_dir();

    write_grid_csv(grid, (dir / "g.csv").string());
    write_samples_csv(grid, (dir / "full.csv").string());
    write_grid_json(grid, (dir / "g.json").string());

    for (const char* name : {"full.csv", "g.json"}) {
        const LoadedGrid loaded = std::string(name).ends_with("json")
                                      ? load_grid_json((dir / name).string())
                                      : load_grid_csv((dir / name).string());
        REQUIRE(loaded.s_values.size() == 9);
        REQUIRE(loaded.t_values.size() == 7);
        CHECK(loaded.has_n);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 7; ++j) {
                const SurfaceSample& sm = grid.at(i, j);
                const size_t k = static_cast<size_t>(i) * 7 + static_cast<size_t>(j);
                CHECK(loaded.x[k].x == sm.x.x);
                CHECK(loaded.g[k] == sm.g);
                CHECK(loaded.n[k].y == sm.n.y);
            }
    }
    // the short CSV drops the gradient
    const LoadedGrid slim = load_grid_csv((dir / "g.csv").string());
    CHECK_FALSE(slim.has_n);
    CHECK(slim.g[0] == grid.at(0, 0).g);
}

TEST_CASE("emission is byte deterministic") {
    const Fixture& fx = fixture("excusp2");
    const GridSpec spec{{-0.2, 0.2, -0.2, 0.2}, 8, 8, 1e-10};
    const fs::path dir = tmp_dir();
    write_grid_csv(evaluate_grid(fx.pair, spec), (dir / "a.csv").string());
    write_grid_csv(evaluate_grid(fx.pair, spec), (dir / "b.csv").string());
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

    const SingularSetResult traced = trace_singular_set(fx.pair, {0.1, 1.0, 0.1, 1.0});
    write_singular_json(traced, (dir / "s1.json").string());
    const SingularSetResult again = trace_singular_set(fx.pair, {0.1, 1.0, 0.1, 1.0});
    write_singular_json(again, (dir / "s2.json").string());
    CHECK(slurp(dir / "s1.json") == slurp(dir / "s2.json"));
}

TEST_CASE("obj export") {
    const Fixture& fx = fixture("excusp1");
    const GridSpec spec{{-0.2, 0.2, -0.2, 0.2}, 6, 5, 1e-10};
    const SurfaceGrid grid = evaluate_grid(fx.pair, spec);
    const fs::path dir = tmp_dir();
    write_obj(grid, (dir / "m.obj").string(), (dir / "m.json").string(), 1e-2);
    const std::string obj = slurp(dir / "m.obj");
    size_t vertices = 0, faces = 0, pos = 0;
    std::istringstream in(obj);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) ++vertices;
        if (line.rfind("f ", 0) == 0) ++faces;
    }
    (void)pos;
    CHECK(vertices == 30);
    CHECK(faces == 2u * 5u * 4u);
    // the window crosses the singular circle, so some vertex must be flagged
    const std::string sidecar = slurp(dir / "m.json");
    CHECK(sidecar.find("singular_vertices") != std::string::npos);
    CHECK(sidecar.find("[]") == std::string::npos);
}

TEST_CASE("curve definition files") {
    const fs::path dir = tmp_dir();
    {
        std::ofstream out(dir / "poly.json");
        out << R"({"backend": "polynomial", "x_coeffs": [0, 1],
                   "y_coeffs": [-1, 0, 1, 1], "domain": [-2, 2]})";
    }
    const PlanarCurve poly = load_curve_json((dir / "poly.json").string());
    CHECK(poly.point(0.0).y == -1.0);
    CHECK(poly.jet(0.0).d2.y == 2.0);
    {
        std::ofstream out(dir / "samples.json");
        out << R"({"samples": [)";
        for (int i = 0; i <= 40; ++i) {
            const double u = -0.2 + 0.4 * i / 40.0;
            out << (i ? "," : "") << '[' << u << ',' << u << ',' << (u * u - 1.0) << ']';
        }
        out << "]}";
    }
    const PlanarCurve spl = load_curve_json((dir / "samples.json").string());
    CHECK(spl.point(0.1).y == doctest::Approx(-0.99).epsilon(1e-9));
    {
        std::ofstream out(dir / "bad.json");
        out << "{\"backend\": \"polynomial\"}";
    }
    CHECK_THROWS_AS((void)load_curve_json((dir / "bad.json").string()), Error);
}

TEST_CASE("svg emitters produce well-formed files") {
    const Fixture& fx = fixture("excusp1");
    const fs::path dir = tmp_dir();
    const SingularSetResult traced =
        trace_singular_set(fx.pair, {-0.9, 0.3, -0.9, 0.3}, 5e-3);
    write_evolute_svg(fx.pair, traced, (dir / "e.svg").string());
    const std::string svg = slurp(dir / "e.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<path") != std::string::npos);
    CHECK(svg.find("circle") != std::string::npos);  // cusp markers
}
