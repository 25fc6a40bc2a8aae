#include "affsphere/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace affsphere {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Config, "cannot open '" + path + "' for writing");
    return out;
}

void dump_json(const json& j, const std::string& path) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

json vec2_json(const Vec2& v) { return json::array({v.x, v.y}); }
json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

void write_grid_csv(const SurfaceGrid& grid, const std::string& path) {
    auto out = open_out(path);
    out << "s,t,x,y,g,omega\n";
    for (const auto& p : grid.samples)
        out << format_double(p.s) << ',' << format_double(p.t) << ','
            << format_double(p.x.x) << ',' << format_double(p.x.y) << ','
            << format_double(p.g) << ',' << format_double(p.omega) << '\n';
}

void write_samples_csv(const SurfaceGrid& grid, const std::string& path) {
    auto out = open_out(path);
    out << "s,t,x,y,nx,ny,g,g_s,g_t,omega,a,b\n";
    for (const auto& p : grid.samples)
        out << format_double(p.s) << ',' << format_double(p.t) << ','
            << format_double(p.x.x) << ',' << format_double(p.x.y) << ','
            << format_double(p.n.x) << ',' << format_double(p.n.y) << ','
            << format_double(p.g) << ',' << format_double(p.g_s) << ','
            << format_double(p.g_t) << ',' << format_double(p.omega) << ','
            << format_double(p.a) << ',' << format_double(p.b) << '\n';
}

void write_grid_json(const SurfaceGrid& grid, const std::string& path) {
    json j;
    j["ns"] = grid.spec.ns;
    j["nt"] = grid.spec.nt;
    j["window"] = {grid.spec.window.s_lo, grid.spec.window.s_hi, grid.spec.window.t_lo,
                   grid.spec.window.t_hi};
    json samples = json::array();
    for (const auto& p : grid.samples) {
        json rec;
        rec["s"] = p.s;
        rec["t"] = p.t;
        rec["x"] = vec2_json(p.x);
        rec["n"] = vec2_json(p.n);
        rec["g"] = p.g;
        rec["g_s"] = p.g_s;
        rec["g_t"] = p.g_t;
        rec["omega"] = p.omega;
        rec["a"] = p.a;
        rec["b"] = p.b;
        samples.push_back(std::move(rec));
    }
    j["samples"] = std::move(samples);
    dump_json(j, path);
}

void write_obj(const SurfaceGrid& grid, const std::string& obj_path,
               const std::string& sidecar_path, double singular_tol) {
    auto out = open_out(obj_path);
    const int ns = grid.spec.ns, nt = grid.spec.nt;
    std::vector<int> singular_vertices;
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j) {
            const SurfaceSample& p = grid.at(i, j);
            out << "v " << format_double(p.x.x) << ' ' << format_double(p.x.y) << ' '
                << format_double(p.g) << '\n';
            if (std::abs(p.omega) < singular_tol)
                singular_vertices.push_back(i * nt + j + 1);  // 1-based, like faces
        }
    for (int i = 0; i + 1 < ns; ++i)
        for (int j = 0; j + 1 < nt; ++j) {
            const int v00 = i * nt + j + 1, v10 = (i + 1) * nt + j + 1;
            const int v01 = i * nt + j + 2, v11 = (i + 1) * nt + j + 2;
            out << "f " << v00 << ' ' << v10 << ' ' << v11 << '\n';
            out << "f " << v00 << ' ' << v11 << ' ' << v01 << '\n';
        }
    json side;
    side["singular_tolerance"] = singular_tol;
    side["singular_vertices"] = singular_vertices;
    dump_json(side, sidecar_path);
}

namespace {

json singular_point_json(const SingularPoint& p) {
    json rec;
    rec["s"] = p.s;
    rec["t"] = p.t;
    rec["lambda"] = std::isfinite(p.lambda) ? json(p.lambda) : json();
    rec["lambda_prime"] = p.lambda_prime;
    rec["kind"] = kind_name(p.kind);
    rec["x_img"] = vec2_json(p.x_img);
    rec["q_img"] = vec3_json(p.q_img);
    rec["omega_s"] = p.omega_s;
    rec["omega_t"] = p.omega_t;
    return rec;
}

}  // namespace

void write_singular_json(const SingularSetResult& result, const std::string& path) {
    json j;
    json branches = json::array();
    std::map<std::string, int> counts;
    json swallowtails = json::array();
    for (const auto& branch : result.branches) {
        json b;
        b["closed"] = branch.closed;
        b["clipped"] = branch.clipped;
        json pts = json::array();
        for (const auto& p : branch.points) {
            pts.push_back(singular_point_json(p));
            ++counts[kind_name(p.kind)];
            if (p.kind == SingularKind::Swallowtail)
                swallowtails.push_back(json::array({p.s, p.t}));
        }
        b["points"] = std::move(pts);
        branches.push_back(std::move(b));
    }
    j["branches"] = std::move(branches);
    j["degenerate_seeds"] = result.degenerate_seeds;
    j["degenerate_field"] = result.degenerate_field;
    j["classifier_disagreements"] = result.classifier_disagreements;
    j["summary"] = {{"counts", counts}, {"swallowtails", swallowtails}};
    dump_json(j, path);
}

void write_evolute_csv(const SingularSetResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "branch,index,s,t,x,y,kind\n";
    for (size_t b = 0; b < result.branches.size(); ++b) {
        const auto& pts = result.branches[b].points;
        for (size_t i = 0; i < pts.size(); ++i)
            out << b << ',' << i << ',' << format_double(pts[i].s) << ','
                << format_double(pts[i].t) << ',' << format_double(pts[i].x_img.x)
                << ',' << format_double(pts[i].x_img.y) << ',' << kind_name(pts[i].kind)
                << '\n';
    }
}

namespace {

// Minimal SVG writer: polylines and dot markers in data coordinates, mapped
// into a fixed square canvas with the y axis pointing up.
class SvgCanvas {
public:
    void polyline(std::vector<Vec2> pts, const std::string& color, double width,
                  bool dashed = false) {
        for (const Vec2& p : pts) grow(p);
        lines_.push_back({std::move(pts), color, width, dashed});
    }
    void marker(const Vec2& p, const std::string& color, double radius) {
        grow(p);
        markers_.push_back({p, color, radius});
    }
    void label(const std::string& text, const std::string& color) {
        legend_.push_back({text, color});
    }

    void write(const std::string& path) const {
        auto out = open_out(path);
        const double side = 760.0, margin = 20.0;
        double span_x = std::max(hi_.x - lo_.x, 1e-12);
        double span_y = std::max(hi_.y - lo_.y, 1e-12);
        const double span = std::max(span_x, span_y);
        const double scale = side / span;
        auto mx = [&](double x) { return margin + (x - lo_.x) * scale; };
        auto my = [&](double y) { return margin + (hi_.y - y) * scale; };
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
               "viewBox=\"0 0 800 800\">\n";
        out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
        char buf[64];
        for (const auto& l : lines_) {
            if (l.pts.size() < 2) continue;
            out << "<path fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\""
                << l.width << "\"";
            if (l.dashed) out << " stroke-dasharray=\"6 4\"";
            out << " d=\"";
            for (size_t i = 0; i < l.pts.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%c%.3f %.3f", i == 0 ? 'M' : 'L',
                              mx(l.pts[i].x), my(l.pts[i].y));
                out << buf;
            }
            out << "\"/>\n";
        }
        for (const auto& m : markers_) {
            std::snprintf(buf, sizeof(buf),
                          "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.2f\" fill=\"%s\"/>",
                          mx(m.p.x), my(m.p.y), m.radius, m.color.c_str());
            out << buf << '\n';
        }
        double y = 16.0;
        for (const auto& [text, color] : legend_) {
            out << "<text x=\"8\" y=\"" << y << "\" font-size=\"13\" fill=\"" << color
                << "\">" << text << "</text>\n";
            y += 16.0;
        }
        out << "</svg>\n";
    }

private:
    struct Line {
        std::vector<Vec2> pts;
        std::string color;
        double width;
        bool dashed;
    };
    struct Marker {
        Vec2 p;
        std::string color;
        double radius;
    };
    void grow(const Vec2& p) {
        lo_.x = std::min(lo_.x, p.x);
        lo_.y = std::min(lo_.y, p.y);
        hi_.x = std::max(hi_.x, p.x);
        hi_.y = std::max(hi_.y, p.y);
    }
    Vec2 lo_{1e300, 1e300}, hi_{-1e300, -1e300};
    std::vector<Line> lines_;
    std::vector<Marker> markers_;
    std::vector<std::pair<std::string, std::string>> legend_;
};

std::vector<Vec2> curve_polyline(const PlanarCurve& curve, const Interval& range,
                                 int n = 256) {
    std::vector<Vec2> pts;
    pts.reserve(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        pts.push_back(curve.point(range.lo + range.length() * i / n));
    return pts;
}

// parameter range the traced branches actually visit, for drawing the curves
Interval visited_range(const SingularSetResult& result, bool s_axis,
                       const Interval& fallback) {
    double lo = 1e300, hi = -1e300;
    for (const auto& branch : result.branches)
        for (const auto& p : branch.points) {
            const double v = s_axis ? p.s : p.t;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (lo > hi) return fallback;
    return {lo, hi};
}

}  // namespace

void write_evolute_svg(const CurvePair& pair, const SingularSetResult& result,
                       const std::string& path) {
    SvgCanvas svg;
    const Interval rs = visited_range(result, true, pair.alpha.domain());
    const Interval rt = visited_range(result, false, pair.beta.domain());
    svg.polyline(curve_polyline(pair.alpha, rs), "#777777", 1.0, true);
    svg.polyline(curve_polyline(pair.beta, rt), "#bbbbbb", 1.0, true);
    for (const auto& branch : result.branches) {
        std::vector<Vec2> pts;
        pts.reserve(branch.points.size());
        for (const auto& p : branch.points) pts.push_back(p.x_img);
        svg.polyline(std::move(pts), "#c0392b", 1.5);
        for (const auto& p : branch.points)
            if (p.kind == SingularKind::Swallowtail)
                svg.marker(p.x_img, "#000000", 4.0);
    }
    svg.label("area evolute x(S)", "#c0392b");
    svg.label("cusp markers: swallowtail points", "#000000");
    svg.label("alpha (dark), beta (light)", "#777777");
    svg.write(path);
}

void write_symmetry_json(const AassResult& aass, const AessResult& aess,
                         const std::string& path) {
    json j;
    json ab = json::array();
    for (const auto& branch : aass.branches) {
        json pts = json::array();
        for (const auto& sol : branch) {
            json rec;
            rec["s1"] = sol.s1;
            rec["t1"] = sol.t1;
            rec["s2"] = sol.s2;
            rec["t2"] = sol.t2;
            rec["midpoint"] = vec2_json(sol.midpoint);
            rec["g"] = sol.g_val;
            rec["residual"] = sol.residual;
            rec["separation"] = sol.separation;
            pts.push_back(std::move(rec));
        }
        ab.push_back(std::move(pts));
    }
    j["aass"] = {{"branches", std::move(ab)}, {"stalled", aass.stalled}};
    json eb = json::array();
    for (const auto& branch : aess.branches) {
        json pts = json::array();
        for (const auto& p : branch) {
            json rec;
            rec["s"] = p.s;
            rec["t"] = p.t;
            rec["conic_kind"] = conic_kind_name(p.conic.kind);
            rec["conic"] = p.conic.coeffs;
            if (p.conic.center)
                rec["center"] = vec2_json(*p.conic.center);
            else
                rec["center"] = nullptr;  // at infinity
            rec["midline_point"] = vec2_json(p.line.point);
            rec["midline_direction"] = vec2_json(p.line.direction);
            rec["on_singular_set"] = p.on_singular_set;
            pts.push_back(std::move(rec));
        }
        eb.push_back(std::move(pts));
    }
    j["aess"] = {{"branches", std::move(eb)},
                 {"degenerate_e", aess.degenerate_e},
                 {"degenerate_seeds", aess.degenerate_seeds}};
    dump_json(j, path);
}

void write_symmetry_csv(const AassResult& aass, const AessResult& aess,
                        const std::string& path) {
    auto out = open_out(path);
    out << "set,branch,index,s1,t1,s2,t2,px,py\n";
    for (size_t b = 0; b < aass.branches.size(); ++b)
        for (size_t i = 0; i < aass.branches[b].size(); ++i) {
            const auto& sol = aass.branches[b][i];
            out << "aass," << b << ',' << i << ',' << format_double(sol.s1) << ','
                << format_double(sol.t1) << ',' << format_double(sol.s2) << ','
                << format_double(sol.t2) << ',' << format_double(sol.midpoint.x) << ','
                << format_double(sol.midpoint.y) << '\n';
        }
    for (size_t b = 0; b < aess.branches.size(); ++b)
        for (size_t i = 0; i < aess.branches[b].size(); ++i) {
            const auto& p = aess.branches[b][i];
            const Vec2 c = p.conic.center.value_or(Vec2{std::nan(""), std::nan("")});
            out << "aess," << b << ',' << i << ',' << format_double(p.s) << ','
                << format_double(p.t) << ",,," << format_double(c.x) << ','
                << format_double(c.y) << '\n';
        }
}

void write_overlay_svg(const CurvePair& pair, const SingularSetResult& singular,
                       const AassResult& aass, const AessResult& aess,
                       const std::string& path) {
    SvgCanvas svg;
    const Interval rs = visited_range(singular, true, pair.alpha.domain());
    const Interval rt = visited_range(singular, false, pair.beta.domain());
    svg.polyline(curve_polyline(pair.alpha, rs), "#555555", 1.2);
    svg.polyline(curve_polyline(pair.beta, rt), "#999999", 1.2);
    for (const auto& branch : singular.branches) {
        std::vector<Vec2> pts;
        for (const auto& p : branch.points) pts.push_back(p.x_img);
        svg.polyline(std::move(pts), "#c0392b", 1.5);
    }
    for (const auto& branch : aass.branches) {
        std::vector<Vec2> pts;
        for (const auto& sol : branch) pts.push_back(sol.midpoint);
        svg.polyline(std::move(pts), "#2980b9", 1.5);
    }
    for (const auto& branch : aess.branches) {
        std::vector<Vec2> centers;
        for (const auto& p : branch)
            if (p.conic.center) centers.push_back(*p.conic.center);
        svg.polyline(std::move(centers), "#27ae60", 1.5);
        // a thinned sample of midlines
        const size_t stride = std::max<size_t>(1, branch.size() / 12);
        for (size_t i = 0; i < branch.size(); i += stride) {
            const auto& ml = branch[i].line;
            const double len = 0.2;
            svg.polyline({ml.point - ml.direction * len, ml.point + ml.direction * len},
                         "#8e44ad", 0.6, true);
        }
    }
    svg.label("alpha / beta", "#555555");
    svg.label("area evolute", "#c0392b");
    svg.label("AASS midpoints", "#2980b9");
    svg.label("AESS centers", "#27ae60");
    svg.label("midlines", "#8e44ad");
    svg.write(path);
}

PlanarCurve load_curve_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open curve file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::Config, "invalid JSON in '" + path + "': " + e.what());
    }
    const std::string backend = j.value("backend", j.contains("samples")
                                                       ? std::string("samples")
                                                       : std::string("polynomial"));
    if (backend == "polynomial") {
        if (!j.contains("x_coeffs") || !j.contains("y_coeffs"))
            fail(ErrorKind::Config, "polynomial curve needs x_coeffs and y_coeffs");
        std::vector<double> xc = j["x_coeffs"].get<std::vector<double>>();
        std::vector<double> yc = j["y_coeffs"].get<std::vector<double>>();
        Interval dom{-10.0, 10.0};
        if (j.contains("domain")) {
            dom.lo = j["domain"][0].get<double>();
            dom.hi = j["domain"][1].get<double>();
        }
        return PlanarCurve::polynomial(std::move(xc), std::move(yc), dom);
    }
    if (backend == "samples") {
        if (!j.contains("samples"))
            fail(ErrorKind::Config, "sample curve needs a samples array");
        std::vector<double> u;
        std::vector<Vec2> pts;
        for (const auto& row : j["samples"]) {
            u.push_back(row[0].get<double>());
            pts.push_back({row[1].get<double>(), row[2].get<double>()});
        }
        return PlanarCurve::spline_fit(u, pts);
    }
    fail(ErrorKind::Config, "unknown curve backend '" + backend + "'");
}

namespace {

LoadedGrid organize_grid(std::vector<double> s, std::vector<double> t,
                         std::vector<Vec2> x, std::vector<double> g,
                         std::vector<Vec2> n, bool has_n) {
    // axis values, in first-seen order (files are written row-major)
    std::vector<double> s_vals, t_vals;
    for (double v : s)
        if (s_vals.empty() || v != s_vals.back()) {
            if (std::find(s_vals.begin(), s_vals.end(), v) == s_vals.end())
                s_vals.push_back(v);
        }
    for (double v : t)
        if (std::find(t_vals.begin(), t_vals.end(), v) == t_vals.end())
            t_vals.push_back(v);
    const size_t ns = s_vals.size(), nt = t_vals.size();
    if (ns < 2 || nt < 2 || ns * nt != s.size())
        fail(ErrorKind::Config, "grid file is not a complete lattice");
    LoadedGrid out;
    out.s_values = std::move(s_vals);
    out.t_values = std::move(t_vals);
    out.x.resize(ns * nt);
    out.g.resize(ns * nt);
    out.n.resize(ns * nt);
    out.has_n = has_n;
    auto index_of = [](const std::vector<double>& vals, double v) {
        return static_cast<size_t>(
            std::find(vals.begin(), vals.end(), v) - vals.begin());
    };
    for (size_t k = 0; k < s.size(); ++k) {
        const size_t i = index_of(out.s_values, s[k]);
        const size_t j = index_of(out.t_values, t[k]);
        if (i >= ns || j >= nt) fail(ErrorKind::Config, "grid file indexing failure");
        out.x[i * nt + j] = x[k];
        out.g[i * nt + j] = g[k];
        if (has_n) out.n[i * nt + j] = n[k];
    }
    return out;
}

}  // namespace

LoadedGrid load_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open grid file '" + path + "'");
    std::string header;
    std::getline(in, header);
    const bool full = header.rfind("s,t,x,y,nx,ny", 0) == 0;
    if (!full && header.rfind("s,t,x,y,g,omega", 0) != 0)
        fail(ErrorKind::Config, "unrecognized grid CSV header");
    std::vector<double> s, t, g;
    std::vector<Vec2> x, n;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<double> f;
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(std::stod(tok));
        if (f.size() < 6) fail(ErrorKind::Config, "short row in grid CSV");
        s.push_back(f[0]);
        t.push_back(f[1]);
        x.push_back({f[2], f[3]});
        if (full) {
            n.push_back({f[4], f[5]});
            g.push_back(f[6]);
        } else {
            g.push_back(f[4]);
        }
    }
    return organize_grid(std::move(s), std::move(t), std::move(x), std::move(g),
                         std::move(n), full);
}

LoadedGrid load_grid_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open grid file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::Config, "invalid JSON in '" + path + "': " + e.what());
    }
    std::vector<double> s, t, g;
    std::vector<Vec2> x, n;
    bool has_n = false;
    for (const auto& rec : j["samples"]) {
        s.push_back(rec["s"].get<double>());
        t.push_back(rec["t"].get<double>());
        x.push_back({rec["x"][0].get<double>(), rec["x"][1].get<double>()});
        g.push_back(rec["g"].get<double>());
        if (rec.contains("n")) {
            has_n = true;
            n.push_back({rec["n"][0].get<double>(), rec["n"][1].get<double>()});
        } else {
            n.push_back({0.0, 0.0});
        }
    }
    return organize_grid(std::move(s), std::move(t), std::move(x), std::move(g),
                         std::move(n), has_n);
}

}  // namespace affsphere
