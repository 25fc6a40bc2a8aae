#include "affsphere/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace affsphere {

namespace {

struct Lattice {
    Window win;
    int ns, nt;
    double cw, ch;

    int cell_of(double s, double t) const {
        int i = static_cast<int>((s - win.s_lo) / cw);
        int j = static_cast<int>((t - win.t_lo) / ch);
        i = std::clamp(i, 0, ns - 1);
        j = std::clamp(j, 0, nt - 1);
        return i * nt + j;
    }
};

// Newton projection onto {f = 0}; false when the gradient degenerates or the
// iteration leaves the window neighbourhood.
bool refine(const ScalarField& field, const TraceOptions& opts, Vec2& z,
            bool* degenerate) {
    for (int it = 0; it < 50; ++it) {
        const double f = field.f(z.x, z.y);
        if (std::abs(f) <= opts.tol) return true;
        const auto [fs, ft] = field.grad(z.x, z.y);
        const double g2 = fs * fs + ft * ft;
        if (std::sqrt(g2) < opts.degenerate_tol) {
            if (degenerate) *degenerate = true;
            return false;
        }
        z.x -= f * fs / g2;
        z.y -= f * ft / g2;
        if (!opts.window.contains(z.x, z.y, 4.0 * std::max(
                (opts.window.s_hi - opts.window.s_lo) / opts.seed_ns,
                (opts.window.t_hi - opts.window.t_lo) / opts.seed_nt)))
            return false;
    }
    return false;
}

Vec2 tangent_at(const ScalarField& field, const Vec2& z) {
    const auto [fs, ft] = field.grad(z.x, z.y);
    Vec2 d{-ft, fs};
    const double n = d.norm();
    return n > 0.0 ? d / n : Vec2{0.0, 0.0};
}

enum class StopReason { Window, Degenerate, Closed, Stall, Cap };

StopReason march(const ScalarField& field, const TraceOptions& opts, Vec2 start,
                 Vec2 dir, std::vector<Vec2>& out) {
    Vec2 p = start;
    Vec2 d = dir;
    const int cap = opts.max_points;
    for (int k = 0; k < cap; ++k) {
        double h = opts.step;
        Vec2 next;
        bool ok = false, degen = false;
        for (int attempt = 0; attempt < 5 && !ok; ++attempt, h *= 0.5) {
            next = p + d * h;
            if (!opts.window.contains(next.x, next.y)) {
                // shrink toward the boundary; stop once the remaining step is tiny
                if (h < 0.05 * opts.step) return StopReason::Window;
                continue;
            }
            ok = refine(field, opts, next, &degen);
            if (degen) return StopReason::Degenerate;
            if (ok && (next - p).norm() > 2.0 * opts.step) ok = false;  // jumped branch
        }
        if (!ok) return StopReason::Stall;
        if (!opts.window.contains(next.x, next.y)) return StopReason::Window;
        out.push_back(next);
        Vec2 dn = tangent_at(field, next);
        if (dn.dot(d) < 0.0) dn = dn * -1.0;
        d = dn;
        p = next;
        if (k >= 5 && (p - start).norm() < 0.6 * opts.step) return StopReason::Closed;
    }
    return StopReason::Cap;
}

}  // namespace

TraceResult trace_zero_set(const ScalarField& field, const TraceOptions& opts,
                           Exec exec) {
    TraceResult result;
    const int ns = opts.seed_ns, nt = opts.seed_nt;
    if (ns < 2 || nt < 2 || opts.step <= 0.0 || opts.tol <= 0.0)
        fail(ErrorKind::Config, "invalid trace options");

    const std::vector<double> fv =
        sample_field(field.f, opts.window, ns + 1, nt + 1, exec);
    double abs_max = 0.0;
    size_t near_zero = 0;
    for (double v : fv) {
        abs_max = std::max(abs_max, std::abs(v));
        if (std::abs(v) <= opts.tol) ++near_zero;
    }
    if (abs_max < 1e-13 || near_zero > fv.size() * 3 / 5) {
        result.degenerate_field = true;
        return result;
    }

    const Lattice lat{opts.window, ns, nt,
                      (opts.window.s_hi - opts.window.s_lo) / ns,
                      (opts.window.t_hi - opts.window.t_lo) / nt};
    // per-cell index of already traced points, for seed suppression
    std::vector<std::vector<Vec2>> traced(static_cast<size_t>(ns) * nt);
    const double suppress =
        std::max(3.0 * opts.step, 0.05 * std::hypot(lat.cw, lat.ch));

    auto near_existing = [&](const Vec2& z) {
        const int ci = std::clamp(static_cast<int>((z.x - opts.window.s_lo) / lat.cw), 0, ns - 1);
        const int cj = std::clamp(static_cast<int>((z.y - opts.window.t_lo) / lat.ch), 0, nt - 1);
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                const int i = ci + di, j = cj + dj;
                if (i < 0 || j < 0 || i >= ns || j >= nt) continue;
                for (const Vec2& q : traced[static_cast<size_t>(i) * nt + j])
                    if ((q - z).norm() < suppress) return true;
            }
        return false;
    };
    auto record = [&](const Vec2& z) {
        traced[static_cast<size_t>(lat.cell_of(z.x, z.y))].push_back(z);
    };

    auto corner = [&](int i, int j) {
        return fv[static_cast<size_t>(i) * (nt + 1) + static_cast<size_t>(j)];
    };

    for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < nt; ++j) {
            const double f00 = corner(i, j), f10 = corner(i + 1, j);
            const double f01 = corner(i, j + 1), f11 = corner(i + 1, j + 1);
            const double mn = std::min({f00, f10, f01, f11});
            const double mx = std::max({f00, f10, f01, f11});
            if (mn > 0.0 || mx < 0.0) continue;

            Vec2 z{opts.window.s_lo + (i + 0.5) * lat.cw,
                   opts.window.t_lo + (j + 0.5) * lat.ch};
            bool degen = false;
            if (!refine(field, opts, z, &degen)) {
                if (degen) ++result.degenerate_seeds;
                continue;
            }
            if (!opts.window.contains(z.x, z.y) || near_existing(z)) continue;

            TracedBranch branch;
            const Vec2 d0 = tangent_at(field, z);
            if (d0.norm() == 0.0) {
                ++result.degenerate_seeds;
                continue;
            }
            std::vector<Vec2> fwd, bwd;
            const StopReason r1 = march(field, opts, z, d0, fwd);
            if (r1 == StopReason::Closed) {
                branch.closed = true;
                branch.points.push_back(z);
                branch.points.insert(branch.points.end(), fwd.begin(), fwd.end());
            } else {
                const StopReason r2 = march(field, opts, z, d0 * -1.0, bwd);
                branch.points.assign(bwd.rbegin(), bwd.rend());
                branch.points.push_back(z);
                branch.points.insert(branch.points.end(), fwd.begin(), fwd.end());
                branch.clipped = (r1 != StopReason::Cap) || (r2 != StopReason::Cap);
                if (r1 == StopReason::Degenerate || r2 == StopReason::Degenerate)
                    ++result.degenerate_seeds;
            }
            if (branch.points.size() < 3) continue;
            for (const Vec2& q : branch.points) record(q);
            result.branches.push_back(std::move(branch));
        }
    }
    return result;
}

}  // namespace affsphere
