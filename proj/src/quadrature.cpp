#include "affsphere/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace affsphere {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double value;  // Kronrod 15
    double error;  // |K15 - G7| based estimate
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = kWgk[7] * fc;
    double g = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double fp = f(c + h * kXgk[i]);
        const double fm = f(c - h * kXgk[i]);
        k += kWgk[i] * (fp + fm);
        if (i % 2 == 1) g += kWg[i / 2] * (fp + fm);
    }
    k *= h;
    g *= h;
    const double del = std::abs(k - g);
    // QUADPACK-style sharpening: |K-G| badly overestimates the Kronrod error
    // for smooth panels.
    const double scale = std::max(std::abs(k), 1e-30);
    double err = del;
    if (del > 0.0 && del < scale)
        err = scale * std::pow(200.0 * del / scale, 1.5);
    err = std::min(err, del);
    return {k, std::max(err, 4.0 * 1e-17 * std::abs(k))};
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double budget, int depth, double& sum, double& err_sum) {
    const Panel p = gk15(f, a, b);
    const double floor = 1e-15 * (1.0 + std::abs(p.value));
    if (p.error <= std::max(budget, floor) || depth >= 24) {
        sum += p.value;
        err_sum += p.error;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * budget, depth + 1, sum, err_sum);
    adapt(f, m, b, 0.5 * budget, depth + 1, sum, err_sum);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    if (a == b) return 0.0;
    if (tol <= 0.0) fail(ErrorKind::QuadratureFailure, "tolerance must be positive");
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    double sum = 0.0, err_sum = 0.0;
    adapt(f, a, b, tol, 0, sum, err_sum);
    if (!std::isfinite(sum) ||
        err_sum > 100.0 * std::max(tol, tol * std::abs(sum)) + 1e-14)
        fail(ErrorKind::QuadratureFailure,
             "quadrature error estimate " + std::to_string(err_sum) +
                 " above tolerance " + std::to_string(tol));
    return sign * sum;
}

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return "ConfigError";
        case ErrorKind::ParamOutOfDomain: return "ParamOutOfDomain";
        case ErrorKind::SingularParameterization: return "SingularParameterization";
        case ErrorKind::InflectionInDomain: return "InflectionInDomain";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::SingularRegion: return "SingularRegion";
        case ErrorKind::NotAsymptotic: return "NotAsymptotic";
        case ErrorKind::ContinuationStall: return "ContinuationStall";
        case ErrorKind::NotOnE: return "NotOnE";
        case ErrorKind::DegenerateConic: return "DegenerateConic";
        case ErrorKind::CoincidentTangentLines: return "CoincidentTangentLines";
    }
    return "Error";
}

}  // namespace affsphere
