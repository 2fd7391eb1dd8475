#include <cmath>
#include <sstream>

#include "bathforge/errors.hpp"
#include "bathforge/numerics.hpp"

namespace bathforge::numerics {

// Brent's method: inverse quadratic interpolation / secant steps, falling back
// to bisection whenever the interpolated step leaves the bracket or stalls.
double find_root(const RealFunction& f, double a, double b, const RootTolerance& tol) {
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0.0) == (fb > 0.0)) {
        std::ostringstream os;
        os << "find_root: no sign change on [" << a << ", " << b << "] (f(a)=" << fa << ", f(b)=" << fb << ")";
        throw NoSignChange(os.str());
    }
    double c = b;
    double fc = fb;
    double d = b - a;
    double e = d;
    for (int iter = 0; iter < tol.max_iterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * std::max(tol.abs, tol.rel * std::abs(b));
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p;
            double q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (!std::isfinite(fb)) throw NonConvergence("find_root: non-finite function value", b, std::abs(xm));
    }
    throw NonConvergence("find_root: iteration budget exhausted", b, std::abs(c - b));
}

}  // namespace bathforge::numerics
