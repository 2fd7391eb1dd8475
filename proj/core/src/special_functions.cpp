#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bathforge/errors.hpp"
#include "bathforge/numerics.hpp"

namespace bathforge::numerics {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Taylor coefficients of 1/Gamma(1 + x) about x = 0, i.e. the coefficients
// c_{m+1} of 1/Gamma(z) = sum c_k z^k shifted by one.
constexpr std::array<double, 28> kRecipGamma1p = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18};

// Temme's auxiliary functions for |mu| <= 1/2:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu),
//   gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2.
// Evaluated from the even/odd parts of the series, so mu -> 0 is exact.
struct TemmeGammas {
    double gam1;
    double gam2;
    double gampl;  // 1/Gamma(1+mu)
    double gammi;  // 1/Gamma(1-mu)
};

TemmeGammas temme_gammas(double mu) {
    const double mu2 = mu * mu;
    double odd = 0.0;
    double even = 0.0;
    // Horner over mu^2 from the highest term down.
    for (int m = static_cast<int>(kRecipGamma1p.size()) - 1; m >= 0; --m) {
        if (m % 2 == 0) {
            even = even * mu2 + kRecipGamma1p[static_cast<std::size_t>(m)];
        } else {
            odd = odd * mu2 + kRecipGamma1p[static_cast<std::size_t>(m)];
        }
    }
    // 1/Gamma(1 + mu) = even + mu * odd.
    TemmeGammas g{};
    g.gam1 = -odd;
    g.gam2 = even;
    g.gampl = even + mu * odd;
    g.gammi = even - mu * odd;
    return g;
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2. When `scaled` both carry a factor e^x.
std::pair<double, double> bessel_k_pair(double mu, double x, bool scaled) {
    constexpr int kMaxIter = 20000;
    const double mu2 = mu * mu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;

    if (x < 2.0) {
        // Temme's series.
        const double x2 = 0.5 * x;
        const double pimu = kPi * mu;
        const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = mu * d;
        const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
        const TemmeGammas g = temme_gammas(mu);
        double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / g.gampl;
        double q = 0.5 / (e * g.gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        int i = 1;
        for (; i <= kMaxIter; ++i) {
            const double di = static_cast<double>(i);
            ff = (di * ff + p + q) / (di * di - mu2);
            c *= d / di;
            p /= di - mu;
            q /= di + mu;
            const double del = c * ff;
            sum += del;
            const double del1 = c * (p - di * ff);
            sum1 += del1;
            if (std::abs(del) < std::abs(sum) * kEps) break;
        }
        if (i > kMaxIter) throw NonConvergence("bessel_k: Temme series did not converge", sum, 0.0);
        const double scale = scaled ? std::exp(x) : 1.0;
        return {sum * scale, sum1 * xi2 * scale};
    }

    // Steed's continued fraction CF2 (Temme's normalisation).
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 2;
    for (; i <= kMaxIter; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    if (i > kMaxIter) throw NonConvergence("bessel_k: continued fraction did not converge", 0.0, 0.0);
    h = a1 * h;
    double kmu = std::sqrt(kPi / (2.0 * x)) / s;
    if (!scaled) kmu *= std::exp(-x);
    const double k1 = kmu * (mu + x + 0.5 - h) * xi;
    return {kmu, k1};
}

double bessel_k_impl(double nu, double z, bool scaled) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        std::ostringstream os;
        os << "bessel_k: argument must be positive and finite, got z=" << z;
        throw DomainError(os.str());
    }
    if (!(nu >= 0.0) || !std::isfinite(nu)) {
        std::ostringstream os;
        os << "bessel_k: order must be non-negative, got nu=" << nu;
        throw DomainError(os.str());
    }
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl;
    auto [kmu, k1] = bessel_k_pair(mu, z, scaled);
    const double xi2 = 2.0 / z;
    // Upward recurrence is stable for K.
    for (int i = 1; i <= nl; ++i) {
        const double next = (mu + i) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    return kmu;
}

}  // namespace

double gamma_fn(double x) {
    if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
    if (x <= 0.0 && x == std::floor(x)) {
        std::ostringstream os;
        os << "gamma_fn: pole at non-positive integer x=" << x;
        throw PoleError(os.str());
    }
    if (x >= 171.0) {
        std::ostringstream os;
        os << "gamma_fn: overflow for x=" << x;
        throw OverflowError(os.str());
    }
    if (x <= -170.0) {
        std::ostringstream os;
        os << "gamma_fn: x=" << x << " outside supported range |x| < 170";
        throw DomainError(os.str());
    }
    if (x < 0.5) {
        // Reflection formula.
        return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
    }
    const double xm = x - 1.0;
    double acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (xm + static_cast<double>(i));
    const double t = xm + kLanczosG + 0.5;
    // t^(xm+0.5) split in two halves so it does not overflow before e^-t is applied.
    const double half = std::pow(t, 0.5 * (xm + 0.5));
    return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * acc;
}

double bessel_k(double nu, double z) { return bessel_k_impl(nu, z, false); }

double bessel_k_scaled(double nu, double z) { return bessel_k_impl(nu, z, true); }

}  // namespace bathforge::numerics
