#include "tbci/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "tbci/errors.hpp"

namespace tbci {

namespace {

int highest_nonzero(const std::vector<double>& c) {
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
        if (c[k] != 0.0) return k;
    }
    return -1;
}

void check_confining(const std::vector<double>& c) {
    const int p = highest_nonzero(c);
    if (p < 2) throw ConfigError("potential must have degree at least 2");
    if (p % 2 != 0) throw ConfigError("potential degree must be even");
    if (c[p] <= 0.0) throw ConfigError("leading potential coefficient must be positive");
}

}  // namespace

int PotentialSpec::degree() const { return highest_nonzero(coeffs); }

PotentialSpec make_harmonic() {
    PotentialSpec pot;
    pot.coeffs = {0.0, 0.0, 0.5};
    pot.name = "harmonic";
    return pot;
}

PotentialSpec make_double_well(double a) {
    if (!(a > 0.0)) throw ConfigError("double well parameter a must be positive");
    PotentialSpec pot;
    pot.coeffs = {2.0 / (27.0 * a), 0.0, -4.0 / 27.0, 0.0, 2.0 * a / 27.0};
    pot.name = "double_well";
    pot.a = a;
    return pot;
}

PotentialSpec make_triple_well(double a) {
    if (!(a > 0.0)) throw ConfigError("triple well parameter a must be positive");
    PotentialSpec pot;
    pot.coeffs = {0.0, 0.0, 0.5, 0.0, -a, 0.0, a * a / 2.0};
    pot.name = "triple_well";
    pot.a = a;
    return pot;
}

PotentialSpec make_polynomial(std::vector<double> coeffs) {
    check_confining(coeffs);
    PotentialSpec pot;
    pot.coeffs = std::move(coeffs);
    return pot;
}

double eval(const PotentialSpec& pot, double x) {
    double v = 0.0;
    for (int k = static_cast<int>(pot.coeffs.size()) - 1; k >= 0; --k) {
        v = v * x + pot.coeffs[k];
    }
    return v;
}

double outermost_minimum(const PotentialSpec& pot) {
    const int p = pot.degree();
    if (p < 2) return 0.0;

    std::vector<double> d(p);
    for (int k = 0; k < p; ++k) d[k] = (k + 1) * pot.coeffs[k + 1];
    auto dv = [&](double x) {
        double s = 0.0;
        for (int k = p - 1; k >= 0; --k) s = s * x + d[k];
        return s;
    };

    // Cauchy bound on the roots of V'; beyond it V' keeps the sign of the
    // leading term, so every stationary point lies inside [0, bound].
    double bound = 0.0;
    for (int k = 0; k + 1 < p; ++k) bound = std::max(bound, std::abs(d[k] / d[p - 1]));
    bound += 1.0;

    const int n = 4096;
    double best = 0.0;
    double x_prev = 0.0;
    double f_prev = dv(0.0);
    for (int i = 1; i <= n; ++i) {
        const double x = bound * i / n;
        const double f = dv(x);
        if (f_prev < 0.0 && f >= 0.0) {
            // falling-to-rising crossing of V' is a local minimum
            double lo = x_prev;
            double hi = x;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (dv(mid) < 0.0 ? lo : hi) = mid;
            }
            best = 0.5 * (lo + hi);
        }
        x_prev = x;
        f_prev = f;
    }
    return best;
}

}  // namespace tbci
