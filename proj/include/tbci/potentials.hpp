#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tbci {

// Polynomial confining potential V(x) = sum_k c_k x^k.
// The highest nonzero coefficient must have even degree and be positive,
// otherwise the potential does not confine.
struct PotentialSpec {
    std::vector<double> coeffs;       // c_0 .. c_p
    std::optional<std::string> name;  // set by the named constructors
    std::optional<double> a;          // shape parameter of the named wells

    int degree() const;
};

// V(x) = x^2 / 2
PotentialSpec make_harmonic();

// V(x) = (2/(27a)) (1 - a x^2)^2, two wells at +-1/sqrt(a), barrier 2/(27a)
PotentialSpec make_double_well(double a);

// V(x) = x^2/2 - a x^4 + (a^2/2) x^6, wells at 0 and +-1/sqrt(a),
// barrier tops at +-1/sqrt(3a) with the same height 2/(27a)
PotentialSpec make_triple_well(double a);

// Build from an explicit coefficient list; validates confinement.
PotentialSpec make_polynomial(std::vector<double> coeffs);

// Horner evaluation of V(x).
double eval(const PotentialSpec& pot, double x);

// Position of the outermost local minimum of V on x >= 0 (0 for single-well
// traps). Used to size default sampling grids.
double outermost_minimum(const PotentialSpec& pot);

}  // namespace tbci
