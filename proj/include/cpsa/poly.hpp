#pragma once

#include "cpsa/types.hpp"

#include <vector>

namespace cpsa {

/// Real polynomial with ascending coefficients: c[0] + c[1] s + c[2] s^2 + ...
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(double v) { return Poly({v}); }
    static Poly monomial(int degree, double v = 1.0);
    /// Real polynomial from a conjugate-closed root multiset.
    static Poly from_roots(const std::vector<Complex>& roots, double lead = 1.0);

    int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    double coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0.0; }
    const std::vector<double>& coeffs() const { return c_; }
    double lead() const { return c_.empty() ? 0.0 : c_.back(); }

    Complex eval(Complex s) const;
    double eval(double s) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(double a) const;
    Poly monic() const;

    /// All complex roots via the companion matrix; empty for degree <= 0.
    std::vector<Complex> roots() const;

    void trim(double tol = 0.0);

private:
    std::vector<double> c_;
};

/// Characteristic polynomial of A (monic, ascending) together with the
/// adjugate expansion adj(sI - A) = sum_j s^j * Madj[j], via the
/// Faddeev-LeVerrier recursion.
struct CharPolyAdjugate {
    Poly charpoly;                // degree n, monic
    std::vector<Matrix> adj;      // adj[j] multiplies s^j, j = 0..n-1
};
CharPolyAdjugate charpoly_adjugate(const Matrix& A);

/// Rational function num/den with real coefficients.
struct RationalFunction {
    Poly num;
    Poly den;

    Complex eval(Complex s) const { return num.eval(s) / den.eval(s); }

    /// Cancel root pairs of num and den closer than tol (relative to root
    /// magnitudes), then rescale so den is monic.
    RationalFunction simplified(double tol = 1e-6) const;

    bool proper() const { return num.degree() <= den.degree(); }
};

}  // namespace cpsa
