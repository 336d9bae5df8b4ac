#include "cpsa/poly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace cpsa {

Poly Poly::monomial(int degree, double v) {
    std::vector<double> c(static_cast<size_t>(degree) + 1, 0.0);
    c.back() = v;
    return Poly(std::move(c));
}

Poly Poly::from_roots(const std::vector<Complex>& roots, double lead) {
    // Multiply out (s - r); pair complex roots into real quadratics.
    std::vector<Complex> pending(roots);
    Poly p = Poly::constant(lead);
    while (!pending.empty()) {
        Complex r = pending.back();
        pending.pop_back();
        if (std::abs(r.imag()) < 1e-12 * (1.0 + std::abs(r))) {
            p = p * Poly({-r.real(), 1.0});
            continue;
        }
        // find the conjugate partner
        auto it = std::min_element(pending.begin(), pending.end(), [&](Complex a, Complex b) {
            return std::abs(a - std::conj(r)) < std::abs(b - std::conj(r));
        });
        if (it != pending.end()) pending.erase(it);
        // (s - r)(s - conj r) = s^2 - 2 Re(r) s + |r|^2
        p = p * Poly({std::norm(r), -2.0 * r.real(), 1.0});
    }
    return p;
}

Complex Poly::eval(Complex s) const {
    Complex acc(0.0, 0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

double Poly::eval(double s) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<double> c(std::max(c_.size(), o.c_.size()), 0.0);
    for (size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
    return Poly(std::move(c));
}

Poly Poly::operator-(const Poly& o) const { return *this + o.scaled(-1.0); }

Poly Poly::operator*(const Poly& o) const {
    if (c_.empty() || o.c_.empty()) return Poly();
    std::vector<double> c(c_.size() + o.c_.size() - 1, 0.0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(c));
}

Poly Poly::scaled(double a) const {
    std::vector<double> c(c_);
    for (double& v : c) v *= a;
    return Poly(std::move(c));
}

Poly Poly::monic() const {
    if (c_.empty() || c_.back() == 0.0) return *this;
    return scaled(1.0 / c_.back());
}

std::vector<Complex> Poly::roots() const {
    const int d = degree();
    if (d <= 0) return {};
    Matrix companion = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -c_[static_cast<size_t>(i)] / c_.back();
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Matrix> es(companion);
    std::vector<Complex> out(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) out[static_cast<size_t>(i)] = es.eigenvalues()(i);
    return out;
}

void Poly::trim(double tol) {
    double scale = 0.0;
    for (double v : c_) scale = std::max(scale, std::abs(v));
    const double t = tol > 0 ? tol : 0.0;
    while (!c_.empty() && std::abs(c_.back()) <= t * scale) c_.pop_back();
    if (!c_.empty() && c_.back() == 0.0) c_.pop_back();  // exact zero lead
}

CharPolyAdjugate charpoly_adjugate(const Matrix& A) {
    const Index n = A.rows();
    CharPolyAdjugate out;
    std::vector<double> cp(static_cast<size_t>(n) + 1, 0.0);
    cp[static_cast<size_t>(n)] = 1.0;
    out.adj.resize(static_cast<size_t>(n));
    // M_{n-1} = I;  c_{k} from traces;  adj(sI-A) = sum M_j s^{j} with
    // M_{j-1} = A*M_j + c_j I  (ascending in s).
    Matrix M = Matrix::Identity(n, n);
    out.adj[static_cast<size_t>(n - 1)] = M;
    for (Index k = 1; k <= n; ++k) {
        Matrix AM = A * M;
        const double c = -AM.trace() / static_cast<double>(k);
        cp[static_cast<size_t>(n - k)] = c;
        if (k < n) {
            M = AM + c * Matrix::Identity(n, n);
            out.adj[static_cast<size_t>(n - 1 - k)] = M;
        }
    }
    out.charpoly = Poly(std::move(cp));
    return out;
}

RationalFunction RationalFunction::simplified(double tol) const {
    if (num.is_zero()) {
        return {Poly(), Poly::constant(1.0)};
    }
    std::vector<Complex> rn = num.roots();
    std::vector<Complex> rd = den.roots();
    std::vector<bool> used(rd.size(), false);
    std::vector<Complex> keep_n;
    for (const Complex& r : rn) {
        bool cancelled = false;
        for (size_t j = 0; j < rd.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(r - rd[j]) <= tol * (1.0 + std::abs(r))) {
                used[j] = true;
                cancelled = true;
                break;
            }
        }
        if (!cancelled) keep_n.push_back(r);
    }
    std::vector<Complex> keep_d;
    for (size_t j = 0; j < rd.size(); ++j)
        if (!used[j]) keep_d.push_back(rd[j]);

    Poly n2 = Poly::from_roots(keep_n, num.lead());
    Poly d2 = Poly::from_roots(keep_d, den.lead());
    const double dl = d2.lead();
    if (dl != 0.0) {
        n2 = n2.scaled(1.0 / dl);
        d2 = d2.scaled(1.0 / dl);
    }
    return {n2, d2};
}

}  // namespace cpsa
