#include "cpsa/detect.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cpsa {

namespace {

// Lexicographically next size-r combination of {1..n}; false when done.
bool next_combination(std::vector<int>& c, int n) {
    const int r = static_cast<int>(c.size());
    for (int i = r - 1; i >= 0; --i) {
        if (c[static_cast<size_t>(i)] < n - (r - 1 - i)) {
            ++c[static_cast<size_t>(i)];
            for (int j = i + 1; j < r; ++j)
                c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

std::vector<int> first_combination(int r) {
    std::vector<int> c(static_cast<size_t>(r));
    std::iota(c.begin(), c.end(), 1);
    return c;
}

std::vector<Index> support_of(const CVector& v, double scale) {
    std::vector<Index> s;
    const double tol = 1e-9 * std::max(1.0, scale);
    for (Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > tol) s.push_back(i);
    return s;
}

// Columns of K that are output channels, as 0-based output row indices.
void split_channels(const DescriptorSystem& sys, const AttackSet& K, std::vector<int>& state_ch,
                    std::vector<int>& output_rows) {
    for (int idx : K.indices) {
        if (idx <= sys.n())
            state_ch.push_back(idx);
        else
            output_rows.push_back(idx - static_cast<int>(sys.n()) - 1);
    }
}

Matrix output_columns(const DescriptorSystem& sys, const std::vector<int>& rows) {
    Matrix D(sys.p(), static_cast<Index>(rows.size()));
    for (size_t j = 0; j < rows.size(); ++j) D.col(static_cast<Index>(j)) = sys.D.col(sys.n() + rows[j]);
    return D;
}

}  // namespace

DetectabilityVerdict static_undetectable(const DescriptorSystem& sys, const AttackSet& K,
                                         double tol) {
    AttackSignature sig = signature(sys, K);
    DetectabilityVerdict v;
    v.monitor_class = MonitorClass::Static;

    std::vector<Index> out_cols;
    for (size_t j = 0; j < K.k(); ++j)
        if (!sig.is_state_attack[j]) out_cols.push_back(static_cast<Index>(j));

    if (out_cols.empty()) {
        // Pure state attack: D_K u = 0 lies in Im(C) at all times.
        v.undetectable = true;
        StaticWitness w;
        w.x = Vector::Zero(sys.n());
        w.u = Vector::Ones(static_cast<Index>(K.k()));
        v.static_witness = w;
        return v;
    }

    Matrix D_out(sys.p(), static_cast<Index>(out_cols.size()));
    for (size_t j = 0; j < out_cols.size(); ++j) D_out.col(static_cast<Index>(j)) = sig.D_K.col(out_cols[j]);

    Matrix inter = image_intersection(sys.C, D_out, tol);
    if (inter.cols() == 0) {
        v.undetectable = false;
        return v;
    }

    // Witness: hidden output action vec = C x = -D_K u.
    Vector vec = inter.col(0);
    StaticWitness w;
    w.x = sys.C.colPivHouseholderQr().solve(vec);
    Vector u_out = D_out.colPivHouseholderQr().solve(-vec);
    w.u = Vector::Ones(static_cast<Index>(K.k()));  // state channels: arbitrary nonzero
    for (size_t j = 0; j < out_cols.size(); ++j) w.u(out_cols[j]) = u_out(static_cast<Index>(j));
    v.undetectable = true;
    v.static_witness = w;
    return v;
}

CardinalitySearch static_exists_undetectable_of_cardinality(const DescriptorSystem& sys, int k,
                                                            std::size_t budget, double tol) {
    if (!sys.is_canonical_attack_form())
        throw PreconditionError("cardinality search requires the canonical attack form");
    if (k < 1 || k > sys.p()) return {};

    const Matrix& C = sys.C;
    const Index n = C.cols();
    const Index p = C.rows();
    const double cmax = C.cwiseAbs().maxCoeff();
    const double entry_tol = tol > 0 ? tol : 1e-12 * std::max(1.0, cmax);

    CardinalitySearch res;
    Rng rng(0x51a71c);

    auto count_support = [&](const Vector& y) {
        Index cnt = 0;
        const double t = 1e-9 * std::max(1.0, y.cwiseAbs().maxCoeff());
        for (Index r = 0; r < y.size(); ++r)
            if (std::abs(y(r)) > t) ++cnt;
        return cnt;
    };
    auto attack_set_from = [&](const Vector& y) {
        std::vector<int> idx;
        const double t = 1e-9 * std::max(1.0, y.cwiseAbs().maxCoeff());
        for (Index r = 0; r < y.size(); ++r)
            if (std::abs(y(r)) > t) idx.push_back(static_cast<int>(n + r + 1));
        return AttackSet::of(idx);
    };

    for (int tsize = 1; tsize <= n; ++tsize) {
        std::vector<int> T = first_combination(tsize);
        do {
            if (++res.evaluations > budget) {
                res.budget_exhausted = true;
                return res;
            }
            // Generic image support of states restricted to T.
            std::vector<Index> U;
            for (Index r = 0; r < p; ++r) {
                bool hit = false;
                for (int t : T)
                    if (std::abs(C(r, t - 1)) > entry_tol) hit = true;
                if (hit) U.push_back(r);
            }
            const int usz = static_cast<int>(U.size());
            if (usz < k) continue;

            if (usz == k) {
                for (int attempt = 0; attempt < 2; ++attempt) {
                    Vector x = Vector::Zero(n);
                    for (int t : T) x(t - 1) = rng.gaussian();
                    Vector y = C * x;
                    if (count_support(y) == k) {
                        res.found = attack_set_from(y);
                        res.witness_x = x;
                        return res;
                    }
                }
                continue;
            }

            // Overshoot: try to cancel usz - k rows exactly.
            if (tsize < 2) continue;
            const int zsize = usz - k;
            if (zsize >= tsize) continue;  // kernel of C[Z, T] would be generically trivial
            std::vector<int> zsel = first_combination(zsize);
            do {
                if (++res.evaluations > budget) {
                    res.budget_exhausted = true;
                    return res;
                }
                Matrix Czt(zsize, tsize);
                for (int a = 0; a < zsize; ++a)
                    for (int b = 0; b < tsize; ++b)
                        Czt(a, b) = C(U[static_cast<size_t>(zsel[static_cast<size_t>(a)] - 1)],
                                      T[static_cast<size_t>(b)] - 1);
                Matrix ker = null_space(Czt);
                if (ker.cols() == 0) continue;
                for (int attempt = 0; attempt < 2; ++attempt) {
                    Vector coeff = rng.gaussian_vector(ker.cols());
                    Vector xt = ker * coeff;
                    Vector x = Vector::Zero(n);
                    for (int b = 0; b < tsize; ++b) x(T[static_cast<size_t>(b)] - 1) = xt(b);
                    Vector y = C * x;
                    if (count_support(y) == k) {
                        res.found = attack_set_from(y);
                        res.witness_x = x;
                        return res;
                    }
                }
            } while (next_combination(zsel, usz));
        } while (next_combination(T, static_cast<int>(n)));
    }
    return res;  // exhaustive: definite "no"
}

StaticIdentResult static_unidentifiable(const DescriptorSystem& sys, const AttackSet& K,
                                        std::size_t budget, double tol) {
    if (!sys.is_canonical_attack_form())
        throw PreconditionError("static identification requires the canonical attack form");
    StaticIdentResult res;
    if (K.k() == 0) return res;

    // Undetectable implies unidentifiable: confusable with the zero attack.
    if (static_undetectable(sys, K, tol).undetectable) {
        res.unidentifiable = true;
        res.confusable_with = AttackSet{};
        res.evaluations = 1;
        return res;
    }

    std::vector<int> k_state, k_out;
    split_channels(sys, K, k_state, k_out);
    Matrix D_Ko = output_columns(sys, k_out);

    const int nch = static_cast<int>(sys.n() + sys.p());
    const int kk = static_cast<int>(K.k());

    // A column participates in some kernel element iff it is spanned by the
    // remaining columns (dropping it leaves the rank unchanged); the
    // attack-mode entries of K and R must all be able to act while the
    // combined residual stays zero.
    auto column_coverable = [&](const Matrix& M, Index col) {
        Matrix rest(M.rows(), M.cols() - 1);
        rest << M.leftCols(col), M.rightCols(M.cols() - col - 1);
        return numeric_rank(rest, tol).rank == numeric_rank(M, tol).rank;
    };

    for (int rsize = 1; rsize <= kk; ++rsize) {
        std::vector<int> R = first_combination(rsize);
        do {
            if (++res.evaluations > budget) {
                res.budget_exhausted = true;
                return res;
            }
            AttackSet Rset = AttackSet::of(R);
            if (Rset == K) continue;
            std::vector<int> r_state, r_out;
            split_channels(sys, Rset, r_state, r_out);
            Matrix D_Ro = output_columns(sys, r_out);

            Matrix M(sys.p(), sys.C.cols() + D_Ko.cols() + D_Ro.cols());
            M << sys.C, D_Ko, D_Ro;

            bool ok = true;
            for (Index j = 0; j < D_Ko.cols() && ok; ++j)
                ok = column_coverable(M, sys.C.cols() + j);
            for (Index j = 0; j < D_Ro.cols() && ok; ++j)
                ok = column_coverable(M, sys.C.cols() + D_Ko.cols() + j);
            // R must be able to act at all: state channels act invisibly,
            // output channels are covered by the check above.
            if (ok && r_out.empty() && r_state.empty()) ok = false;
            if (ok) {
                res.unidentifiable = true;
                res.confusable_with = Rset;
                return res;
            }
        } while (next_combination(R, nch));
    }
    return res;
}

namespace {

struct CompressedSignature {
    Matrix B, D;  // full column rank
    Matrix V;     // original g = V * g_compressed
};

CompressedSignature compress_signature(const Matrix& B_K, const Matrix& D_K) {
    CompressedSignature cs;
    const Index k = B_K.cols();
    if (k == 0) {
        cs.B = B_K;
        cs.D = D_K;
        cs.V = Matrix(0, 0);
        return cs;
    }
    Matrix BD(B_K.rows() + D_K.rows(), k);
    BD << B_K, D_K;
    Eigen::JacobiSVD<Matrix> svd(BD, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double t = default_rank_tol(BD.rows(), BD.cols(), sv.size() ? sv(0) : 0.0);
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > t) ++r;
    cs.V = svd.matrixV().leftCols(r);
    cs.B = B_K * cs.V;
    cs.D = D_K * cs.V;
    return cs;
}

// Core decision on a raw pencil: does P(s)[x; g] = 0 hold for some s, x != 0?
// Returns the witness as an InvariantZero of the *original* signature.
std::optional<InvariantZero> zero_dynamics_witness(const DescriptorSystem& sys, const Matrix& B_K,
                                                   const Matrix& D_K, const ZeroOptions& opts) {
    CompressedSignature cs = compress_signature(B_K, D_K);
    AttackSignature sig;
    sig.B_K = cs.B;
    sig.D_K = cs.D;
    RosenbrockPencil P = RosenbrockPencil::build(sys, sig);

    RosenbrockPencil P_orig = P;
    P_orig.P0 = Matrix(sys.n() + sys.p(), sys.n() + B_K.cols());
    P_orig.P0 << -sys.A, -B_K, sys.C, D_K;
    P_orig.P1 = Matrix::Zero(P_orig.P0.rows(), P_orig.P0.cols());
    P_orig.P1.topLeftCorner(sys.n(), sys.n()) = sys.E;
    P_orig.k = B_K.cols();

    if (!pencil_left_invertible(P, opts)) {
        // Rank deficient for almost all s: a generic point carries a null
        // vector, and x != 0 is forced because [B; D] was compressed to full
        // column rank.
        Rng rng(opts.seed ^ 0xabcdef);
        const double scale = pencil_probe_scale(P.P1, P.P0);
        const Complex s = rng.complex_point(scale);
        CMatrix ker = null_space(P.at(s), opts.rank_tol);
        if (ker.cols() == 0) return std::nullopt;  // unlucky probe; treat as no witness
        Index best = 0;
        double best_norm = -1.0;
        for (Index j = 0; j < ker.cols(); ++j) {
            const double nx = ker.col(j).head(sys.n()).norm();
            if (nx > best_norm) {
                best_norm = nx;
                best = j;
            }
        }
        CVector v = ker.col(best);
        InvariantZero z;
        z.s = s;
        z.x = v.head(sys.n());
        z.g = cs.V.cast<Complex>() * v.tail(cs.B.cols());
        z.residual = zero_residual(P_orig, z.s, z.x, z.g);
        if (z.x.norm() <= opts.x_rel_tol * v.norm()) return std::nullopt;
        return z;
    }

    std::vector<InvariantZero> zeros = invariant_zeros(P, opts);
    if (zeros.empty()) return std::nullopt;
    InvariantZero z = zeros.front();
    z.g = cs.V.cast<Complex>() * z.g;
    z.residual = zero_residual(P_orig, z.s, z.x, z.g);
    return z;
}

}  // namespace

DetectabilityVerdict dynamic_undetectable(const DescriptorSystem& sys, const AttackSet& K,
                                          const ZeroOptions& opts) {
    if (!check_regular(sys)) throw NotRegularError("pencil (E, A) is singular");
    AttackSignature sig = signature(sys, K);
    DetectabilityVerdict v;
    v.monitor_class = MonitorClass::Dynamic;
    auto w = zero_dynamics_witness(sys, sig.B_K, sig.D_K, opts);
    if (w) {
        v.undetectable = true;
        v.witness = *w;
    }
    return v;
}

std::vector<std::pair<Complex, CVector>> finite_eigenpairs(const Matrix& E, const Matrix& A,
                                                           double tol) {
    Eigen::GeneralizedEigenSolver<Matrix> ges;
    ges.compute(A, E, false);
    const double scale = pencil_probe_scale(E, A);

    std::vector<Complex> values;
    for (Index i = 0; i < ges.alphas().size(); ++i) {
        const Complex a = ges.alphas()(i);
        const double b = ges.betas()(i);
        if (std::abs(b) <= 1e-12 * std::max(1.0, std::abs(a))) continue;
        const Complex s = a / b;
        if (std::abs(s) > 1e8 * scale) continue;
        bool dup = false;
        for (const Complex& u : values)
            if (std::abs(u - s) <= 1e-9 * (1.0 + std::abs(s))) dup = true;
        if (!dup) values.push_back(s);
    }
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    std::vector<std::pair<Complex, CVector>> out;
    for (const Complex& s : values) {
        CMatrix M = s * E.cast<Complex>() - A.cast<Complex>();
        CMatrix ker = null_space(M, tol);
        for (Index j = 0; j < ker.cols(); ++j) out.emplace_back(s, ker.col(j));
    }
    return out;
}

DynamicCardinalitySearch dynamic_exists_undetectable_of_cardinality(const DescriptorSystem& sys,
                                                                    int k, std::size_t budget,
                                                                    const ZeroOptions& opts) {
    if (!sys.is_canonical_attack_form())
        throw PreconditionError("cardinality search requires the canonical attack form");
    DynamicCardinalitySearch res;
    if (k < 1) return res;
    const Index n = sys.n();
    const int nch = static_cast<int>(n + sys.p());
    if (k > nch) return res;

    const double mat_scale = sys.A.cwiseAbs().maxCoeff() + sys.E.cwiseAbs().maxCoeff() +
                             sys.C.cwiseAbs().maxCoeff();

    auto witness_from_direction = [&](Complex s, const CVector& x) -> std::optional<DynamicCardinalitySearch> {
        CVector rx = (s * sys.E.cast<Complex>() - sys.A.cast<Complex>()) * x;
        CVector cx = sys.C.cast<Complex>() * x;
        const double scale = mat_scale * std::max(1.0, x.norm());
        std::vector<Index> sx = support_of(rx, scale);
        std::vector<Index> sy = support_of(cx, scale);
        if (static_cast<int>(sx.size() + sy.size()) != k) return std::nullopt;
        std::vector<int> idx;
        for (Index i : sx) idx.push_back(static_cast<int>(i + 1));
        for (Index i : sy) idx.push_back(static_cast<int>(n + i + 1));
        AttackSet K = AttackSet::of(idx);
        InvariantZero z;
        z.s = s;
        z.x = x;
        z.g = CVector(k);
        for (size_t j = 0; j < sx.size(); ++j) z.g(static_cast<Index>(j)) = rx(sx[j]);
        for (size_t j = 0; j < sy.size(); ++j) z.g(static_cast<Index>(sx.size() + j)) = -cx(sy[j]);
        AttackSignature sig = signature(sys, K);
        RosenbrockPencil P = RosenbrockPencil::build(sys, sig);
        z.residual = zero_residual(P, z.s, z.x, z.g);
        if (z.residual > opts.residual_tol) return std::nullopt;
        DynamicCardinalitySearch hit;
        hit.found = K;
        hit.witness = z;
        return hit;
    };

    // Eigen-directions give zero state residual: support comes from C x only.
    for (const auto& [s, x] : finite_eigenpairs(sys.E, sys.A)) {
        if (++res.evaluations > budget) {
            res.budget_exhausted = true;
            return res;
        }
        if (auto hit = witness_from_direction(s, x)) {
            hit->evaluations = res.evaluations;
            return *hit;
        }
    }
    // Sampled s with coordinate directions: state supports enter the count.
    Rng rng(opts.seed ^ 0x77);
    const double scale = pencil_probe_scale(sys.E, sys.A);
    for (int probe = 0; probe < 3; ++probe) {
        const Complex s = rng.complex_point(scale);
        for (Index i = 0; i < n; ++i) {
            if (++res.evaluations > budget) {
                res.budget_exhausted = true;
                return res;
            }
            CVector x = CVector::Zero(n);
            x(i) = 1.0;
            if (auto hit = witness_from_direction(s, x)) {
                hit->evaluations = res.evaluations;
                return *hit;
            }
        }
    }

    // Subset enumeration, lexicographic: sound and exhaustive under budget.
    std::vector<int> Kc = first_combination(k);
    do {
        if (++res.evaluations > budget) {
            res.budget_exhausted = true;
            return res;
        }
        AttackSet K = AttackSet::of(Kc);
        DetectabilityVerdict v = dynamic_undetectable(sys, K, opts);
        if (v.undetectable) {
            res.found = K;
            res.witness = v.witness;
            return res;
        }
    } while (next_combination(Kc, nch));
    return res;
}

DynamicIdentResult dynamic_unidentifiable(const DescriptorSystem& sys, const AttackSet& K,
                                          std::size_t budget, const ZeroOptions& opts) {
    if (!sys.is_canonical_attack_form())
        throw PreconditionError("dynamic identification requires the canonical attack form");
    if (!check_regular(sys)) throw NotRegularError("pencil (E, A) is singular");
    DynamicIdentResult res;
    const int nch = static_cast<int>(sys.n() + sys.p());
    const int kk = static_cast<int>(K.k());
    AttackSignature sigK = signature(sys, K);

    for (int rsize = 0; rsize <= kk; ++rsize) {
        std::vector<int> R = rsize == 0 ? std::vector<int>{} : first_combination(rsize);
        bool more = true;
        while (more) {
            AttackSet Rset = AttackSet::of(R);
            if (!(Rset == K)) {
                if (++res.evaluations > budget) {
                    res.budget_exhausted = true;
                    return res;
                }
                AttackSignature sigR = signature(sys, Rset);
                Matrix B(sys.n(), sigK.B_K.cols() + sigR.B_K.cols());
                B << sigK.B_K, sigR.B_K;
                Matrix D(sys.p(), sigK.D_K.cols() + sigR.D_K.cols());
                D << sigK.D_K, sigR.D_K;
                auto w = zero_dynamics_witness(sys, B, D, opts);
                if (w) {
                    res.unidentifiable = true;
                    res.confusable_with = Rset;
                    res.witness = *w;
                    return res;
                }
            }
            more = rsize > 0 && next_combination(R, nch);
        }
    }
    return res;
}

ImmunityResult output_attack_immunity(const DescriptorSystem& sys,
                                      const std::vector<int>& protected_outputs, double tol) {
    if (!check_regular(sys)) throw NotRegularError("pencil (E, A) is singular");
    ImmunityResult res;
    Matrix C_prot(static_cast<Index>(protected_outputs.size()), sys.n());
    for (size_t i = 0; i < protected_outputs.size(); ++i) {
        const int r = protected_outputs[i];
        if (r < 1 || r > sys.p()) throw DimensionError("protected output row out of range");
        C_prot.row(static_cast<Index>(i)) = sys.C.row(r - 1);
    }

    // Violation at eigenvalue s: some eigenvector is silent in the protected
    // rows, i.e. [sE - A; C_prot] loses column rank.
    for (const auto& [s, x] : finite_eigenpairs(sys.E, sys.A, tol)) {
        CMatrix M(sys.n() + C_prot.rows(), sys.n());
        M << s * sys.E.cast<Complex>() - sys.A.cast<Complex>(), C_prot.cast<Complex>();
        if (numeric_rank(M, tol).rank < sys.n()) {
            CMatrix ker = null_space(M, tol);
            res.immune = false;
            res.eigenvalue = s;
            res.eigenvector = CVector(ker.col(0));
            return res;
        }
        (void)x;
    }
    res.immune = true;
    return res;
}

}  // namespace cpsa
