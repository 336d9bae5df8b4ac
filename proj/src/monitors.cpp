#include "cpsa/monitors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cpsa {

double default_threshold(const SimulationTrace& trace) {
    double ymax = 0.0;
    for (Index i = 0; i < trace.steps(); ++i) ymax = std::max(ymax, trace.y.row(i).norm());
    return 1e-6 * (1.0 + ymax);
}

MonitorVerdict static_monitor(const SimulationTrace& trace, const Matrix& C, double threshold) {
    MonitorVerdict v;
    v.threshold = threshold > 0 ? threshold : default_threshold(trace);

    Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double tol = default_rank_tol(C.rows(), C.cols(), sv.size() ? sv(0) : 0.0);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    Matrix U = svd.matrixU().leftCols(rank);
    Matrix P = Matrix::Identity(C.rows(), C.rows()) - U * U.transpose();  // I - C C^+

    Vector row_peak = Vector::Zero(C.rows());
    for (Index i = 0; i < trace.steps(); ++i) {
        Vector r = P * trace.y.row(i).transpose();
        v.residual_norm = std::max(v.residual_norm, r.norm());
        row_peak = row_peak.cwiseMax(r.cwiseAbs());
    }
    v.psi1 = v.residual_norm > v.threshold;
    if (v.psi1) {
        // Heuristic attribution: output channels with above-threshold residual.
        const Index n = trace.x.cols();
        for (Index r = 0; r < C.rows(); ++r)
            if (row_peak(r) > v.threshold) v.psi2.push_back(static_cast<int>(n + r + 1));
    }
    return v;
}

namespace {

struct FitBasis {
    std::vector<Matrix> responses;  // each steps x p
};

SimulationOptions grid_of(const SimulationTrace& trace) {
    SimulationOptions o;
    o.dt = trace.dt;
    o.horizon = trace.t(trace.steps() - 1);
    return o;
}

// Zero-input responses from each consistent-subspace basis direction.
FitBasis consistent_responses(const DescriptorSystem& sys, const SimulationTrace& trace) {
    FitBasis b;
    Matrix basis = consistent_basis(sys);
    SimulationOptions opts = grid_of(trace);
    for (Index j = 0; j < basis.cols(); ++j) {
        SimulationTrace r = simulate(sys, basis.col(j), nullptr, nullptr, opts);
        b.responses.push_back(r.y);
    }
    return b;
}

// Least squares over subsampled rows; returns the max full-grid row residual.
double fit_residual(const SimulationTrace& trace, const Matrix& offset,
                    const std::vector<Matrix>& responses) {
    const Index steps = trace.steps();
    const Index p = trace.y.cols();
    const Index cols = static_cast<Index>(responses.size());

    // Subsample time steps so the normal equations stay comfortably
    // overdetermined (at least 4x more rows than unknowns).
    const Index want = std::max<Index>(4 * std::max<Index>(cols, 1), 64);
    const Index stride = std::max<Index>(1, steps / want);

    std::vector<Index> rows;
    for (Index i = 0; i < steps; i += stride) rows.push_back(i);

    Matrix Amat(static_cast<Index>(rows.size()) * p, cols);
    Vector bvec(static_cast<Index>(rows.size()) * p);
    for (size_t ri = 0; ri < rows.size(); ++ri) {
        const Index i = rows[ri];
        for (Index j = 0; j < cols; ++j)
            Amat.block(static_cast<Index>(ri) * p, j, p, 1) = responses[static_cast<size_t>(j)].row(i).transpose();
        bvec.segment(static_cast<Index>(ri) * p, p) =
            (trace.y.row(i) - offset.row(i)).transpose();
    }
    Vector c = cols > 0 ? Vector(Amat.colPivHouseholderQr().solve(bvec)) : Vector(0);

    double worst = 0.0;
    for (Index i = 0; i < steps; ++i) {
        Vector fit = offset.row(i).transpose();
        for (Index j = 0; j < cols; ++j) fit += c(j) * responses[static_cast<size_t>(j)].row(i).transpose();
        worst = std::max(worst, (trace.y.row(i).transpose() - fit).norm());
    }
    return worst;
}

}  // namespace

MonitorVerdict dynamic_monitor_oracle(const DescriptorSystem& sys, const SimulationTrace& trace,
                                      double threshold) {
    MonitorVerdict v;
    v.threshold = threshold > 0 ? threshold : default_threshold(trace);
    FitBasis basis = consistent_responses(sys, trace);
    Matrix offset = Matrix::Zero(trace.steps(), trace.y.cols());
    v.residual_norm = fit_residual(trace, offset, basis.responses);
    v.psi1 = v.residual_norm > v.threshold;
    return v;
}

MonitorVerdict active_monitor(const DescriptorSystem& sys, const SimulationTrace& trace,
                              const TimeSignal& w, double threshold) {
    MonitorVerdict v;
    v.threshold = threshold > 0 ? threshold : default_threshold(trace);
    SimulationTrace probe = simulate(sys, Vector::Zero(sys.n()), nullptr, &w, grid_of(trace));
    FitBasis basis = consistent_responses(sys, trace);
    v.residual_norm = fit_residual(trace, probe.y, basis.responses);
    v.psi1 = v.residual_norm > v.threshold;
    return v;
}

namespace {

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

}  // namespace

MonitorVerdict identification_oracle(const DescriptorSystem& sys, const SimulationTrace& trace,
                                     int k_max, std::size_t budget, double threshold) {
    if (!sys.is_canonical_attack_form())
        throw PreconditionError("identification oracle requires the canonical attack form");
    MonitorVerdict v;
    v.threshold = threshold > 0 ? threshold : default_threshold(trace);

    const int nch = static_cast<int>(sys.n() + sys.p());
    const double T = trace.t(trace.steps() - 1);
    constexpr int kInputBasis = 4;  // cos(j pi t / T), j = 0..3

    FitBasis ic_basis = consistent_responses(sys, trace);
    Matrix offset = Matrix::Zero(trace.steps(), trace.y.cols());

    // Attack-free fit decides psi1.
    const double base_residual = fit_residual(trace, offset, ic_basis.responses);
    v.psi1 = base_residual > v.threshold;
    v.residual_norm = base_residual;
    if (!v.psi1) return v;

    // Responses to the input basis, one per channel, shared across candidates.
    SimulationOptions opts = grid_of(trace);
    std::vector<std::vector<Matrix>> channel_responses(static_cast<size_t>(nch));
    auto channel_response = [&](int ch) -> const std::vector<Matrix>& {
        auto& slot = channel_responses[static_cast<size_t>(ch - 1)];
        if (!slot.empty()) return slot;
        for (int j = 0; j < kInputBasis; ++j) {
            AttackSignal a;
            a.attack_set = AttackSet::of({ch});
            const double omega = M_PI * j / T;
            Mode m;
            if (j == 0) {
                m.s = Complex(0, 0);
                m.g = CVector::Ones(1);
            } else {
                m.s = Complex(0, omega);
                m.g = CVector::Constant(1, Complex(0.5, 0.0));
            }
            a.modes = {m};
            SimulationTrace r = simulate(sys, Vector::Zero(sys.n()), &a, nullptr, opts);
            slot.push_back(r.y);
        }
        return slot;
    };

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_set;
    std::size_t tried = 0;
    for (int rsize = 1; rsize <= k_max && rsize <= nch; ++rsize) {
        std::vector<int> R(static_cast<size_t>(rsize));
        std::iota(R.begin(), R.end(), 1);
        bool more = true;
        while (more) {
            if (++tried > budget) {
                v.budget_exhausted = true;
                more = false;
                break;
            }
            std::vector<Matrix> design = ic_basis.responses;
            for (int ch : R)
                for (const Matrix& resp : channel_response(ch)) design.push_back(resp);
            const double res = fit_residual(trace, offset, design);
            if (res <= v.threshold) {
                v.ambiguity.push_back(AttackSet::of(R));
                if (res < best) {
                    best = res;
                    best_set = R;
                }
            } else if (res < best && v.ambiguity.empty()) {
                best = res;
                best_set = R;
            }
            more = next_combination(R, nch);
        }
        if (!v.ambiguity.empty()) break;  // smallest explaining cardinality found
        if (v.budget_exhausted) break;
    }

    if (!v.ambiguity.empty()) {
        v.psi2 = v.ambiguity.front().indices;
        v.residual_norm = base_residual;
    } else {
        v.psi2 = best_set;  // best effort under budget
    }
    return v;
}

}  // namespace cpsa
