#include "fracschrod/linsolve.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>

#include "fracschrod/fft_utils.hpp"

namespace fracschrod {

StepSystem::StepSystem(const FracLaplacian& op, double tau, std::vector<double> potential)
    : op_(&op), tau_(tau), potential_(std::move(potential)) {
    if (potential_.size() != op.grid().unknowns()) {
        throw std::invalid_argument("StepSystem: potential size does not match the grid");
    }
    if (!(tau_ > 0.0)) {
        throw std::invalid_argument("StepSystem: tau must be positive");
    }
}

ComplexField StepSystem::apply(const ComplexField& v) const {
    if (!v.grid().same_mesh(op_->grid())) {
        throw std::invalid_argument("StepSystem::apply: field does not conform to the system grid");
    }
    ComplexField out = op_->apply(v);
    const Complex* vp = v.data();
    Complex* o = out.data();
    const double inv_tau = 1.0 / tau_;
    for (std::size_t i = 0; i < v.size(); ++i) {
        // (1/tau) v - i pot v - i (Lv)
        o[i] = inv_tau * vp[i] - Complex(0.0, 1.0) * (potential_[i] * vp[i] + o[i]);
    }
    return out;
}

namespace {

using Vec = std::vector<Complex>;

Complex vdot(const Vec& a, const Vec& b) {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(const Vec& a) {
    long double s = 0.0L;
    for (const Complex& c : a) s += std::norm(c);
    return std::sqrt(static_cast<double>(s));
}

/// Strang circulant approximation of (1/tau) I + i D, diagonal in the 2D DFT
/// basis; the nonlinear potential is deliberately left out so the factors
/// depend only on (grid, tau) and stay reusable across a whole run.
class CirculantPreconditioner {
public:
    CirculantPreconditioner(const FracLaplacian& op, double tau)
        : nx_(op.grid().nx()), ny_(op.grid().ny()), plan_(ny_, nx_) {
        const std::vector<double> ex = strang_eigs(op.scaled_weights_x());
        const std::vector<double> ey = strang_eigs(op.scaled_weights_y());
        inv_eigs_.resize(static_cast<std::size_t>(nx_) * ny_);
        const double norm = 1.0 / (static_cast<double>(nx_) * ny_);
        for (int iy = 0; iy < ny_; ++iy) {
            for (int ix = 0; ix < nx_; ++ix) {
                const Complex lambda(1.0 / tau, ex[ix] + ey[iy]);
                inv_eigs_[static_cast<std::size_t>(iy) * nx_ + ix] = norm / lambda;
            }
        }
    }

    void apply(const Vec& in, Vec& out) const {
        detail::ComplexBuffer buf = detail::alloc_complex(in.size());
        std::copy(in.begin(), in.end(), buf.get());
        plan_.forward(buf.get());
        for (std::size_t i = 0; i < in.size(); ++i) buf[i] *= inv_eigs_[i];
        plan_.backward(buf.get());
        out.assign(buf.get(), buf.get() + in.size());
    }

private:
    std::vector<double> strang_eigs(const std::vector<double>& w) const {
        const int n = static_cast<int>(w.size());
        detail::ComplexBuffer buf = detail::alloc_complex(n);
        for (int r = 0; r < n; ++r) {
            buf[r] = Complex(r <= n / 2 ? w[r] : w[n - r], 0.0);
        }
        {
            std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
            fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf.get()),
                                           reinterpret_cast<fftw_complex*>(buf.get()),
                                           FFTW_FORWARD, FFTW_ESTIMATE);
            fftw_execute(p);
            fftw_destroy_plan(p);
        }
        std::vector<double> eigs(n);
        for (int r = 0; r < n; ++r) eigs[r] = buf[r].real();
        return eigs;
    }

    int nx_, ny_;
    detail::Plan2d plan_;
    std::vector<Complex> inv_eigs_;
};

struct KrylovOutcome {
    Vec x;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

template <class MatVec, class Precond>
KrylovOutcome bicgstab(const MatVec& amul, const Precond& psolve, const Vec& b, double tol,
                       int max_iter) {
    const std::size_t n = b.size();
    KrylovOutcome out;
    out.x.assign(n, Complex{0.0, 0.0});
    const double nb = norm2(b);
    if (nb == 0.0) {
        out.converged = true;
        return out;
    }

    Vec r = b, rhat = b;
    Vec p(n, Complex{}), v(n, Complex{}), s(n), t(n), phat(n), shat(n);
    Complex rho{1.0, 0.0}, alpha{1.0, 0.0}, omega{1.0, 0.0};
    int it = 0;
    bool breakdown = false;

    while (it < max_iter) {
        ++it;
        const Complex rho_new = vdot(rhat, r);
        if (std::abs(rho_new) < 1e-300 || std::abs(omega) < 1e-300) {
            breakdown = true;
            break;
        }
        const Complex beta = (rho_new / rho) * (alpha / omega);
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        psolve(p, phat);
        amul(phat, v);
        const Complex denom = vdot(rhat, v);
        if (std::abs(denom) < 1e-300) {
            breakdown = true;
            break;
        }
        alpha = rho_new / denom;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) <= tol * nb) {
            for (std::size_t i = 0; i < n; ++i) out.x[i] += alpha * phat[i];
            r = s;
            break;
        }
        psolve(s, shat);
        amul(shat, t);
        const Complex tt = vdot(t, t);
        if (std::abs(tt) < 1e-300) {
            breakdown = true;
            break;
        }
        omega = vdot(t, s) / tt;
        for (std::size_t i = 0; i < n; ++i) out.x[i] += alpha * phat[i] + omega * shat[i];
        for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        rho = rho_new;
        if (norm2(r) <= tol * nb) break;
    }

    // True residual, not the recurrence value.
    Vec ax(n);
    amul(out.x, ax);
    for (std::size_t i = 0; i < n; ++i) ax[i] = b[i] - ax[i];
    out.residual = norm2(ax) / nb;
    out.iterations = it;
    out.converged = !breakdown && out.residual <= tol;
    return out;
}

Vec field_to_vec(const ComplexField& f) { return Vec(f.data(), f.data() + f.size()); }

ComplexField vec_to_field(const Vec& v, const GridSpec& g) {
    ComplexField f(g);
    std::copy(v.begin(), v.end(), f.data());
    return f;
}

}  // namespace

std::pair<ComplexField, SolveReport> solve(const StepSystem& sys, const ComplexField& rhs,
                                           const SolverSettings& settings) {
    if (!(settings.tol > 0.0)) {
        throw std::invalid_argument("solve: tolerance must be positive");
    }
    const GridSpec& g = sys.op().grid();
    if (!rhs.grid().same_mesh(g)) {
        throw std::invalid_argument("solve: rhs does not conform to the system grid");
    }

    const Vec b = field_to_vec(rhs);
    const auto amul = [&sys, &g](const Vec& in, Vec& out) {
        const ComplexField r = sys.apply(vec_to_field(in, g));
        out.assign(r.data(), r.data() + r.size());
    };

    KrylovOutcome outcome;
    if (settings.use_preconditioner) {
        const CirculantPreconditioner pre(sys.op(), sys.tau());
        outcome = bicgstab(amul, [&pre](const Vec& in, Vec& out) { pre.apply(in, out); }, b,
                           settings.tol, settings.max_iter);
    } else {
        outcome = bicgstab(amul, [](const Vec& in, Vec& out) { out = in; }, b, settings.tol,
                           settings.max_iter);
    }

    if (outcome.converged) {
        SolveReport report{outcome.iterations, outcome.residual, true, SolveMethod::krylov};
        return {vec_to_field(outcome.x, g), report};
    }

    // Krylov stalled; the dense route is exact and still cheap on small grids.
    if (g.unknowns() <= settings.dense_cap) {
        const Eigen::MatrixXcd a = assemble_dense_system(sys, settings.dense_cap);
        Eigen::VectorXcd bv(static_cast<Eigen::Index>(b.size()));
        for (std::size_t i = 0; i < b.size(); ++i) bv(static_cast<Eigen::Index>(i)) = b[i];
        const Eigen::VectorXcd xv = a.partialPivLu().solve(bv);
        Vec x(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) x[i] = xv(static_cast<Eigen::Index>(i));
        Vec ax(b.size());
        amul(x, ax);
        for (std::size_t i = 0; i < b.size(); ++i) ax[i] = b[i] - ax[i];
        const double res = norm2(ax) / norm2(b);
        SolveReport report{outcome.iterations, res, res <= settings.tol, SolveMethod::dense_lu};
        if (!report.converged) {
            throw SolveFailure("linear solve failed: dense fallback residual " + std::to_string(res),
                               report, vec_to_field(x, g));
        }
        return {vec_to_field(x, g), report};
    }

    SolveReport report{outcome.iterations, outcome.residual, false, SolveMethod::krylov};
    throw SolveFailure("linear solve failed after " + std::to_string(outcome.iterations) +
                           " iterations (relative residual " + std::to_string(outcome.residual) + ")",
                       report, vec_to_field(outcome.x, g));
}

Eigen::MatrixXcd assemble_dense_system(const StepSystem& sys, std::size_t cap) {
    const Eigen::MatrixXd d = sys.op().assemble_dense(cap);
    const std::size_t n = sys.op().grid().unknowns();
    const Complex mi(0.0, -1.0);
    // A = (1/tau) I - i diag(pot) - i L = (1/tau) I - i diag(pot) + i D
    Eigen::MatrixXcd a = Complex(0.0, 1.0) * d.cast<Complex>();
    const double inv_tau = 1.0 / sys.tau();
    for (std::size_t i = 0; i < n; ++i) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +=
            Complex(inv_tau, 0.0) + mi * sys.potential()[i];
    }
    return a;
}

}  // namespace fracschrod
