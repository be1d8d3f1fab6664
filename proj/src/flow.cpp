#include <radnf/flow.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <radnf/errors.hpp>

namespace radnf
{

namespace odeint = boost::numeric::odeint;

namespace
{

using state = std::vector<double>;
using system_fn = std::function<void(const state &, state &, double)>;

Eigen::VectorXd to_eigen(const state &s, int k)
{
    return Eigen::Map<const Eigen::VectorXd>(s.data(), k);
}

state to_state(const Eigen::VectorXd &v)
{
    return state(v.data(), v.data() + v.size());
}

double monomial_value(const std::vector<int> &exponents, const double *x)
{
    double v = 1;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        for (int e = 0; e < exponents[i]; ++e) {
            v *= x[i];
        }
    }
    return v;
}

std::vector<int> complement_of(const std::vector<int> &L, int k)
{
    std::vector<int> out;
    for (int i = 0; i < k; ++i) {
        if (std::find(L.begin(), L.end(), i) == L.end()) {
            out.push_back(i);
        }
    }
    return out;
}

// Integrates x from t0 to t1 with a controlled Runge-Kutta-Fehlberg 7(8) stepper.
void integrate_guarded(const system_fn &sys, state &x, double t0, double t1, double eps_abs, double eps_rel,
                       const FlowParams &params)
{
    if (t1 == t0) {
        return;
    }
    auto stepper = odeint::make_controlled(eps_abs, eps_rel, odeint::runge_kutta_fehlberg78<state>());
    const double sign = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    double dt = sign * std::min(params.initial_step, std::abs(t1 - t0));
    std::size_t steps = 0;
    while (sign * (t1 - t) > 0) {
        if (sign * (t + dt - t1) > 0) {
            dt = t1 - t;
        }
        if (++steps > params.max_steps) {
            throw step_failure("step budget exhausted at t = " + std::to_string(t));
        }
        if (stepper.try_step(sys, x, t, dt) == odeint::fail) {
            if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t))) {
                throw step_failure("step size underflow at t = " + std::to_string(t));
            }
            continue;
        }
        for (double v : x) {
            if (!std::isfinite(v) || std::abs(v) > 1e100) {
                throw step_failure("trajectory left the representable range at t = " + std::to_string(t));
            }
        }
    }
}

system_fn field_system(const FlowSpec &spec)
{
    return [&spec](const state &x, state &dx, double) {
        const Eigen::VectorXd v = spec.field(to_eigen(x, spec.k));
        dx.assign(v.data(), v.data() + v.size());
    };
}

Eigen::VectorXd flow_with(const FlowSpec &spec, const Eigen::VectorXd &x, double t, double eps_abs, double eps_rel,
                          const FlowParams &params)
{
    if (spec.linear()) {
        return (spec.A * t).exp() * x;
    }
    state s = to_state(x);
    integrate_guarded(field_system(spec), s, 0, t, eps_abs, eps_rel, params);
    return to_eigen(s, spec.k);
}

} // namespace

double smooth_step_down(double s)
{
    if (s <= 0) {
        return 1;
    }
    if (s >= 1) {
        return 0;
    }
    const double a = std::exp(-1 / (1 - s));
    const double b = std::exp(-1 / s);
    return a / (a + b);
}

void FlowSpec::validate() const
{
    if (k < 1) {
        throw invalid_flow_spec("dimension must be positive");
    }
    if (A.rows() != k || A.cols() != k) {
        throw dimension_mismatch("A must be " + std::to_string(k) + "x" + std::to_string(k));
    }
    std::set<int> seen;
    for (int i : L) {
        if (i < 0 || i >= k || !seen.insert(i).second) {
            throw invalid_flow_spec("L index " + std::to_string(i + 1) + " out of range or repeated");
        }
        if (A.col(i).cwiseAbs().maxCoeff() > 1e-14) {
            throw invalid_flow_spec("A does not annihilate L (column " + std::to_string(i + 1) + ")");
        }
    }
    if (vanishing_order < 1) {
        throw invalid_flow_spec("vanishing order must be at least 1");
    }
    if (cutoff_radius < 0) {
        throw invalid_flow_spec("cutoff radius must be non-negative");
    }
    const std::vector<int> comp = complement_of(L, k);
    for (const auto &t : perturbation) {
        if (t.component < 0 || t.component >= k) {
            throw dimension_mismatch("perturbation component out of range");
        }
        if (static_cast<int>(t.exponents.size()) != k) {
            throw dimension_mismatch("perturbation monomial has wrong number of variables");
        }
        int order = 0;
        for (int e : t.exponents) {
            if (e < 0) {
                throw invalid_flow_spec("negative exponent");
            }
        }
        for (int i : comp) {
            order += t.exponents[i];
        }
        if (order < vanishing_order) {
            throw invalid_flow_spec("perturbation term vanishes on L to order " + std::to_string(order)
                                    + " < declared " + std::to_string(vanishing_order));
        }
    }
}

Eigen::VectorXd FlowSpec::field(const Eigen::VectorXd &x) const
{
    Eigen::VectorXd v = A * x;
    if (perturbation.empty()) {
        return v;
    }
    double chi = 1;
    if (cutoff_radius > 0) {
        chi = smooth_step_down(2 * distance_to_L(x) / cutoff_radius - 1);
        if (chi == 0) {
            return v;
        }
    }
    for (const auto &t : perturbation) {
        v[t.component] += chi * t.coefficient * monomial_value(t.exponents, x.data());
    }
    return v;
}

Eigen::VectorXd FlowSpec::project_to_L(const Eigen::VectorXd &x) const
{
    Eigen::VectorXd p = Eigen::VectorXd::Zero(k);
    for (int i : L) {
        p[i] = x[i];
    }
    return p;
}

double FlowSpec::distance_to_L(const Eigen::VectorXd &x) const
{
    return (x - project_to_L(x)).norm();
}

FlowSpec FlowSpec::reversed() const
{
    FlowSpec r = *this;
    r.A = -A;
    for (auto &t : r.perturbation) {
        t.coefficient = -t.coefficient;
    }
    return r;
}

FlowSpec FlowSpec::linear_part() const
{
    FlowSpec r = *this;
    r.perturbation.clear();
    return r;
}

FlowParams FlowParams::tightened(double factor) const
{
    FlowParams p = *this;
    p.abs_tol /= factor;
    p.rel_tol /= factor;
    p.cauchy_tol /= factor;
    return p;
}

double FlowParams::finite_difference_step() const
{
    return fd_step > 0 ? fd_step : std::cbrt(abs_tol);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &body)
{
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

Splitting stable_splitting(const Eigen::MatrixXd &A, const std::vector<int> &L)
{
    const int k = static_cast<int>(A.rows());
    if (A.cols() != k || k < 1) {
        throw dimension_mismatch("A must be square");
    }
    FlowSpec probe;
    probe.k = k;
    probe.A = A;
    probe.L = L;
    probe.vanishing_order = 1;
    probe.validate();

    const std::vector<int> comp = complement_of(L, k);
    const int q = static_cast<int>(comp.size());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);
    Eigen::MatrixXd Q(k, q), Lb(k, static_cast<int>(L.size()));
    for (int j = 0; j < q; ++j) {
        Q.col(j) = I.col(comp[j]);
    }
    for (std::size_t j = 0; j < L.size(); ++j) {
        Lb.col(static_cast<int>(j)) = I.col(L[j]);
    }

    Splitting out;
    out.L = Lb;
    out.stable = Eigen::MatrixXd(k, 0);
    out.unstable = Eigen::MatrixXd(k, 0);
    if (q > 0) {
        const Eigen::MatrixXd Abar = Q.transpose() * A * Q;
        const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(Abar, false).eigenvalues();
        for (int i = 0; i < ev.size(); ++i) {
            if (std::abs(ev[i].real()) < 1e-9) {
                throw non_hyperbolic("eigenvalue " + std::to_string(ev[i].real()) + "+" + std::to_string(ev[i].imag())
                                     + "i off L has |Re| < 1e-9");
            }
        }
        // Matrix sign function by Newton iteration.
        Eigen::MatrixXd S = Abar;
        for (int it = 0; it < 200; ++it) {
            const Eigen::MatrixXd next = 0.5 * (S + S.inverse());
            const double change = (next - S).norm();
            S = next;
            if (change <= 1e-15 * std::max(1.0, S.norm())) {
                break;
            }
        }
        const Eigen::MatrixXd Iq = Eigen::MatrixXd::Identity(q, q);
        auto lifted_range = [&](const Eigen::MatrixXd &P) {
            Eigen::FullPivLU<Eigen::MatrixXd> lu(P);
            lu.setThreshold(1e-8);
            const Eigen::MatrixXd W = lu.image(P);
            if (lu.rank() == 0) {
                return Eigen::MatrixXd(k, 0);
            }
            // A Q w lies in the A-invariant lift of the quotient subspace.
            const Eigen::MatrixXd lifted = A * Q * W;
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(lifted);
            return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(k, lifted.cols()));
        };
        out.stable = lifted_range(0.5 * (Iq - S));
        out.unstable = lifted_range(0.5 * (Iq + S));
    }
    out.E_minus = Eigen::MatrixXd(k, out.stable.cols() + Lb.cols());
    out.E_minus << out.stable, Lb;
    out.E_plus = Eigen::MatrixXd(k, out.unstable.cols() + Lb.cols());
    out.E_plus << out.unstable, Lb;

    Eigen::MatrixXd M(k, out.stable.cols() + out.unstable.cols() + Lb.cols());
    M << out.stable, out.unstable, Lb;
    if (M.cols() != k) {
        throw assertion_failure("splitting dimensions do not add up to k");
    }
    const Eigen::MatrixXd Minv = M.inverse();
    double residual = (M * Minv - I).norm();
    const auto s = out.stable.cols(), u = out.unstable.cols();
    const Eigen::MatrixXd Ps = M.leftCols(s) * Minv.topRows(s);
    const Eigen::MatrixXd Pu = M.middleCols(s, u) * Minv.middleRows(s, u);
    const double scale = std::max(1.0, A.norm());
    residual = std::max(residual, (A * Ps - Ps * A).norm() / scale);
    residual = std::max(residual, (A * Pu - Pu * A).norm() / scale);
    out.projection_residual = residual;
    if (!(residual < 1e-10)) {
        throw assertion_failure("splitting projection residual " + std::to_string(residual));
    }
    return out;
}

Eigen::VectorXd integrate_flow(const FlowSpec &spec, const Eigen::VectorXd &x, double t, const FlowParams &params)
{
    if (x.size() != spec.k) {
        throw dimension_mismatch("point dimension differs from flow dimension");
    }
    if (!std::isfinite(t)) {
        throw std::invalid_argument("integration time must be finite");
    }
    return flow_with(spec, x, t, params.abs_tol, params.rel_tol, params);
}

LimitResult wminus_map(const FlowSpec &spec, const Eigen::VectorXd &x, const FlowParams &params)
{
    spec.validate();
    if (x.size() != spec.k) {
        throw dimension_mismatch("point dimension differs from flow dimension");
    }
    // The backward leg expands from a point near L, so errors are controlled
    // componentwise relative to the state.
    const double tiny_abs = std::numeric_limits<double>::min();
    auto at_horizon = [&](double T) {
        const Eigen::VectorXd y = (spec.A * T).exp() * x;
        return flow_with(spec, y, -T, tiny_abs, params.rel_tol, params);
    };
    double T = params.initial_horizon;
    Eigen::VectorXd prev = at_horizon(T);
    double diff = std::numeric_limits<double>::infinity();
    while (2 * T <= params.t_max) {
        Eigen::VectorXd next = at_horizon(2 * T);
        diff = (next - prev).norm();
        T *= 2;
        prev = std::move(next);
        if (diff < params.cauchy_tol) {
            return {prev, diff, T, true};
        }
    }
    throw no_convergence("W_- horizon doubling did not settle by T = " + std::to_string(params.t_max)
                         + " (last difference " + std::to_string(diff) + ")");
}

std::vector<Eigen::VectorXd> Box::grid() const
{
    const int k = static_cast<int>(lower.size());
    if (upper.size() != k || points_per_axis < 1) {
        throw dimension_mismatch("malformed sample box");
    }
    std::vector<Eigen::VectorXd> out;
    std::vector<int> idx(k, 0);
    while (true) {
        Eigen::VectorXd p(k);
        for (int i = 0; i < k; ++i) {
            const double s = points_per_axis == 1 ? 0.5 : static_cast<double>(idx[i]) / (points_per_axis - 1);
            p[i] = lower[i] + s * (upper[i] - lower[i]);
        }
        out.push_back(p);
        int i = 0;
        while (i < k && ++idx[i] == points_per_axis) {
            idx[i++] = 0;
        }
        if (i == k) {
            break;
        }
    }
    return out;
}

Box Box::scaled(double factor) const
{
    const Eigen::VectorXd center = 0.5 * (lower + upper);
    return {center + factor * (lower - center), center + factor * (upper - center), points_per_axis};
}

double linearization_residual(const FlowSpec &spec, const Box &region, const FlowParams &params)
{
    spec.validate();
    const std::vector<Eigen::VectorXd> pts = region.grid();
    const double h = params.finite_difference_step();
    std::vector<double> residual(pts.size(), 0);
    parallel_for(pts.size(), params.threads, [&](std::size_t i) {
        const Eigen::VectorXd &x = pts[i];
        const Eigen::VectorXd W = wminus_map(spec, x, params).value;
        const Eigen::VectorXd v = spec.linear_field(x);
        const double speed = v.norm();
        Eigen::VectorXd dw = Eigen::VectorXd::Zero(spec.k);
        if (speed > 0) {
            const Eigen::VectorXd u = v / speed;
            dw = (wminus_map(spec, x + h * u, params).value - wminus_map(spec, x - h * u, params).value)
                 * (speed / (2 * h));
        }
        residual[i] = (dw - spec.field(W)).norm();
    });
    return *std::max_element(residual.begin(), residual.end());
}

double TransportSource::operator()(const Eigen::VectorXd &x) const
{
    double chi = 1;
    if (outer_radius > 0) {
        const double r = x.norm();
        chi = smooth_step_down((r - inner_radius) / (outer_radius - inner_radius));
        if (chi == 0) {
            return 0;
        }
    }
    double v = 0;
    for (const auto &t : terms) {
        v += t.coefficient * monomial_value(t.exponents, x.data());
    }
    return chi * v;
}

std::string to_string(transport_direction d)
{
    return d == transport_direction::forward ? "forward" : "reverse";
}

double transport_solve(const FlowSpec &V, const TransportSource &g, double c, const Eigen::VectorXd &x,
                       const FlowParams &params, transport_direction direction)
{
    V.validate();
    if (x.size() != V.k) {
        throw dimension_mismatch("point dimension differs from flow dimension");
    }
    for (const auto &t : g.terms) {
        if (static_cast<int>(t.exponents.size()) != V.k) {
            throw dimension_mismatch("source monomial has wrong number of variables");
        }
    }
    if (g.outer_radius > 0 && !(g.outer_radius > g.inner_radius && g.inner_radius >= 0)) {
        throw invalid_flow_spec("source cutoff needs 0 <= inner radius < outer radius");
    }
    const bool forward = direction == transport_direction::forward;
    const FlowSpec flow = forward ? V : V.reversed();
    const double rate = forward ? c : -c;
    const double sign = forward ? -1.0 : 1.0;
    const int k = V.k;

    // State (x, I) with I' = e^{rate t} g(x).
    system_fn sys = [&](const state &s, state &ds, double t) {
        const Eigen::VectorXd p = to_eigen(s, k);
        const Eigen::VectorXd v = flow.field(p);
        ds.resize(k + 1);
        std::copy(v.data(), v.data() + k, ds.begin());
        ds[k] = std::exp(rate * t) * g(p);
    };
    state s = to_state(x);
    s.push_back(0);
    double t = 0;
    double T = params.initial_horizon;
    while (T <= params.t_max) {
        const double before = s[k];
        integrate_guarded(sys, s, t, T, params.abs_tol, params.rel_tol, params);
        t = T;
        const double integrand = std::exp(rate * t) * g(to_eigen(s, k));
        if (std::abs(s[k] - before) < params.abs_tol && std::abs(integrand) < params.abs_tol) {
            return sign * s[k];
        }
        T *= 2;
    }
    throw divergent_integral("transport integrand shows no decay by T = " + std::to_string(params.t_max));
}

double transport_residual(const FlowSpec &V, const TransportSource &g, double c, const Eigen::VectorXd &x,
                          const FlowParams &params, transport_direction direction, double step)
{
    auto f = [&](const Eigen::VectorXd &p) { return transport_solve(V, g, c, p, params, direction); };
    const Eigen::VectorXd v = V.field(x);
    const double speed = v.norm();
    double Vf = 0;
    if (speed > 0) {
        const Eigen::VectorXd u = v / speed;
        Vf = (-f(x + 2 * step * u) + 8 * f(x + step * u) - 8 * f(x - step * u) + f(x - 2 * step * u))
             / (12 * step) * speed;
    }
    return std::abs(Vf + c * f(x) - g(x));
}

LimitResult forward_limit(const FlowSpec &spec, const Eigen::VectorXd &x, const FlowParams &params)
{
    LimitResult out;
    double T = params.initial_horizon;
    Eigen::VectorXd cur = flow_with(spec, x, T, params.abs_tol, params.rel_tol, params);
    out.cauchy_difference = std::numeric_limits<double>::infinity();
    while (2 * T <= params.t_max) {
        Eigen::VectorXd next;
        if (spec.linear()) {
            next = (spec.A * (2 * T)).exp() * x;
        } else {
            state s = to_state(cur);
            integrate_guarded(field_system(spec), s, T, 2 * T, params.abs_tol, params.rel_tol, params);
            next = to_eigen(s, spec.k);
        }
        out.cauchy_difference = (next - cur).norm();
        T *= 2;
        cur = std::move(next);
        if (out.cauchy_difference < params.cauchy_tol) {
            out.converged = true;
            break;
        }
    }
    out.value = cur;
    out.horizon = T;
    return out;
}

LimitProbeReport limit_map_probe(const FlowSpec &spec, const ProbeGrid &grid, const FlowParams &params)
{
    spec.validate();
    if (grid.refinements < 2 || !(grid.h > 0)) {
        throw std::invalid_argument("limit probe needs h > 0 and at least two refinements");
    }
    const std::vector<int> comp = complement_of(spec.L, spec.k);
    LimitProbeReport report;
    for (int r = 0; r < grid.refinements; ++r) {
        report.mesh.push_back(grid.h / std::pow(2.0, r));
    }

    // Sample layout per (base, direction, refinement): offsets +h, +2h, -h, -2h.
    struct Sample {
        Eigen::VectorXd x;
        LimitResult limit;
    };
    std::vector<Sample> samples;
    for (const auto &b : grid.base_points) {
        if (b.size() != spec.k) {
            throw dimension_mismatch("probe base point has wrong dimension");
        }
        if (spec.distance_to_L(b) > 0) {
            throw std::invalid_argument("probe base points must lie on L");
        }
        samples.push_back({b, {}});
        for (int d : comp) {
            for (double h : report.mesh) {
                for (double off : {h, 2 * h, -h, -2 * h}) {
                    Eigen::VectorXd p = b;
                    p[d] += off;
                    samples.push_back({p, {}});
                }
            }
        }
    }
    parallel_for(samples.size(), params.threads,
                 [&](std::size_t i) { samples[i].limit = forward_limit(spec, samples[i].x, params); });

    std::optional<Splitting> split;
    Eigen::MatrixXd toL;
    if (spec.linear()) {
        split = stable_splitting(spec.A, spec.L);
        Eigen::MatrixXd M(spec.k, spec.k);
        M << split->stable, split->unstable, split->L;
        const Eigen::MatrixXd Minv = M.inverse();
        const auto nl = split->L.cols();
        toL = split->L * Minv.bottomRows(nl);
    }

    for (const auto &s : samples) {
        if (!s.limit.converged) {
            ++report.nonconvergent_points;
        }
        if (split && s.limit.converged) {
            report.linear_model_error = std::max(report.linear_model_error, (s.limit.value - toL * s.x).norm());
        }
    }

    std::size_t at = 0;
    for (const auto &b : grid.base_points) {
        const Sample &center = samples[at++];
        for (int d : comp) {
            ProbeEstimate est;
            est.base = b;
            est.direction = d;
            est.converged = center.limit.converged;
            for (double h : report.mesh) {
                const Eigen::VectorXd &f0 = center.limit.value;
                const Sample &p1 = samples[at++], &p2 = samples[at++], &m1 = samples[at++], &m2 = samples[at++];
                est.converged = est.converged && p1.limit.converged && p2.limit.converged && m1.limit.converged
                                && m2.limit.converged;
                est.plus.push_back((-3 * f0 + 4 * p1.limit.value - p2.limit.value) / (2 * h));
                est.minus.push_back((3 * f0 - 4 * m1.limit.value + m2.limit.value) / (2 * h));
                if (split && est.converged) {
                    const Eigen::VectorXd exact = toL.col(d);
                    report.linear_model_error = std::max(
                        {report.linear_model_error, (est.plus.back() - exact).norm(), (est.minus.back() - exact).norm()});
                }
            }
            for (std::size_t r = 0; r + 1 < est.plus.size(); ++r) {
                report.refinement_spread = std::max({report.refinement_spread, (est.plus[r + 1] - est.plus[r]).norm(),
                                                     (est.minus[r + 1] - est.minus[r]).norm()});
            }
            report.side_gap = std::max(report.side_gap, (est.plus.back() - est.minus.back()).norm());
            report.estimates.push_back(std::move(est));
        }
    }
    report.stabilized = report.nonconvergent_points == 0 && report.refinement_spread < params.stabilization_tol
                        && report.side_gap < params.stabilization_tol;
    return report;
}

} // namespace radnf
