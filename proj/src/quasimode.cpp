#include "threshold_lab/quasimode.hpp"

#include <algorithm>
#include <cmath>

#include "threshold_lab/quadrature.hpp"

namespace tlab {

double GlueFunction::rho(double t) {
    if (t <= 0.0 || t >= 1.0)
        return 0.0;
    const double s = 1.0 - t;
    return t * s * s;
}

double GlueFunction::drho(double t) {
    if (t < 0.0 || t > 1.0)
        return 0.0;
    return 1.0 - 4.0 * t + 3.0 * t * t;
}

double GlueFunction::ddrho(double t) {
    if (t < 0.0 || t > 1.0)
        return 0.0;
    return -4.0 + 6.0 * t;
}

double JunctionErrors::max_jump() const {
    return std::max({std::abs(psi_left), std::abs(dpsi_left), std::abs(psi_right),
                     std::abs(dpsi_right), std::abs(psi_glue), std::abs(dpsi_glue)});
}

double Quasimode::psi(double x) const {
    const double j = junction;
    if (x < -j)
        return std::exp(omega * (x + j));
    if (x <= j) {
        double value = u.u(x) + weight_v * v.value(x);
        if (has_w)
            value += weight_w * w.value(x);
        return value;
    }
    return a0 * std::exp(-omega * (x - j)) + a1 * GlueFunction::rho(x - j);
}

double Quasimode::dpsi(double x) const {
    const double j = junction;
    if (x < -j)
        return omega * std::exp(omega * (x + j));
    if (x <= j) {
        double value = u.du(x) + weight_v * v.deriv(x);
        if (has_w)
            value += weight_w * w.deriv(x);
        return value;
    }
    return -omega * a0 * std::exp(-omega * (x - j)) + a1 * GlueFunction::drho(x - j);
}

double Quasimode::residual_at(double x) const {
    const double j = junction;
    if (x < -j)
        return 0.0;
    if (x <= j) {
        double value = res_v * v.value(x);
        if (has_w)
            value += res_w * w.value(x);
        return residual_pot(x) * value + omega * omega * psi(x);
    }
    if (x <= j + 1.0) {
        const double t = x - j;
        return -a1 * (GlueFunction::ddrho(t) - omega * omega * GlueFunction::rho(t));
    }
    return 0.0;
}

namespace {

std::vector<double> union_breaks(const PiecewisePotential& a, const PiecewisePotential& b) {
    std::vector<double> cuts = a.breakpoints();
    for (double c : b.breakpoints())
        cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

void assemble_norm_and_residual(Quasimode& q, const PiecewisePotential& u_pot) {
    const double j = q.junction;
    const double w = q.omega;

    std::vector<double> cuts = union_breaks(u_pot, q.residual_pot);

    auto psi2 = [&q](double x) {
        const double p = q.psi(x);
        return p * p;
    };
    const double interior = integrate(psi2, -j, j, cuts, 1e-10, 1e-300);
    const double glue = integrate(psi2, j, j + 1.0, {}, 1e-10, 1e-300);
    // exact exponential tails: int_{-inf}^{-j} e^{2w(x+j)} and the decayed right tail
    const double tail_left = 1.0 / (2.0 * w);
    const double tail_right = q.a0 * q.a0 * std::exp(-2.0 * w) / (2.0 * w);
    q.norm = std::sqrt(tail_left + interior + glue + tail_right);

    auto r2 = [&q](double x) {
        const double r = q.residual_at(x);
        return r * r;
    };
    const double r_interior = integrate(r2, -j, j, cuts, 1e-9, 1e-300);
    const double r_glue = integrate(r2, j, j + 1.0, {}, 1e-9, 1e-300);
    q.residual = std::sqrt(r_interior + r_glue);
    q.accuracy_ratio = q.residual / (q.norm * w * w);
}

void fill_junction_errors(Quasimode& q, double theta, double k, double wprime_at_j) {
    JunctionErrors e;
    const double j = q.junction;
    e.psi_left = q.psi(-j) - 1.0;           // interior side minus the tail value e^0
    e.dpsi_left = q.dpsi(-j) - q.omega;     // interior side minus the tail slope
    const double psi_int = q.u.u(j) + q.weight_v * q.v.value(j) +
                           (q.has_w ? q.weight_w * q.w.value(j) : 0.0);
    const double dpsi_int = q.u.du(j) + q.weight_v * q.v.deriv(j) +
                            (q.has_w ? q.weight_w * q.w.deriv(j) : 0.0);
    e.psi_right = (q.a0 + q.a1 * GlueFunction::rho(0.0)) - psi_int;
    e.dpsi_right = (-q.omega * q.a0 + q.a1 * GlueFunction::drho(0.0)) - dpsi_int;
    e.psi_glue = q.a1 * GlueFunction::rho(1.0);
    e.dpsi_glue = q.a1 * GlueFunction::drho(1.0);
    e.wprime_defect = wprime_at_j + theta * k;
    q.junction_errors = e;
}

} // namespace

Quasimode build_quasimode_t2(const PiecewisePotential& u_pot, const PiecewisePotential& v_pot,
                             const ScalingFamily& f, const PowerLaw& eps, double lambda,
                             const HalfBoundState& h) {
    if (!(lambda > 0.0))
        throw Error("build_quasimode_t2: lambda must be positive");
    const double eps_l = eps.at(lambda);
    if (eps_l == 0.0)
        throw Error("build_quasimode_t2: eps_lambda must be nonzero");
    const double alpha = f.limit();
    const double alpha_l = alpha + eps_l;
    if (!(alpha_l > 0.0))
        throw Error("build_quasimode_t2: alpha + eps_lambda must stay positive");
    const double theta = h.theta();
    const double d = theta * theta + 1.0;

    const double j = std::max({u_pot.b(), v_pot.b() / alpha, v_pot.b() / alpha_l, h.b()});

    // V0 = alpha V(alpha .), V_lam = alpha_l V(alpha_l .)
    const PiecewisePotential v0 = scaled_potential_at(v_pot, alpha, alpha);
    const PiecewisePotential vl = scaled_potential_at(v_pot, alpha_l, alpha_l);
    const std::vector<double> cuts = union_breaks(combined(v0, vl), u_pot);

    auto diff_u2 = [&](double x) {
        const double uu = h.u(x);
        return (vl(x) - v0(x)) * uu * uu;
    };
    const double I = integrate(diff_u2, -j, j, cuts, 1e-12);
    const double k = -I / (eps_l * d);
    if (!(k > 0.0))
        throw ConditionsViolated("build_quasimode_t2: k_lambda <= 0, no decaying quasimode tails");

    Quasimode q;
    q.regime = ThresholdCase::T2;
    q.lambda = lambda;
    q.alpha_lambda = alpha_l;
    q.eps_lambda = eps_l;
    q.k_lambda = k;
    q.omega = lambda * eps_l * k;
    q.junction = j;
    q.u = h;

    auto fv = [&h, v0](double x) { return -v0(x) * h.u(x); };
    q.v = InhomogeneousSolution(u_pot, fv, {-j, 0.0, 0.0}, j, v0.breakpoints());
    auto fw = [&h, v0, vl, eps_l](double x) { return -(vl(x) - v0(x)) * h.u(x) / eps_l; };
    q.w = InhomogeneousSolution(u_pot, fw, {-j, 0.0, k}, j, cuts);
    q.has_w = true;

    q.weight_v = lambda;
    q.weight_w = lambda * eps_l;
    const double vb = q.v.value(j);
    const double wb = q.w.value(j);
    q.a0 = theta + lambda * vb + lambda * eps_l * wb;
    q.a1 = lambda * lambda * eps_l * k * (vb + eps_l * wb);

    q.residual_pot = vl;
    q.res_v = lambda * lambda;
    q.res_w = lambda * lambda * eps_l;

    fill_junction_errors(q, theta, k, q.w.deriv(j));
    assemble_norm_and_residual(q, u_pot);
    return q;
}

Quasimode build_quasimode_t3(const PiecewisePotential& u_pot, const PiecewisePotential& v_pot,
                             const ScalingFamily& f, double lambda, const HalfBoundState& h) {
    if (!(lambda > 0.0))
        throw Error("build_quasimode_t3: lambda must be positive");
    const double alpha = f.alpha_at(lambda);
    const double theta = h.theta();
    const double d = theta * theta + 1.0;
    const double j = std::max({u_pot.b(), v_pot.b() / alpha, h.b()});

    const PiecewisePotential vl = scaled_potential_at(v_pot, alpha, alpha); // alpha V(alpha .)
    const std::vector<double> cuts = union_breaks(vl, u_pot);

    auto vl_u2 = [&](double x) {
        const double uu = h.u(x);
        return vl(x) * uu * uu;
    };
    const double I = integrate(vl_u2, -j, j, cuts, 1e-12);
    const double k = -alpha * I / d;
    if (!(k > 0.0))
        throw ConditionsViolated("build_quasimode_t3: k_lambda <= 0, no decaying quasimode tails");

    Quasimode q;
    q.regime = ThresholdCase::T3;
    q.lambda = lambda;
    q.alpha_lambda = alpha;
    q.k_lambda = k;
    q.omega = lambda * k / alpha;
    q.junction = j;
    q.u = h;

    auto fv = [&h, vl, alpha](double x) { return -alpha * vl(x) * h.u(x); };
    q.v = InhomogeneousSolution(u_pot, fv, {-j, 0.0, k}, j, vl.breakpoints());
    InhomogeneousSolution v_copy = q.v;
    auto fw = [v_copy, vl, alpha](double x) { return -alpha * vl(x) * v_copy.value(x); };
    q.w = InhomogeneousSolution(u_pot, fw, {-j, 0.0, 0.0}, j, cuts);
    q.has_w = true;

    q.weight_v = lambda / alpha;
    q.weight_w = lambda * lambda / (alpha * alpha);
    const double vb = q.v.value(j);
    const double wb = q.w.value(j);
    const double dwb = q.w.deriv(j);
    q.a0 = theta + q.weight_v * vb + q.weight_w * wb;
    q.a1 = q.weight_w * (k * vb + dwb + (lambda / alpha) * k * wb);

    q.residual_pot = scaled_potential_at(v_pot, alpha, 1.0); // V(alpha .)
    q.res_v = 0.0;
    q.res_w = lambda * lambda * lambda;

    fill_junction_errors(q, theta, k, q.v.deriv(j));
    assemble_norm_and_residual(q, u_pot);
    return q;
}

Quasimode build_quasimode_t4(const PiecewisePotential& u_pot, const PiecewisePotential& v_pot,
                             const ScalingFamily& f, double lambda, const HalfBoundState& h) {
    if (!(lambda > 0.0))
        throw Error("build_quasimode_t4: lambda must be positive");
    const double alpha = f.alpha_at(lambda);
    const double theta = h.theta();
    const double d = theta * theta + 1.0;
    const double j = std::max({u_pot.b(), v_pot.b() / alpha, h.b()});

    const PiecewisePotential vs = scaled_potential_at(v_pot, alpha, 1.0); // V(alpha .)
    const std::vector<double> cuts = union_breaks(vs, u_pot);

    auto vs_u2 = [&](double x) {
        const double uu = h.u(x);
        return vs(x) * uu * uu;
    };
    const double I = integrate(vs_u2, -j, j, cuts, 1e-12);
    const double k = -I / d;
    if (!(k > 0.0))
        throw ConditionsViolated("build_quasimode_t4: k_lambda <= 0, no decaying quasimode tails");

    Quasimode q;
    q.regime = ThresholdCase::T4;
    q.lambda = lambda;
    q.alpha_lambda = alpha;
    q.k_lambda = k;
    q.omega = lambda * alpha * k;
    q.junction = j;
    q.u = h;

    auto fv = [&h, vs](double x) { return -vs(x) * h.u(x); };
    q.v = InhomogeneousSolution(u_pot, fv, {-j, 0.0, k}, j, vs.breakpoints());
    q.has_w = false;

    q.weight_v = lambda * alpha;
    q.weight_w = 0.0;
    const double vb = q.v.value(j);
    q.a0 = theta + lambda * alpha * vb;
    // The jump [psi']_j vanishes only with the factor k here (the paper's (6.x)
    // coefficient list omits it, unlike its sections 4 and 5 counterparts).
    q.a1 = lambda * lambda * alpha * alpha * k * vb;

    q.residual_pot = vs;
    q.res_v = lambda * lambda * alpha * alpha;
    q.res_w = 0.0;

    fill_junction_errors(q, theta, k, q.v.deriv(j));
    assemble_norm_and_residual(q, u_pot);
    return q;
}

double residual_norm(const Quasimode& q) {
    const double j = q.junction;
    auto r2 = [&q](double x) {
        const double r = q.residual_at(x);
        return r * r;
    };
    std::vector<double> cuts = q.residual_pot.breakpoints();
    const double interior = integrate(r2, -j, j, cuts, 1e-9, 1e-300);
    const double glue = integrate(r2, j, j + 1.0, {}, 1e-9, 1e-300);
    return std::sqrt(interior + glue);
}

double quasimode_norm(const Quasimode& q) {
    const double j = q.junction;
    auto psi2 = [&q](double x) {
        const double p = q.psi(x);
        return p * p;
    };
    std::vector<double> cuts = q.residual_pot.breakpoints();
    const double interior = integrate(psi2, -j, j, cuts, 1e-10, 1e-300);
    const double glue = integrate(psi2, j, j + 1.0, {}, 1e-10, 1e-300);
    return std::sqrt(1.0 / (2.0 * q.omega) + interior + glue +
                     q.a0 * q.a0 * std::exp(-2.0 * q.omega) / (2.0 * q.omega));
}

} // namespace tlab
