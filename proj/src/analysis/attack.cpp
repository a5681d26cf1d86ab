#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spanse/analysis.hpp"
#include "spanse/errors.hpp"

namespace spanse::analysis {

namespace {

double nu_bound(unsigned b, unsigned q) { return std::ldexp(std::log2(static_cast<double>(q - 1)), -static_cast<int>(b)); }

unsigned depth_bound(double phi, double n) {
    return static_cast<unsigned>(std::floor(std::log2((1 - phi) * n)));
}

// Objective without constraint checks; callers keep points feasible.
CostReport evaluate(const AttackPoint& pt, const Dimensions& dims) {
    const double n = dims.n;
    const double log2q = std::log2(static_cast<double>(dims.q));
    const double rate_reduced = dims.rate() / (1 - pt.phi);
    CostReport c;
    c.point = pt;
    c.rho = ((pt.b + 1) * pt.nu - (1 - rate_reduced) * log2q) * (1 - pt.phi);
    c.chi = c.rho + pt.phi * std::log2(1 - 1.0 / dims.q);
    c.iteration_log2 = std::max(pt.nu * (1 - pt.phi), c.rho) * n;
    c.success_prob_log2 = std::min(0.0, c.chi) * n;
    c.t_sdp_log2 = c.iteration_log2 - c.success_prob_log2;
    c.t_doom_log2 = c.t_sdp_log2 - 0.5 * std::log2(static_cast<double>(dims.p));
    return c;
}

}  // namespace

CostReport pge_ss_exponents(const AttackPoint& pt, const Dimensions& dims) {
    std::ostringstream why;
    why.precision(10);
    if (dims.q < 3) why << "q must be at least 3";
    else if (dims.n <= 0 || dims.k <= 0 || dims.k >= dims.n) why << "need 0 < k < n";
    else if (pt.b < 1) why << "tree depth b must be >= 1";
    else if (!(pt.phi > 0) || !(pt.phi < 1 - dims.rate())) why << "phi=" << pt.phi << " outside (0, 1-R)";
    else if (!(pt.nu > 0)) why << "nu must be positive";
    else if (!(pt.nu < nu_bound(pt.b, dims.q)))
        why << "nu=" << pt.nu << " violates nu < 2^-b log2(q-1) = " << nu_bound(pt.b, dims.q);
    else if (pt.b > depth_bound(pt.phi, dims.n))
        why << "b=" << pt.b << " violates b <= floor(log2((1-phi) n)) = " << depth_bound(pt.phi, dims.n);
    if (!why.str().empty()) throw DomainError("pge_ss_exponents: " + why.str());
    return evaluate(pt, dims);
}

CostReport optimize_attack(const Dimensions& dims, const SearchConfig& config) {
    if (dims.k <= 0 || dims.k >= dims.n || dims.q < 3) throw DomainError("optimize_attack: need 0 < k < n and q >= 3");
    const double phi_max = 1 - dims.rate();
    const double log2q = std::log2(static_cast<double>(dims.q));
    const double chi_phi = std::log2(1 - 1.0 / dims.q);

    // For fixed (b, phi) the cost is piecewise linear in nu, so the optimum
    // sits at a kink: rho = nu (1 - phi), chi = 0, or next to the nu cap.
    auto best_at = [&](unsigned b, double phi, CostReport& local) {
        if (!(phi > 0) || !(phi < phi_max) || b > depth_bound(phi, dims.n)) return;
        const double nu_cap = nu_bound(b, dims.q);
        const double slack = (1 - dims.rate() / (1 - phi)) * log2q;
        const double kinks[] = {slack / b, slack / (b + 1) - phi * chi_phi / ((b + 1) * (1 - phi)),
                                nu_cap * (1 - 1e-12), nu_cap * 1e-9};
        for (double nu : kinks) {
            if (!(nu > 0) || !(nu < nu_cap)) continue;
            CostReport c = evaluate({b, nu, phi}, dims);
            if (c.t_doom_log2 < local.t_doom_log2) local = c;
        }
    };

    CostReport best;
    best.t_doom_log2 = std::numeric_limits<double>::infinity();
    const unsigned b_max = depth_bound(0, dims.n);
    for (unsigned b = 1; b <= b_max; ++b) {
        CostReport local;
        local.t_doom_log2 = std::numeric_limits<double>::infinity();
        double step = phi_max / config.coarse_phi;
        for (unsigned i = 0; i < config.coarse_phi; ++i) best_at(b, (i + 0.5) * step, local);
        if (!std::isfinite(local.t_doom_log2)) continue;
        for (unsigned pass = 0; pass < config.refine_passes; ++pass) {
            const double centre = local.point.phi;
            for (unsigned i = 0; i <= config.refine_steps; ++i)
                best_at(b, centre - step + 2 * step * i / config.refine_steps, local);
            step = 2 * step / config.refine_steps;
        }
        if (local.t_doom_log2 < best.t_doom_log2) best = local;
    }
    if (!std::isfinite(best.t_doom_log2)) throw DomainError("optimize_attack: no feasible point");
    return best;
}

}  // namespace spanse::analysis
