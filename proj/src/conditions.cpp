#include "gridsync/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gridsync/errors.hpp"
#include "gridsync/spectral.hpp"

namespace gridsync {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_pairs(const CouplingNetwork& net) {
    if (net.n < 2) fail(Errc::n_too_small, "certificates need at least two oscillators");
}

// Bisection for a monotone f with a sign change on [lo, hi]; terminates on
// |f| < 1e-12 or after 200 halvings.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    constexpr double tol = 1e-12;
    double flo = f(lo), fhi = f(hi);
    if (std::abs(flo) < tol) return lo;
    if (std::abs(fhi) < tol) return hi;
    if (flo * fhi > 0.0)
        fail(Errc::root_not_bracketed, "gap equation has no sign change on its bracket");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) < tol) return mid;
        if (flo * fm <= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

double max_freq_mismatch(const CouplingNetwork& net) {
    double m = 0.0;
    for (std::size_t i = 0; i < net.n; ++i)
        for (std::size_t j = 0; j < net.n; ++j) {
            if (i == j) continue;
            m = std::max(m, std::abs(net.natural_freq[i] / net.damping[i] -
                                     net.natural_freq[j] / net.damping[j]));
        }
    return m;
}

// max_i sum_j (P_ij / D_i) sin(phi_ij)
double max_lossy_row(const CouplingNetwork& net) {
    double m = 0.0;
    for (std::size_t i = 0; i < net.n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < net.n; ++j)
            if (j != i) row += net.coupling(i, j) / net.damping[i] * std::sin(net.phase_shift(i, j));
        m = std::max(m, row);
    }
    return m;
}

} // namespace

GammaPair solve_gamma(double ratio, double phi_max_angle, GammaLaw law) {
    if (!(ratio >= 0.0) || ratio >= 1.0)
        fail(Errc::ratio_out_of_range, "gap ratio must lie in [0, 1)");
    GammaPair out;
    if (ratio == 0.0) {
        out.gamma_min = 0.0;
        out.gamma_max = kPi;
        return out;
    }
    if (law == GammaLaw::sine) {
        auto f = [&](double g) { return std::sin(g) - ratio; };
        out.gamma_min = bisect(f, 0.0, kPi / 2.0);
        out.gamma_max = bisect(f, kPi / 2.0, kPi);
    } else {
        const double half = kPi / 2.0 - phi_max_angle;
        auto fmin = [&](double g) { return std::sin(g) - ratio * std::cos(phi_max_angle); };
        auto fmax = [&](double g) { return sinc(g) - ratio * sinc(half); };
        out.gamma_min = bisect(fmin, 0.0, half);
        out.gamma_max = bisect(fmax, half, kPi);
    }
    return out;
}

ConditionReport condition_I(const CouplingNetwork& net) {
    require_pairs(net);
    if (!is_symmetric(net)) fail(Errc::not_symmetric, "condition I requires P = P^T");
    if (!is_complete(net)) fail(Errc::not_complete, "condition I requires a complete graph");

    const double pm = phi_max(net);
    double min_lossless = kInf; // min over ordered pairs of (P_ij / D_i) cos(phi_ij)
    for (std::size_t i = 0; i < net.n; ++i)
        for (std::size_t j = 0; j < net.n; ++j) {
            if (i == j) continue;
            min_lossless = std::min(
                min_lossless,
                net.coupling(i, j) / net.damping[i] * std::cos(net.phase_shift(i, j)));
        }
    const double lhs = static_cast<double>(net.n) * min_lossless;
    const double rhs = (max_freq_mismatch(net) + 2.0 * max_lossy_row(net)) / std::cos(pm);

    ConditionReport rep;
    rep.name = "condition_I";
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.holds = lhs > rhs;
    if (lhs > 0.0) rep.ratio = std::cos(pm) * rhs / lhs;
    if (rep.holds) {
        const GammaPair g = solve_gamma(*rep.ratio, pm, GammaLaw::sine);
        rep.gamma_min = g.gamma_min;
        rep.gamma_max = g.gamma_max;
    }
    return rep;
}

ConditionReport condition_II(const CouplingNetwork& net) {
    require_pairs(net);
    if (!is_symmetric(net)) fail(Errc::not_symmetric, "condition II requires P = P^T");
    if (!is_connected(net)) fail(Errc::disconnected, "condition II requires a connected graph");

    const std::size_t n = net.n;
    const double pm = phi_max(net);

    Mat lossless(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) lossless(i, j) = net.coupling(i, j) * std::cos(net.phase_shift(i, j));
    const double l2 = lambda2_of_weights(lossless);

    // ||H D^{-1} omega||_2 over lexicographic pairs
    double mismatch2 = 0.0;
    for_each_pair(n, [&](std::size_t, std::size_t i, std::size_t j) {
        const double d = net.natural_freq[j] / net.damping[j] -
                         net.natural_freq[i] / net.damping[i];
        mismatch2 += d * d;
    });
    mismatch2 = std::sqrt(mismatch2);

    double lossy2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) row += net.coupling(i, j) / net.damping[i] * std::sin(net.phase_shift(i, j));
        lossy2 += row * row;
    }
    lossy2 = std::sqrt(static_cast<double>(n)) * std::sqrt(lossy2);

    double dd_min = kInf, dd_max = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dd = net.damping[i] * net.damping[j];
            dd_min = std::min(dd_min, dd);
            dd_max = std::max(dd_max, dd);
        }
    double kappa = 0.0;
    for (double d : net.damping) kappa += d;
    const double alpha = std::sqrt(dd_min / dd_max);

    const double denom = std::cos(pm) * (kappa / static_cast<double>(n)) * alpha / dd_max;
    const double lambda_critical = (mismatch2 + lossy2) / denom;

    ConditionReport rep;
    rep.name = "condition_II";
    rep.lhs = l2;
    rep.rhs = lambda_critical;
    rep.holds = l2 > lambda_critical;
    rep.alpha = alpha;
    if (l2 > 0.0) rep.ratio = lambda_critical / l2;
    if (rep.holds) {
        const GammaPair g = solve_gamma(*rep.ratio, pm, GammaLaw::sinc);
        rep.gamma_min = g.gamma_min;
        rep.gamma_max = g.gamma_max;
    }
    return rep;
}

NecessaryReport necessary_condition(const CouplingNetwork& net) {
    NecessaryReport rep;
    for_each_pair(net.n, [&](std::size_t, std::size_t i, std::size_t j) {
        NecessaryPair p;
        p.i = i;
        p.j = j;
        p.lhs = std::abs(net.natural_freq[i] / net.damping[i] -
                         net.natural_freq[j] / net.damping[j]);
        double coupling = 0.0;
        for (std::size_t k = 0; k < net.n; ++k)
            coupling += net.coupling(i, k) / net.damping[i] + net.coupling(j, k) / net.damping[j];
        p.rhs = coupling;
        p.blocked = p.lhs > p.rhs;
        rep.any_blocked = rep.any_blocked || p.blocked;
        rep.pairs.push_back(p);
    });
    return rep;
}

double classic_K_critical(const Vec& omega) {
    const auto [lo, hi] = std::minmax_element(omega.begin(), omega.end());
    return *hi - *lo;
}

double classic_K_of_gamma(const Vec& omega, double gamma) {
    if (!(gamma > 0.0) || !(gamma <= kPi / 2.0))
        fail(Errc::gamma_out_of_range, "gamma must lie in (0, pi/2]");
    const double spread = classic_K_critical(omega);
    if (spread == 0.0) return 0.0;
    const double c = std::cos(gamma);
    if (c <= 0.0) return kInf;
    const double k = spread / c;
    return k > 1e15 ? kInf : k;
}

LiteratureBounds literature_bounds(const Vec& omega, double gamma, std::size_t n) {
    if (n < 3) fail(Errc::n_too_small, "the n/(n-2) comparison bound needs n >= 3");
    const double k = classic_K_of_gamma(omega, gamma);
    LiteratureBounds b;
    b.this_paper = k;
    b.chopra = k * static_cast<double>(n) / 2.0;
    b.schmidt = k * static_cast<double>(n) / static_cast<double>(n - 2);
    b.geometric = k * std::cos((kPi / 2.0 - gamma) / 2.0) / std::cos(kPi / 2.0 - gamma);
    return b;
}

ConditionReport condition_appendix_pairwise(const CouplingNetwork& net) {
    require_pairs(net);
    if (!is_symmetric(net)) fail(Errc::not_symmetric, "pairwise condition requires P = P^T");
    if (!is_complete(net)) fail(Errc::not_complete, "pairwise condition requires a complete graph");

    const std::size_t n = net.n;
    const double pm = phi_max(net);
    ConditionReport rep;
    rep.name = "condition_appendix_pairwise";
    rep.holds = true;
    double worst_ratio = 0.0;

    for_each_pair(n, [&](std::size_t, std::size_t m, std::size_t l) {
        PairCondition pc;
        pc.m = m;
        pc.l = l;
        double lhs = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double best = kInf;
            if (m != k)
                best = std::min(best, net.coupling(m, k) / net.damping[m] *
                                          std::cos(net.phase_shift(m, k)));
            if (l != k)
                best = std::min(best, net.coupling(l, k) / net.damping[l] *
                                          std::cos(net.phase_shift(l, k)));
            lhs += best;
        }
        double lossy = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            lossy += net.coupling(m, k) / net.damping[m] * std::sin(net.phase_shift(m, k)) +
                     net.coupling(l, k) / net.damping[l] * std::sin(net.phase_shift(l, k));
        const double mism = std::abs(net.natural_freq[m] / net.damping[m] -
                                     net.natural_freq[l] / net.damping[l]);
        pc.lhs = lhs;
        pc.rhs = (mism + lossy) / std::cos(pm);
        pc.holds = pc.lhs > pc.rhs;
        rep.holds = rep.holds && pc.holds;
        if (pc.lhs > 0.0)
            worst_ratio = std::max(worst_ratio, pc.rhs / pc.lhs);
        else
            worst_ratio = kInf;
        rep.details.push_back(pc);
    });

    // Report the worst pair at top level so lhs > rhs still mirrors the verdict.
    const auto worst = std::max_element(
        rep.details.begin(), rep.details.end(), [](const PairCondition& a, const PairCondition& b) {
            return a.rhs - a.lhs < b.rhs - b.lhs;
        });
    rep.lhs = worst->lhs;
    rep.rhs = worst->rhs;
    if (std::isfinite(worst_ratio)) rep.ratio = std::cos(pm) * worst_ratio;
    if (rep.holds) {
        const GammaPair g = solve_gamma(*rep.ratio, pm, GammaLaw::sine);
        rep.gamma_min = g.gamma_min;
        rep.gamma_max = g.gamma_max;
    }
    return rep;
}

ConditionReport condition_appendix_concave(const CouplingNetwork& net) {
    require_pairs(net);
    if (!is_symmetric(net)) fail(Errc::not_symmetric, "concavity condition requires P = P^T");
    if (!is_complete(net)) fail(Errc::not_complete, "concavity condition requires a complete graph");

    const std::size_t n = net.n;
    const double pm = phi_max(net);
    ConditionReport rep;
    rep.name = "condition_appendix_concave";
    rep.holds = true;

    // min over the admissible endpoint couplings of (P_ik/D_i) sin(g + shift*phi_ik)
    auto coupling_sum = [&](std::size_t m, std::size_t l, double g, double shift) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double best = kInf;
            if (m != k)
                best = std::min(best, net.coupling(m, k) / net.damping[m] *
                                          std::sin(g + shift * net.phase_shift(m, k)));
            if (l != k)
                best = std::min(best, net.coupling(l, k) / net.damping[l] *
                                          std::sin(g + shift * net.phase_shift(l, k)));
            s += best;
        }
        return s;
    };

    for_each_pair(n, [&](std::size_t, std::size_t m, std::size_t l) {
        PairCondition pc;
        pc.m = m;
        pc.l = l;
        double lhs = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double best = kInf;
            if (m != k)
                best = std::min(best, net.coupling(m, k) / net.damping[m] *
                                          std::cos(net.phase_shift(m, k) + pm));
            if (l != k)
                best = std::min(best, net.coupling(l, k) / net.damping[l] *
                                          std::cos(net.phase_shift(l, k) + pm));
            lhs += best;
        }
        double row_m = 0.0, row_l = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            row_m += net.coupling(m, k) / net.damping[m] * std::sin(net.phase_shift(m, k));
            row_l += net.coupling(l, k) / net.damping[l] * std::sin(net.phase_shift(l, k));
        }
        const double mism = std::abs(net.natural_freq[m] / net.damping[m] -
                                     net.natural_freq[l] / net.damping[l]);
        pc.lhs = lhs;
        pc.rhs = mism + std::max(row_m, row_l);
        pc.holds = pc.lhs > pc.rhs;
        rep.holds = rep.holds && pc.holds;
        rep.details.push_back(pc);
    });

    const auto worst = std::max_element(
        rep.details.begin(), rep.details.end(), [](const PairCondition& a, const PairCondition& b) {
            return a.rhs - a.lhs < b.rhs - b.lhs;
        });
    rep.lhs = worst->lhs;
    rep.rhs = worst->rhs;

    if (rep.holds) {
        double gmin = 0.0, gmax = kPi;
        for (auto& pc : rep.details) {
            const double target = pc.rhs;
            auto fmin = [&](double g) { return coupling_sum(pc.m, pc.l, g, -1.0) - target; };
            auto fmax = [&](double g) { return coupling_sum(pc.m, pc.l, g, +1.0) - target; };
            pc.gamma_min = bisect(fmin, 0.0, kPi / 2.0 - pm);
            pc.gamma_max = bisect(fmax, kPi / 2.0, kPi);
            gmin = std::max(gmin, pc.gamma_min);
            gmax = std::min(gmax, pc.gamma_max);
        }
        rep.gamma_min = gmin;
        rep.gamma_max = gmax;
    }
    return rep;
}

ConditionReport condition_appendix_pmin(const CouplingNetwork& net) {
    require_pairs(net);
    if (!is_symmetric(net)) fail(Errc::not_symmetric, "P_min condition requires P = P^T");
    if (!is_complete(net)) fail(Errc::not_complete, "P_min condition requires a complete graph");

    const std::size_t n = net.n;
    const double pm = phi_max(net);
    double p_min = kInf, d_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d_max = std::max(d_max, net.damping[i]);
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) p_min = std::min(p_min, net.coupling(i, j));
    }
    const double p_critical = d_max / (static_cast<double>(n) * std::cos(pm)) *
                              (max_freq_mismatch(net) + max_lossy_row(net));

    ConditionReport rep;
    rep.name = "condition_appendix_pmin";
    rep.lhs = p_min;
    rep.rhs = p_critical;
    rep.holds = p_min > p_critical;
    if (p_min > 0.0) rep.ratio = std::cos(pm) * p_critical / p_min;
    if (rep.holds) {
        rep.gamma_min = std::asin(*rep.ratio);
        rep.gamma_max = kPi / 2.0 - pm;
    }
    return rep;
}

double rate_lambda_fe(const CouplingNetwork& net, double gamma) {
    if (!is_lossless(net)) fail(Errc::lossy_network, "rate formula needs zero phase shifts");
    if (!is_symmetric(net)) fail(Errc::not_symmetric, "rate formula needs P = P^T");
    if (!(gamma >= 0.0) || !(gamma < kPi / 2.0))
        fail(Errc::gamma_out_of_range, "gamma must lie in [0, pi/2)");
    const double l2 = lambda2_of_weights(net.coupling);
    const double dc = dihedral_cos(net.damping);
    const double d_max = *std::max_element(net.damping.begin(), net.damping.end());
    return l2 * std::cos(gamma) * dc * dc / d_max;
}

double rate_lambda_ps(const CouplingNetwork& net, double gamma) {
    if (!is_lossless(net)) fail(Errc::lossy_network, "rate formula needs zero phase shifts");
    if (!is_symmetric(net)) fail(Errc::not_symmetric, "rate formula needs P = P^T");
    if (!(gamma >= 0.0) || !(gamma < kPi))
        fail(Errc::gamma_out_of_range, "gamma must lie in [0, pi)");
    const double l2 = lambda2_of_weights(net.coupling);
    const double dc = dihedral_cos(net.damping);
    const double d_max = *std::max_element(net.damping.begin(), net.damping.end());
    return l2 * sinc(gamma) * dc * dc / d_max;
}

double sync_frequency_omega(const CouplingNetwork& net) {
    double sw = 0.0, sd = 0.0;
    for (std::size_t i = 0; i < net.n; ++i) {
        sw += net.natural_freq[i];
        sd += net.damping[i];
    }
    return sw / sd;
}

double weighted_mean_angle(const CouplingNetwork& net, const PhaseState& theta0) {
    auto arc = min_enclosing_arc(theta0.angles());
    if (!arc || arc->length >= kPi)
        fail(Errc::not_phase_cohesive, "weighted mean angle needs theta in Delta(pi)");
    const Vec lifted = lift_to_arc(theta0.angles(), *arc);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < net.n; ++i) {
        num += net.damping[i] * lifted[i];
        den += net.damping[i];
    }
    return wrap_2pi(num / den);
}

} // namespace gridsync
