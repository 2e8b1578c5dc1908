#include "pqsim/params.hpp"

#include "pqsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pqsim {

void ProblemParams::validate() const {
    if (!(p > 1.0)) throw ConfigError("params.p: requires p > 1, got " + std::to_string(p));
    if (!(q > 1.0 && q < p)) {
        std::ostringstream os;
        os << "params.q: requires 1 < q < p, got q=" << q << " with p=" << p;
        throw ConfigError(os.str());
    }
    if (!(delta > 0.0))
        throw ConfigError("params.delta: requires delta > 0, got " + std::to_string(delta));
    if (!(theta > 0.0))
        throw ConfigError("params.theta: requires theta > 0, got " + std::to_string(theta));
}

NonlinearitySpec NonlinearitySpec::none_spec() {
    return {};
}

NonlinearitySpec NonlinearitySpec::frozen(std::function<double(double, double, double)> g,
                                          double sup_bound) {
    NonlinearitySpec s;
    s.kind = Kind::frozen;
    s.g = std::move(g);
    s.g_sup = sup_bound;
    return s;
}

NonlinearitySpec NonlinearitySpec::constant(double c) {
    NonlinearitySpec s;
    s.kind = Kind::subhomog;
    s.family = Family::constant;
    s.c = c;
    s.alpha_f = 0.0;
    s.lower_bound = std::max(0.0, -c);
    s.lipschitz = 0.0;
    return s;
}

NonlinearitySpec NonlinearitySpec::capped_power(double q, double scale, double cap) {
    if (!(q > 1.0) || !(scale >= 0.0) || !(cap > 0.0))
        throw ConfigError("capped_power: requires q > 1, scale >= 0, cap > 0");
    NonlinearitySpec s;
    s.kind = Kind::subhomog;
    s.family = Family::capped_power;
    s.q = q;
    s.c = scale;
    s.cap = cap;
    s.alpha_f = 0.0;
    s.lower_bound = 0.0;
    return s;
}

NonlinearitySpec NonlinearitySpec::linear_q(double q, double alpha, double beta) {
    if (!(q > 1.0) || alpha < 0.0 || beta < 0.0)
        throw ConfigError("linear_q: requires q > 1 and alpha, beta >= 0");
    NonlinearitySpec s;
    s.kind = Kind::subhomog;
    s.family = Family::linear_q;
    s.q = q;
    s.alpha = alpha;
    s.c = beta;
    s.alpha_f = alpha;
    s.lower_bound = 0.0;
    return s;
}

NonlinearitySpec NonlinearitySpec::power(double r, double c_r) {
    if (!(r > 1.0) || !(c_r > 0.0))
        throw ConfigError("power: requires r > 1 and c_r > 0");
    NonlinearitySpec s;
    s.kind = Kind::superhomog;
    s.family = Family::power;
    s.r = r;
    s.c = c_r;
    s.lower_bound = 0.0;  // on s >= 0; odd extension is sign-symmetric
    return s;
}

double NonlinearitySpec::f(double s) const {
    switch (family) {
        case Family::none: return 0.0;
        case Family::constant: return c;
        case Family::capped_power: {
            const double sp = s > 0.0 ? std::pow(s, q - 1.0) : 0.0;
            return c * std::min(sp, cap);
        }
        case Family::linear_q:
            return alpha * (s > 0.0 ? std::pow(s, q - 1.0) : 0.0) + c;
        case Family::power:
            return c * std::pow(std::abs(s), r - 2.0) * s;
    }
    return 0.0;
}

double NonlinearitySpec::F(double s) const {
    switch (family) {
        case Family::none: return 0.0;
        case Family::constant: return c * s;
        case Family::capped_power: {
            if (s <= 0.0) return 0.0;
            const double s_star = std::pow(cap, 1.0 / (q - 1.0));
            if (s <= s_star) return c * std::pow(s, q) / q;
            return c * (std::pow(s_star, q) / q + cap * (s - s_star));
        }
        case Family::linear_q:
            return (s > 0.0 ? alpha * std::pow(s, q) / q : 0.0) + c * s;
        case Family::power:
            return c * std::pow(std::abs(s), r) / r;
    }
    return 0.0;
}

NonlinearitySpec::Envelope NonlinearitySpec::upper_envelope() const {
    switch (family) {
        case Family::none: return {0.0, 0.0};
        case Family::constant: return {0.0, std::max(0.0, c)};
        case Family::capped_power: return {0.0, c * cap};
        case Family::linear_q: return {alpha, c};
        default:
            throw InvariantError("upper_envelope: only defined for subhomogeneous families");
    }
}

double NonlinearitySpec::monotonicity_shift(double smax) const {
    // All shipped families are nondecreasing on s >= 0.
    switch (family) {
        case Family::none:
        case Family::constant:
        case Family::capped_power:
        case Family::linear_q:
        case Family::power:
            break;
    }
    (void)smax;
    return 0.0;
}

double NonlinearitySpec::lipschitz_on(double lo, double hi) const {
    if (lipschitz > 0.0) return lipschitz;
    lo = std::max(lo, 1e-9 * std::max(1.0, hi));
    if (!(hi > lo)) return 0.0;
    const int n = 512;
    double wmax = 0.0;
    double sprev = lo, fprev = f(lo);
    for (int k = 1; k <= n; ++k) {
        const double s = lo + (hi - lo) * k / n;
        const double fs = f(s);
        wmax = std::max(wmax, std::abs(fs - fprev) / (s - sprev));
        sprev = s;
        fprev = fs;
    }
    return wmax;
}

GrowthReport check_growth_conditions(const NonlinearitySpec& f,
                                     const std::vector<double>& s_grid) {
    GrowthReport rep;
    if (s_grid.size() < 2)
        throw std::invalid_argument("check_growth_conditions: need at least 2 samples");
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        if (!(s_grid[k] > 0.0) || (k > 0 && !(s_grid[k] > s_grid[k - 1])))
            throw std::invalid_argument("check_growth_conditions: s_grid must be positive increasing");
    }
    const double tol = 1e-12;
    auto flag = [&](const char* name, double s) {
        if (rep.violated.empty()) {
            rep.violated = name;
            rep.first_violation_s = s;
        }
    };

    // (f2): ratio f(s)/s^{q-1} nonincreasing; also drives the (f1) tail.
    std::vector<double> ratio(s_grid.size());
    for (std::size_t k = 0; k < s_grid.size(); ++k)
        ratio[k] = f.f(s_grid[k]) / std::pow(s_grid[k], f.q - 1.0);
    rep.f2 = true;
    for (std::size_t k = 1; k < ratio.size(); ++k) {
        const double scale = std::max(1.0, std::abs(ratio[k - 1]));
        if (ratio[k] > ratio[k - 1] + tol * scale) {
            rep.f2 = false;
            flag("f2", s_grid[k]);
            break;
        }
    }

    // (f1): tail of the ratio finite and nonnegative.
    rep.alpha_f_estimate = ratio.back();
    rep.f1 = std::isfinite(ratio.back()) && ratio.back() >= -tol;
    if (!rep.f1) flag("f1", s_grid.back());

    // bounded below by -L
    rep.bounded_below = true;
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        if (f.f(s_grid[k]) < -f.lower_bound - tol * std::max(1.0, f.lower_bound)) {
            rep.bounded_below = false;
            flag("lower_bound", s_grid[k]);
            break;
        }
    }

    // (f3): c_r |s|^r <= r F(s) <= s f(s), superhomogeneous data only.
    if (f.kind == NonlinearitySpec::Kind::superhomog && f.r > 1.0) {
        rep.f3 = true;
        for (std::size_t k = 0; k < s_grid.size(); ++k) {
            const double s = s_grid[k];
            const double lhs = f.c * std::pow(std::abs(s), f.r);
            const double mid = f.r * f.F(s);
            const double rhs = s * f.f(s);
            const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
            if (lhs > mid + tol * scale || mid > rhs + tol * scale) {
                rep.f3 = false;
                flag("f3", s);
                break;
            }
        }
    }
    return rep;
}

} // namespace pqsim
