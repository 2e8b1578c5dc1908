#pragma once

#include "pqsim/field.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace pqsim {

/// Exponents and parameters of u_t - div(|Du|^{p-2}Du) - div(|Du|^{q-2}Du)
/// = theta u^{-delta} + f(x,u), with the derived critical values.
struct ProblemParams {
    double p = 2.0;
    double q = 1.5;
    double delta = 0.5;
    double theta = 1.0;

    double delta_crit() const { return 2.0 + 1.0 / (p - 1.0); }
    double tau() const { return p / (p - 1.0 + delta); }
    double m_crit() const {
        return delta > 1.0 ? (p - 1.0 + delta) / (delta - 1.0)
                           : std::numeric_limits<double>::infinity();
    }

    /// Throws ConfigError naming the violated rule ("1<q<p", "delta>0", ...).
    void validate() const;
};

/// Tagged description of the reaction term f(x,s) (or a frozen forcing g).
/// Reaction families are x-independent; frozen forcing may depend on (x,t).
struct NonlinearitySpec {
    enum class Kind { none, frozen, subhomog, superhomog };
    enum class Family { none, constant, capped_power, linear_q, power };

    Kind kind = Kind::none;
    Family family = Family::none;

    // family coefficients (meaning depends on family, see factories)
    double c = 0.0;    // constant value / capped scale / linear_q offset / c_r
    double cap = 1.0;  // capped_power plateau of s^{q-1}
    double alpha = 0.0;  // linear_q slope in s^{q-1}
    double r = 0.0;      // superhomog power
    double q = 2.0;      // exponent the growth conditions compare against

    double alpha_f = 0.0;      // (f1) limit of f(s)/s^{q-1}
    double lower_bound = 0.0;  // L with f >= -L
    double lipschitz = 0.0;    // omega, modulus on the working range (0 = estimate)

    // frozen forcing g(x,y,t); bound used where a sup-norm of g is needed
    std::function<double(double, double, double)> g;
    double g_sup = 0.0;

    static NonlinearitySpec none_spec();
    static NonlinearitySpec frozen(std::function<double(double, double, double)> g,
                                   double sup_bound);
    /// f(s) = c (subhomogeneous for any c; L = max(0,-c)).
    static NonlinearitySpec constant(double c);
    /// f(s) = scale * min(s^{q-1}, cap) on s>=0 (nondecreasing, bounded).
    static NonlinearitySpec capped_power(double q, double scale, double cap);
    /// f(s) = alpha s^{q-1} + beta on s>=0 (alpha, beta >= 0).
    static NonlinearitySpec linear_q(double q, double alpha, double beta);
    /// f(s) = c_r |s|^{r-2} s, superhomogeneous; F(s) = c_r |s|^r / r.
    static NonlinearitySpec power(double r, double c_r);

    bool is_reaction() const { return kind == Kind::subhomog || kind == Kind::superhomog; }

    double f(double s) const;
    double F(double s) const;  // primitive with F(0) = 0

    /// Envelope f(s) <= l s^{q-1} + L_up for all s >= 0 (subhomog families).
    struct Envelope { double l; double L; };
    Envelope upper_envelope() const;

    /// Smallest K >= 0 with s -> f(s) + K s nondecreasing on [0, smax],
    /// estimated on a sample grid unless the family is known monotone.
    double monotonicity_shift(double smax) const;

    /// Lipschitz modulus estimate of f on [lo, hi] (sampled).
    double lipschitz_on(double lo, double hi) const;
};

/// Result of sampling the growth conditions on a positive increasing grid.
struct GrowthReport {
    bool f1 = false;  // f(s)/s^{q-1} has a finite nonnegative tail limit
    bool f2 = false;  // s -> f(s)/s^{q-1} nonincreasing
    bool f3 = false;  // c_r |s|^r <= r F(s) <= s f(s) (superhomog only)
    bool bounded_below = false;  // f >= -L on the grid
    double alpha_f_estimate = 0.0;
    std::optional<double> first_violation_s;
    std::string violated;  // name of the first failed condition, empty if none
};

GrowthReport check_growth_conditions(const NonlinearitySpec& f,
                                     const std::vector<double>& s_grid);

} // namespace pqsim
