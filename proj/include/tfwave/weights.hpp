#ifndef TFWAVE_WEIGHTS_HPP
#define TFWAVE_WEIGHTS_HPP

/*
    Weight functions omega on [0,inf): subadditive, with a logarithmic lower
    bound and phi(t) = omega(e^t) convex. Shipped kinds:

      log        omega(t) = log(1+t)      (polynomial weights e^{l*omega})
      gevrey:s   omega(t) = t^{1/s}
      custom     tabulated (t, omega) pairs, linear interpolation

    young_conjugate evaluates phi*(s) = sup_{t>=0} (s t - phi(t)), closed form
    for Gevrey, golden-section search otherwise. The search reports +inf when
    the objective is still climbing at the cap (the supremum is numerically
    unbounded, e.g. the log weight for s > 1).
*/

#include <cmath>
#include <string>
#include <vector>

namespace tfwave {

enum class WeightKind { Log, Gevrey, Custom };

class WeightFunction {
public:
    static WeightFunction log_weight();
    static WeightFunction gevrey(double s);  // s >= 1; s > 1 is non-quasianalytic
    static WeightFunction custom(std::vector<double> t, std::vector<double> omega);

    double omega(double t) const;            // domain error on t < 0 or non-finite
    double phi(double t) const { return omega_unchecked(std::exp(t)); }
    double young_conjugate(double s) const;  // phi*(s), s >= 0; may be +inf

    WeightKind kind() const { return kind_; }
    double gevrey_order() const { return gevrey_s_; }
    std::string spec_string() const;         // "log", "gevrey:<s>", "custom"

    // omega evaluated on the phase-space point (x, xi): omega(|z|).
    double omega2(double x, double xi) const;

private:
    WeightFunction() = default;
    double omega_unchecked(double t) const;
    double search_cap() const;

    WeightKind kind_ = WeightKind::Log;
    double gevrey_s_ = 0.0;
    std::vector<double> tab_t_, tab_w_;
};

struct ConditionReport {
    bool subadditive_ok = false;
    bool convex_ok = false;
    bool gamma_ok = false;
    bool beta_converging = false;            // tail increments decaying geometrically
    double integral_beta_estimate = 0.0;     // extrapolated int_1^inf omega(t)/t^2 dt
    double gamma_a = 0.0;                    // omega(t) >= a + b log(1+t) on the grid
    double gamma_b = 0.0;
};

struct WeightGrid {
    double t_max = 1e6;
    int points = 200;                        // >= 100
};

// Samples the defining conditions; the beta integral is extrapolated, never
// proved (the report carries the estimate and a converging flag only).
ConditionReport check_weight_conditions(const WeightFunction& w, const WeightGrid& grid);

// Parses "log", "gevrey:<s>" or "custom:<csv-path>" (CSV columns t,omega).
WeightFunction parse_weight(const std::string& spec);

} // namespace tfwave

#endif
