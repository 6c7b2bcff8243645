#ifndef TFWAVE_REPORT_IO_HPP
#define TFWAVE_REPORT_IO_HPP

/*
    Serialization of coefficient grids (CSV, full-precision round-trip) and
    of reports (JSON): frame estimates, painless certificates, perturbation
    reports, wave front reports and comparisons.
*/

#include "tfwave/gabor.hpp"
#include "tfwave/nsgt.hpp"
#include "tfwave/perturb.hpp"
#include "tfwave/wavefront.hpp"

#include <json.hpp>

#include <string>

namespace tfwave {

// CSV "m,n,x,xi,re,im,abs" with %.17g fields (bit-exact round trip).
std::string coefficient_grid_csv(const CoefficientGrid& grid);
CoefficientGrid parse_coefficient_grid_csv(const std::string& text);

nlohmann::json frame_estimate_json(const GaborSystem& sys, const FrameEstimate& est);
nlohmann::json certificate_json(const PainlessCertificate& cert);
nlohmann::json wavefront_report_json(const WavefrontReport& rep);
nlohmann::json comparison_json(const ComparisonResult& res);

struct PerturbationReport {
    double epsilon = 0.0;  // perturbation energy within the radius
    int covered = 0;
    int missing = 0;
    std::optional<FrameBounds> christensen;
    double bessel = 0.0;
    // (lambda, mu) -> truncated weighted sum
    std::vector<std::tuple<double, double, double>> weighted_sums;
};
nlohmann::json perturbation_report_json(const PerturbationReport& rep);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace tfwave

#endif
