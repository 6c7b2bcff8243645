#include "tfwave/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tfwave {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string coefficient_grid_csv(const CoefficientGrid& grid) {
    std::ostringstream os;
    os << "m,n,x,xi,re,im,abs\n";
    for (const auto& e : grid.entries) {
        os << e.m << ',' << e.n << ',' << fmt17(e.x) << ',' << fmt17(e.xi) << ','
           << fmt17(e.value.real()) << ',' << fmt17(e.value.imag()) << ','
           << fmt17(std::abs(e.value)) << '\n';
    }
    return os.str();
}

CoefficientGrid parse_coefficient_grid_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    CoefficientGrid grid;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("m,", 0) == 0) continue;
        std::istringstream ls(line);
        std::string f[7];
        for (int i = 0; i < 7; ++i)
            if (!std::getline(ls, f[i], ','))
                throw ConfigError("coefficient csv line " + std::to_string(lineno) +
                                  ": expected 7 fields");
        try {
            CoefficientGrid::Entry e;
            e.m = std::stoi(f[0]);
            e.n = std::stoi(f[1]);
            e.x = std::stod(f[2]);
            e.xi = std::stod(f[3]);
            e.value = {std::stod(f[4]), std::stod(f[5])};
            grid.entries.push_back(e);
        } catch (const std::exception&) {
            throw ConfigError("coefficient csv line " + std::to_string(lineno) + ": bad number");
        }
    }
    return grid;
}

nlohmann::json frame_estimate_json(const GaborSystem& sys, const FrameEstimate& est) {
    return nlohmann::json{{"alpha", sys.lattice.alpha},
                          {"beta", sys.lattice.beta},
                          {"A_est", est.A_est},
                          {"B_est", est.B_est},
                          {"probeN", est.probe_N},
                          {"atoms", est.atom_count}};
}

nlohmann::json certificate_json(const PainlessCertificate& cert) {
    return nlohmann::json{
        {"side", cert.side == PainlessCertificate::Side::Time ? "time" : "freq"},
        {"isFrame", cert.is_frame},
        {"A", cert.A},
        {"B", cert.B},
        {"supportLo", cert.support_lo},
        {"supportHi", cert.support_hi},
        {"step", cert.alpha},
        {"steps", cert.steps.spec_string()},
        {"indexRadius", cert.index_radius},
        {"periodicityDefect", cert.periodicity_defect},
        {"stepLowerBound", cert.step_lower_bound()}};
}

nlohmann::json wavefront_report_json(const WavefrontReport& rep) {
    nlohmann::json sectors = nlohmann::json::array();
    for (const auto& s : rep.sectors) {
        sectors.push_back(nlohmann::json{{"k", s.k},
                                         {"angleLo", s.angle_lo},
                                         {"angleHi", s.angle_hi},
                                         {"lambdaHat", s.lambda_hat},
                                         {"status", to_string(s.status)},
                                         {"shellsUsed", s.shells_used},
                                         {"coverageGap", s.coverage_gap}});
    }
    return nlohmann::json{{"weight", rep.weight_spec},
                          {"K", rep.K},
                          {"offset", rep.offset},
                          {"r0", rep.r0},
                          {"rho", rep.rho},
                          {"J", rep.J},
                          {"lambdaReg", rep.lambda_reg},
                          {"floorAbs", rep.floor_abs},
                          {"sectors", sectors}};
}

nlohmann::json comparison_json(const ComparisonResult& res) {
    nlohmann::json sectors = nlohmann::json::array();
    for (const auto& d : res.sectors) {
        sectors.push_back(nlohmann::json{{"k", d.k},
                                         {"a", to_string(d.status_a)},
                                         {"b", to_string(d.status_b)},
                                         {"flip", d.flip}});
    }
    return nlohmann::json{{"pass", res.pass},
                          {"indeterminateA", res.indeterminate_a},
                          {"indeterminateB", res.indeterminate_b},
                          {"sectors", sectors}};
}

nlohmann::json perturbation_report_json(const PerturbationReport& rep) {
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& [lambda, mu, value] : rep.weighted_sums)
        ws.push_back(nlohmann::json{{"lambda", lambda}, {"mu", mu}, {"value", value}});
    nlohmann::json j{{"epsilon", rep.epsilon},
                     {"covered", rep.covered},
                     {"missing", rep.missing},
                     {"bessel", rep.bessel},
                     {"weightedSums", ws}};
    if (rep.christensen)
        j["christensen"] = nlohmann::json{{"A", rep.christensen->A}, {"B", rep.christensen->B}};
    else
        j["christensen"] = nullptr;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace tfwave
