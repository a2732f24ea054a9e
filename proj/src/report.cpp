#include "folnerlab/report.hpp"

namespace folnerlab {

std::string rational_str(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

ojson elem_json(const GroupElement& g) { return ojson(g.coords); }

ojson subset_json(const FiniteSubset& s) {
    ojson j = ojson::array();
    for (const auto& e : s) j.push_back(e.coords);
    return j;
}

ojson report_envelope(const std::string& command, ojson config, ojson result) {
    ojson j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["config"] = std::move(config);
    j["result"] = std::move(result);
    return j;
}

std::string dump_report(const ojson& report) { return report.dump(2) + "\n"; }

} // namespace folnerlab
