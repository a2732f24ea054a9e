#pragma once

#include <string>

#include <boost/rational.hpp>
#include <json.hpp>

#include "folnerlab/group.hpp"

namespace folnerlab {

using Rational = boost::rational<long long>;
using ojson = nlohmann::ordered_json;

inline constexpr const char* kToolName = "folnerlab";
inline constexpr const char* kToolVersion = "0.1.0";

std::string rational_str(const Rational& r); // canonical "p/q"

ojson elem_json(const GroupElement& g);
ojson subset_json(const FiniteSubset& s);

/// Standard report envelope; config goes in verbatim so identical runs
/// serialize byte-identically.
ojson report_envelope(const std::string& command, ojson config, ojson result);

std::string dump_report(const ojson& report); // fixed 2-space format + newline

} // namespace folnerlab
