#pragma once

#include <json.hpp>

namespace folnerlab {

/// Closed-form evaluators for the dimension bounds attached to a group whose
/// chosen Folner family has uniform covering constant L_G, acting on a space
/// of covering dimension d. The ^{+1} convention (report both D and D+1) is
/// kept in field names to avoid off-by-one drift.

long long rokhlin_bound(long long L_G, long long d);          // L_G (d+1) - 1
long long amenability_bound(long long L_G, long long d);      // dim^{+1}_am <= L_G (d+1)

struct NuclearTowerBounds {
    long long dad_plus1;       // <= L_G (d+1)
    long long tower_plus1;     // <= L_G (d+1)^2
    long long fine_tower_plus1;// <= L_G (d+1)^2
    long long nuclear_plus1;   // <= L_G (d+1)^2
};
NuclearTowerBounds nuclear_and_tower_bounds(long long L_G, long long d);

long long embedding_bound(long long L_G, long long d, long long m); // (L_G(d+1)+1) m + 1

long long symmetrization_bound(long long L_A, long long L_Ainv); // 2 L_A L_Ainv + L_A + L_Ainv

/// Full report with formula strings, raw and +1 values.
nlohmann::ordered_json bounds_report(long long L_G, long long d, long long m);

} // namespace folnerlab
