#include "folnerlab/bounds.hpp"

#include "folnerlab/errors.hpp"

namespace folnerlab {

namespace {
void check_args(long long L_G, long long d) {
    if (L_G < 1) throw precondition_error("bounds: L_G must be >= 1");
    if (d < 0) throw precondition_error("bounds: d must be >= 0");
}
} // namespace

long long rokhlin_bound(long long L_G, long long d) {
    check_args(L_G, d);
    return L_G * (d + 1) - 1;
}

long long amenability_bound(long long L_G, long long d) {
    check_args(L_G, d);
    return L_G * (d + 1);
}

NuclearTowerBounds nuclear_and_tower_bounds(long long L_G, long long d) {
    check_args(L_G, d);
    const long long lin = L_G * (d + 1);
    const long long quad = L_G * (d + 1) * (d + 1);
    return {lin, quad, quad, quad};
}

long long embedding_bound(long long L_G, long long d, long long m) {
    check_args(L_G, d);
    if (m < 1) throw precondition_error("bounds: m must be >= 1");
    return (L_G * (d + 1) + 1) * m + 1;
}

long long symmetrization_bound(long long L_A, long long L_Ainv) {
    if (L_A < 1 || L_Ainv < 1) throw precondition_error("bounds: covering constants must be >= 1");
    return 2 * L_A * L_Ainv + L_A + L_Ainv;
}

nlohmann::ordered_json bounds_report(long long L_G, long long d, long long m) {
    const auto nt = nuclear_and_tower_bounds(L_G, d);
    nlohmann::ordered_json j;
    j["inputs"] = {{"L_G", L_G}, {"d", d}, {"m", m}};
    j["rokhlin_dim"] = {{"bound", rokhlin_bound(L_G, d)},
                        {"bound_plus1", rokhlin_bound(L_G, d) + 1},
                        {"formula", "L_G*(d+1)-1"}};
    j["amenability_dim_plus1"] = {{"bound", amenability_bound(L_G, d)},
                                  {"formula", "L_G*(d+1)"}};
    j["dad_plus1"] = {{"bound", nt.dad_plus1}, {"formula", "L_G*(d+1)"}};
    j["tower_dim_plus1"] = {{"bound", nt.tower_plus1}, {"formula", "L_G*(d+1)^2"}};
    j["fine_tower_dim_plus1"] = {{"bound", nt.fine_tower_plus1}, {"formula", "L_G*(d+1)^2"}};
    j["nuclear_dim_plus1"] = {{"bound", nt.nuclear_plus1}, {"formula", "L_G*(d+1)^2"}};
    j["embedding_dim"] = {{"bound", embedding_bound(L_G, d, m)},
                          {"formula", "(L_G*(d+1)+1)*m+1"},
                          {"caption", "requires mean dimension < m/2"}};
    return j;
}

} // namespace folnerlab
