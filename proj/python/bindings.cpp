#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "folnerlab/amdim.hpp"
#include "folnerlab/bounds.hpp"
#include "folnerlab/cover.hpp"
#include "folnerlab/folner.hpp"
#include "folnerlab/markers.hpp"
#include "folnerlab/report.hpp"

namespace py = pybind11;
using namespace folnerlab;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
    switch (j.type()) {
        case nlohmann::ordered_json::value_t::null: return py::none();
        case nlohmann::ordered_json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::ordered_json::value_t::number_integer:
            return py::int_(j.get<long long>());
        case nlohmann::ordered_json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case nlohmann::ordered_json::value_t::number_float:
            return py::float_(j.get<double>());
        case nlohmann::ordered_json::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::ordered_json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(json_to_py(v));
            return out;
        }
        case nlohmann::ordered_json::value_t::object: {
            py::dict out;
            for (const auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
            return out;
        }
        default: return py::none();
    }
}

py::object json_to_py(const nlohmann::json& j) {
    return json_to_py(nlohmann::ordered_json(j));
}

GroupPtr group_from(const std::string& descriptor) {
    return GroupSpec::from_json(nlohmann::json::parse(descriptor));
}

FolnerFamily family_from(const std::string& descriptor) {
    return FolnerFamily::from_json(nlohmann::json::parse(descriptor));
}

FiniteSubset subset_from(const GroupPtr& g, const std::vector<std::vector<Coord>>& elems) {
    std::vector<GroupElement> e;
    e.reserve(elems.size());
    for (const auto& row : elems) e.emplace_back(row);
    return FiniteSubset(g, std::move(e));
}

CoverBudget budget_from(std::size_t max_universe, std::uint64_t max_nodes) {
    CoverBudget b;
    b.max_universe = max_universe;
    b.max_nodes = max_nodes;
    return b;
}

} // namespace

PYBIND11_MODULE(_folnerlab, m) {
    m.doc() = "Covering constants, Folner families, Rokhlin castles, and dimension bounds "
              "for computable discrete groups.";

    m.def("version", [] { return std::string(kToolVersion); });

    m.def(
        "group_info",
        [](const std::string& descriptor) {
            auto g = group_from(descriptor);
            py::dict d;
            d["describe"] = g->describe();
            d["dim"] = g->dim();
            d["json"] = json_to_py(g->to_json());
            return d;
        },
        py::arg("group"));

    m.def(
        "ball",
        [](const std::string& descriptor, int radius) {
            auto g = group_from(descriptor);
            auto B = folnerlab::ball(g, GeneratingSet::standard(g), radius);
            std::vector<std::vector<Coord>> out;
            for (const auto& e : B) out.push_back(e.coords);
            return out;
        },
        py::arg("group"), py::arg("radius"));

    m.def(
        "covering_number",
        [](const std::string& group, const std::vector<std::vector<Coord>>& elements,
           std::size_t max_universe, std::uint64_t max_nodes) {
            auto g = group_from(group);
            auto w = covering_number(subset_from(g, elements), budget_from(max_universe, max_nodes));
            return json_to_py(w.to_json());
        },
        py::arg("group"), py::arg("elements"), py::arg("max_universe") = 200000,
        py::arg("max_nodes") = 2'000'000);

    m.def(
        "family_covering_number",
        [](const std::string& family, long index, std::size_t max_universe,
           std::uint64_t max_nodes) {
            auto fam = family_from(family);
            auto w = covering_number(fam.at(index), budget_from(max_universe, max_nodes));
            return json_to_py(w.to_json());
        },
        py::arg("family"), py::arg("index"), py::arg("max_universe") = 200000,
        py::arg("max_nodes") = 2'000'000);

    m.def(
        "is_approximate",
        [](const std::string& group, const std::vector<std::vector<Coord>>& elements, long long L,
           bool strong) {
            auto g = group_from(group);
            auto A = subset_from(g, elements);
            auto r = strong ? is_strongly_approximate(A, L) : is_approximate(A, L);
            py::dict d;
            d["verdict"] = verdict_name(r.verdict);
            if (r.witness) d["witness"] = json_to_py(r.witness->to_json());
            return d;
        },
        py::arg("group"), py::arg("elements"), py::arg("L"), py::arg("strong") = false);

    m.def(
        "symmetrization_check",
        [](const std::string& group, const std::vector<std::vector<Coord>>& elements) {
            auto g = group_from(group);
            return json_to_py(symmetrization_bound_check(subset_from(g, elements)).to_json());
        },
        py::arg("group"), py::arg("elements"));

    m.def(
        "folner_defect",
        [](const std::string& family, long index, const std::vector<Coord>& g) {
            auto fam = family_from(family);
            auto r = folner_defect(fam.at(index), GroupElement(g));
            return rational_str(r);
        },
        py::arg("family"), py::arg("index"), py::arg("g"));

    m.def(
        "check_wafc",
        [](const std::string& family, long l_from, long l_to, long long L_budget) {
            auto fam = family_from(family);
            return json_to_py(check_wafc(fam, l_from, l_to, L_budget).to_json());
        },
        py::arg("family"), py::arg("l_from"), py::arg("l_to"), py::arg("L_budget"));

    m.def(
        "check_afc",
        [](const std::string& family, const std::vector<std::pair<long, long>>& pairs) {
            auto fam = family_from(family);
            return json_to_py(check_afc_containment(fam, pairs).to_json());
        },
        py::arg("family"), py::arg("pairs"));

    m.def(
        "build_castle",
        [](const std::string& family, long n, int R, int r_core, int d_extra, bool strong) {
            auto fam = family_from(family);
            auto w = OrbitWindow::make(fam.owner(), GeneratingSet::standard(fam.owner()), R,
                                       r_core);
            return json_to_py(build_castle(w, fam, n, d_extra, strong).to_json());
        },
        py::arg("family"), py::arg("n"), py::arg("R"), py::arg("r_core"), py::arg("d_extra") = 0,
        py::arg("strong") = false);

    m.def(
        "amenability_witness",
        [](const std::string& family, long n, int R, int r_core, const std::vector<Coord>& g) {
            auto fam = family_from(family);
            auto w = OrbitWindow::make(fam.owner(), GeneratingSet::standard(fam.owner()), R,
                                       r_core);
            auto castle = build_castle(w, fam, n, 0, /*strong=*/true);
            auto mu = mu_from_castle(castle, w);
            auto eq = equivariance_defect(mu, GroupElement(g), w);
            py::dict d;
            d["tower_count"] = mu.tower_count;
            d["verified_core"] = mu.verified_core.size();
            d["partition_of_unity"] = check_partition_of_unity(mu);
            d["orthogonal"] = check_orthogonality(mu);
            d["equivariance"] = json_to_py(eq.to_json());
            return d;
        },
        py::arg("family"), py::arg("n"), py::arg("R"), py::arg("r_core"), py::arg("g"));

    m.def("rokhlin_bound", &rokhlin_bound, py::arg("L_G"), py::arg("d"));
    m.def("amenability_bound", &amenability_bound, py::arg("L_G"), py::arg("d"));
    m.def("embedding_bound", &embedding_bound, py::arg("L_G"), py::arg("d"), py::arg("m"));
    m.def("symmetrization_bound", &symmetrization_bound, py::arg("L_A"), py::arg("L_Ainv"));
    m.def(
        "bounds_report",
        [](long long L_G, long long d, long long m) {
            return json_to_py(bounds_report(L_G, d, m));
        },
        py::arg("L_G"), py::arg("d"), py::arg("m") = 1);

    py::register_exception<budget_exceeded_error>(m, "BudgetExceeded");
    py::register_exception<precondition_error>(m, "PreconditionError");
}
