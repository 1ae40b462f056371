#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "storedlight/errors.hpp"
#include "storedlight/experiment.hpp"
#include "storedlight/fock_interference.hpp"
#include "storedlight/fock_oracle.hpp"
#include "storedlight/gaussian_states.hpp"
#include "storedlight/homodyne.hpp"
#include "storedlight/mode_transform.hpp"

namespace py = pybind11;
using namespace storedlight;

namespace {

std::vector<double> to_vector(const ReleaseDistribution& d) {
    return {d.probs().begin(), d.probs().end()};
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>> to_table(const Dataset& d) {
    return {d.header, d.rows};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stored-light beam splitter simulator (C++ core)";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", error.ptr());
    py::register_exception<NormalizationError>(m, "NormalizationError", error.ptr());
    py::register_exception<UndefinedRatioError>(m, "UndefinedRatioError", error.ptr());
    py::register_exception<BasisError>(m, "BasisError", error.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<IoError>(m, "IoError", error.ptr());

    py::enum_<Channel>(m, "Channel").value("first", Channel::first).value("second", Channel::second);
    py::enum_<ProbeTreatment>(m, "ProbeTreatment")
        .value("quantum", ProbeTreatment::quantum)
        .value("classical", ProbeTreatment::classical);

    py::class_<StageAngles>(m, "StageAngles")
        .def(py::init<double, double, double>(), py::arg("phi"), py::arg("chi2") = 0.0, py::arg("chi3") = 0.0)
        .def_property_readonly("phi", &StageAngles::phi)
        .def_property_readonly("chi2", &StageAngles::chi2)
        .def_property_readonly("chi3", &StageAngles::chi3);

    py::class_<TransferMatrix>(m, "TransferMatrix")
        .def(py::init<>())
        .def_static("from_matrix", &TransferMatrix::from_matrix, py::arg("matrix"),
                    py::arg("tolerance") = TransferMatrix::kUnitarityTolerance)
        .def_property_readonly("matrix", &TransferMatrix::matrix)
        .def("weight", &TransferMatrix::weight, py::arg("row"), py::arg("col"))
        .def("unitarity_defect", &TransferMatrix::unitarity_defect);

    py::class_<GramMatrix>(m, "GramMatrix")
        .def(py::init<cplx>(), py::arg("overlap") = cplx{1.0, 0.0})
        .def_property_readonly("overlap", &GramMatrix::overlap)
        .def_property_readonly("matrix", &GramMatrix::matrix);

    py::class_<FockInput>(m, "FockInput")
        .def(py::init<int, int, GramMatrix, int>(), py::arg("n"), py::arg("m"), py::arg("overlap") = GramMatrix{},
             py::arg("max_total") = kDefaultMaxPhotons)
        .def_property_readonly("n", &FockInput::n)
        .def_property_readonly("m", &FockInput::m);

    py::class_<SqueezedInput>(m, "SqueezedInput")
        .def(py::init<cplx, double, cplx, double>(), py::arg("alpha1"), py::arg("r1"), py::arg("alpha2"),
             py::arg("r2"))
        .def_readonly("alpha1", &SqueezedInput::alpha1)
        .def_readonly("r1", &SqueezedInput::r1)
        .def_readonly("alpha2", &SqueezedInput::alpha2)
        .def_readonly("r2", &SqueezedInput::r2);

    py::class_<QuadratureStats>(m, "QuadratureStats")
        .def_readonly("mean_q", &QuadratureStats::mean_q)
        .def_readonly("mean_p", &QuadratureStats::mean_p)
        .def_readonly("var_q", &QuadratureStats::var_q)
        .def_readonly("var_p", &QuadratureStats::var_p);

    py::class_<HomodyneConfig>(m, "HomodyneConfig")
        .def(py::init<double, double, double, StageAngles, StageAngles, ProbeTreatment>(), py::arg("r1"),
             py::arg("alpha2_mod"), py::arg("gamma"), py::arg("storage"), py::arg("release"),
             py::arg("probe") = ProbeTreatment::quantum);

    m.def("build_transfer_matrix", &build_transfer_matrix, py::arg("storage"), py::arg("release"));
    m.def("magnetic_phase_matrix", &magnetic_phase_matrix, py::arg("delta"));
    m.def(
        "gram_from_packets",
        [](const std::vector<cplx>& f1, const std::vector<cplx>& f2, double spacing) {
            return gram_from_packets(f1, f2, spacing);
        },
        py::arg("f1"), py::arg("f2"), py::arg("spacing"));

    m.def(
        "release_distribution_s1",
        [](const FockInput& in, const TransferMatrix& s, Channel c) {
            return to_vector(release_distribution_s1(in, s, c));
        },
        py::arg("input"), py::arg("transfer"), py::arg("channel") = Channel::first);
    m.def("mean_release_count", &mean_release_count, py::arg("input"), py::arg("transfer"),
          py::arg("channel") = Channel::first);
    m.def("release_variance", &release_variance, py::arg("input"), py::arg("transfer"));
    m.def("fano_factor", &fano_factor, py::arg("input"), py::arg("transfer"));

    m.def(
        "oracle_distribution",
        [](int n, int mm, cplx s, const TransferMatrix& t, Channel c, int cutoff) {
            const TruncatedState state = build_fock_input(n, mm, ModeBasis(GramMatrix(s), cutoff));
            return to_vector(oracle_distribution(state, released_number_operator(t, state.space_ptr(), c)));
        },
        py::arg("n"), py::arg("m"), py::arg("overlap"), py::arg("transfer"), py::arg("channel") = Channel::first,
        py::arg("cutoff") = ModeBasis::kDefaultCutoff,
        "Brute-force release distribution on the truncated four-mode Fock space");
    m.def(
        "oracle_moments",
        [](int n, int mm, cplx s, const TransferMatrix& t, Channel c, int cutoff) {
            const TruncatedState state = build_fock_input(n, mm, ModeBasis(GramMatrix(s), cutoff));
            const Moments mo = oracle_moments(state, released_number_operator(t, state.space_ptr(), c));
            return std::make_pair(mo.mean, mo.variance);
        },
        py::arg("n"), py::arg("m"), py::arg("overlap"), py::arg("transfer"), py::arg("channel") = Channel::first,
        py::arg("cutoff") = ModeBasis::kDefaultCutoff, "(mean, variance) of the released count by matrix algebra");

    m.def("released_quadratures", &released_quadratures, py::arg("input"), py::arg("transfer"));
    m.def("uncertainty_product", &uncertainty_product, py::arg("stats"));
    m.def("gaussian_oracle", py::overload_cast<const SqueezedInput&, const TransferMatrix&>(&gaussian_oracle),
          py::arg("input"), py::arg("transfer"));

    m.def("balanced_variance", &balanced_variance, py::arg("r1"), py::arg("alpha2_mod"), py::arg("gamma"),
          py::arg("chi21"));
    m.def("general_variance", &general_variance, py::arg("config"));
    m.def("homodyne_oracle", &homodyne_oracle, py::arg("config"), py::arg("cutoff") = 48);

    m.def(
        "run_experiment",
        [](const std::vector<std::pair<std::string, std::string>>& settings, unsigned workers) {
            ExperimentConfig config;
            for (const auto& [k, v] : settings) {
                config.set(k, v);
            }
            return to_table(run_experiment(config, workers));
        },
        py::arg("settings"), py::arg("workers") = 0,
        "Run a sweep from ordered (key, value) settings; returns (header, rows)");
    m.def(
        "run_figure", [](int id, unsigned workers) { return to_table(run_figure(id, workers)); }, py::arg("id"),
        py::arg("workers") = 0);
}
