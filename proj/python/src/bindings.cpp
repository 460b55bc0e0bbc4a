#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ifd/errors.hpp"
#include "ifd/experiment.hpp"
#include "ifd/majorana.hpp"
#include "ifd/metrics.hpp"
#include "ifd/protocol.hpp"
#include "ifd/quantized.hpp"

namespace py = pybind11;
using namespace ifd;

namespace {

DecoherenceModel sample_by_name(const std::string& name) {
    if (name == "sample1") return DecoherenceModel::sample1();
    if (name == "sample2") return DecoherenceModel::sample2();
    if (name == "closed") return DecoherenceModel::closed();
    throw DomainError("sample must be sample1, sample2 or closed");
}

ModelKind model_by_name(const std::string& name) {
    if (name == "lindblad") return ModelKind::lindblad;
    if (name == "lindblad_depol") return ModelKind::lindblad_depol;
    throw DomainError("model must be lindblad or lindblad_depol");
}

py::tuple as_tuple(const OutcomeProbabilities& p) { return py::make_tuple(p.p0, p.p1, p.p2); }

OutcomeProbabilities from_tuple(const std::array<double, 3>& p) { return {p[0], p[1], p[2]}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Coherent interaction-free detection on a three-level system";
    m.attr("__version__") = kLibraryVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("beam_splitter", &beam_splitter, py::arg("n"), "S_N as a 3x3 complex matrix");
    m.def("b_pulse", &b_pulse, py::arg("theta"), "B(theta) on the 1-2 transition");
    m.def("coherent_sequence_unitary", &coherent_sequence_unitary, py::arg("n"), py::arg("thetas"));

    m.def(
        "run_coherent",
        [](const std::vector<double>& thetas, int initial) {
            ProtocolSpec s = ProtocolSpec::identical(static_cast<int>(thetas.size()), 0.0);
            s.thetas = thetas;
            s.initial = PureState::basis(initial);
            return as_tuple(run_coherent_ideal(s));
        },
        py::arg("thetas"), py::arg("initial") = 0, "Ideal (p0, p1, p2); N is len(thetas)");

    m.def(
        "run_dissipative",
        [](const std::vector<double>& thetas, const std::string& model, const std::string& sample) {
            ProtocolSpec s = ProtocolSpec::identical(static_cast<int>(thetas.size()), 0.0);
            s.thetas = thetas;
            s.model = model_by_name(model);
            s.decoherence = sample_by_name(sample);
            s.initial = thermal_state(*s.decoherence);
            OutcomeProbabilities p;
            {
                py::gil_scoped_release release;
                p = run_protocol(s);
            }
            return as_tuple(p);
        },
        py::arg("thetas"), py::arg("model") = "lindblad_depol", py::arg("sample") = "sample2",
        "Pulse-level (p0, p1, p2) from the thermal state");

    m.def(
        "coherent_checkpoints",
        [](int n, const std::vector<double>& thetas) {
            std::vector<Vector3c> out;
            for (const auto& s : coherent_checkpoints(n, thetas)) out.push_back(s.amplitudes());
            return out;
        },
        py::arg("n"), py::arg("thetas"));

    m.def(
        "run_projective",
        [](const std::vector<double>& thetas) {
            const ProjectiveOutcome p = run_projective(static_cast<int>(thetas.size()), thetas);
            py::dict d;
            d["p_det"] = p.p_det;
            d["p_inconclusive"] = p.p_inconclusive;
            d["p_abs"] = p.p_abs;
            d["per_segment_abs"] = p.per_segment_abs;
            return d;
        },
        py::arg("thetas"));
    m.def(
        "projective_closed_form",
        [](int n) {
            const auto c = projective_closed_form(n);
            return py::make_tuple(c.p_det, c.p_abs);
        },
        py::arg("n"), "(p_det, p_abs) for theta = pi");

    m.def(
        "expansion_coefficients",
        [](int n) {
            const auto e = expansion_coefficients(n);
            py::dict d;
            d["c"] = e.c;
            d["cp"] = e.cp;
            d["cpp"] = e.cpp;
            return d;
        },
        py::arg("n"));

    m.def(
        "thermal_state", [](const std::string& sample) { return thermal_state(sample_by_name(sample)).matrix(); },
        py::arg("sample") = "sample1");

    m.def(
        "majorana_stars",
        [](const Vector3c& amplitudes) {
            const MajoranaStars s = majorana_stars(PureState(amplitudes));
            return py::make_tuple(Vector3d(s.s1), Vector3d(s.s2));
        },
        py::arg("amplitudes"));

    m.def(
        "pr_nr",
        [](const std::array<double, 3>& p) {
            const auto [pr, nr] = pr_nr(from_tuple(p));
            return py::make_tuple(pr, nr);
        },
        py::arg("p"));
    m.def("efficiency", &efficiency, py::arg("p_success"), py::arg("p_absorb"));
    m.def(
        "sample_shots",
        [](const std::array<double, 3>& p, std::int64_t n_shots, std::uint64_t seed) {
            const ShotCounts c = sample_shots(from_tuple(p), n_shots, seed);
            return py::make_tuple(c.d0, c.d1, c.d2);
        },
        py::arg("p"), py::arg("n_shots"), py::arg("seed"));
    m.def("dark_count_rate", &dark_count_rate, py::arg("fpr"), py::arg("sensing_time"));

    m.def(
        "quantized_marginals",
        [](int n_segments, int n_photons, double g, double t_b) {
            const auto s = run_single_mode(n_segments, n_photons, FieldCoupling{g, t_b}, n_photons + 2);
            const auto marg = s.qutrit_marginals();
            return py::make_tuple(marg[0], marg[1], marg[2]);
        },
        py::arg("n_segments"), py::arg("n_photons"), py::arg("g"), py::arg("t_b"),
        "Qutrit populations after the quantized single-mode protocol");
    m.def(
        "qubit_probe",
        [](int n_segments, Complex alpha, Complex beta, int target_initial) {
            const CompositeState s = field_parity_gauge(run_qubit_probe(n_segments, alpha, beta, target_initial));
            // Rows: probe level, columns: qutrit level.
            Eigen::Matrix<Complex, 2, 3> a;
            for (int q = 0; q < 2; ++q)
                for (int l = 0; l < 3; ++l) a(q, l) = s.amplitude({q}, l);
            return a;
        },
        py::arg("n_segments"), py::arg("alpha"), py::arg("beta"), py::arg("target_initial") = 0,
        "Final amplitudes in the semiclassical sign convention");

    m.def(
        "run_scenario",
        [](const std::string& scenario, const std::string& config_text, int threads, bool write) {
            const ExperimentConfig cfg = parse_config(config_text, parse_scenario(scenario));
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = run_scenario(cfg, threads);
                if (write) emit(cfg, r);
            }
            py::dict d;
            d["csv_name"] = r.csv_name;
            d["header"] = r.header;
            d["rows"] = r.rows;
            d["csv"] = to_csv(r);
            d["summary"] = summary_json(cfg, r).dump();
            d["tolerance_failure"] = r.tolerance_failure;
            return d;
        },
        py::arg("scenario"), py::arg("config_text") = "", py::arg("threads") = 1, py::arg("write") = false,
        "Runs an ifd-sim scenario from config text; summary is a JSON string");
}
