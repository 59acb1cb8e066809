#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qclone/bosonic.hpp"
#include "qclone/cloning.hpp"
#include "qclone/experiment.hpp"
#include "qclone/hilbert.hpp"
#include "qclone/io.hpp"

namespace py = pybind11;
using namespace qclone;

namespace {

PureState state_from(const Vector& amps, bool normalize) {
    return normalize ? PureState::normalized(amps) : PureState(amps);
}

py::dict outcome_dict(const CloningOutcome& o) {
    py::dict d;
    d["fidelity"] = o.fidelity;
    d["success_prob"] = o.success_prob;
    d["clone_state"] = o.clone_state.mat();
    return d;
}

py::dict basis_dict(const LabeledBasis& b) {
    py::dict d;
    d["labels"] = b.labels();
    d["states"] = b.as_matrix();
    return d;
}

ExperimentConfig make_config(std::uint64_t shots, std::uint64_t seed, double v,
                             std::vector<double> weights, double prep_fidelity,
                             double analysis_fidelity, bool swap_detectors, unsigned threads) {
    ExperimentConfig c;
    c.shots = shots;
    c.seed = seed;
    c.v = v;
    c.ancilla_weights = std::move(weights);
    c.prep_fidelity = prep_fidelity;
    c.analysis_fidelity = analysis_fidelity;
    c.swap_detectors = swap_detectors;
    c.threads = threads;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Optimal quantum cloning by photon symmetrization";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const std::length_error& e) {
            PyErr_SetString(PyExc_OverflowError, e.what());
        }
    });

    m.def("f_est", &f_est, py::arg("N"), py::arg("d"));
    m.def("f_clon", &f_clon, py::arg("N"), py::arg("M"), py::arg("d"));

    m.def("basis", [](const std::string& name, int d) { return basis_dict(named_basis(name, d)); },
          py::arg("name"), py::arg("d") = 4);
    m.def("unbiased", [](const std::string& a, const std::string& b, double tol) {
        return unbiasedness_check(named_basis(a), named_basis(b), tol);
    }, py::arg("a"), py::arg("b"), py::arg("tol") = 1e-10);

    m.def("clone_oracle", [](const Vector& amps, bool normalize) {
        return outcome_dict(clone_oracle(state_from(amps, normalize), static_cast<int>(amps.size())));
    }, py::arg("amps"), py::arg("normalize") = false,
       "1->2 symmetrization cloner evaluated on the bosonic engine.");

    m.def("clone_analytic", [](const Vector& amps, const std::string& basis_name) {
        const PureState phi = PureState(amps);
        const int d = phi.dim();
        const LabeledBasis b = basis_name.empty() ? adapted_basis(phi) : named_basis(basis_name, d);
        return outcome_dict(clone_analytic(phi, b));
    }, py::arg("amps"), py::arg("basis") = "");

    m.def("cascade_clone", [](const Vector& amps, int N, int M, int cap) {
        const PureState phi(amps);
        return outcome_dict(cascade_clone(phi, CloningSpec{phi.dim(), N, M}, cap));
    }, py::arg("amps"), py::arg("N"), py::arg("M"), py::arg("cap") = kDefaultCascadeCap);

    m.def("coalescence_enhancement",
          [](const Vector& s, const Vector& a, double v, std::optional<double> delay_fs) {
              DistinguishabilityModel model;
              model.v = v;
              model.delay_fs = delay_fs;
              return coalescence_enhancement(PureState(s), PureState(a), model);
          },
          py::arg("signal"), py::arg("ancilla"), py::arg("v") = 1.0,
          py::arg("delay_fs") = py::none());

    m.def("hom_curve",
          [](const Vector& s, const Vector& a, const std::vector<double>& delays, double v,
             double bandwidth_nm, double wavelength_nm) {
              DistinguishabilityModel model;
              model.v = v;
              model.bandwidth_nm = bandwidth_nm;
              model.wavelength_nm = wavelength_nm;
              std::vector<std::pair<double, double>> out;
              for (const auto& p : hom_curve(PureState(s), PureState(a), delays, model)) {
                  out.emplace_back(p.delay_fs, p.enhancement);
              }
              return out;
          },
          py::arg("signal"), py::arg("ancilla"), py::arg("delays_fs"), py::arg("v") = 1.0,
          py::arg("bandwidth_nm") = 4.5, py::arg("wavelength_nm") = 795.0);

    m.def("run_experiment",
          [](const std::string& basis_name, int index, std::uint64_t shots, std::uint64_t seed,
             double v, std::vector<double> weights, double prep, double analysis, bool swap,
             unsigned threads) {
              const auto cfg = make_config(shots, seed, v, std::move(weights), prep, analysis, swap, threads);
              CountsTable t;
              {
                  py::gil_scoped_release release;
                  t = run_cloning_experiment(named_basis(basis_name), index, cfg);
              }
              py::dict d;
              d["counts"] = t.counts;
              d["trials"] = t.trials;
              d["input"] = t.input_label;
              return d;
          },
          py::arg("basis"), py::arg("index"), py::arg("shots") = 100000, py::arg("seed") = 0,
          py::arg("v") = 1.0, py::arg("ancilla_weights") = std::vector<double>{},
          py::arg("prep_fidelity") = 1.0, py::arg("analysis_fidelity") = 1.0,
          py::arg("swap_detectors") = false, py::arg("threads") = 0);

    m.def("estimate_probabilities", [](const std::vector<std::uint64_t>& counts, int phi_index) {
        CountsTable t;
        t.counts = counts;
        t.outcome_labels.resize(counts.size());
        const EstimationResult r = estimate_probabilities(t, phi_index);
        py::dict d;
        d["probs"] = r.probs;
        d["fidelity"] = r.fidelity;
        d["stderr"] = r.std_error;
        return d;
    }, py::arg("counts"), py::arg("phi_index"));

    m.def("replicate_table_json",
          [](const std::string& basis_name, std::uint64_t shots, std::uint64_t seed, double v,
             std::vector<double> weights, double prep, double analysis, unsigned threads) {
              const auto cfg = make_config(shots, seed, v, std::move(weights), prep, analysis, false, threads);
              Replication rep;
              {
                  py::gil_scoped_release release;
                  rep = replicate_table(basis_name, cfg);
              }
              return to_json(rep).dump();
          },
          py::arg("basis"), py::arg("shots") = 100000, py::arg("seed") = 0, py::arg("v") = 1.0,
          py::arg("ancilla_weights") = std::vector<double>{}, py::arg("prep_fidelity") = 1.0,
          py::arg("analysis_fidelity") = 1.0, py::arg("threads") = 0);
}
