#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fpulab/experiments.hpp"

namespace py = pybind11;
using namespace fpulab;

PYBIND11_MODULE(_fpulab, m) {
    m.doc() = "FPU lattice simulation laboratory";

    py::enum_<Boundary>(m, "Boundary")
        .value("periodic", Boundary::periodic)
        .value("dirichlet", Boundary::dirichlet);
    py::enum_<Model>(m, "Model")
        .value("fpu", Model::fpu)
        .value("toda", Model::toda);
    py::enum_<Scheme>(m, "Scheme")
        .value("verlet", Scheme::verlet)
        .value("yoshida4", Scheme::yoshida4);

    py::class_<ChainParams>(m, "ChainParams")
        .def(py::init([](int sites, Boundary boundary, double quartic,
                         Model model) {
                 ChainParams c{sites, boundary, quartic, model};
                 c.validate();
                 return c;
             }),
             py::arg("sites"), py::arg("boundary") = Boundary::periodic,
             py::arg("quartic") = 1.0, py::arg("model") = Model::fpu)
        .def_readwrite("sites", &ChainParams::sites)
        .def_readwrite("boundary", &ChainParams::boundary)
        .def_readwrite("quartic", &ChainParams::quartic)
        .def_readwrite("model", &ChainParams::model)
        .def("bond_count", &ChainParams::bond_count);

    py::class_<LatticeState>(m, "LatticeState")
        .def(py::init<>())
        .def_static("zero", &LatticeState::zero, py::arg("sites"))
        .def_readwrite("q", &LatticeState::q)
        .def_readwrite("p", &LatticeState::p)
        .def_readwrite("t", &LatticeState::t);

    m.def("energy", &energy, py::arg("state"), py::arg("params"));
    m.def("forces", &forces, py::arg("state"), py::arg("params"));
    m.def("bond_differences", &bond_differences, py::arg("state"),
          py::arg("params"));
    m.def("toda_fpu_gap", &toda_fpu_gap, py::arg("state"), py::arg("params"));
    m.def("project_zero_mean", &project_zero_mean, py::arg("state"));

    py::class_<ModeSpectrum>(m, "ModeSpectrum")
        .def_readonly("k", &ModeSpectrum::k)
        .def_readonly("omega", &ModeSpectrum::omega)
        .def_readonly("energy", &ModeSpectrum::energy)
        .def_readonly("specific", &ModeSpectrum::specific)
        .def_readonly("t", &ModeSpectrum::t)
        .def("abs_k_energies", &ModeSpectrum::abs_k_energies);

    m.def("frequencies", &frequencies, py::arg("n_modes"), py::arg("boundary"));
    m.def("mode_energies", &mode_energies, py::arg("state"), py::arg("params"));
    m.def("harmonic_energy", &harmonic_energy, py::arg("state"),
          py::arg("params"));
    m.def(
        "packet_fit",
        [](const std::vector<double>& averages) {
            const PacketFit f = packet_fit(averages);
            return py::make_tuple(f.sigma, f.r_squared, f.modes_used);
        },
        py::arg("averages"));
    m.def(
        "spectral_entropy",
        [](const std::vector<double>& energies) {
            const SpectralEntropy s = spectral_entropy(energies);
            return py::make_tuple(s.entropy, s.n_eff);
        },
        py::arg("energies"));

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init([](double dt, Scheme scheme, double total_time,
                         int stride, bool store_snapshots) {
                 IntegratorConfig c{dt, scheme, total_time, stride,
                                    store_snapshots};
                 c.validate();
                 return c;
             }),
             py::arg("dt") = 0.05, py::arg("scheme") = Scheme::yoshida4,
             py::arg("total_time") = 0.0, py::arg("stride") = 1,
             py::arg("store_snapshots") = false)
        .def_readwrite("dt", &IntegratorConfig::dt)
        .def_readwrite("scheme", &IntegratorConfig::scheme)
        .def_readwrite("total_time", &IntegratorConfig::total_time)
        .def_readwrite("stride", &IntegratorConfig::stride)
        .def_readwrite("store_snapshots", &IntegratorConfig::store_snapshots);

    py::class_<EnergyTrace>(m, "EnergyTrace")
        .def_readonly("k", &EnergyTrace::k)
        .def_readonly("times", &EnergyTrace::times)
        .def_readonly("energies", &EnergyTrace::energies);

    py::class_<EvolveResult>(m, "EvolveResult")
        .def_readonly("trace", &EvolveResult::trace)
        .def_readonly("snapshots", &EvolveResult::snapshots)
        .def_readonly("final_state", &EvolveResult::final_state);

    py::register_exception<BlowupError>(m, "BlowupError");
    py::register_exception<StabilityError>(m, "StabilityError");

    m.def("step", &step, py::arg("state"), py::arg("params"),
          py::arg("config"));
    m.def(
        "evolve",
        [](const LatticeState& s, const ChainParams& p,
           const IntegratorConfig& c) { return evolve(s, p, c); },
        py::arg("state"), py::arg("params"), py::arg("config"));
    m.def("time_average", &time_average, py::arg("trace"), py::arg("T"));

    py::class_<KdVField>(m, "KdVField")
        .def_static("zero", &KdVField::zero, py::arg("grid"))
        .def_readwrite("u", &KdVField::u)
        .def_readwrite("tau", &KdVField::tau);
    m.def("kdv_step", &kdv_step, py::arg("field"), py::arg("dtau"));
    m.def("kdv_integrate", &kdv_integrate, py::arg("field"),
          py::arg("tau_target"), py::arg("dtau"));
    m.def("kdv_eval", &kdv_eval, py::arg("field"), py::arg("y"));
    m.def("kdv_mass", &kdv_mass);
    m.def("kdv_momentum", &kdv_momentum);

    py::class_<FlaschkaState>(m, "FlaschkaState")
        .def_readonly("a", &FlaschkaState::a)
        .def_readonly("b", &FlaschkaState::b);
    py::class_<LaxSpectra>(m, "LaxSpectra")
        .def_readonly("plus", &LaxSpectra::plus)
        .def_readonly("minus", &LaxSpectra::minus);
    m.def("flaschka", &flaschka, py::arg("state"), py::arg("params"));
    m.def("lax_spectra", &lax_spectra, py::arg("flaschka"));
    m.def("linear_actions", &linear_actions, py::arg("spectrum"));
    m.def("sigma_norm", &sigma_norm, py::arg("state"), py::arg("params"),
          py::arg("sigma"));

    py::class_<GibbsConfig>(m, "GibbsConfig")
        .def(py::init<>())
        .def_readwrite("beta", &GibbsConfig::beta)
        .def_readwrite("chain", &GibbsConfig::chain)
        .def_readwrite("burnin_sweeps", &GibbsConfig::burnin_sweeps)
        .def_readwrite("samples", &GibbsConfig::samples)
        .def_readwrite("thin", &GibbsConfig::thin)
        .def_readwrite("proposal_width", &GibbsConfig::proposal_width)
        .def_readwrite("seed", &GibbsConfig::seed);

    py::class_<GibbsSampler>(m, "GibbsSampler")
        .def(py::init<const GibbsConfig&>(), py::arg("config"))
        .def("draw", &GibbsSampler::draw)
        .def("acceptance_rate", &GibbsSampler::acceptance_rate);

    py::class_<ModeProfile>(m, "ModeProfile")
        .def_static("constant", &ModeProfile::constant, py::arg("value"))
        .def_static("raised_cosine", &ModeProfile::raised_cosine,
                    py::arg("center"), py::arg("half_width"),
                    py::arg("amplitude") = 1.0)
        .def_static("plateau", &ModeProfile::plateau, py::arg("lo"),
                    py::arg("hi"), py::arg("edge"), py::arg("amplitude") = 1.0)
        .def("__call__", &ModeProfile::operator())
        .def("derivative_zero_at_origin",
             &ModeProfile::derivative_zero_at_origin);

    m.def(
        "phi_g",
        [](const LatticeState& s, const ModeProfile& g, const ChainParams& c) {
            return phi_g(s, g, c);
        },
        py::arg("state"), py::arg("profile"), py::arg("params"));

    py::class_<Config>(m, "Config")
        .def_static("from_file", &Config::from_file, py::arg("path"))
        .def_static("from_string", &Config::from_string, py::arg("text"))
        .def("set", &Config::set)
        .def("hash", &Config::hash);

    m.def("run_fpu_recurrence",
          [](const Config& cfg, const std::string& out) {
              const auto r = experiments::run_fpu_recurrence(cfg, out);
              py::dict d;
              d["e1_initial"] = r.e1_initial;
              d["recurrence_time"] = r.recurrence_time;
              d["recurrence_ratio"] = r.recurrence_ratio;
              d["packet_sigma"] = r.packet.sigma;
              d["packet_r_squared"] = r.packet.r_squared;
              d["n_eff_final"] = r.n_eff_final;
              d["final_averages"] = r.final_averages;
              return d;
          },
          py::arg("config"), py::arg("out_dir"));
}
