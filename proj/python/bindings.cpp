#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dynmap/errors.hpp"
#include "dynmap/harness.hpp"
#include "dynmap/io.hpp"

namespace py = pybind11;
using namespace dynmap;

namespace {

std::vector<Matrix> to_matrices(const std::vector<Superoperator>& ops) {
    std::vector<Matrix> out;
    out.reserve(ops.size());
    for (const auto& op : ops) out.push_back(op.matrix());
    return out;
}

std::vector<Superoperator> to_superops(const std::vector<Matrix>& mats) {
    return {mats.begin(), mats.end()};
}

DynamicalMapSeries series_from(const std::vector<Matrix>& maps, double dt, double t0) {
    return DynamicalMapSeries(dt, t0, to_superops(maps));
}

TransferTensorSeries tensors_from(const std::vector<Matrix>& tensors, double dt, double t0) {
    TransferTensorSeries t;
    t.dt = dt;
    t.t0 = t0;
    t.tensors = to_superops(tensors);
    for (const auto& m : tensors) t.norms.push_back(m.norm());
    return t;
}

py::dict compare_to_dict(const CompareResult& r) {
    py::dict out;
    py::list rows;
    for (const auto& row : r.rows) {
        py::dict d;
        d["tau_c"] = row.tau_c;
        d["err_ttm"] = row.err_ttm;
        d["err_tl"] = row.err_tl;
        d["tl_flagged"] = row.tl_flagged;
        d["tl_spectral_stable"] = row.tl_spectral_stable;
        d["trace_distance_ttm"] = row.trace_distance_ttm;
        d["trace_distance_tl"] = row.trace_distance_tl;
        rows.append(d);
    }
    out["rows"] = rows;
    out["maps"] = to_matrices(r.maps.maps());
    out["reference"] = r.reference;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Transfer-tensor and time-local extrapolation of non-Markovian dynamical maps";

    auto base = py::register_exception<Error>(m, "DynmapError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    m.def("vectorize", &vectorize, py::arg("rho"));
    m.def("devectorize", &devectorize, py::arg("v"));
    m.def("commutator_superop", &commutator_superop, py::arg("hamiltonian"));
    m.def("dissipator_superop", &dissipator_superop, py::arg("op"));
    m.def(
        "expm", [](const Matrix& gen, double dt) { return expm(Generator(gen), dt).matrix(); }, py::arg("generator"),
        py::arg("dt"));
    m.def(
        "logm", [](const Matrix& map, double dt) { return logm(Superoperator(map), dt).matrix(); }, py::arg("map"),
        py::arg("dt"));
    m.def(
        "singular_values", [](const Matrix& map) { return singular_values(Superoperator(map)); }, py::arg("map"));

    m.def(
        "decompose",
        [](const std::vector<Matrix>& maps, double dt) { return to_matrices(decompose(series_from(maps, dt, 0.0)).tensors); },
        py::arg("maps"), py::arg("dt") = 1.0, "Transfer tensors T(t_1..t_N) from maps E(t_1..t_N).");
    m.def(
        "resum",
        [](const std::vector<Matrix>& tensors, double dt) { return to_matrices(resum(tensors_from(tensors, dt, 0.0)).maps()); },
        py::arg("tensors"), py::arg("dt") = 1.0);
    m.def(
        "extrapolate_ttm",
        [](const std::vector<Matrix>& maps, const Matrix& rho0, std::size_t cutoff, std::size_t total) {
            return extrapolate(decompose(series_from(maps, 1.0, 0.0)), rho0, cutoff, total);
        },
        py::arg("maps"), py::arg("rho0"), py::arg("cutoff_steps"), py::arg("total_steps"));
    m.def(
        "local_maps",
        [](const std::vector<Matrix>& maps, double threshold) {
            const auto local = local_maps(series_from(maps, 1.0, 0.0), threshold);
            std::vector<bool> flags;
            for (const auto& f : local.flags) flags.push_back(f.flagged);
            return py::make_tuple(to_matrices(local.maps), flags);
        },
        py::arg("maps"), py::arg("ratio_threshold") = 1e-8, "Returns (local maps, flagged).");
    m.def(
        "extrapolate_tl",
        [](const std::vector<Matrix>& maps, const Matrix& rho0, std::size_t cutoff, std::size_t total,
           std::size_t average_last) {
            TimeLocalOptions opt;
            opt.average_last = average_last;
            return extrapolate_tl(local_maps(series_from(maps, 1.0, 0.0)), rho0, cutoff, total, opt);
        },
        py::arg("maps"), py::arg("rho0"), py::arg("cutoff_steps"), py::arg("total_steps"),
        py::arg("average_last") = 1);
    m.def(
        "canonical_decompose",
        [](const Matrix& gen) {
            const auto form = canonical_decompose(Generator(gen));
            py::dict d;
            d["hamiltonian"] = form.hamiltonian;
            d["rates"] = form.rates;
            d["operators"] = form.operators;
            d["degenerate_rates"] = form.degenerate_rates;
            return d;
        },
        py::arg("generator"));

    m.def(
        "eta_coefficients",
        [](const std::string& kind, const std::vector<double>& params, double temperature, double dt, std::size_t kmax) {
            SpectralDensity sd = [&] {
                if (kind == "subohmic" && params.size() == 3) return SpectralDensity::subohmic(params[0], params[1], params[2]);
                if (kind == "drude_lorentz" && params.size() == 2) return SpectralDensity::drude_lorentz(params[0], params[1]);
                if (kind == "qd_phonon" && params.size() == 4)
                    return SpectralDensity::qd_phonon(params[0], params[1], params[2], params[3]);
                throw ConfigError("unknown spectral density or wrong parameter count: " + kind);
            }();
            return eta_coefficients(sd, temperature, dt, kmax).eta;
        },
        py::arg("kind"), py::arg("params"), py::arg("temperature"), py::arg("dt"), py::arg("kmax"));

    m.def(
        "compare_preset",
        [](const std::string& name, std::optional<std::vector<double>> tau_c, std::optional<double> t_ref) {
            SweepConfig cfg = preset_config(name);
            if (tau_c) cfg.tau_c = *tau_c;
            if (t_ref) cfg.t_ref = *t_ref;
            py::gil_scoped_release release;
            CompareResult r = run_compare(cfg);
            py::gil_scoped_acquire acquire;
            return compare_to_dict(r);
        },
        py::arg("name"), py::arg("tau_c") = py::none(), py::arg("t_ref") = py::none());
    m.def(
        "compare_config",
        [](const std::filesystem::path& path) {
            const SweepConfig cfg = load_config(path);
            return compare_to_dict(run_compare(cfg));
        },
        py::arg("path"));

    m.def(
        "write_dmap",
        [](const std::filesystem::path& path, const std::vector<Matrix>& maps, double dt, double t0) {
            io::write_dmap(path, series_from(maps, dt, t0));
        },
        py::arg("path"), py::arg("maps"), py::arg("dt"), py::arg("t0") = 0.0);
    m.def(
        "read_dmap",
        [](const std::filesystem::path& path) {
            const auto s = io::read_dmap(path);
            return py::make_tuple(to_matrices(s.maps()), s.dt(), s.t0());
        },
        py::arg("path"), "Returns (maps, dt, t0).");
}
