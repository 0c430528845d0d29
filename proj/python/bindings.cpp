#include "spinnet/asymptotics.hpp"
#include "spinnet/bundled.hpp"
#include "spinnet/errors.hpp"
#include "spinnet/evaluator.hpp"
#include "spinnet/haar.hpp"
#include "spinnet/series.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace spinnet;

namespace {

Holonomy holonomy_arg(const Graph& g, const std::string& text) {
    if (text.empty()) return Holonomy::trivial();
    return holonomy_from_json(g, json::parse(text));
}

py::tuple cq_tuple(const CQ& z) { return py::make_tuple(to_string(z.re), to_string(z.im)); }

py::list terms(const Graph& g, const MPoly& p) {
    (void)g;
    py::list out;
    for (auto& [m, c] : p.terms) {
        py::dict ex;
        for (int v = 0; v < p.nvars(); ++v)
            if (m.e[v]) ex[py::str(p.space->names[v])] = int(m.e[v]);
        out.append(py::make_tuple(ex, to_string(c.re), to_string(c.im)));
    }
    return out;
}

py::dict mc_dict(const MCEstimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["stderr"] = e.stderr_;
    d["mean_im"] = e.mean_im;
    d["stderr_im"] = e.stderr_im;
    d["count"] = e.count;
    d["seed"] = e.seed;
    d["workers"] = e.workers;
    return d;
}

}  // namespace

PYBIND11_MODULE(_spinnet, m) {
    m.doc() = "Exact and asymptotic evaluation of SU(2) spin networks";

    static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
    static py::exception<AdmissibilityError> adm_error(m, "AdmissibilityError", PyExc_ValueError);
    static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
    static py::exception<RegimeError> regime_error(m, "RegimeError", PyExc_ValueError);
    static py::exception<PreconditionError> pre_error(m, "PreconditionError", PyExc_ValueError);
    static py::exception<HypothesisError> hyp_error(m, "HypothesisError", PyExc_RuntimeError);
    static py::exception<NumericalError> num_error(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            py::set_error(input_error, e.what());
        } catch (const AdmissibilityError& e) {
            py::set_error(adm_error, e.what());
        } catch (const DomainError& e) {
            py::set_error(domain_error, e.what());
        } catch (const RegimeError& e) {
            py::set_error(regime_error, e.what());
        } catch (const PreconditionError& e) {
            py::set_error(pre_error, e.what());
        } catch (const HypothesisError& e) {
            py::set_error(hyp_error, e.what());
        } catch (const NumericalError& e) {
            py::set_error(num_error, e.what());
        } catch (const json::exception& e) {
            py::set_error(input_error, e.what());
        }
    });

    py::class_<Graph>(m, "Graph")
        .def_static("from_json", [](const std::string& text) { return graph_from_json(json::parse(text)); })
        .def_static("bundled", &bundled_graph)
        .def_static("load", &load_graph)
        .def("to_json", [](const Graph& g) { return graph_to_json(g).dump(); })
        .def_readonly("name", &Graph::name)
        .def_property_readonly("edge_ids", [](const Graph& g) {
            std::vector<std::string> ids;
            for (auto& e : g.edges) ids.push_back(e.id);
            return ids;
        })
        .def_property_readonly("vertex_ids", [](const Graph& g) {
            std::vector<std::string> ids;
            for (auto& v : g.vertices) ids.push_back(v.id);
            return ids;
        })
        .def_readonly("half_edge_ids", &Graph::half_ids)
        .def_property_readonly("crossings", [](const Graph& g) {
            std::vector<std::pair<std::string, std::string>> out;
            for (auto [a, b] : g.crossings) out.emplace_back(g.edges[a].id, g.edges[b].id);
            return out;
        })
        .def("__repr__", [](const Graph& g) { return "<Graph '" + g.name + "' with " + std::to_string(g.vertices.size()) + " vertices>"; });

    m.def("bundled_graph_names", &bundled_graph_names);
    m.def("is_admissible", &is_admissible);
    m.def("internal_coloring", &internal_coloring);
    m.def("crossing_sign", &crossing_sign);
    m.def("admissible_colorings", &admissible_colorings);

    m.def("evaluate", [](const Graph& g, const Coloring& c, const std::string& hol) { return cq_tuple(eval_spin_network(g, c, holonomy_arg(g, hol))); },
          py::arg("graph"), py::arg("coloring"), py::arg("holonomy") = "");
    m.def("theta_value", [](int a, int b, int c) { return to_string(theta_value(a, b, c)); });
    m.def("bracket_square", [](const Graph& g, const Coloring& c, const std::string& hol) { return to_string(bracket_square(g, c, holonomy_arg(g, hol))); },
          py::arg("graph"), py::arg("coloring"), py::arg("holonomy") = "");

    m.def("series_Z", [](const Graph& g, int degree, const std::string& hol) {
        TruncSeries s = series_Z(g, holonomy_arg(g, hol), degree);
        if (!g.crossings.empty()) s = nonplanar_fix(s, g);
        return terms(g, s.poly);
    }, py::arg("graph"), py::arg("degree"), py::arg("holonomy") = "");
    m.def("westbury_polynomial", [](const Graph& g) { return terms(g, westbury_polynomial(g)); });
    m.def("pfaffian_dimer_sum", [](const Graph& g) { return terms(g, pfaffian_dimer_sum(g)); });

    m.def("mc_bracket", [](const Graph& g, const Coloring& c, long long samples, uint64_t seed, int workers, const std::string& hol) {
        return mc_dict(mc_bracket(g, c, holonomy_arg(g, hol), samples, seed, workers));
    }, py::arg("graph"), py::arg("coloring"), py::arg("samples"), py::arg("seed"), py::arg("workers") = 1, py::arg("holonomy") = "");
    m.def("mc_W_point", [](const Graph& g, const std::vector<double>& y, long long samples, uint64_t seed, int workers) {
        return mc_dict(mc_W_point(g, Holonomy::trivial(), y, samples, seed, workers));
    }, py::arg("graph"), py::arg("y"), py::arg("samples"), py::arg("seed"), py::arg("workers") = 1);
    m.def("mc_orthogonality", [](const Graph& g, const Coloring& c, long long samples, uint64_t seed, int workers) {
        return mc_dict(mc_orthogonality(g, c, samples, seed, workers));
    }, py::arg("graph"), py::arg("coloring"), py::arg("samples"), py::arg("seed"), py::arg("workers") = 1);

    m.def("asymptotics", [](const Graph& g, const Coloring& c, const std::vector<int>& ks, int restarts, double tol, uint64_t seed) {
        FindResult f = find_configs(g, c, restarts, tol, seed);
        AsymptoticData d = prepare_asymptotics(g, c, f.configs);
        py::dict out;
        out["num_configurations"] = f.configs.size();
        out["qP_kernel"] = d.report.qP_kernel;
        out["qkappa_kernel"] = d.report.qk_kernel;
        out["qpp_kernel"] = d.report.qpp_kernel;
        out["det_r"] = d.det_r;
        out["detprime_qP"] = d.detprime_qP;
        py::dict est;
        for (int k : ks) est[py::int_(k)] = asymptotic_estimate(d, c, k).value;
        out["estimates"] = est;
        return out;
    }, py::arg("graph"), py::arg("coloring"), py::arg("k_list"), py::arg("restarts") = 200, py::arg("tol") = 1e-10, py::arg("seed") = 1);
}
