#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netmech/dgp.hpp"
#include "netmech/estimator.hpp"
#include "netmech/experiments.hpp"
#include "netmech/io.hpp"
#include "netmech/mechtest.hpp"
#include "netmech/sgraph.hpp"

namespace py = pybind11;
using namespace netmech;

namespace {

Eligibility eligibility_from(const std::string& s) {
  if (s == "none") return Eligibility::None;
  if (s == "rings12") return Eligibility::NonEmptyRings12;
  throw ArgumentError("eligibility must be 'none' or 'rings12'");
}

DegreeRule degree_rule(py::object min_degree, py::object max_degree, py::object mean_degree) {
  const auto hi = max_degree.cast<std::size_t>();
  if (!mean_degree.is_none()) return DegreeRule::mean_max(mean_degree.cast<double>(), hi);
  return DegreeRule::range(min_degree.cast<std::size_t>(), hi);
}

py::dict fit_dict(const FitResult& f) {
  py::dict d;
  d["params"] = f.params;
  d["standard_errors"] = f.standard_errors;
  d["log_likelihood"] = f.log_likelihood;
  d["converged"] = f.converged;
  d["diagnostic"] = f.diagnostic;
  return d;
}

py::dict report_dict(const MechanismReport& r) {
  py::list layers;
  for (const auto& l : r.layers) {
    py::dict d;
    d["layer"] = std::string(to_string(l.layer));
    d["status"] = std::string(to_string(l.status));
    d["lr_statistic"] = l.lr_statistic;
    d["df"] = l.df;
    d["p_value"] = l.p_value;
    d["decision"] = l.decision ? py::cast(std::string(to_string(*l.decision))) : py::none();
    d["effective_sample_size"] = l.effective_sample_size;
    d["null_fit"] = fit_dict(l.null_fit);
    d["alternative_fit"] = fit_dict(l.alternative_fit);
    d["diagnostic"] = l.diagnostic;
    layers.append(d);
  }
  py::dict out;
  out["spec"] = r.spec.code();
  out["complete"] = r.complete();
  out["separated_set_size"] = r.separated_set.size();
  out["layers"] = layers;
  return out;
}

EstimatorConfig estimator_config(std::size_t draws, std::size_t thinning, std::size_t burn_in,
                                 std::size_t restarts) {
  EstimatorConfig c;
  c.gibbs.draws = draws;
  c.gibbs.thinning = thinning;
  c.gibbs.burn_in = burn_in;
  c.separation_restarts = restarts;
  return c;
}

}  // namespace

PYBIND11_MODULE(netmech, m) {
  m.doc() = "Causal effects on networks with contagion and latent confounding";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<FriendshipNetwork>(m, "Network")
      .def(py::init([](std::size_t n, const std::vector<std::pair<UnitId, UnitId>>& edges) {
             return FriendshipNetwork(n, edges);
           }),
           py::arg("n_units"), py::arg("edges"))
      .def_property_readonly("n_units", &FriendshipNetwork::n_units)
      .def_property_readonly("n_edges", &FriendshipNetwork::n_edges)
      .def("degree", &FriendshipNetwork::degree)
      .def("neighbors", [](const FriendshipNetwork& n, UnitId i) {
        n.check_unit(i);
        const auto s = n.neighbors(i);
        return std::vector<UnitId>(s.begin(), s.end());
      })
      .def("adjacent", &FriendshipNetwork::adjacent)
      .def("edges", &FriendshipNetwork::edges)
      .def("__repr__", [](const FriendshipNetwork& n) {
        return "<Network units=" + std::to_string(n.n_units()) + " edges=" + std::to_string(n.n_edges()) + ">";
      });

  py::class_<NetworkData>(m, "Data")
      .def(py::init([](std::vector<double> L, std::vector<int> A, std::vector<int> Y, bool continuous_L) {
             NetworkData d{std::move(L), std::move(A), std::move(Y), continuous_L};
             return d;
           }),
           py::arg("L"), py::arg("A"), py::arg("Y"), py::arg("continuous_L") = false)
      .def_readwrite("L", &NetworkData::L)
      .def_readwrite("A", &NetworkData::A)
      .def_readwrite("Y", &NetworkData::Y)
      .def_readwrite("continuous_L", &NetworkData::continuous_L)
      .def("__len__", &NetworkData::size);

  m.def("load_edge_list", &load_edge_list, py::arg("path"));
  m.def("save_edge_list", &save_edge_list, py::arg("path"), py::arg("network"));
  m.def("load_data", &load_data_csv, py::arg("path"));
  m.def("save_data", &save_data_csv, py::arg("path"), py::arg("data"));

  m.def(
      "generate_network",
      [](std::size_t n, py::object min_degree, py::object max_degree, py::object mean_degree, std::uint64_t seed) {
        return generate_network(n, degree_rule(min_degree, max_degree, mean_degree), seed);
      },
      py::arg("n_units"), py::arg("min_degree") = 1, py::arg("max_degree") = 6, py::arg("mean_degree") = py::none(),
      py::arg("seed") = 1);

  m.def("presets", &dgp_preset_names);
  m.def(
      "generate_data",
      [](const FriendshipNetwork& net, const std::string& preset, std::uint64_t seed, std::size_t burnin) {
        auto cfg = dgp_preset(preset);
        cfg.burnin_sweeps = burnin;
        return generate_data(net, cfg, seed);
      },
      py::arg("network"), py::arg("preset"), py::arg("seed") = 1, py::arg("burnin_sweeps") = 200);

  m.def(
      "ground_truth_effect",
      [](const FriendshipNetwork& net, const std::string& preset, std::size_t draws, std::size_t thinning,
         std::size_t burn_in, std::uint64_t seed) {
        GibbsConfig g{draws, thinning, burn_in};
        const std::size_t n = net.n_units();
        return ground_truth_effect(net, dgp_preset(preset), std::vector<int>(n, 1), std::vector<int>(n, 0), g,
                                   seed);
      },
      py::arg("network"), py::arg("preset"), py::arg("draws") = 0, py::arg("thinning") = 3,
      py::arg("burn_in") = 200, py::arg("seed") = 1);

  m.def(
      "greedy_separated_set",
      [](const FriendshipNetwork& net, std::size_t k, const std::string& eligibility, std::size_t restarts,
         std::uint64_t seed) {
        return greedy_separated_set(net, k, eligibility_from(eligibility), restarts, seed).members;
      },
      py::arg("network"), py::arg("k"), py::arg("eligibility") = "none", py::arg("restarts") = 1,
      py::arg("seed") = 1);
  m.def(
      "greedy_dyad_set",
      [](const FriendshipNetwork& net, std::size_t k, std::size_t restarts, std::uint64_t seed) {
        std::vector<std::pair<UnitId, UnitId>> out;
        for (const auto& d : greedy_dyad_separated_set(net, k, restarts, seed).dyads) out.emplace_back(d.first, d.second);
        return out;
      },
      py::arg("network"), py::arg("k") = 2, py::arg("restarts") = 1, py::arg("seed") = 1);
  m.def(
      "verify_separated_set",
      [](const FriendshipNetwork& net, std::size_t k, std::vector<UnitId> members, const std::string& eligibility) {
        const auto c = verify_separated_set(net, SeparatedSet{k, eligibility_from(eligibility), std::move(members), {}});
        return py::dict(py::arg("separated") = c.separated, py::arg("eligible") = c.eligible,
                        py::arg("maximal") = c.maximal);
      },
      py::arg("network"), py::arg("k"), py::arg("members"), py::arg("eligibility") = "none");

  m.def(
      "determine_mechanisms",
      [](const FriendshipNetwork& net, const NetworkData& data, double alpha, std::size_t restarts,
         std::uint64_t seed) {
        MechanismReport r;
        {
          py::gil_scoped_release release;
          r = determine_mechanisms(net, data, alpha, restarts, seed);
        }
        return report_dict(r);
      },
      py::arg("network"), py::arg("data"), py::arg("alpha") = 0.05, py::arg("restarts") = 1, py::arg("seed") = 1);

  m.def(
      "estimate_effects",
      [](const FriendshipNetwork& net, const NetworkData& data, const std::string& spec, const std::vector<int>& a,
         std::size_t draws, std::size_t thinning, std::size_t burn_in, std::size_t restarts, std::uint64_t seed) {
        const auto est = estimate_effects(net, data, SegregatedGraphSpec::from_code(spec), a,
                                          estimator_config(draws, thinning, burn_in, restarts), seed);
        return py::dict(py::arg("per_unit") = est.per_unit, py::arg("average") = est.population_average,
                        py::arg("draws") = est.n_draws);
      },
      py::arg("network"), py::arg("data"), py::arg("spec"), py::arg("treatment"), py::arg("draws") = 0,
      py::arg("thinning") = 3, py::arg("burn_in") = 200, py::arg("restarts") = 1, py::arg("seed") = 1);

  m.def(
      "overall_effect",
      [](const FriendshipNetwork& net, const NetworkData& data, const std::string& spec, std::size_t draws,
         std::size_t thinning, std::size_t burn_in, std::size_t restarts, std::uint64_t seed) {
        const auto r = overall_effect(net, data, SegregatedGraphSpec::from_code(spec),
                                      estimator_config(draws, thinning, burn_in, restarts), seed);
        return py::dict(py::arg("contrast") = r.contrast, py::arg("treated") = r.treated.population_average,
                        py::arg("untreated") = r.untreated.population_average,
                        py::arg("y_params") = r.models.Y.params);
      },
      py::arg("network"), py::arg("data"), py::arg("spec"), py::arg("draws") = 0, py::arg("thinning") = 3,
      py::arg("burn_in") = 200, py::arg("restarts") = 1, py::arg("seed") = 1);

  m.def(
      "s_separated",
      [](const FriendshipNetwork& net, const std::string& spec, const std::vector<std::string>& x,
         const std::vector<std::string>& y, const std::vector<std::string>& z) {
        const auto g = instantiate_sg(net, SegregatedGraphSpec::from_code(spec));
        auto ids = [&](const std::vector<std::string>& labels) {
          std::vector<VertexId> out;
          for (const auto& l : labels) {
            const auto v = g.find(l);
            if (!v) throw ArgumentError("unknown vertex '" + l + "'");
            out.push_back(*v);
          }
          return make_vertex_set(out);
        };
        return s_separated(g, ids(x), ids(y), ids(z));
      },
      py::arg("network"), py::arg("spec"), py::arg("x"), py::arg("y"), py::arg("z") = std::vector<std::string>{},
      "Labels are a layer letter and a unit id, e.g. 'Y3'.");
}
