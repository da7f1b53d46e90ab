#include "chemotaxis/config.hpp"
#include "chemotaxis/environment.hpp"
#include "chemotaxis/episodes.hpp"
#include "chemotaxis/errors.hpp"
#include "chemotaxis/export.hpp"
#include "chemotaxis/qnet.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>

namespace py = pybind11;
using namespace chemotaxis;

namespace {

std::string setting_text(const py::handle& value) {
    if (py::isinstance<py::bool_>(value)) return value.cast<bool>() ? "true" : "false";
    if (py::isinstance<py::int_>(value)) return std::to_string(value.cast<long long>());
    if (py::isinstance<py::float_>(value)) return format_number(value.cast<double>());
    return py::str(value).cast<std::string>();
}

RunConfig make_config(const py::kwargs& settings) {
    Overrides o;
    for (const auto& [key, value] : settings) o.emplace_back(key.cast<std::string>(), setting_text(value));
    return parse_config("", o);
}

Policy policy_for(const RunConfig& config, const std::string& name, const QNetwork* net) {
    switch (policy_from_name(name)) {
        case PolicyKind::Greedy:
            return GreedyPolicy{};
        case PolicyKind::Swinging:
            return SwingingPolicy{};
        case PolicyKind::QNet:
            break;
    }
    if (net == nullptr) throw ConfigError("policy qnet needs a network");
    if (net->input_dim() != static_cast<std::size_t>(config.evaluation_episode().input_dim()))
        throw ConfigError("network input dimension does not match the configuration");
    return QNetPolicy{net, 0.0};
}

py::dict episode_dict(const EpisodeResult& ep) {
    const std::size_t n = ep.trajectory.size();
    py::array_t<double> t(n), x(n), y(n), kappa(n), c(n);
    auto tv = t.mutable_unchecked<1>();
    auto xv = x.mutable_unchecked<1>();
    auto yv = y.mutable_unchecked<1>();
    auto kv = kappa.mutable_unchecked<1>();
    auto cv = c.mutable_unchecked<1>();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = ep.trajectory[i];
        const auto k = static_cast<py::ssize_t>(i);
        tv(k) = s.t;
        xv(k) = s.position.x;
        yv(k) = s.position.y;
        kv(k) = s.kappa;
        cv(k) = s.c;
    }
    py::array_t<double> centers({static_cast<py::ssize_t>(ep.centerline.size()), py::ssize_t{2}});
    auto cc = centers.mutable_unchecked<2>();
    for (std::size_t i = 0; i < ep.centerline.size(); ++i) {
        cc(static_cast<py::ssize_t>(i), 0) = ep.centerline[i].x;
        cc(static_cast<py::ssize_t>(i), 1) = ep.centerline[i].y;
    }
    std::vector<int> actions;
    for (const auto& d : ep.actions) actions.push_back(d.action);

    py::dict out;
    out["t"] = t;
    out["x"] = x;
    out["y"] = y;
    out["kappa"] = kappa;
    out["c"] = c;
    out["centerline"] = centers;
    out["actions"] = actions;
    out["gain"] = ep.gain;
    out["reached_source"] = ep.termination == Termination::ReachedSource;
    out["final_time"] = ep.final_state.time;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Curvature-steering swimmer chemotaxis: simulation, Q-learning and baselines";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<TrainingFault>(m, "TrainingFault", PyExc_RuntimeError);

    py::class_<RunConfig>(m, "Config")
        .def(py::init(&make_config))
        .def_static("from_file",
                    [](const std::string& path, const py::kwargs& settings) {
                        Overrides o;
                        for (const auto& [k, v] : settings) o.emplace_back(k.cast<std::string>(), setting_text(v));
                        return load_config(path, o);
                    },
                    py::arg("path"))
        .def_property_readonly("n_t", [](const RunConfig& c) { return c.n_t; })
        .def_property_readonly("seed", [](const RunConfig& c) { return c.seed; })
        .def_property_readonly("cells", [](const RunConfig& c) { return c.cells; })
        .def_property_readonly("t_life", &RunConfig::resolved_t_life)
        .def_property_readonly("epochs", &RunConfig::resolved_epochs)
        .def_property_readonly("hidden_nodes", &RunConfig::resolved_hidden_nodes)
        .def_property_readonly("input_dim", [](const RunConfig& c) { return c.training_episode().input_dim(); })
        .def("__str__", &format_config)
        .def("__repr__", [](const RunConfig& c) {
            return "<Config n_t=" + std::to_string(c.n_t) + " seed=" + std::to_string(c.seed) + ">";
        });

    py::class_<QNetwork>(m, "QNetwork")
        .def_static("create", &QNetwork::make, py::arg("inputs"), py::arg("hidden_layers"), py::arg("nodes"),
                    py::arg("actions") = 2)
        .def_static("load", py::overload_cast<const std::string&>(&load_network), py::arg("path"))
        .def("save", [](const QNetwork& n, const std::string& path) { save_network(n, path); }, py::arg("path"))
        .def("forward",
             [](const QNetwork& n, const std::vector<double>& x) { return n.forward(x); }, py::arg("state"))
        .def_property_readonly("layer_sizes", &QNetwork::layer_sizes)
        .def_property_readonly("input_dim", &QNetwork::input_dim)
        .def_property_readonly("parameter_count", &QNetwork::parameter_count)
        .def("__eq__", [](const QNetwork& a, const QNetwork& b) { return a == b; });

    m.def(
        "train",
        [](const RunConfig& config) {
            TrainingResult r;
            {
                py::gil_scoped_release release;
                r = train_agent(config.training_schedule(), config.training_episode(), config.seed);
            }
            py::list curve;
            for (const auto& e : r.curve) {
                py::dict d;
                d["epoch"] = e.epoch;
                d["gain"] = e.gain;
                d["mean_loss"] = e.mean_loss;
                d["epsilon"] = e.epsilon;
                curve.append(d);
            }
            return py::make_tuple(r.net, curve);
        },
        py::arg("config"), "Train a Q-network; returns (network, per-epoch records).");

    m.def(
        "evaluate",
        [](const RunConfig& config, const std::string& policy, const QNetwork* net) {
            const Policy p = policy_for(config, policy, net);
            CohortResult r;
            {
                py::gil_scoped_release release;
                r = evaluate_cohort(p, config.evaluation_episode(), config.cells, config.seed, config.threads);
            }
            py::dict out;
            out["gains"] = r.gains;
            out["mean"] = r.mean;
            out["variance"] = r.variance;
            return out;
        },
        py::arg("config"), py::arg("policy") = "greedy", py::arg("net") = nullptr,
        "Evaluate a cohort of cells with exploration off.");

    m.def(
        "run_episode",
        [](const RunConfig& config, const std::string& policy, const QNetwork* net, int cell) {
            const Policy p = policy_for(config, policy, net);
            Rng spawn(config.seed, Stream::Spawn, static_cast<std::uint64_t>(cell));
            Rng explore(config.seed, Stream::Exploration, static_cast<std::uint64_t>(cell));
            EpisodeResult ep = run_episode(config.evaluation_episode(), p, nullptr, spawn, explore);
            return episode_dict(ep);
        },
        py::arg("config"), py::arg("policy") = "greedy", py::arg("net") = nullptr, py::arg("cell") = 0,
        "Run one evaluation cell and return its trajectory as arrays.");

    m.def(
        "concentration",
        [](const std::string& field, double x, double y) {
            const ConcentrationField f =
                field == "radial" ? ConcentrationField::radial(1.0, 100.0) : ConcentrationField::linear(1.0, 20.0);
            return concentration_at(f, {x, y});
        },
        py::arg("field"), py::arg("x"), py::arg("y"));

    m.def(
        "taylor_green",
        [](double x, double y, double u0, double k) {
            const FlowSample s = flow_at(FlowFieldSpec::taylor_green(u0, k), {x, y});
            return py::make_tuple(s.ux, s.uy, s.omega0);
        },
        py::arg("x"), py::arg("y"), py::arg("u0") = 0.1, py::arg("k") = std::numbers::pi / 10.0);
}
