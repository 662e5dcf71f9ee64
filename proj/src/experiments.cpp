#include "moran/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "moran/chain.hpp"
#include "moran/expansion.hpp"
#include "moran/forward_pde.hpp"
#include "moran/kimura.hpp"
#include "moran/mixed.hpp"
#include "moran/quadrature.hpp"
#include "moran/replicator.hpp"

namespace moran {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double subcell_peak(const std::vector<double>& xs, const std::vector<double>& q) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < q.size(); ++i)
        if (q[i] > q[j]) j = i;
    if (j == 0 || j + 1 == q.size()) return xs[j];
    const double den = q[j - 1] - 2.0 * q[j] + q[j + 1];
    if (den >= 0.0) return xs[j];
    return xs[j] + 0.5 * (q[j - 1] - q[j + 1]) / den * (xs[1] - xs[0]);
}

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = std::size_t(it - xs.begin());
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return (1.0 - w) * ys[j - 1] + w * ys[j];
}

}  // namespace

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::DiscreteVsPde: return "discrete-vs-pde";
        case Experiment::StrongSelection: return "strong-selection";
        case Experiment::HawkdovePeak: return "hawkdove-peak";
        case Experiment::KimuraStationary: return "kimura-stationary";
        case Experiment::MixedDominance: return "mixed-dominance";
    }
    throw std::logic_error("to_string(Experiment)");
}

Experiment experiment_from_string(const std::string& name) {
    if (name == "discrete-vs-pde") return Experiment::DiscreteVsPde;
    if (name == "strong-selection") return Experiment::StrongSelection;
    if (name == "hawkdove-peak") return Experiment::HawkdovePeak;
    if (name == "kimura-stationary") return Experiment::KimuraStationary;
    if (name == "mixed-dominance") return Experiment::MixedDominance;
    throw std::invalid_argument("unknown experiment: " + name);
}

double InitialCondition::operator()(double x) const {
    if (kind == "cubic-right") return 20.0 * x * x * x * (1.0 - x);
    if (kind == "quadratic") return 6.0 * x * (1.0 - x);
    if (kind == "uniform") return 1.0;
    if (kind == "bump") {
        const double z = (x - center) / width;
        return std::exp(-0.5 * z * z);
    }
    throw std::invalid_argument("unknown initial condition kind: " + kind);
}

void ExperimentConfig::validate() const {
    if (cells < 4) throw std::invalid_argument("config: cells must be >= 4");
    if (time_horizon <= 0.0) throw std::invalid_argument("config: time_horizon must be positive");
    if (theta1 < 0.0 || theta1 > 1.0 || theta2 < 0.0 || theta2 > 1.0)
        throw std::invalid_argument("config: theta out of [0,1]");
    for (int n : N_list)
        if (n < 2) throw std::invalid_argument("config: N_list entries must be >= 2");
    for (double e : epsilons)
        if (!(e > 0.0) || e > 1.0)
            throw std::invalid_argument("config: epsilons must lie in (0,1]");
    for (double t : snapshot_times)
        if (t < 0.0) throw std::invalid_argument("config: snapshot times must be nonnegative");
    (void)ic(0.5);  // rejects unknown ic kinds
}

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace

std::string ExperimentConfig::to_json() const {
    json j;
    j["experiment"] = to_string(experiment);
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["payoffs"] = {{"a", payoffs.a}, {"b", payoffs.b}, {"c", payoffs.c},
                    {"d", payoffs.d}, {"nu", payoffs.nu}};
    j["theta1"] = theta1;
    j["theta2"] = theta2;
    j["N_list"] = N_list;
    j["epsilons"] = epsilons;
    j["cells"] = cells;
    j["time_horizon"] = time_horizon;
    j["snapshot_times"] = snapshot_times;
    j["ic"] = {{"kind", ic.kind}, {"center", ic.center}, {"width", ic.width}};
    j["out_dir"] = out_dir;
    j["seed"] = seed;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    const json j = json::parse(text);
    reject_unknown(j,
                   {"experiment", "alpha", "beta", "payoffs", "theta1", "theta2", "N_list",
                    "epsilons", "cells", "time_horizon", "snapshot_times", "ic", "out_dir", "seed"},
                   "config");
    ExperimentConfig c;
    if (!j.contains("experiment"))
        throw std::invalid_argument("config: missing required key 'experiment'");
    c = default_config(experiment_from_string(j.at("experiment").get<std::string>()));
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("beta")) c.beta = j.at("beta").get<double>();
    if (j.contains("payoffs")) {
        const json& p = j.at("payoffs");
        reject_unknown(p, {"a", "b", "c", "d", "nu"}, "payoffs");
        if (p.contains("a")) c.payoffs.a = p.at("a").get<double>();
        if (p.contains("b")) c.payoffs.b = p.at("b").get<double>();
        if (p.contains("c")) c.payoffs.c = p.at("c").get<double>();
        if (p.contains("d")) c.payoffs.d = p.at("d").get<double>();
        if (p.contains("nu")) c.payoffs.nu = p.at("nu").get<double>();
    }
    if (j.contains("theta1")) c.theta1 = j.at("theta1").get<double>();
    if (j.contains("theta2")) c.theta2 = j.at("theta2").get<double>();
    if (j.contains("N_list")) c.N_list = j.at("N_list").get<std::vector<int>>();
    if (j.contains("epsilons")) c.epsilons = j.at("epsilons").get<std::vector<double>>();
    if (j.contains("cells")) c.cells = j.at("cells").get<int>();
    if (j.contains("time_horizon")) c.time_horizon = j.at("time_horizon").get<double>();
    if (j.contains("snapshot_times"))
        c.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
    if (j.contains("ic")) {
        const json& i = j.at("ic");
        reject_unknown(i, {"kind", "center", "width"}, "ic");
        if (i.contains("kind")) c.ic.kind = i.at("kind").get<std::string>();
        if (i.contains("center")) c.ic.center = i.at("center").get<double>();
        if (i.contains("width")) c.ic.width = i.at("width").get<double>();
    }
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

ExperimentConfig default_config(Experiment e) {
    ExperimentConfig c;
    c.experiment = e;
    switch (e) {
        case Experiment::DiscreteVsPde:
            c.payoffs = {-10.0, 10.0, 10.0, -10.0, 1.0};
            c.alpha = -20.0;
            c.beta = 20.0;
            c.N_list = {100, 200, 400, 800};
            c.cells = 1024;
            c.time_horizon = 0.1;
            c.snapshot_times = {0.1};
            c.ic.kind = "cubic-right";
            break;
        case Experiment::StrongSelection:
            c.alpha = -4.0;
            c.beta = 4.0;
            c.epsilons = {0.1, 0.05, 0.025};
            c.cells = 512;
            c.time_horizon = 1.0;
            c.snapshot_times = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
                                0.55, 0.6,  0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0};
            c.ic = {"bump", 0.75, 0.06};
            break;
        case Experiment::HawkdovePeak:
            c.alpha = -20.0;
            c.beta = 20.0;
            c.cells = 512;
            c.time_horizon = 1.0;
            c.snapshot_times = {0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0};
            c.ic.kind = "cubic-right";
            break;
        case Experiment::KimuraStationary:
            c.alpha = 20.0;  // frequency independent: alpha = beta = gamma
            c.beta = 20.0;
            c.N_list = {128, 256, 512, 1024};
            c.cells = 1024;
            c.time_horizon = 3.0;
            c.snapshot_times = {};
            c.ic.kind = "uniform";
            break;
        case Experiment::MixedDominance:
            c.alpha = -20.0;
            c.beta = 20.0;
            c.cells = 256;
            c.time_horizon = 1.0;
            c.ic.kind = "quadratic";
            break;
    }
    return c;
}

namespace {

void append_field_snapshots(SnapshotStream& stream, const DensityField& f) {
    const auto xs = f.centers();
    for (int j = 0; j < f.cells; ++j)
        stream.rows.push_back({f.t, xs[j], f.q[j], f.a, f.b});
}

void write_csv_snapshots(const std::string& path, const SnapshotStream& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,x,q,a,b\n";
    // group extent by time so edge omission can be applied per group
    std::size_t i = 0;
    while (i < s.rows.size()) {
        std::size_t jend = i;
        while (jend < s.rows.size() && s.rows[jend].t == s.rows[i].t) ++jend;
        const std::size_t lo = i + s.omit_edge_cells;
        const std::size_t hi = jend - s.omit_edge_cells;
        for (std::size_t k = lo; k < hi; ++k) {
            const SnapshotRow& r = s.rows[k];
            out << fmt(r.t) << ',' << fmt(r.x) << ',' << fmt(r.q * s.q_scale) << ',' << fmt(r.a)
                << ',' << fmt(r.b) << '\n';
        }
        i = jend;
    }
}

void verify_mass(const std::string& name, const SnapshotStream& s) {
    if (!s.mass_checked) return;
    std::size_t i = 0;
    while (i < s.rows.size()) {
        std::size_t jend = i;
        while (jend < s.rows.size() && s.rows[jend].t == s.rows[i].t) ++jend;
        if (jend - i >= 2) {
            const double dx = s.rows[i + 1].x - s.rows[i].x;
            double m = 0.0;
            for (std::size_t k = i; k < jend; ++k) m += s.rows[k].q;
            m = m * dx + s.rows[i].a + s.rows[i].b;
            if (std::abs(m - 1.0) > 1e-8)
                throw std::runtime_error("mass balance violated in stream '" + name +
                                         "' at t=" + fmt(s.rows[i].t) + ": mass=" + fmt(m));
        }
        i = jend;
    }
}

}  // namespace

void RunReport::write(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& [name, stream] : snapshots) {
        verify_mass(name, stream);
        write_csv_snapshots((fs::path(dir) / (name + ".csv")).string(), stream);
    }
    if (!study.empty()) {
        std::ofstream out(fs::path(dir) / "study.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write study.csv");
        out << "param,error_l1,error_fix,order_estimate\n";
        for (const StudyRow& r : study)
            out << fmt(r.param) << ',' << fmt(r.error_l1) << ',' << fmt(r.error_fix) << ','
                << fmt(r.order_estimate) << '\n';
    }
    nlohmann::json meta;
    meta["config"] = nlohmann::json::parse(config.to_json());
    meta["version"] = kVersion;
    meta["wall_ms"] = wall_ms;
    meta["notes"] = notes;
    std::ofstream out(fs::path(dir) / "report.json", std::ios::binary);
    out << meta.dump(2) << '\n';
}

namespace {

// ---------------------------------------------------------------- discrete-vs-pde

struct DiscreteResult {
    double l1 = 0.0;
    double fix_err = 0.0;
};

DiscreteResult discrete_vs_pde_one(const ExperimentConfig& cfg, int N,
                                   const std::vector<double>& ref_x,
                                   const std::vector<double>& ref_q, double pi1_cont) {
    const ScaledGame sg{cfg.payoffs.a, cfg.payoffs.b, cfg.payoffs.c, cfg.payoffs.d,
                        cfg.payoffs.nu};
    const TransitionKernel kernel = build_transition_kernel(sg.finite_payoffs(N), N);
    ChainState st;
    st.N = N;
    st.P.resize(N + 1);
    double mass = 0.0;
    for (int n = 0; n <= N; ++n) mass += (st.P[n] = cfg.ic(double(n) / N));
    for (double& v : st.P) v /= mass;
    const AbsorptionSplit split = absorb(st, kernel);

    const long steps = std::lround(cfg.time_horizon * double(N) * double(N));
    evolve_in_place(st, kernel, steps);

    DiscreteResult r;
    for (int n = 1; n < N; ++n) {
        const double x = double(n) / N;
        r.l1 += std::abs(N * st.P[n] - interp_linear(ref_x, ref_q, x));
    }
    r.l1 /= N;
    r.fix_err = std::abs(split.pi1 - pi1_cont);
    return r;
}

RunReport study_discrete_vs_pde(const ExperimentConfig& cfg) {
    if (cfg.N_list.size() < 3)
        throw std::invalid_argument("discrete-vs-pde study: need at least 3 population sizes");
    RunReport rep;
    rep.config = cfg;

    const ScaledGame sg{cfg.payoffs.a, cfg.payoffs.b, cfg.payoffs.c, cfg.payoffs.d,
                        cfg.payoffs.nu};
    ForwardSolver ref(cfg.cells, sg.alpha(), sg.beta());
    ref.set_initial([&](double x) { return cfg.ic(x); });
    if (ref.renormalized())
        rep.notes.push_back("initial condition renormalized to unit mass for the PDE reference");
    ref.run(cfg.time_horizon);
    const std::vector<double> ref_x = ref.field().centers();
    const std::vector<double> ref_q = ref.field().q;
    auto& snap = rep.snapshots["pde_reference"];
    append_field_snapshots(snap, ref.field());

    const double gmass = integrate([&](double x) { return cfg.ic(x); }, 0.0, 1.0, 1e-12);
    const double pi1_cont = fixation_probability([&](double x) { return cfg.ic(x) / gmass; },
                                                 sg.alpha(), sg.beta());

    std::vector<std::future<DiscreteResult>> futs;
    for (int N : cfg.N_list)
        futs.push_back(std::async(std::launch::async, discrete_vs_pde_one, cfg, N, ref_x, ref_q,
                                  pi1_cont));
    std::vector<DiscreteResult> results;
    for (auto& f : futs) results.push_back(f.get());

    for (std::size_t i = 0; i < results.size(); ++i) {
        const double order =
            i == 0 ? 0.0 : std::log2(results[i - 1].l1 / results[i].l1);
        rep.study.push_back({double(cfg.N_list[i]), results[i].l1, results[i].fix_err, order});
    }
    return rep;
}

RunReport run_discrete_vs_pde(const ExperimentConfig& cfg) {
    // snapshot view of the rescaled chain next to the continuum fixation profile
    RunReport rep;
    rep.config = cfg;
    const ScaledGame sg{cfg.payoffs.a, cfg.payoffs.b, cfg.payoffs.c, cfg.payoffs.d,
                        cfg.payoffs.nu};
    const int N = cfg.N_list.empty() ? 200 : cfg.N_list.back();
    const TransitionKernel kernel = build_transition_kernel(sg.finite_payoffs(N), N);
    const FixationVector F = fixation_vector(kernel);
    const FixationProfile prof(sg.alpha(), sg.beta());

    ChainState st;
    st.N = N;
    st.P.resize(N + 1);
    double mass = 0.0;
    for (int n = 0; n <= N; ++n) mass += (st.P[n] = cfg.ic(double(n) / N));
    for (double& v : st.P) v /= mass;

    auto& snap = rep.snapshots["chain_density"];
    auto emit = [&](const ChainState& s) {
        const double t = double(s.t) / (double(N) * double(N));
        for (int n = 1; n < N; ++n)
            snap.rows.push_back({t, double(n) / N, N * s.P[n], s.P[0], s.P[N]});
    };
    emit(st);
    double prev = 0.0;
    for (double t : cfg.snapshot_times) {
        if (t < prev) throw std::invalid_argument("snapshot_times must be ascending");
        const long steps = std::lround((t - prev) * N * N);
        evolve_in_place(st, kernel, steps);
        prev = t;
        emit(st);
    }
    // fixation comparison column: param = x, error_fix = |F - psi|
    std::vector<double> xs(N - 1);
    for (int n = 1; n < N; ++n) xs[n - 1] = double(n) / N;
    const std::vector<double> psi = prof.psi_values(xs);
    for (int n = 1; n < N; ++n)
        rep.study.push_back({xs[n - 1], 0.0, std::abs(F.F[n] - psi[n - 1]), 0.0});
    return rep;
}

// ---------------------------------------------------------------- strong-selection

RunReport run_strong_selection(const ExperimentConfig& cfg) {
    if (cfg.epsilons.empty())
        throw std::invalid_argument("strong-selection: epsilons must be non-empty");
    RunReport rep;
    rep.config = cfg;

    // grid-consistent normalization shared by the solver and the characteristics
    DensityField proto_field = make_field(cfg.cells, [&](double x) { return cfg.ic(x); });
    const std::vector<double> xs = proto_field.centers();
    double raw = 0.0;
    for (int j = 0; j < cfg.cells; ++j) raw += cfg.ic(xs[j]);
    raw /= cfg.cells;
    const double zfac = raw;
    HyperbolicInit init{[&, zfac](double x) { return cfg.ic(x) / zfac; }, 0.0, 0.0};

    std::vector<std::vector<double>> nod(cfg.snapshot_times.size());
    for (std::size_t k = 0; k < cfg.snapshot_times.size(); ++k)
        nod[k] = solve_nodiffusion(init, cfg.snapshot_times[k], xs, cfg.alpha, cfg.beta).p;

    const ReplicatorFlow fl = make_replicator_flow(cfg.alpha, cfg.beta);
    const double x0pk = subcell_peak(xs, proto_field.q);
    const double dxc = 1.0 / cfg.cells;

    std::vector<double> dists, tracks;
    for (double eps : cfg.epsilons) {
        ForwardSolver solver(cfg.cells, cfg.alpha, cfg.beta, eps);
        solver.set_initial(proto_field);
        char name[64];
        std::snprintf(name, sizeof(name), "snapshots-eps%g", eps);
        auto& snap = rep.snapshots[name];
        double acc = 0.0, prev_d2 = 0.0, prev_t = 0.0;
        double worst_track = 0.0;
        for (std::size_t k = 0; k < cfg.snapshot_times.size(); ++k) {
            const double t = cfg.snapshot_times[k];
            solver.run(t);
            append_field_snapshots(snap, solver.field());
            double d2 = 0.0;
            for (int j = 0; j < cfg.cells; ++j) {
                const double w = xs[j] * (1.0 - xs[j]);
                const double diff = solver.field().q[j] - nod[k][j];
                d2 += diff * diff * w;
            }
            d2 *= dxc;
            if (k > 0) acc += 0.5 * (d2 + prev_d2) * (t - prev_t);
            prev_d2 = d2;
            prev_t = t;
            // peak tracking while the flow is still away from the equilibrium
            const double target = flow(x0pk, t, cfg.alpha, cfg.beta);
            const bool far = !fl.x_star || std::abs(target - *fl.x_star) > 3.0 * dxc;
            if (far) {
                const double pk = subcell_peak(xs, solver.field().q);
                worst_track = std::max(worst_track, std::abs(pk - target) / dxc);
            }
        }
        dists.push_back(std::sqrt(acc));
        tracks.push_back(worst_track);
    }
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
        const double order = i == 0 ? 0.0 : std::log2(dists[i - 1] / dists[i]);
        rep.study.push_back({cfg.epsilons[i], dists[i], tracks[i], order});
    }
    return rep;
}

// ---------------------------------------------------------------- hawkdove-peak

RunReport run_hawkdove_peak(const ExperimentConfig& cfg) {
    RunReport rep;
    rep.config = cfg;
    ForwardSolver solver(cfg.cells, cfg.alpha, cfg.beta);
    solver.set_initial([&](double x) { return cfg.ic(x); });
    if (solver.renormalized())
        rep.notes.push_back("initial condition renormalized to unit mass");
    const std::vector<double> xs = solver.field().centers();
    const double dxc = 1.0 / cfg.cells;

    double raw = 0.0;
    for (int j = 0; j < cfg.cells; ++j) raw += cfg.ic(xs[j]);
    raw /= cfg.cells;
    HyperbolicInit init{[&, raw](double x) { return cfg.ic(x) / raw; }, 0.0, 0.0};

    auto& snap = rep.snapshots["snapshots"];
    snap.q_scale = dxc;       // report dx*p, as in the figures
    snap.omit_edge_cells = 1; // the very ends of the interval are omitted
    auto& peaks = rep.snapshots["nodiffusion_peaks"];
    peaks.mass_checked = false;

    const ReplicatorFlow fl = make_replicator_flow(cfg.alpha, cfg.beta);
    for (double t : cfg.snapshot_times) {
        solver.run(t);
        append_field_snapshots(snap, solver.field());
        const DensitySnapshot ns = solve_nodiffusion(init, t, xs, cfg.alpha, cfg.beta);
        const double xpk_nod = subcell_peak(xs, ns.p);
        const double xpk_com = subcell_peak(xs, solver.field().q);
        // marker with rescaled height: sits on the complete-equation curve
        const double h = interp_linear(xs, solver.field().q, xpk_nod) * dxc;
        peaks.rows.push_back({t, xpk_nod, h, 0.0, 0.0});
        const double to_star = fl.x_star ? std::abs(xpk_com - *fl.x_star) : 0.0;
        rep.study.push_back({t, std::abs(xpk_com - xpk_nod), to_star, 0.0});
    }
    return rep;
}

// ---------------------------------------------------------------- kimura-stationary

RunReport run_kimura_stationary(const ExperimentConfig& cfg) {
    RunReport rep;
    rep.config = cfg;
    const KimuraParams params{cfg.alpha, cfg.beta};
    const bool freq_indep = cfg.alpha == cfg.beta;

    auto reference = [&](const std::vector<double>& nodes) {
        std::vector<double> out(nodes.size());
        if (freq_indep) {
            const double g = cfg.alpha;
            for (std::size_t i = 0; i < nodes.size(); ++i)
                out[i] = g == 0.0 ? nodes[i]
                                  : (1.0 - std::exp(-g * nodes[i])) / (1.0 - std::exp(-g));
        } else {
            const FixationProfile prof(cfg.alpha, cfg.beta);
            out = prof.psi_values(std::span<const double>(nodes.data() + 1, nodes.size() - 2));
            out.insert(out.begin(), 0.0);
            out.push_back(1.0);
        }
        return out;
    };

    std::vector<int> sizes = cfg.N_list;
    if (sizes.empty()) sizes = {cfg.cells};
    double prev_err = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        KimuraSolver solver(sizes[i], params);
        solver.set_initial([](double x) { return x; });
        solver.run_to_stationary(1e-9, cfg.time_horizon * 10.0);
        const auto nodes = solver.solution().nodes();
        const auto refv = reference(nodes);
        double err = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k)
            err = std::max(err, std::abs(solver.solution().f[k] - refv[k]));
        const double order = i == 0 ? 0.0 : std::log2(prev_err / err);
        rep.study.push_back({double(sizes[i]), err, solver.stationary_residual(), order});
        prev_err = err;
        if (sizes[i] == sizes.back()) {
            auto& snap = rep.snapshots["profile"];
            snap.mass_checked = false;
            for (std::size_t k = 0; k < nodes.size(); ++k)
                snap.rows.push_back({solver.t(), nodes[k], solver.solution().f[k], 0.0, 0.0});
        }
    }
    return rep;
}

// ---------------------------------------------------------------- mixed-dominance

RunReport run_mixed_dominance(const ExperimentConfig& cfg) {
    RunReport rep;
    rep.config = cfg;
    const double xstar = cfg.beta / (cfg.beta - cfg.alpha);
    // theta sweep against the ESS strategist
    for (int k = 1; k <= 10; ++k) {
        const double theta = k / 11.0;
        if (std::abs(theta - xstar) < 1e-12) continue;
        const bool flow_dom = dominates(theta, xstar, cfg.alpha, cfg.beta);
        const bool fix_dom = dominates_by_fixation(theta, xstar, cfg.alpha, cfg.beta);
        rep.study.push_back({theta, flow_dom ? 1.0 : 0.0, fix_dom ? 1.0 : 0.0,
                             flow_dom == fix_dom ? 1.0 : 0.0});
    }
    // seeded random agreement draws
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uth(0.02, 0.98), upar(-25.0, 25.0);
    int agree = 0, total = 0;
    for (int k = 0; k < 20; ++k) {
        const double t1 = uth(rng);
        double t2 = uth(rng);
        if (std::abs(t1 - t2) < 1e-3) t2 = std::clamp(t2 + 0.05, 0.02, 0.98);
        const double al = upar(rng), be = upar(rng);
        const bool a = dominates(t1, t2, al, be);
        const bool b = dominates_by_fixation(t1, t2, al, be);
        agree += (a == b);
        ++total;
    }
    rep.notes.push_back("criteria agreement on random draws: " + std::to_string(agree) + "/" +
                        std::to_string(total));
    return rep;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    switch (config.experiment) {
        case Experiment::DiscreteVsPde: rep = run_discrete_vs_pde(config); break;
        case Experiment::StrongSelection: rep = run_strong_selection(config); break;
        case Experiment::HawkdovePeak: rep = run_hawkdove_peak(config); break;
        case Experiment::KimuraStationary: rep = run_kimura_stationary(config); break;
        case Experiment::MixedDominance: rep = run_mixed_dominance(config); break;
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return rep;
}

RunReport convergence_study(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    switch (config.experiment) {
        case Experiment::DiscreteVsPde: rep = study_discrete_vs_pde(config); break;
        case Experiment::StrongSelection: rep = run_strong_selection(config); break;
        case Experiment::KimuraStationary: rep = run_kimura_stationary(config); break;
        default:
            throw std::invalid_argument("convergence_study: experiment has no study protocol: " +
                                        to_string(config.experiment));
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return rep;
}

}  // namespace moran
