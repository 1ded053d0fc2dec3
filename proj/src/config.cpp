#include "wcl/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "wcl/errors.hpp"
#include "wcl/fock.hpp"
#include "wcl/moments.hpp"
#include "wcl/pule_bounds.hpp"
#include "wcl/qsde.hpp"
#include "wcl/simulator.hpp"

namespace wcl {

using nlohmann::json;

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

namespace {

Complex parse_complex(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(field + ": complex values are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix parse_matrix(const json& j, Eigen::Index dim, const std::string& field) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim * dim)
        throw ValidationError(field + ": expected row-major array of " +
                              std::to_string(dim * dim) + " [re, im] pairs");
    CMatrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
            m(r, c) = parse_complex(j[static_cast<std::size_t>(r * dim + c)],
                                    field + "[" + std::to_string(r * dim + c) + "]");
    return m;
}

CVector parse_vector(const json& j, Eigen::Index dim, const std::string& field) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim)
        throw ValidationError(field + ": expected array of " + std::to_string(dim) +
                              " [re, im] pairs");
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v(i) = parse_complex(j[static_cast<std::size_t>(i)],
                             field + "[" + std::to_string(i) + "]");
    return v;
}

CorrelationModel parse_correlation(const json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw ValidationError("correlation: object with a 'family' tag required");
    const std::string family = j["family"].get<std::string>();
    if (family == "exponential")
        return CorrelationModel::exponential(j.value("tau", 1.0), j.value("sigma0", 0.0));
    if (family == "gaussian")
        return CorrelationModel::gaussian(j.value("tau", 1.0), j.value("sigma0", 0.0));
    if (family == "tabulated") {
        if (!j.contains("csv"))
            throw ValidationError("correlation.csv: path to (t, Re G, Im G) samples required");
        std::ifstream in(j["csv"].get<std::string>());
        if (!in) throw ValidationError("correlation.csv: cannot open file");
        std::vector<double> times;
        std::vector<Complex> values;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            for (char& c : line)
                if (c == ',') c = ' ';
            std::istringstream row(line);
            double t, re, im;
            if (row >> t >> re >> im) {
                times.push_back(t);
                values.emplace_back(re, im);
            }
        }
        return CorrelationModel::tabulated(std::move(times), std::move(values),
                                           j.value("tail_bound", 0.0));
    }
    throw ValidationError("correlation.family: unknown tag '" + family + "'");
}

void apply_overrides(ExperimentConfig& config, const CliOverrides& overrides) {
    if (overrides.t) config.t = *overrides.t;
    if (overrides.dt) config.dt = *overrides.dt;
    if (overrides.n_max) config.n_max = *overrides.n_max;
    if (!overrides.lambdas.empty()) config.lambdas = overrides.lambdas;
    if (overrides.out) config.output_directory = *overrides.out;
    if (overrides.experiment) config.experiment = *overrides.experiment;
}

void finalize(ExperimentConfig& config, const json& source) {
    if (config.n_max == 0)
        config.n_max = config.experiment == "bounds" ? 40
                       : config.experiment == "moments" ? 6
                                                        : 2;
    for (double lambda : config.lambdas)
        if (lambda <= 0.0)
            throw ValidationError("experiment.lambda: entries must be positive");
    for (std::size_t i = 1; i < config.lambdas.size(); ++i)
        if (config.lambdas[i] >= config.lambdas[i - 1])
            throw ValidationError("experiment.lambda: entries must strictly decrease");
    if (config.phi1.size() == 0) {
        config.phi1 = CVector::Zero(config.system.dim);
        config.phi1(0) = 1.0;
    }
    if (config.phi2.size() == 0) config.phi2 = config.phi1;
    json canon = source;
    canon["resolved"] = {{"t", config.t},     {"dt", config.dt},
                         {"n_max", config.n_max}, {"lambda", config.lambdas},
                         {"experiment", config.experiment}, {"seed", config.seed}};
    config.canonical_text = canon.dump();
}

ExperimentConfig config_from_json(const json& j, const CliOverrides& overrides) {
    ExperimentConfig config;
    if (!j.contains("system")) throw ValidationError("system: section required");
    const json& sys = j["system"];
    if (!sys.contains("dim")) throw ValidationError("system.dim: required");
    config.system.dim = sys["dim"].get<int>();
    if (config.system.dim < 1 || config.system.dim > 16)
        throw ValidationError("system.dim: must be in 1..16");
    for (const char* name : {"E00", "E01", "E10", "E11"}) {
        if (!sys.contains(name))
            throw ValidationError(std::string("system.") + name + ": required");
    }
    config.system.e00 = parse_matrix(sys["E00"], config.system.dim, "system.E00");
    config.system.e01 = parse_matrix(sys["E01"], config.system.dim, "system.E01");
    config.system.e10 = parse_matrix(sys["E10"], config.system.dim, "system.E10");
    config.system.e11 = parse_matrix(sys["E11"], config.system.dim, "system.E11");
    config.system.omega = sys.value("omega", 0.0);
    if (!j.contains("correlation")) throw ValidationError("correlation: section required");
    config.correlation = parse_correlation(j["correlation"]);
    try {
        config.system.validate_against(config.correlation);
    } catch (const Error& e) {
        throw ValidationError(std::string("system: ") + e.what());
    }
    if (j.contains("amplitudes")) {
        for (std::size_t i = 0; i < j["amplitudes"].size(); ++i) {
            const json& a = j["amplitudes"][i];
            const std::string field = "amplitudes[" + std::to_string(i) + "]";
            if (!a.contains("interval") || !a["interval"].is_array() ||
                a["interval"].size() != 2)
                throw ValidationError(field + ".interval: [S, T] required");
            SmearedAmplitude amp;
            amp.interval.lo = a["interval"][0].get<double>();
            amp.interval.hi = a["interval"][1].get<double>();
            if (!(amp.interval.lo >= 0.0) || !(amp.interval.hi > amp.interval.lo))
                throw ValidationError(field + ".interval: need 0 <= S < T");
            if (a.contains("coupling"))
                amp.coupling = parse_complex(a["coupling"], field + ".coupling");
            config.amplitudes.push_back(amp);
        }
    }
    while (config.amplitudes.size() < 2) config.amplitudes.push_back(SmearedAmplitude{});
    if (j.contains("experiment")) {
        const json& exp = j["experiment"];
        config.experiment = exp.value("type", "coefficients");
        config.t = exp.value("t", config.t);
        config.dt = exp.value("dt", config.dt);
        config.n_max = exp.value("n_max", config.n_max);
        if (exp.contains("lambda")) {
            config.lambdas.clear();
            for (const auto& v : exp["lambda"]) config.lambdas.push_back(v.get<double>());
        }
        config.observable = exp.value("observable", config.observable);
        config.noise = exp.value("noise", config.noise);
        config.polar_repair = exp.value("polar_repair", false);
        if (exp.contains("phi1"))
            config.phi1 = parse_vector(exp["phi1"], config.system.dim, "experiment.phi1");
        if (exp.contains("phi2"))
            config.phi2 = parse_vector(exp["phi2"], config.system.dim, "experiment.phi2");
    } else {
        config.experiment = "coefficients";
    }
    config.seed = j.value("seed", 1u);
    if (j.contains("output")) {
        config.output_directory = j["output"].value("directory", config.output_directory);
        if (j["output"].contains("formats")) {
            config.formats.clear();
            for (const auto& f : j["output"]["formats"])
                config.formats.push_back(f.get<std::string>());
        }
    }
    apply_overrides(config, overrides);
    finalize(config, j);
    return config;
}

json default_config_json() {
    json j;
    j["system"] = {{"dim", 2},
                   {"E00", json::array({json::array({0.0, 0.0}), json::array({0.0, 0.0}),
                                        json::array({0.0, 0.0}), json::array({0.0, 0.0})})},
                   {"E01", json::array({json::array({0.0, 0.0}), json::array({1.0, 0.0}),
                                        json::array({0.0, 0.0}), json::array({0.0, 0.0})})},
                   {"E10", json::array({json::array({0.0, 0.0}), json::array({0.0, 0.0}),
                                        json::array({1.0, 0.0}), json::array({0.0, 0.0})})},
                   {"E11", json::array({json::array({0.0, 0.0}), json::array({0.0, 0.0}),
                                        json::array({0.0, 0.0}), json::array({0.0, 0.0})})}};
    j["correlation"] = {{"family", "exponential"}, {"tau", 0.5}, {"sigma0", 0.0}};
    j["amplitudes"] = json::array(
        {json{{"interval", json::array({0.0, 1.0})}, {"coupling", json::array({0.4, 0.0})}},
         json{{"interval", json::array({0.0, 1.0})}, {"coupling", json::array({0.3, 0.2})}}});
    j["experiment"] = {{"type", "coefficients"}};
    j["seed"] = 1;
    j["output"] = {{"directory", "out"}};
    return j;
}

CMatrix named_observable(const ExperimentConfig& config) {
    const Eigen::Index dim = config.system.dim;
    CMatrix x = CMatrix::Zero(dim, dim);
    if (config.observable == "sigma_z" && dim == 2) {
        x(0, 0) = 1.0;
        x(1, 1) = -1.0;
    } else if (config.observable == "sigma_x" && dim == 2) {
        x(0, 1) = 1.0;
        x(1, 0) = 1.0;
    } else if (config.observable == "identity") {
        x = CMatrix::Identity(dim, dim);
    } else {
        throw ValidationError("experiment.observable: unknown name '" + config.observable +
                              "' for dim " + std::to_string(dim));
    }
    return x;
}

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(complex_json(m(r, c)));
    return out;
}

struct ArtifactWriter {
    const ExperimentConfig& config;
    std::vector<std::string> artifacts;
    json tolerances = json::object();

    explicit ArtifactWriter(const ExperimentConfig& cfg) : config(cfg) {
        std::filesystem::create_directories(config.output_directory);
    }

    std::string path(const std::string& name) const {
        return (std::filesystem::path(config.output_directory) / name).string();
    }

    void write_text(const std::string& name, const std::string& text) {
        std::ofstream out(path(name), std::ios::binary);
        out << text;
        artifacts.push_back(name);
    }

    void write_json(const std::string& name, json j) {
        j["config_hash"] = fmt_hash();
        j["version"] = kVersion;
        write_text(name, j.dump(2) + "\n");
    }

    std::string fmt_hash() const {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%016llx",
                      static_cast<unsigned long long>(fnv1a_hash(config.canonical_text)));
        return buffer;
    }

    void manifest() {
        json j;
        j["artifacts"] = artifacts;
        j["tolerances"] = tolerances;
        j["experiment"] = config.experiment;
        write_json("manifest.json", j);
    }
};

int run_coefficients(const ExperimentConfig& config, ArtifactWriter& writer) {
    const QsdeCoefficients coeffs = limit_coefficients(config.system, config.correlation);
    const auto res = coeffs.residuals();
    json j;
    j["L00"] = matrix_json(coeffs.l00);
    j["L01"] = matrix_json(coeffs.l01);
    j["L10"] = matrix_json(coeffs.l10);
    j["L11"] = matrix_json(coeffs.l11);
    j["W"] = matrix_json(coeffs.w);
    j["L"] = matrix_json(coeffs.l);
    j["H"] = matrix_json(coeffs.h);
    j["gamma"] = coeffs.gamma;
    j["kappa_plus"] = complex_json(coeffs.kappa_plus);
    j["kappa_minus"] = complex_json(coeffs.kappa_minus);
    j["residuals"] = {{"w_unitary", res.w_unitary},
                      {"h_hermitian", res.h_hermitian},
                      {"l11", res.l11_consistent},
                      {"l10", res.l10_consistent},
                      {"l01", res.l01_consistent},
                      {"l00", res.l00_consistent}};
    writer.tolerances["coefficient_residual"] = res.max();
    writer.write_json("coefficients.json", j);
    return res.max() < 1e-12 ? 0 : 1;
}

int run_bounds(const ExperimentConfig& config, ArtifactWriter& writer) {
    const BoundConstants c = bound_constants(config.system, config.amplitudes[0],
                                             config.amplitudes[1], config.correlation);
    const BoundParameters params = BoundParameters::from_constants(
        config.correlation.big_k(), c.c11, c.cmax, config.t, config.correlation.gamma());
    std::ostringstream csv;
    csv << "n,level_bound,cumulative,omega,tail\n";
    const double total = omega(params);
    double cumulative = 0.0;
    for (int n = 0; n <= config.n_max; ++n) {
        const double level = level_bound(n, params);
        cumulative += level;
        csv << n << ',' << format_number(level) << ',' << format_number(cumulative) << ','
            << format_number(total) << ',' << format_number(tail_bound(n, params)) << '\n';
    }
    writer.write_text("bounds.csv", csv.str());
    writer.tolerances["bounds_cumulative_gap"] = total - cumulative;
    return cumulative <= total * (1.0 + 1e-12) ? 0 : 1;
}

int run_dyson_sweep(const ExperimentConfig& config, ArtifactWriter& writer) {
    std::ostringstream csv;
    csv << "n,diagram_id,type,lambda,re,im,abs_err_vs_limit,bound,bound_margin\n";
    bool bounds_ok = true;
    const int n = std::min(config.n_max, 4);
    const std::vector<SweepRow> rows =
        dyson_sweep(config.correlation, n, config.t, config.lambdas);
    for (const SweepRow& row : rows) {
        csv << row.n << ',' << row.diagram_id << ','
            << (row.type == DiagramType::TypeI ? "I" : "II") << ','
            << format_number(row.lambda) << ',' << format_number(row.value.real()) << ','
            << format_number(row.value.imag()) << ','
            << format_number(row.abs_err_vs_limit) << ',' << format_number(row.bound) << ','
            << format_number(row.bound_margin) << '\n';
        bounds_ok = bounds_ok && row.bound_margin > -0.05 * row.bound;
    }
    writer.write_text("dyson_sweep.csv", csv.str());
    writer.tolerances["bound_headroom"] = 0.05;
    return bounds_ok ? 0 : 1;
}

int run_moments(const ExperimentConfig& config, ArtifactWriter& writer) {
    std::mt19937 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int modes = 3;
    CMatrix r(modes, modes);
    for (int i = 0; i < modes; ++i)
        for (int j = 0; j < modes; ++j) r(i, j) = Complex(normal(rng), normal(rng));
    const CMatrix gram = (r.adjoint() * r) / static_cast<double>(modes);
    const int n_max = std::min(config.n_max, 6);
    const TruncatedFock fock(modes, std::max(n_max, 2), gram);
    std::uniform_int_distribution<int> length(1, n_max);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> mode(0, modes - 1);
    std::ostringstream csv;
    csv << "word_id,n,re_partition,im_partition,abs_err_fock,abs_err_pule\n";
    double max_fock = 0.0, max_pule = 0.0;
    for (int w = 0; w < 50; ++w) {
        VertexWord word;
        word.vertices.resize(static_cast<std::size_t>(length(rng)));
        for (auto& v : word.vertices) {
            v.alpha = bit(rng);
            v.beta = bit(rng);
            v.f_id = mode(rng);
            v.g_id = mode(rng);
        }
        word.inner = [&gram](int g, int f) { return gram(g, f); };
        const Complex p = vacuum_moment_partition(word);
        const double err_fock = std::abs(p - fock.vacuum_moment(word.vertices));
        const double err_pule = std::abs(p - vacuum_moment_pule(word));
        max_fock = std::max(max_fock, err_fock);
        max_pule = std::max(max_pule, err_pule);
        csv << w << ',' << word.size() << ',' << format_number(p.real()) << ','
            << format_number(p.imag()) << ',' << format_number(err_fock) << ','
            << format_number(err_pule) << '\n';
    }
    writer.write_text("moments.csv", csv.str());
    writer.tolerances["max_abs_err_fock"] = max_fock;
    writer.tolerances["max_abs_err_pule"] = max_pule;
    return (max_fock < 1e-10 && max_pule < 1e-12) ? 0 : 1;
}

int run_ito_audit(const ExperimentConfig& config, ArtifactWriter& writer) {
    const SliceSpace slices = build_slices(config.correlation.gamma(), config.dt);
    const ItoAuditReport report = ito_table_audit(slices);
    json pairs = json::array();
    for (const ItoPairRecord& rec : report.pairs)
        pairs.push_back({{"pair", {rec.alpha, rec.beta, rec.mu, rec.nu}},
                         {"table_pair", rec.table_pair},
                         {"residual", rec.residual},
                         {"vacuum_norm", rec.vacuum_norm},
                         {"vanishes_exactly", rec.vanishes_exactly}});
    json j;
    j["pairs"] = pairs;
    j["table_pairs"] = report.table_pairs;
    j["vanishing_pairs"] = report.vanishing_pairs;
    j["max_table_residual"] = report.max_table_residual;
    writer.write_json("ito_audit.json", j);
    writer.tolerances["max_table_residual"] = report.max_table_residual;
    return report.max_table_residual == 0.0 ? 0 : 1;
}

int run_simulate(const ExperimentConfig& config, ArtifactWriter& writer) {
    const QsdeCoefficients coeffs = limit_coefficients(config.system, config.correlation);
    const CMatrix x = named_observable(config);
    NoiseState noise = NoiseState::vacuum();
    if (config.noise == "coherent")
        noise = NoiseState::coherent(config.amplitudes[0].limit(),
                                     config.amplitudes[1].limit());
    else if (config.noise != "vacuum")
        throw ValidationError("experiment.noise: must be 'vacuum' or 'coherent'");

    auto run_at = [&](double dt, Trajectory* heis_out, Trajectory* unit_out) {
        const int steps = std::max(1, static_cast<int>(std::lround(config.t / dt)));
        const SliceSpace slices = build_slices(config.correlation.gamma(), dt);
        *heis_out = evolve_heisenberg(coeffs, slices, x, steps, config.phi1, config.phi2,
                                      noise);
        *unit_out = evolve_unitary(coeffs, slices, steps, config.phi1, config.phi2, noise,
                                   config.polar_repair);
    };
    Trajectory heis, unit;
    run_at(config.dt, &heis, &unit);

    std::ostringstream csv;
    csv << "step,time,re_heisenberg,im_heisenberg,re_unitary,im_unitary,defect\n";
    for (std::size_t k = 0; k < heis.steps.size(); ++k) {
        csv << heis.steps[k].step << ',' << format_number(heis.steps[k].time) << ','
            << format_number(heis.steps[k].value.real()) << ','
            << format_number(heis.steps[k].value.imag()) << ','
            << format_number(unit.steps[k].value.real()) << ','
            << format_number(unit.steps[k].value.imag()) << ','
            << format_number(unit.steps[k].defect) << '\n';
    }
    writer.write_text("trajectory.csv", csv.str());

    // Oracles: the Lindblad semigroup for the vacuum Heisenberg value and the
    // amplitude-dressed ODE for the unitary matrix element.
    const Complex heis_oracle =
        config.noise == "vacuum"
            ? config.phi1.dot(lindblad_semigroup(coeffs, x, config.t) * config.phi2)
            : Complex{0.0, 0.0};
    const Complex unit_oracle =
        matrix_element_ode(coeffs, config.phi1, config.phi2, noise.bra, noise.ket,
                           config.t)
            .value;
    json summary;
    summary["final_heisenberg"] = complex_json(heis.final_value);
    summary["final_unitary"] = complex_json(unit.final_value);
    summary["unitary_oracle"] = complex_json(unit_oracle);
    summary["unitary_error"] = std::abs(unit.final_value - unit_oracle);
    summary["max_step_defect"] = unit.max_step_defect;
    summary["polar_repaired"] = unit.polar_repaired;
    if (config.noise == "vacuum") {
        summary["heisenberg_oracle"] = complex_json(heis_oracle);
        summary["heisenberg_error"] = std::abs(heis.final_value - heis_oracle);
    }
    // Convergence ratios from dt, dt/2, dt/4.
    std::vector<double> heis_err, unit_err;
    for (double dt : {config.dt, config.dt / 2.0, config.dt / 4.0}) {
        Trajectory h, u;
        run_at(dt, &h, &u);
        if (config.noise == "vacuum") heis_err.push_back(std::abs(h.final_value - heis_oracle));
        unit_err.push_back(std::abs(u.final_value - unit_oracle));
    }
    json ratios = json::object();
    if (heis_err.size() == 3 && heis_err[1] > 0.0 && heis_err[2] > 0.0)
        ratios["heisenberg"] = {heis_err[0] / heis_err[1], heis_err[1] / heis_err[2]};
    if (unit_err[1] > 0.0 && unit_err[2] > 0.0)
        ratios["unitary"] = {unit_err[0] / unit_err[1], unit_err[1] / unit_err[2]};
    summary["convergence_ratios"] = ratios;
    writer.tolerances["unitary_error"] = summary["unitary_error"];
    writer.write_json("simulate_summary.json", summary);
    const double budget = 10.0 * unit.defect_constant * config.dt;
    return unit.max_step_defect <= budget ? 0 : 1;
}

}  // namespace

ExperimentConfig load_config(const std::string& path, const CliOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j, overrides);
}

ExperimentConfig default_config(const CliOverrides& overrides) {
    return config_from_json(default_config_json(), overrides);
}

int run_experiment(const ExperimentConfig& config) {
    ArtifactWriter writer(config);
    int status = 0;
    if (config.experiment == "coefficients") status = run_coefficients(config, writer);
    else if (config.experiment == "bounds") status = run_bounds(config, writer);
    else if (config.experiment == "dyson-sweep") status = run_dyson_sweep(config, writer);
    else if (config.experiment == "moments") status = run_moments(config, writer);
    else if (config.experiment == "ito-audit") status = run_ito_audit(config, writer);
    else if (config.experiment == "simulate") status = run_simulate(config, writer);
    else throw ValidationError("experiment.type: unknown experiment '" + config.experiment + "'");
    writer.manifest();
    return status;
}

}  // namespace wcl
