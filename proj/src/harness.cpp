#include "dynmap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dynmap/errors.hpp"
#include "dynmap/io.hpp"

namespace dynmap {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse '" + t + "' as a number for " + what);
    }
    if (used != t.size()) throw ConfigError("trailing characters in '" + t + "' for " + what);
    return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        if (!item.empty()) out.push_back(parse_double(item, what));
    }
    return out;
}

Complex parse_complex(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return {parse_double(text, "matrix entry"), 0.0};
    return {parse_double(text.substr(0, colon), "matrix entry"),
            parse_double(text.substr(colon + 1), "matrix entry")};
}

Matrix named_operator(const std::string& name) {
    if (name == "sx") return pauli::x();
    if (name == "sy") return pauli::y();
    if (name == "sz") return pauli::z();
    if (name == "id") return pauli::identity();
    if (name == "sp" || name == "sm") {
        Matrix m = Matrix::Zero(2, 2);
        if (name == "sp") m(0, 1) = 1.0;
        else m(1, 0) = 1.0;
        return m;
    }
    if (name == "up" || name == "down") {
        Matrix m = Matrix::Zero(2, 2);
        if (name == "up") m(0, 0) = 1.0;
        else m(1, 1) = 1.0;
        return m;
    }
    throw ConfigError("unknown operator name '" + name + "'");
}

bool is_matrix_literal(const std::string& text) {
    return std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isdigit(c) || std::isspace(c) || c == '.' || c == '-' || c == '+' || c == 'e' ||
               c == 'E' || c == ':' || c == ';';
    });
}

}  // namespace

Matrix parse_matrix(const std::string& text) {
    std::vector<std::vector<Complex>> rows;
    for (const auto& row_text : split(text, ';')) {
        std::istringstream in(row_text);
        std::vector<Complex> row;
        std::string entry;
        while (in >> entry) row.push_back(parse_complex(entry));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("empty matrix literal");
    const std::size_t cols = rows.front().size();
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw ConfigError("matrix literal rows differ in length");
        for (std::size_t j = 0; j < cols; ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
    return m;
}

Matrix parse_operator(const std::string& raw) {
    const std::string text = trim(raw);
    if (text.empty()) throw ConfigError("empty operator expression");
    if (is_matrix_literal(text)) return parse_matrix(text);

    // sum of terms [coef*]name, e.g. "-0.5*sz + 0.5*sx"
    std::vector<std::string> terms;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        const bool sign = (c == '+' || c == '-');
        const char prev = i > 0 ? text[i - 1] : ' ';
        if (sign && !trim(current).empty() && prev != 'e' && prev != 'E' && prev != '*') {
            terms.push_back(trim(current));
            current.clear();
        }
        current += c;
    }
    terms.push_back(trim(current));

    Matrix sum;
    for (auto term : terms) {
        double coef = 1.0;
        if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
            if (term[0] == '-') coef = -1.0;
            term = trim(term.substr(1));
        }
        std::string name = term;
        const auto star = term.find('*');
        if (star != std::string::npos) {
            coef *= parse_double(term.substr(0, star), "operator coefficient");
            name = trim(term.substr(star + 1));
        }
        const Matrix op = coef * named_operator(name);
        if (sum.size() == 0) sum = op;
        else sum += op;
    }
    return sum;
}

// ---------------------------------------------------------------------------

EmbeddingSpec ModelConfig::embedding_spec() const {
    EmbeddingSpec spec;
    spec.system = system;
    spec.mode_frequency = mode_frequency;
    spec.coupling = mode_coupling;
    spec.decay = mode_decay;
    spec.n_max = n_max;
    return spec;
}

Generator ModelConfig::lindblad_generator() const {
    if (lindblad_operators.size() != lindblad_rates.size()) {
        throw ConfigError("lindblad operators and rates differ in count");
    }
    Matrix l = commutator_superop(system.hamiltonian);
    for (std::size_t i = 0; i < lindblad_operators.size(); ++i) {
        l += lindblad_rates[i] * dissipator_superop(lindblad_operators[i]);
    }
    return Generator(std::move(l));
}

std::size_t SweepConfig::steps_for(double t) const {
    const double rounded = std::round(t / dt);
    if (!(rounded >= 0.0)) throw ConfigError("time " + io::format_double(t) + " is negative");
    return static_cast<std::size_t>(rounded);
}

void SweepConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (n_short == 0) throw ConfigError("the short-time horizon must contain at least one step");
    if (tau_c.empty()) throw ConfigError("tau_c list is empty");
    const double tmax = *std::max_element(tau_c.begin(), tau_c.end());
    for (double t : tau_c) {
        if (steps_for(t) == 0) throw ConfigError("tau_c must be at least one step");
    }
    if (!(t_ref > tmax)) throw ConfigError("t_ref must exceed every tau_c");
    if (n_short < steps_for(tmax)) {
        throw ConfigError("short-time data end before the largest tau_c");
    }
    n_ref();
    const Index d = model.system.dim();
    if (observable.rows() != d || observable.cols() != d) throw ConfigError("observable dimension mismatch");
    if (initial_state.rows() != d || initial_state.cols() != d) throw ConfigError("initial state dimension mismatch");
    if (!is_hermitian(observable, 1e-12)) throw ConfigError("observable is not Hermitian");
    try {
        model.system.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const DimensionMismatch& e) {
        throw ConfigError(e.what());
    }
    if (model.propagator == PropagatorKind::quapi && !model.density) {
        throw ConfigError("the path-integral propagator needs a spectral density");
    }
    if (workers == 0) throw ConfigError("workers must be at least 1");
}

SweepConfig preset_config(const std::string& name) {
    SweepConfig c;
    c.model.name = name;
    c.observable = pauli::z();
    c.initial_state = named_operator("up");
    if (name == "embedding_mode") {
        c.model.propagator = PropagatorKind::embedding;
        c.model.system.hamiltonian = 0.5 * pauli::x();
        c.model.system.coupling = 0.5 * pauli::z();
        c.model.mode_frequency = 1.0;
        c.model.mode_coupling = 0.4;
        c.model.mode_decay = 0.5;
        c.model.n_max = 6;
        c.dt = 0.1;
        c.n_short = 400;
        c.t_ref = 400.0;
        c.tau_c = {2.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0};
        return c;
    }
    const PaperModel pm = paper_model(name);
    c.model.propagator = PropagatorKind::quapi;
    c.model.system = pm.system;
    c.model.density = pm.density;
    c.dt = pm.dt;
    c.t_ref = pm.t_ref;
    if (name == "subohmic_fig1") {
        c.model.kmax = 5;
        c.n_short = c.steps_for(40.0);
        c.tau_c = {2.0, 5.0, 12.0, 20.0, 30.0, 40.0};
    } else if (name == "drude_lorentz_fig2") {
        c.model.kmax = 5;
        c.n_short = c.steps_for(20.0);
        c.tau_c = {1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 16.0, 20.0};
    } else {
        c.model.kmax = 5;
        c.n_short = c.steps_for(10.0);
        c.tau_c = {1.0, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0};
    }
    return c;
}

namespace {

namespace pt = boost::property_tree;

std::optional<std::string> get(const pt::ptree& tree, const std::string& key) {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '/'))) return trim(*v);
    return std::nullopt;
}

double get_double(const pt::ptree& tree, const std::string& key, double fallback) {
    const auto v = get(tree, key);
    return v ? parse_double(*v, key) : fallback;
}

double require_double(const pt::ptree& tree, const std::string& key) {
    const auto v = get(tree, key);
    if (!v) throw ConfigError("missing key " + key);
    return parse_double(*v, key);
}

bool parse_bool(const std::string& text, const std::string& key) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("cannot parse '" + text + "' as a boolean for " + key);
}

std::size_t to_count(double v, const std::string& key) {
    if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError(key + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "system/preset", "system/hamiltonian", "system/coupling", "system/temperature",
        "system/initial_state", "system/observable",
        "bath/type", "bath/alpha", "bath/s", "bath/omega_c", "bath/lambda", "bath/gamma",
        "bath/c_e", "bath/c_h", "bath/omega_e", "bath/omega_h", "bath/table",
        "grid/dt", "grid/t_short", "grid/t_ref",
        "propagator/type", "propagator/kmax", "propagator/tail_folding", "propagator/memory_budget",
        "propagator/mode_frequency", "propagator/mode_coupling", "propagator/mode_decay",
        "propagator/n_max", "propagator/collapse", "propagator/rates",
        "extrapolation/tau_c", "extrapolation/singular_threshold", "extrapolation/average_last",
        "extrapolation/workers", "extrapolation/output_dir"};
    return keys;
}

}  // namespace

SweepConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
        for (const auto& [key, value] : body) {
            const std::string full = section + "/" + key;
            const auto& keys = known_keys();
            if (std::find(keys.begin(), keys.end(), full) == keys.end()) {
                throw ConfigError("unknown config key [" + section + "] " + key);
            }
        }
    }

    SweepConfig c;
    if (const auto preset = get(tree, "system/preset")) {
        c = preset_config(*preset);
    } else {
        c.observable = pauli::z();
        c.initial_state = named_operator("up");
    }
    ModelConfig& m = c.model;

    if (const auto h = get(tree, "system/hamiltonian")) m.system.hamiltonian = parse_operator(*h);
    if (const auto o = get(tree, "system/coupling")) m.system.coupling = parse_operator(*o);
    m.system.temperature = get_double(tree, "system/temperature", m.system.temperature);
    if (const auto r = get(tree, "system/initial_state")) c.initial_state = parse_operator(*r);
    if (const auto o = get(tree, "system/observable")) c.observable = parse_operator(*o);
    if (m.system.hamiltonian.size() == 0) throw ConfigError("missing key system/hamiltonian");
    if (m.system.coupling.size() == 0) m.system.coupling = Matrix::Zero(m.system.dim(), m.system.dim());

    if (const auto type = get(tree, "bath/type")) {
        if (*type == "subohmic") {
            m.density = SpectralDensity::subohmic(require_double(tree, "bath/alpha"), require_double(tree, "bath/s"),
                                                  require_double(tree, "bath/omega_c"));
        } else if (*type == "drude_lorentz") {
            m.density = SpectralDensity::drude_lorentz(require_double(tree, "bath/lambda"),
                                                       require_double(tree, "bath/gamma"));
        } else if (*type == "qd_phonon") {
            m.density = SpectralDensity::qd_phonon(require_double(tree, "bath/c_e"), require_double(tree, "bath/c_h"),
                                                   require_double(tree, "bath/omega_e"),
                                                   require_double(tree, "bath/omega_h"));
        } else if (*type == "table") {
            const auto file = get(tree, "bath/table");
            if (!file) throw ConfigError("missing key bath/table");
            std::filesystem::path p(*file);
            if (p.is_relative()) p = base_dir / p;
            m.density = load_spectral_table(p.string());
        } else if (*type == "none") {
            m.density.reset();
        } else {
            throw ConfigError("unknown bath type '" + *type + "'");
        }
    }

    c.dt = get_double(tree, "grid/dt", c.dt);
    if (!(c.dt > 0.0)) throw ConfigError("grid/dt must be positive");
    if (const auto ts = get(tree, "grid/t_short")) c.n_short = c.steps_for(parse_double(*ts, "grid/t_short"));
    c.t_ref = get_double(tree, "grid/t_ref", c.t_ref);

    if (const auto type = get(tree, "propagator/type")) {
        if (*type == "quapi") m.propagator = PropagatorKind::quapi;
        else if (*type == "embedding") m.propagator = PropagatorKind::embedding;
        else if (*type == "lindblad") m.propagator = PropagatorKind::lindblad;
        else throw ConfigError("unknown propagator type '" + *type + "'");
    }
    m.kmax = to_count(get_double(tree, "propagator/kmax", static_cast<double>(m.kmax)), "propagator/kmax");
    if (const auto f = get(tree, "propagator/tail_folding")) {
        if (*f == "auto") m.quapi.tail_folding = TailFolding::automatic;
        else m.quapi.tail_folding = parse_bool(*f, "propagator/tail_folding") ? TailFolding::on : TailFolding::off;
    }
    m.quapi.memory_budget_entries = get_double(tree, "propagator/memory_budget", m.quapi.memory_budget_entries);
    m.mode_frequency = get_double(tree, "propagator/mode_frequency", m.mode_frequency);
    m.mode_coupling = get_double(tree, "propagator/mode_coupling", m.mode_coupling);
    m.mode_decay = get_double(tree, "propagator/mode_decay", m.mode_decay);
    m.n_max = static_cast<int>(to_count(get_double(tree, "propagator/n_max", m.n_max), "propagator/n_max"));
    if (const auto ops = get(tree, "propagator/collapse")) {
        m.lindblad_operators.clear();
        for (const auto& op : split(*ops, ',')) m.lindblad_operators.push_back(parse_operator(op));
    }
    if (const auto rates = get(tree, "propagator/rates")) m.lindblad_rates = parse_list(*rates, "propagator/rates");

    if (const auto tc = get(tree, "extrapolation/tau_c")) c.tau_c = parse_list(*tc, "extrapolation/tau_c");
    c.singular_threshold = get_double(tree, "extrapolation/singular_threshold", c.singular_threshold);
    c.tl_options.average_last = to_count(
        get_double(tree, "extrapolation/average_last", static_cast<double>(c.tl_options.average_last)),
        "extrapolation/average_last");
    c.workers = to_count(get_double(tree, "extrapolation/workers", static_cast<double>(c.workers)),
                         "extrapolation/workers");
    if (const auto out = get(tree, "extrapolation/output_dir")) c.output_dir = *out;

    if (m.propagator == PropagatorKind::lindblad) m.lindblad_generator();
    c.validate();
    return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, path.parent_path());
}

// ---------------------------------------------------------------------------

std::vector<ObservablePoint> observable_series(const std::vector<Matrix>& states, const Matrix& observable,
                                               double dt, double t0, const WarningSink& warn) {
    if (!is_hermitian(observable, 1e-12)) throw std::invalid_argument("observable is not Hermitian");
    std::vector<ObservablePoint> out;
    out.reserve(states.size());
    bool warned = false;
    for (std::size_t n = 0; n < states.size(); ++n) {
        if (states[n].rows() != observable.rows() || states[n].cols() != observable.cols()) {
            throw DimensionMismatch("state and observable dimensions differ");
        }
        const Complex v = (observable * states[n]).trace();
        out.push_back({t0 + static_cast<double>(n) * dt, v.real(), v.imag()});
        if (std::abs(v.imag()) > 1e-8 && !warned) {
            warned = true;
            const std::string msg = "observable has imaginary residue " + io::format_double(v.imag()) +
                                    " at t = " + io::format_double(out.back().t);
            if (warn) warn(msg);
            else std::cerr << "warning: " << msg << '\n';
        }
    }
    return out;
}

double trace_distance(const Matrix& a, const Matrix& b) {
    const Matrix diff = a - b;
    const Matrix herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
    return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

InfluenceCoefficients model_eta(const SweepConfig& config, std::size_t horizon) {
    const auto& m = config.model;
    if (!m.density) throw ConfigError("model has no spectral density");
    return eta_coefficients(*m.density, m.system.temperature, config.dt, m.kmax, horizon);
}

namespace {

std::vector<Superoperator> powers(const Superoperator& step, std::size_t count) {
    std::vector<Superoperator> maps;
    maps.reserve(count);
    Superoperator current = step;
    for (std::size_t n = 0; n < count; ++n) {
        if (n > 0) current = step * current;
        maps.push_back(current);
    }
    return maps;
}

DynamicalMapSeries generate_maps_with(const SweepConfig& config, std::size_t count,
                                      const InfluenceCoefficients* coeffs) {
    const auto& m = config.model;
    switch (m.propagator) {
        case PropagatorKind::quapi: {
            if (coeffs) return quapi_propagate(m.system, *coeffs, count, m.quapi);
            return quapi_propagate(m.system, model_eta(config, count), count, m.quapi);
        }
        case PropagatorKind::embedding:
            return embedding_propagate(m.embedding_spec(), config.dt, count).maps;
        case PropagatorKind::lindblad:
            return DynamicalMapSeries(config.dt, 0.0, powers(expm(m.lindblad_generator(), config.dt), count));
    }
    throw ConfigError("unsupported propagator");
}

std::vector<Matrix> reference_with(const SweepConfig& config, std::size_t steps, const InfluenceCoefficients* coeffs) {
    const auto& m = config.model;
    switch (m.propagator) {
        case PropagatorKind::quapi: {
            if (coeffs) return quapi_trajectory(m.system, *coeffs, config.initial_state, steps, m.quapi);
            return quapi_trajectory(m.system, model_eta(config, steps), config.initial_state, steps, m.quapi);
        }
        case PropagatorKind::embedding: {
            const Embedding emb = build_embedding(m.embedding_spec());
            const Matrix step = expm(emb.generator, config.dt).matrix();
            Vector ext = emb.embed * vectorize(config.initial_state);
            std::vector<Matrix> out{config.initial_state};
            out.reserve(steps + 1);
            for (std::size_t n = 0; n < steps; ++n) {
                ext = step * ext;
                out.push_back(devectorize(emb.trace_out * ext));
            }
            return out;
        }
        case PropagatorKind::lindblad: {
            const Matrix step = expm(m.lindblad_generator(), config.dt).matrix();
            Vector v = vectorize(config.initial_state);
            std::vector<Matrix> out{config.initial_state};
            out.reserve(steps + 1);
            for (std::size_t n = 0; n < steps; ++n) {
                v = step * v;
                out.push_back(devectorize(v));
            }
            return out;
        }
    }
    throw ConfigError("unsupported propagator");
}

}  // namespace

DynamicalMapSeries generate_maps(const SweepConfig& config, std::size_t count) {
    return generate_maps_with(config, count, nullptr);
}

std::vector<Matrix> reference_trajectory(const SweepConfig& config, std::size_t steps) {
    return reference_with(config, steps, nullptr);
}

std::vector<CompareRow> compare_rows(const SweepConfig& config, const TransferTensorSeries& tensors,
                                     const LocalMapSeries& local, const Matrix& reference_at_t_ref) {
    const std::size_t n_ref = config.n_ref();
    const double exact = (config.observable * reference_at_t_ref).trace().real();
    std::vector<CompareRow> rows(config.tau_c.size());

    auto job = [&](std::size_t i) {
        CompareRow& row = rows[i];
        row.tau_c = config.tau_c[i];
        const std::size_t k = config.steps_for(row.tau_c);

        Matrix last_ttm;
        extrapolate(tensors, config.initial_state, k, n_ref, [&](std::size_t n, const Matrix& rho) {
            if (n == n_ref) last_ttm = rho;
        });
        row.err_ttm = std::abs((config.observable * last_ttm).trace().real() - exact);
        row.trace_distance_ttm = trace_distance(last_ttm, reference_at_t_ref);

        try {
            const Superoperator es = stationary_map(local, k, config.tl_options);
            row.tl_spectral_stable = spectral_stability(es, config.settings.spectral_stability_tolerance).stable;
            Matrix last_tl;
            extrapolate_tl(
                local, config.initial_state, k, n_ref,
                [&](std::size_t n, const Matrix& rho) {
                    if (n == n_ref) last_tl = rho;
                },
                config.tl_options);
            row.err_tl = std::abs((config.observable * last_tl).trace().real() - exact);
            row.trace_distance_tl = trace_distance(last_tl, reference_at_t_ref);
        } catch (const StationaryMapFlagged&) {
            row.tl_flagged = true;
            row.err_tl = std::numeric_limits<double>::quiet_NaN();
            row.trace_distance_tl = std::numeric_limits<double>::quiet_NaN();
        }
    };

    const std::size_t workers = std::min(config.workers, rows.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) job(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < rows.size(); i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

CompareResult run_compare(const SweepConfig& config) {
    config.validate();
    const std::size_t n_ref = config.n_ref();
    std::optional<InfluenceCoefficients> coeffs;
    if (config.model.propagator == PropagatorKind::quapi) coeffs = model_eta(config, n_ref);
    const InfluenceCoefficients* c = coeffs ? &*coeffs : nullptr;

    CompareResult result;
    result.maps = generate_maps_with(config, config.n_short, c);
    result.reference = reference_with(config, n_ref, c);
    result.tensors = decompose(result.maps);
    result.local = local_maps(result.maps, config.singular_threshold);
    result.rows = compare_rows(config, result.tensors, result.local, result.reference.back());
    return result;
}

// ---------------------------------------------------------------------------

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
    io::CsvWriter w(out, {"tau_c", "err_ttm", "err_tl", "tl_flagged", "tl_spectral_stable", "trace_distance_ttm",
                          "trace_distance_tl"});
    for (const auto& r : rows) {
        w.cell(r.tau_c).cell(r.err_ttm).cell(r.err_tl).cell(r.tl_flagged).cell(r.tl_spectral_stable);
        w.cell(r.trace_distance_ttm).cell(r.trace_distance_tl);
        w.end_row();
    }
}

void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& profile, const std::string& value_column) {
    io::CsvWriter w(out, {"t", value_column});
    for (const auto& p : profile) {
        w.cell(p.t).cell(p.value);
        w.end_row();
    }
}

void write_singular_values_csv(std::ostream& out, const DynamicalMapSeries& maps, double ratio_threshold) {
    const Index l = maps.dim() * maps.dim();
    std::vector<std::string> header{"n", "t"};
    for (Index i = 1; i <= l; ++i) header.push_back("sigma_" + std::to_string(i));
    header.push_back("sigma_min_over_max");
    header.push_back("flagged");
    io::CsvWriter w(out, header);
    for (std::size_t n = 1; n <= maps.size(); ++n) {
        const RealVector s = singular_values(maps.at(n));
        const double ratio = s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
        w.cell(static_cast<long long>(n)).cell(maps.time(n));
        for (Index i = 0; i < s.size(); ++i) w.cell(s(i));
        w.cell(ratio).cell(ratio < ratio_threshold);
        w.end_row();
    }
}

void write_flags_csv(std::ostream& out, const LocalMapSeries& local) {
    io::CsvWriter w(out, {"n", "t", "sigma_min_over_max", "flagged"});
    for (std::size_t n = 0; n < local.size(); ++n) {
        w.cell(static_cast<long long>(n)).cell(local.time(n)).cell(local.flags[n].singular_ratio);
        w.cell(local.flags[n].flagged);
        w.end_row();
    }
}

void write_rates_csv(std::ostream& out, const std::vector<RateRow>& rows, Index dim) {
    const Index count = dim * dim - 1;
    std::vector<std::string> header{"t"};
    for (Index i = 1; i <= count; ++i) header.push_back("gamma_" + std::to_string(i));
    header.push_back("min_rate");
    header.push_back("flagged");
    io::CsvWriter w(out, header);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows) {
        w.cell(r.t);
        for (Index i = 0; i < count; ++i) {
            w.cell(static_cast<std::size_t>(i) < r.rates.size() ? r.rates[static_cast<std::size_t>(i)] : nan);
        }
        w.cell(r.min_rate).cell(r.flagged);
        w.end_row();
    }
}

void write_eta_csv(std::ostream& out, const InfluenceCoefficients& coeffs) {
    io::CsvWriter w(out, {"k", "re", "im"});
    const std::size_t total = coeffs.eta.size() + coeffs.tail.size();
    for (std::size_t k = 0; k < total; ++k) {
        const auto v = coeffs.at(k);
        w.cell(static_cast<long long>(k)).cell(v.real()).cell(v.imag());
        w.end_row();
    }
}

void write_observable_csv(std::ostream& out, const std::vector<ObservablePoint>& series) {
    io::CsvWriter w(out, {"t", "value"});
    for (const auto& p : series) {
        w.cell(p.t).cell(p.value);
        w.end_row();
    }
}

void write_extrapolation_csv(std::ostream& out, const std::vector<double>& tau_c,
                             const std::vector<std::vector<ObservablePoint>>& series) {
    if (tau_c.size() != series.size()) throw std::invalid_argument("one trajectory per tau_c expected");
    io::CsvWriter w(out, {"tau_c", "t", "value"});
    for (std::size_t i = 0; i < tau_c.size(); ++i) {
        for (const auto& p : series[i]) {
            w.cell(tau_c[i]).cell(p.t).cell(p.value);
            w.end_row();
        }
    }
}

namespace {

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + (dir / name).string());
    return out;
}

}  // namespace

void write_compare_outputs(const SweepConfig& config, const CompareResult& result) {
    const auto& dir = config.output_dir;
    {
        auto out = open_output(dir, "compare.csv");
        write_compare_csv(out, result.rows);
    }
    {
        auto out = open_output(dir, "stationarity.csv");
        write_profile_csv(out, stationarity_profile(result.local), "stationarity");
    }
    {
        auto out = open_output(dir, "tensor_norms.csv");
        write_profile_csv(out, tensor_norm_profile(result.tensors), "norm");
    }
    {
        auto out = open_output(dir, "singular_values.csv");
        write_singular_values_csv(out, result.maps, config.singular_threshold);
    }
    {
        auto out = open_output(dir, "flags.csv");
        write_flags_csv(out, result.local);
    }
    {
        auto out = open_output(dir, "observable.csv");
        write_observable_csv(out, observable_series(result.reference, config.observable, config.dt));
    }
}

}  // namespace dynmap
