#include "wavescat/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "wavescat/csv.hpp"
#include "wavescat/errors.hpp"

namespace wavescat {

namespace {

struct Value;
using Table = std::map<std::string, Value>;

struct Value {
    std::variant<double, bool, std::string, Table> v;
    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_table() const { return std::holds_alternative<Table>(v); }
};

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    Table parse() {
        Table root;
        while (!at_end()) {
            skip_space_and_comments();
            if (at_end()) break;
            std::string key = parse_key();
            skip_space();
            expect('=');
            skip_space();
            Value value = parse_value();
            if (root.count(key)) fail("duplicate key '" + key + "'");
            root.emplace(std::move(key), std::move(value));
            skip_space();
            if (!at_end() && peek() == '#') skip_line();
            if (!at_end() && peek() == '\n') ++pos_;
        }
        return root;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        std::size_t line = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i)
            if (text_[i] == '\n') ++line;
        throw ConfigError("config line " + std::to_string(line) + ": " + msg);
    }

    void skip_space() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
    }

    void skip_line() {
        while (!at_end() && peek() != '\n') ++pos_;
    }

    void skip_space_and_comments() {
        for (;;) {
            skip_space();
            if (at_end()) return;
            if (peek() == '#') { skip_line(); continue; }
            if (peek() == '\n') { ++pos_; continue; }
            return;
        }
    }

    void expect(char c) {
        if (at_end() || peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string parse_key() {
        std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                             peek() == '_'))
            ++pos_;
        if (pos_ == start) fail("expected a key");
        return text_.substr(start, pos_ - start);
    }

    Value parse_value() {
        if (at_end()) fail("expected a value");
        const char c = peek();
        if (c == '"') return parse_string();
        if (c == '{') return parse_table();
        return parse_scalar();
    }

    Value parse_string() {
        expect('"');
        std::string out;
        while (!at_end() && peek() != '"') {
            out.push_back(peek());
            ++pos_;
        }
        expect('"');
        return Value{out};
    }

    Value parse_table() {
        expect('{');
        Table table;
        skip_space();
        if (!at_end() && peek() == '}') { ++pos_; return Value{table}; }
        for (;;) {
            skip_space();
            std::string key = parse_key();
            skip_space();
            expect('=');
            skip_space();
            Value value = parse_value();
            if (table.count(key)) fail("duplicate key '" + key + "' in table");
            table.emplace(std::move(key), std::move(value));
            skip_space();
            if (!at_end() && peek() == ',') { ++pos_; continue; }
            expect('}');
            return Value{table};
        }
    }

    Value parse_scalar() {
        std::size_t start = pos_;
        while (!at_end() && peek() != ',' && peek() != '}' && peek() != '\n' &&
               peek() != '#' && peek() != ' ' && peek() != '\t' && peek() != '\r')
            ++pos_;
        std::string token = text_.substr(start, pos_ - start);
        if (token == "true") return Value{true};
        if (token == "false") return Value{false};
        try {
            std::size_t used = 0;
            const double d = std::stod(token, &used);
            if (used != token.size()) fail("malformed number '" + token + "'");
            return Value{d};
        } catch (const std::exception&) {
            fail("cannot parse value '" + token + "'");
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

double get_number(const Table& t, const std::string& key) {
    auto it = t.find(key);
    if (it == t.end() || !it->second.is_number())
        throw ConfigError("missing or non-numeric key '" + key + "'");
    return std::get<double>(it->second.v);
}

double get_number_or(const Table& t, const std::string& key, double fallback) {
    auto it = t.find(key);
    if (it == t.end()) return fallback;
    if (!it->second.is_number()) throw ConfigError("key '" + key + "' must be a number");
    return std::get<double>(it->second.v);
}

void check_keys(const Table& t, const std::set<std::string>& allowed,
                const std::string& where) {
    for (const auto& [key, value] : t)
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class Spec>
Spec parse_kind_spec(const Table& t, const std::string& where) {
    Spec spec;
    auto kind_it = t.find("kind");
    if (kind_it == t.end() || !kind_it->second.is_string())
        throw ConfigError(where + " needs a string 'kind'");
    spec.kind = std::get<std::string>(kind_it->second.v);
    for (const auto& [key, value] : t) {
        if (key == "kind") continue;
        if (key == "path") {
            if (!value.is_string()) throw ConfigError(where + ".path must be a string");
            spec.csv_path = std::get<std::string>(value.v);
            continue;
        }
        if (!value.is_number())
            throw ConfigError(where + "." + key + " must be numeric");
        spec.params[key] = std::get<double>(value.v);
    }
    return spec;
}

}  // namespace

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ExperimentConfig parse_config(const std::string& text) {
    Parser parser(text);
    const Table root = parser.parse();
    check_keys(root,
               {"coefficient", "spectral", "data", "regime", "zone_n", "zone_auto",
                "gamma", "times", "tolerances", "horizon_cap", "seed", "threads",
                "dump_modes", "classify"},
               "config");

    ExperimentConfig cfg;
    cfg.hash = fnv1a_hash(text);

    auto coeff_it = root.find("coefficient");
    if (coeff_it == root.end() || !coeff_it->second.is_table())
        throw ConfigError("config needs a 'coefficient = { kind = ... }' table");
    cfg.coefficient = parse_kind_spec<CoefficientSpec>(
        std::get<Table>(coeff_it->second.v), "coefficient");

    if (auto it = root.find("spectral"); it != root.end()) {
        if (!it->second.is_table()) throw ConfigError("'spectral' must be a table");
        cfg.spectral = parse_kind_spec<SpectralSpec>(std::get<Table>(it->second.v),
                                                     "spectral");
    }
    if (auto it = root.find("data"); it != root.end()) {
        if (!it->second.is_table()) throw ConfigError("'data' must be a table");
        cfg.data = parse_kind_spec<DataSpec>(std::get<Table>(it->second.v), "data");
    }
    if (auto it = root.find("regime"); it != root.end()) {
        if (!it->second.is_table()) throw ConfigError("'regime' must be a table");
        const Table& t = std::get<Table>(it->second.v);
        check_keys(t, {"mu_upper", "mu_lower", "mu_upper_plus"}, "regime");
        if (t.count("mu_upper")) cfg.mu_upper = get_number(t, "mu_upper");
        if (t.count("mu_lower")) cfg.mu_lower = get_number(t, "mu_lower");
        if (t.count("mu_upper_plus")) cfg.mu_upper_plus = get_number(t, "mu_upper_plus");
    }
    if (auto it = root.find("zone_n"); it != root.end()) {
        if (!it->second.is_number()) throw ConfigError("'zone_n' must be a number");
        cfg.zone_n = std::get<double>(it->second.v);
        if (!(cfg.zone_n > 0.0)) throw ConfigError("'zone_n' must be > 0");
    }
    if (auto it = root.find("zone_auto"); it != root.end()) {
        if (!it->second.is_bool()) throw ConfigError("'zone_auto' must be a boolean");
        cfg.zone_auto = std::get<bool>(it->second.v);
    }
    if (auto it = root.find("gamma"); it != root.end()) {
        if (!it->second.is_number()) throw ConfigError("'gamma' must be a number");
        cfg.gamma_override = std::get<double>(it->second.v);
        if (*cfg.gamma_override < 0.0) throw ConfigError("'gamma' must be >= 0");
    }
    if (auto it = root.find("times"); it != root.end()) {
        if (!it->second.is_table()) throw ConfigError("'times' must be a table");
        const Table& t = std::get<Table>(it->second.v);
        check_keys(t, {"t_min", "t_max", "points"}, "times");
        cfg.times.t_min = get_number_or(t, "t_min", cfg.times.t_min);
        cfg.times.t_max = get_number_or(t, "t_max", cfg.times.t_max);
        cfg.times.points = static_cast<int>(get_number_or(t, "points", cfg.times.points));
        if (cfg.times.t_min < 0.0 || cfg.times.t_max <= cfg.times.t_min ||
            cfg.times.points < 2)
            throw ConfigError("'times' needs 0 <= t_min < t_max and points >= 2");
    }
    if (auto it = root.find("tolerances"); it != root.end()) {
        if (!it->second.is_table()) throw ConfigError("'tolerances' must be a table");
        const Table& t = std::get<Table>(it->second.v);
        check_keys(t, {"ode", "quadrature", "limit"}, "tolerances");
        cfg.tol.ode = get_number_or(t, "ode", cfg.tol.ode);
        cfg.tol.quadrature = get_number_or(t, "quadrature", cfg.tol.quadrature);
        cfg.tol.limit = get_number_or(t, "limit", cfg.tol.limit);
        if (!(cfg.tol.ode > 0.0) || !(cfg.tol.quadrature > 0.0) || !(cfg.tol.limit > 0.0))
            throw ConfigError("all tolerances must be > 0");
    }
    if (auto it = root.find("horizon_cap"); it != root.end()) {
        if (!it->second.is_number()) throw ConfigError("'horizon_cap' must be a number");
        cfg.horizon_cap = std::get<double>(it->second.v);
        if (!(cfg.horizon_cap > 0.0)) throw ConfigError("'horizon_cap' must be > 0");
    }
    if (auto it = root.find("seed"); it != root.end()) {
        if (!it->second.is_number()) throw ConfigError("'seed' must be a number");
        cfg.seed = static_cast<std::uint64_t>(std::get<double>(it->second.v));
    }
    if (auto it = root.find("threads"); it != root.end()) {
        if (!it->second.is_number()) throw ConfigError("'threads' must be a number");
        cfg.threads = static_cast<int>(std::get<double>(it->second.v));
    }
    if (auto it = root.find("dump_modes"); it != root.end()) {
        if (!it->second.is_bool()) throw ConfigError("'dump_modes' must be a boolean");
        cfg.dump_modes = std::get<bool>(it->second.v);
    }
    if (auto it = root.find("classify"); it != root.end()) {
        if (!it->second.is_table()) throw ConfigError("'classify' must be a table");
        const Table& t = std::get<Table>(it->second.v);
        check_keys(t, {"horizon", "grid"}, "classify");
        cfg.classify_horizon = get_number_or(t, "horizon", cfg.classify_horizon);
        cfg.classify_grid = static_cast<int>(get_number_or(t, "grid", cfg.classify_grid));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

CoefficientModel make_coefficient(const ExperimentConfig& cfg) {
    const auto& spec = cfg.coefficient;
    auto param = [&spec](const std::string& key, double fallback) {
        auto it = spec.params.find(key);
        return it == spec.params.end() ? fallback : it->second;
    };

    CoefficientModel coeff;
    if (spec.kind == "zero") coeff = zero_coefficient();
    else if (spec.kind == "power_law") coeff = power_law(param("p", 2.0));
    else if (spec.kind == "mu_over_1pt") coeff = mu_over_1pt(param("mu", 0.3));
    else if (spec.kind == "iterated_log")
        coeff = iterated_log(param("mu", 1.0), static_cast<int>(param("n", 1)));
    else if (spec.kind == "footnote_counterexample") coeff = footnote_counterexample();
    else if (spec.kind == "csv") {
        if (spec.csv_path.empty())
            throw ConfigError("coefficient kind 'csv' needs a 'path'");
        auto table = read_csv(spec.csv_path);
        const int it_ = table.column("t"), ib = table.column("b"),
                  ibp = table.column("bprime");
        std::vector<double> t, b, bp;
        for (const auto& row : table.rows) {
            t.push_back(parse_double_field(row.at(it_)));
            b.push_back(parse_double_field(row.at(ib)));
            bp.push_back(parse_double_field(row.at(ibp)));
        }
        coeff = tabulated_coefficient(std::move(t), std::move(b), std::move(bp),
                                      "csv:" + spec.csv_path);
    } else
        throw ConfigError("unknown coefficient kind '" + spec.kind + "'");

    // Declarations in the config override/extend the built-in metadata.
    if (cfg.mu_upper) coeff.mu_upper = cfg.mu_upper;
    if (cfg.mu_lower) coeff.mu_lower = cfg.mu_lower;
    return coeff;
}

SpectralModel make_model(const ExperimentConfig& cfg) {
    const auto& spec = cfg.spectral;
    auto param = [&spec](const std::string& key, double fallback) {
        auto it = spec.params.find(key);
        return it == spec.params.end() ? fallback : it->second;
    };
    ModelParams mp;
    mp.count = static_cast<int>(param("count", param("k", 64)));
    mp.dim = static_cast<int>(param("dim", 1));
    mp.xi_min = param("xi_min", 0.0);
    mp.xi_max = param("xi_max", 8.0);

    if (spec.kind == "dirichlet_interval") return dirichlet_interval(mp.count);
    if (spec.kind == "neumann_interval") return neumann_interval(mp.count);
    if (spec.kind == "klein_gordon") return klein_gordon_radial(mp);
    if (spec.kind == "wave_radial") return wave_radial(mp);
    if (spec.kind == "plate_radial") return plate_radial(mp);
    if (spec.kind == "csv") {
        if (spec.csv_path.empty()) throw ConfigError("spectral kind 'csv' needs a 'path'");
        auto table = read_csv(spec.csv_path);
        const int il = table.column("lambda"), iw = table.column("weight");
        const int ik = table.maybe_column("is_kernel");
        std::vector<SpectralPoint> pts;
        for (const auto& row : table.rows) {
            SpectralPoint p;
            p.lambda = parse_double_field(row.at(il));
            p.weight = parse_double_field(row.at(iw));
            p.is_kernel = ik >= 0 ? parse_double_field(row.at(ik)) != 0.0
                                  : p.lambda == 0.0;
            pts.push_back(p);
        }
        return make_spectral_model("csv:" + spec.csv_path, std::move(pts));
    }
    throw ConfigError("unknown spectral kind '" + spec.kind + "'");
}

DataVector make_data(const ExperimentConfig& cfg, const SpectralModel& model) {
    const auto& spec = cfg.data;
    auto param = [&spec](const std::string& key, double fallback) {
        auto it = spec.params.find(key);
        return it == spec.params.end() ? fallback : it->second;
    };
    if (spec.kind == "gaussian_bump")
        return gaussian_bump_data(model, param("center", 2.0), param("width", 0.5));
    if (spec.kind == "bump")
        return compact_bump_data(model, param("lo", 0.5), param("hi", 8.0));
    if (spec.kind == "kernel_only")
        return kernel_only_data(model, Complex(param("u1", 1.0), 0.0),
                                Complex(param("u2", 1.0), 0.0));
    if (spec.kind == "random")
        return seeded_random_data(model, cfg.seed, param("lo", 0.0),
                           param("hi", std::numeric_limits<double>::infinity()));
    if (spec.kind == "zero") return DataVector::zero(model.size());
    if (spec.kind == "csv") {
        if (spec.csv_path.empty()) throw ConfigError("data kind 'csv' needs a 'path'");
        auto table = read_csv(spec.csv_path);
        const int ii = table.column("lambda_index");
        const int r1 = table.column("re_u1"), i1 = table.column("im_u1");
        const int r2 = table.column("re_u2"), i2 = table.column("im_u2");
        DataVector d = DataVector::zero(model.size());
        for (const auto& row : table.rows) {
            const std::size_t j =
                static_cast<std::size_t>(parse_double_field(row.at(ii)));
            if (j >= model.size())
                throw ConfigError("data csv: lambda_index out of range");
            d.u1[j] = Complex(parse_double_field(row.at(r1)),
                              parse_double_field(row.at(i1)));
            d.u2[j] = Complex(parse_double_field(row.at(r2)),
                              parse_double_field(row.at(i2)));
        }
        return d;
    }
    throw ConfigError("unknown data kind '" + spec.kind + "'");
}

std::vector<double> make_times(const TimesSpec& spec) {
    std::vector<double> out;
    out.reserve(spec.points);
    // Log-spaced in 1+t so t_min = 0 is allowed.
    const double a = std::log1p(spec.t_min), b = std::log1p(spec.t_max);
    for (int i = 0; i < spec.points; ++i)
        out.push_back(std::expm1(a + (b - a) * i / double(spec.points - 1)));
    out.front() = spec.t_min;
    out.back() = spec.t_max;
    return out;
}

}  // namespace wavescat
