#include "oldroyd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <regex>
#include <sstream>

#include "oldroyd/littlewood_paley.hpp"

namespace oldroyd::cli {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    if (trim(s).empty())
        return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

double to_double(std::string_view v)
{
    const std::string s(v);
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw std::invalid_argument("expected a number, got '" + s + "'");
    return x;
}

long long to_int(std::string_view v)
{
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw std::invalid_argument("expected an integer, got '" + std::string(v) + "'");
    return x;
}

bool to_bool(std::string_view v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw std::invalid_argument("expected true or false, got '" + std::string(v) + "'");
}

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Key
{
    std::string name;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

Key real(std::string name, double RunConfig::*m)
{
    return {std::move(name), [m](RunConfig& c, std::string_view v) { c.*m = to_double(v); },
            [m](const RunConfig& c) { return num(c.*m); }};
}

template <class Get>
Key real_at(std::string name, Get get)
{
    return {std::move(name), [get](RunConfig& c, std::string_view v) { get(c) = to_double(v); },
            [get](const RunConfig& c) { return num(get(const_cast<RunConfig&>(c))); }};
}

template <class Get>
Key int_at(std::string name, Get get)
{
    return {std::move(name),
            [get](RunConfig& c, std::string_view v) {
                using T = std::decay_t<decltype(get(c))>;
                get(c) = static_cast<T>(to_int(v));
            },
            [get](const RunConfig& c) { return std::to_string(get(const_cast<RunConfig&>(c))); }};
}

template <class Get>
Key bool_at(std::string name, Get get)
{
    return {std::move(name), [get](RunConfig& c, std::string_view v) { get(c) = to_bool(v); },
            [get](const RunConfig& c) { return std::string(get(const_cast<RunConfig&>(c)) ? "true" : "false"); }};
}

template <class Get>
Key string_at(std::string name, Get get)
{
    return {std::move(name), [get](RunConfig& c, std::string_view v) { get(c) = std::string(v); },
            [get](const RunConfig& c) { return get(const_cast<RunConfig&>(c)); }};
}

const std::vector<Key>& keys()
{
    static const std::vector<Key> table = [] {
        std::vector<Key> k;
        k.push_back({"model.formulation",
                     [](RunConfig& c, std::string_view v) { c.formulation = parse_formulation(v); },
                     [](const RunConfig& c) { return std::string(to_string(c.formulation)); }});
        k.push_back(int_at("grid.dim", [](RunConfig& c) -> int& { return c.dim; }));
        k.push_back(int_at("grid.n", [](RunConfig& c) -> int& { return c.n; }));
        k.push_back(real("grid.box_length", &RunConfig::box_length));

        const auto& names = PhysParams::names();
        for (std::size_t i = 0; i < names.size(); ++i) {
            k.push_back({std::string("params.") + names[i],
                         [i](RunConfig& c, std::string_view v) {
                             auto a = c.params.to_array();
                             a[i] = to_double(v);
                             c.params = PhysParams::from_array(a);
                         },
                         [i](const RunConfig& c) { return num(c.params.to_array()[i]); }});
        }

        k.push_back(real_at("integrator.dt", [](RunConfig& c) -> double& { return c.integrator.dt; }));
        k.push_back(real_at("integrator.t_end", [](RunConfig& c) -> double& { return c.integrator.t_end; }));
        k.push_back({"integrator.scheme",
                     [](RunConfig& c, std::string_view v) {
                         if (v != "imex_rk2")
                             throw std::invalid_argument("unknown scheme '" + std::string(v) + "' (imex_rk2)");
                         c.integrator.scheme = integrate::Scheme::imex_rk2;
                     },
                     [](const RunConfig&) { return std::string("imex_rk2"); }});
        k.push_back(bool_at("integrator.adaptive", [](RunConfig& c) -> bool& { return c.integrator.adaptive; }));
        k.push_back(
            real_at("integrator.cfl_safety", [](RunConfig& c) -> double& { return c.integrator.cfl_safety; }));
        k.push_back(bool_at("integrator.dealias_every_rhs",
                            [](RunConfig& c) -> bool& { return c.integrator.dealias_every_rhs; }));
        k.push_back(
            int_at("integrator.record_every", [](RunConfig& c) -> int& { return c.integrator.record_every; }));
        k.push_back(int_at("integrator.checkpoint_every",
                           [](RunConfig& c) -> int& { return c.integrator.checkpoint_every; }));

        k.push_back({"lp.k0",
                     [](RunConfig& c, std::string_view v) {
                         c.k0 = v == "auto" ? 0 : static_cast<int>(to_int(v));
                         if (v != "auto" && c.k0 < 1)
                             throw std::invalid_argument("k0 must be >= 1 or auto");
                     },
                     [](const RunConfig& c) { return c.k0 == 0 ? std::string("auto") : std::to_string(c.k0); }});

        k.push_back(string_at("init.generator", [](RunConfig& c) -> std::string& { return c.init.generator; }));
        k.push_back(real_at("init.amplitude", [](RunConfig& c) -> double& { return c.init.amplitude; }));
        k.push_back({"init.seed",
                     [](RunConfig& c, std::string_view v) {
                         std::uint64_t x = 0;
                         const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
                         if (ec != std::errc{} || ptr != v.data() + v.size())
                             throw std::invalid_argument("expected an unsigned integer, got '" + std::string(v) + "'");
                         c.init.seed = x;
                     },
                     [](const RunConfig& c) { return std::to_string(c.init.seed); }});
        k.push_back(real_at("init.xi0", [](RunConfig& c) -> double& { return c.init.xi0; }));
        k.push_back(int_at("init.mode", [](RunConfig& c) -> int& { return c.init.mode; }));
        k.push_back(real_at("init.width", [](RunConfig& c) -> double& { return c.init.width; }));

        k.push_back({"diagnostics.lambdas",
                     [](RunConfig& c, std::string_view v) {
                         c.diagnostics.lambdas.clear();
                         for (auto item : split(v, ',')) {
                             const auto colon = item.find(':');
                             if (colon == std::string_view::npos)
                                 throw std::invalid_argument("lambda entries look like <beta>:<nu|tau>");
                             c.diagnostics.lambdas.push_back(
                                 {to_double(trim(item.substr(0, colon))), diag::parse_group(trim(item.substr(colon + 1)))});
                         }
                     },
                     [](const RunConfig& c) {
                         std::string out;
                         for (const auto& l : c.diagnostics.lambdas)
                             out += (out.empty() ? "" : ", ") + num(l.beta) + ":" + std::string(diag::to_string(l.group));
                         return out;
                     }});
        k.push_back(string_at("diagnostics.fit_column",
                              [](RunConfig& c) -> std::string& { return c.diagnostics.fit_column; }));
        k.push_back({"diagnostics.fit_model",
                     [](RunConfig& c, std::string_view v) {
                         if (v == "none")
                             c.diagnostics.fit_model.reset();
                         else
                             c.diagnostics.fit_model = diag::parse_decay_model(v);
                     },
                     [](const RunConfig& c) {
                         return c.diagnostics.fit_model ? std::string(diag::to_string(*c.diagnostics.fit_model))
                                                        : std::string("none");
                     }});
        k.push_back({"diagnostics.fit_window",
                     [](RunConfig& c, std::string_view v) {
                         if (v == "auto") {
                             c.diagnostics.fit_lo = c.diagnostics.fit_hi = -1.0;
                             return;
                         }
                         const auto parts = split(v, ',');
                         if (parts.size() != 2)
                             throw std::invalid_argument("fit_window is auto or <t_lo>,<t_hi>");
                         c.diagnostics.fit_lo = to_double(parts[0]);
                         c.diagnostics.fit_hi = to_double(parts[1]);
                     },
                     [](const RunConfig& c) {
                         if (c.diagnostics.fit_lo < 0 && c.diagnostics.fit_hi < 0)
                             return std::string("auto");
                         return num(c.diagnostics.fit_lo) + "," + num(c.diagnostics.fit_hi);
                     }});
        k.push_back(real_at("diagnostics.expect_lo", [](RunConfig& c) -> double& { return c.diagnostics.expect_lo; }));
        k.push_back(real_at("diagnostics.expect_hi", [](RunConfig& c) -> double& { return c.diagnostics.expect_hi; }));
        k.push_back(real_at("diagnostics.r2_min", [](RunConfig& c) -> double& { return c.diagnostics.r2_min; }));
        k.push_back(real_at("diagnostics.mass_tol", [](RunConfig& c) -> double& { return c.diagnostics.mass_tol; }));
        k.push_back(
            real_at("diagnostics.momentum_tol", [](RunConfig& c) -> double& { return c.diagnostics.momentum_tol; }));

        k.push_back(string_at("output.dir", [](RunConfig& c) -> std::string& { return c.output.dir; }));
        k.push_back(string_at("output.name", [](RunConfig& c) -> std::string& { return c.output.name; }));
        return k;
    }();
    return table;
}

const std::vector<std::string>& known_generators()
{
    static const std::vector<std::string> g{"equilibrium", "single_mode", "random_smooth", "localized_gaussian",
                                            "zero_momentum_projected"};
    return g;
}

} // namespace

ConfigError::ConfigError(std::string key, int line, const std::string& what)
    : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + " (" + key + "): " + what
                                     : (key.empty() ? what : key + ": " + what)),
      key_(std::move(key)), line_(line)
{
}

int RunConfig::effective_k0() const { return k0 > 0 ? k0 : lp::default_k0(grid()); }

void RunConfig::validate() const
{
    const auto fail = [](const char* key, const std::string& what) { throw ConfigError(key, 0, what); };
    if (dim != 2 && dim != 3)
        fail("grid.dim", "dim must be 2 or 3");
    if (n < 8 || n % 2 != 0)
        fail("grid.n", "n must be even and >= 8");
    if (!(box_length > 0))
        fail("grid.box_length", "box_length must be positive");
    try {
        params.validate(dim);
    } catch (const std::invalid_argument& e) {
        // Attribute the violation to the last parameter the message names.
        std::string key;
        for (const char* name : PhysParams::names())
            if (std::regex_search(e.what(), std::regex(std::string("\\b") + name + "\\b")))
                key = std::string("params.") + name;
        throw ConfigError(key, 0, e.what());
    }
    if (formulation == Formulation::effective) {
        try {
            models::require_effective_normalisation(params);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("model.formulation", 0, e.what());
        }
    }
    try {
        integrator.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("integrator", 0, e.what());
    }
    if (k0 < 0)
        fail("lp.k0", "k0 must be >= 1 or auto");
    if (std::find(known_generators().begin(), known_generators().end(), init.generator) == known_generators().end())
        fail("init.generator", "unknown generator '" + init.generator +
                                   "' (equilibrium, single_mode, random_smooth, localized_gaussian, "
                                   "zero_momentum_projected)");
    if (!(init.amplitude >= 0))
        fail("init.amplitude", "amplitude must be >= 0");
    if (!(init.xi0 > 0))
        fail("init.xi0", "xi0 must be positive");
    if (init.mode < 1 || init.mode >= n / 3)
        fail("init.mode", "mode must lie in [1, n/3)");
    if (!(init.width >= 0))
        fail("init.width", "width must be >= 0");
    const auto& d = diagnostics;
    if ((d.fit_lo >= 0 || d.fit_hi >= 0) && !(d.fit_lo >= 0 && d.fit_lo < d.fit_hi))
        fail("diagnostics.fit_window", "fit window needs 0 <= t_lo < t_hi");
    if (!(d.expect_lo <= d.expect_hi))
        fail("diagnostics.expect_lo", "expect_lo must not exceed expect_hi");
    if (!(d.mass_tol > 0) || !(d.momentum_tol > 0))
        fail("diagnostics.mass_tol", "tolerances must be positive");
    if (output.name.empty())
        fail("output.name", "name must not be empty");
}

bool operator==(const RunConfig& a, const RunConfig& b)
{
    // The echo covers every field, so equal echoes mean equal configs.
    return echo_config(a) == echo_config(b);
}

RunConfig parse_config(std::string_view text)
{
    RunConfig c;
    std::map<std::string, int> line_of;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("", line_no, "expected 'section.key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto& table = keys();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return k.name == key; });
        if (it == table.end())
            throw ConfigError(key, line_no, "unknown key '" + key + "'");
        if (line_of.contains(key))
            throw ConfigError(key, line_no, "key set twice (first on line " + std::to_string(line_of[key]) + ")");
        try {
            it->set(c, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key, line_no, e.what());
        }
        line_of[key] = line_no;
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        int line = 0;
        if (const auto it = line_of.find(e.key()); it != line_of.end())
            line = it->second;
        // Params constraints can involve several keys; cite the latest one set.
        if (e.key().starts_with("params.")) {
            for (const char* name : PhysParams::names()) {
                const std::string k = std::string("params.") + name;
                if (line_of.contains(k) && std::regex_search(e.what(), std::regex(std::string("\\b") + name + "\\b")))
                    line = std::max(line, line_of[k]);
            }
        }
        const std::string what = e.what();
        const std::string msg = what.starts_with(e.key() + ": ") ? what.substr(e.key().size() + 2) : what;
        throw ConfigError(e.key(), line, msg);
    }
    return c;
}

std::string echo_config(const RunConfig& c)
{
    std::ostringstream out;
    std::string section;
    for (const auto& k : keys()) {
        const std::string s = k.name.substr(0, k.name.find('.'));
        if (s != section) {
            if (!section.empty())
                out << '\n';
            section = s;
        }
        out << k.name << " = " << k.get(c) << '\n';
    }
    return out.str();
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> out;
    for (const auto& k : keys())
        out.push_back(k.name);
    return out;
}

} // namespace oldroyd::cli
