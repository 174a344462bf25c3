#include "oldroyd/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace oldroyd::cli {

// ------------------------------------------------------------ time series

namespace {

const char* const kAxes[] = {"x", "y", "z"};

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string brief(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

} // namespace

std::vector<std::string> csv_columns(int dim, std::span<const diag::LambdaSpec> lambdas)
{
    std::vector<std::string> c{"t",    "E_inf", "E_1",  "h3_u", "h3_tau", "h3_n",
                               "h3_eta", "l2_n", "l2_u", "l2_tau", "mass"};
    for (int i = 0; i < dim; ++i)
        c.push_back(std::string("momentum_") + kAxes[i]);
    c.push_back("tau_min");
    for (const auto& l : lambdas)
        c.push_back(l.column());
    return c;
}

CsvWriter::CsvWriter(std::ostream& out, int dim, std::vector<diag::LambdaSpec> lambdas)
    : out_(out), dim_(dim), lambdas_(std::move(lambdas))
{
    const auto cols = csv_columns(dim_, lambdas_);
    for (std::size_t i = 0; i < cols.size(); ++i)
        out_ << (i ? "," : "") << cols[i];
    out_ << '\n' << std::flush;
}

void CsvWriter::write(const diag::EnergyRecord& r)
{
    std::vector<double> v{r.t, r.E_inf, r.E_1, r.h3_u, r.h3_tau, r.h3_n, r.h3_eta, r.l2_n, r.l2_u, r.l2_tau, r.mass};
    for (int i = 0; i < dim_; ++i)
        v.push_back(r.momentum.at(static_cast<std::size_t>(i)));
    v.push_back(r.tau_min);
    if (r.lambda_beta.size() != lambdas_.size())
        throw std::invalid_argument("csv: record carries a different number of lambda norms");
    v.insert(v.end(), r.lambda_beta.begin(), r.lambda_beta.end());
    for (std::size_t i = 0; i < v.size(); ++i)
        out_ << (i ? "," : "") << fmt(v[i]);
    out_ << '\n' << std::flush;
}

std::vector<double> CsvTable::column(const std::string& name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw std::out_of_range("csv: no column '" + name + "'");
    const auto k = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows)
        out.push_back(r[k]);
    return out;
}

bool CsvTable::has(const std::string& name) const
{
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

CsvTable read_csv(std::istream& in)
{
    CsvTable t;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("csv: empty input");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            t.columns.push_back(cell);
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double x = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size())
                throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            row.push_back(x);
        }
        if (row.size() != t.columns.size())
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(t.columns.size()) + " fields, got " + std::to_string(row.size()));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<diag::EnergyRecord> records_from_csv(const CsvTable& table, std::vector<diag::LambdaSpec>* lambdas_out)
{
    const int dim = table.has("momentum_z") ? 3 : 2;
    std::vector<diag::LambdaSpec> lambdas;
    for (const auto& c : table.columns) {
        if (!c.starts_with("lambda"))
            continue;
        const auto us = c.rfind('_');
        if (us == std::string::npos)
            throw std::runtime_error("csv: malformed lambda column '" + c + "'");
        lambdas.push_back({std::stod(c.substr(6, us - 6)), diag::parse_group(c.substr(us + 1))});
    }
    const auto expected = csv_columns(dim, lambdas);
    if (expected != table.columns)
        throw std::runtime_error("csv: header does not match the run schema");

    std::vector<diag::EnergyRecord> out;
    for (const auto& row : table.rows) {
        diag::EnergyRecord r;
        std::size_t k = 0;
        for (double* f : {&r.t, &r.E_inf, &r.E_1, &r.h3_u, &r.h3_tau, &r.h3_n, &r.h3_eta, &r.l2_n, &r.l2_u, &r.l2_tau,
                          &r.mass})
            *f = row[k++];
        for (int i = 0; i < dim; ++i)
            r.momentum.push_back(row[k++]);
        r.tau_min = row[k++];
        while (k < row.size())
            r.lambda_beta.push_back(row[k++]);
        out.push_back(std::move(r));
    }
    if (lambdas_out)
        *lambdas_out = lambdas;
    return out;
}

// ------------------------------------------------------------ checkpoints

namespace {

template <class T>
void put(std::ostream& out, T value)
{
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits = std::bit_cast<U>(value);
    unsigned char b[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
        b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), sizeof b);
}

template <class T>
T get(std::istream& in)
{
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    unsigned char b[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(b), sizeof b))
        throw std::runtime_error("checkpoint: truncated file");
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        bits |= static_cast<U>(b[i]) << (8 * i);
    return std::bit_cast<T>(bits);
}

std::uint32_t formulation_tag(Formulation f) { return static_cast<std::uint32_t>(f); }

State empty_state(Formulation f, const Grid& g)
{
    const ScalarField s(g);
    const VectorField v(g);
    switch (f) {
    case Formulation::primitive: return PrimitiveState{s, v, SymTensorField(g), s};
    case Formulation::cauchy: return CauchyState{s, v, SymTensorField(g), s};
    case Formulation::torus: return TorusState{s, v, s, s};
    case Formulation::effective: return EffectiveState{s, v, s, s, s};
    }
    throw std::runtime_error("checkpoint: unknown formulation");
}

} // namespace

void write_checkpoint(std::ostream& out, const State& s, const PhysParams& p, double t, std::uint64_t step)
{
    const Grid& g = grid_of(s);
    const auto fields = slots(s);
    out.write(kCheckpointMagic, sizeof kCheckpointMagic);
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, formulation_tag(formulation_of(s)));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
    put<double>(out, g.box_length());
    put<std::uint32_t>(out, PhysParams::kCount);
    for (double x : p.to_array())
        put<double>(out, x);
    put<double>(out, t);
    put<std::uint64_t>(out, step);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(fields.size()));
    for (const auto* f : fields)
        for (double x : f->values())
            put<double>(out, x);
    if (!out)
        throw std::runtime_error("checkpoint: write failed");
}

Checkpoint read_checkpoint(std::istream& in)
{
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0)
        throw std::runtime_error("checkpoint: bad magic");
    const auto version = get<std::uint32_t>(in);
    if (version != kCheckpointVersion)
        throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
    const auto tag = get<std::uint32_t>(in);
    if (tag > 3)
        throw std::runtime_error("checkpoint: unknown formulation tag " + std::to_string(tag));
    const auto dim = static_cast<int>(get<std::uint32_t>(in));
    const auto n = static_cast<int>(get<std::uint32_t>(in));
    const double box = get<double>(in);
    const Grid g(dim, n, box);
    const auto count = get<std::uint32_t>(in);
    if (count != PhysParams::kCount)
        throw std::runtime_error("checkpoint: expected " + std::to_string(PhysParams::kCount) + " params");
    std::array<double, PhysParams::kCount> params{};
    for (double& x : params)
        x = get<double>(in);

    Checkpoint c{empty_state(static_cast<Formulation>(tag), g), PhysParams::from_array(params), 0.0, 0};
    c.t = get<double>(in);
    c.step = get<std::uint64_t>(in);
    auto fields = slots(c.state);
    const auto nslots = get<std::uint32_t>(in);
    if (nslots != fields.size())
        throw std::runtime_error("checkpoint: slot count does not match the formulation");
    for (auto* f : fields)
        for (double& x : f->values())
            x = get<double>(in);
    return c;
}

// ------------------------------------------------------------ verdicts

bool Check::pass() const
{
    if (!std::isfinite(measured) && !std::isinf(measured))
        return false;
    const bool above = lo_open ? measured > lo : measured >= lo;
    const bool below = hi_open ? measured < hi : measured <= hi;
    return above && below;
}

bool Verdict::pass() const
{
    if (!evaluated)
        return false;
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

std::string Verdict::status() const
{
    if (!evaluated)
        return "not evaluated";
    if (pass())
        return "pass";
    return soft ? "warning" : "fail";
}

namespace {

nlohmann::json bound(double x)
{
    if (std::isinf(x))
        return nullptr;
    return x;
}

std::string interval(const Check& c)
{
    std::string s = c.lo_open ? "(" : "[";
    s += std::isinf(c.lo) ? "-inf" : brief(c.lo);
    s += ", ";
    s += std::isinf(c.hi) ? "inf" : brief(c.hi);
    s += c.hi_open ? ")" : "]";
    return s;
}

} // namespace

nlohmann::json to_json(const Check& c)
{
    nlohmann::json j;
    j["name"] = c.name;
    j["measured"] = std::isfinite(c.measured) ? nlohmann::json(c.measured) : nlohmann::json(fmt(c.measured));
    j["expected"] = {{"lo", bound(c.lo)}, {"hi", bound(c.hi)}, {"lo_open", c.lo_open}, {"hi_open", c.hi_open},
                     {"interval", interval(c)}};
    j["pass"] = c.pass();
    return j;
}

nlohmann::json to_json(const Verdict& v)
{
    nlohmann::json j;
    j["id"] = v.id;
    j["title"] = v.title;
    j["soft"] = v.soft;
    j["evaluated"] = v.evaluated;
    j["pass"] = v.pass();
    j["status"] = v.status();
    if (!v.note.empty())
        j["note"] = v.note;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : v.checks)
        j["checks"].push_back(to_json(c));
    j["metadata"] = v.metadata;
    return j;
}

nlohmann::json verdict_document(const std::string& scenario, const std::vector<Verdict>& verdicts,
                                const nlohmann::json& metadata)
{
    nlohmann::json j;
    j["scenario"] = scenario;
    j["ok"] = all_pass(verdicts);
    j["verdicts"] = nlohmann::json::array();
    for (const auto& v : verdicts)
        j["verdicts"].push_back(to_json(v));
    j["metadata"] = metadata;
    return j;
}

bool all_pass(const std::vector<Verdict>& verdicts)
{
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](const Verdict& v) { return v.pass() || (v.soft && v.evaluated); });
}

std::string summary_line(const Verdict& v)
{
    std::string tag = v.status() == "pass"      ? "PASS"
                      : v.status() == "warning" ? "WARN"
                      : v.status() == "fail"    ? "FAIL"
                                                : "SKIP";
    std::string s = "[" + tag + "] " + v.id + "  " + v.title;
    std::string details;
    for (const auto& c : v.checks)
        details += (details.empty() ? "" : "; ") + c.name + " = " + brief(c.measured) + " in " + interval(c);
    if (!details.empty())
        s += "  (" + details + ")";
    if (!v.note.empty())
        s += "  " + v.note;
    return s;
}

} // namespace oldroyd::cli
