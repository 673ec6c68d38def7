/** \file    catseye_cli.cpp
    \brief   Command-line driver: equilibrium dumps, spectra, growth-rate sweeps and
             quadratic-form evaluations, written as CSV or JSON tables.

    Exit codes: 0 success, 2 usage error (bad flags or parameter values),
    3 numerical failure reported by the library.
*/
#include "catseye/errors.h"
#include "catseye/exact_spectra.h"
#include "catseye/galerkin.h"
#include "catseye/quad_forms.h"
#include "catseye/steady_fields.h"
#include <CLI11.hpp>
#include <json.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>
#include <unistd.h>

namespace {

const char* VERSION = "1.0.0";
const int EXIT_USAGE = 2, EXIT_NUMERIC = 3;

using nlohmann::ordered_json;

/// usage errors detected after flag parsing
class UsageError: public std::runtime_error { using std::runtime_error::runtime_error; };

/// round-trip representation of a double
std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// short representation for grid labels
std::string fmtShort(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/** Parse a grid "start:stop:step" (inclusive of stop within 1e-12), a single value,
    or a comma-separated ascending list */
std::vector<double> parseGrid(const std::string& text)
{
    std::vector<double> grid;
    auto toNumber = [&](const std::string& s) {
        std::size_t pos = 0;
        double v;
        try { v = std::stod(s, &pos); }
        catch(std::exception&) { throw UsageError("malformed number '" + s + "' in grid '" + text + "'"); }
        if(pos != s.size() || !std::isfinite(v))
            throw UsageError("malformed number '" + s + "' in grid '" + text + "'");
        return v;
    };
    if(text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string item;
        while(std::getline(ss, item, ':')) parts.push_back(item);
        if(parts.size() != 3)
            throw UsageError("grid '" + text + "' must have the form start:stop:step");
        double start = toNumber(parts[0]), stop = toNumber(parts[1]), step = toNumber(parts[2]);
        if(!(step > 0))
            throw UsageError("grid step must be positive in '" + text + "'");
        if(stop >= start - 1e-12) {
            long count = long(std::floor((stop - start) / step + 1e-12 / step)) + 1;
            for(long i = 0; i < count; i++) {
                double v = start + i * step;
                grid.push_back(std::round(v * 1e12) / 1e12);   // remove representation noise
            }
        }
    } else {
        std::stringstream ss(text);
        std::string item;
        while(std::getline(ss, item, ','))
            if(!item.empty()) grid.push_back(toNumber(item));
    }
    if(grid.empty())
        throw UsageError("grid '" + text + "' is empty");
    for(std::size_t i = 1; i < grid.size(); i++)
        if(!(grid[i] > grid[i - 1]))
            throw UsageError("grid '" + text + "' is not ascending");
    return grid;
}

/** Write the content to the path atomically (temporary file + rename);
    an empty path means standard output */
void writeOutput(const std::string& path, const std::string& content)
{
    if(path.empty()) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::string tmp = path + ".tmp." + std::to_string(getpid());
    {
        std::ofstream out(tmp, std::ios::binary);
        out << content;
        out.close();
        if(!out)
            throw std::runtime_error("cannot write " + tmp);
    }
    if(std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
    }
}

/** A table of string cells with CSV (RFC 4180) and JSON renderings */
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    static std::string quote(const std::string& s) {
        if(s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string q = "\"";
        for(char c: s) { if(c == '"') q += '"'; q += c; }
        return q + "\"";
    }
    std::string csv() const {
        std::string out;
        for(std::size_t i = 0; i < columns.size(); i++)
            out += (i ? "," : "") + quote(columns[i]);
        out += "\r\n";
        for(const auto& r: rows) {
            for(std::size_t i = 0; i < r.size(); i++)
                out += (i ? "," : "") + quote(r[i]);
            out += "\r\n";
        }
        return out;
    }
    ordered_json json() const {
        ordered_json j;
        j["columns"] = columns;
        j["rows"] = rows;
        return j;
    }
};

/** Options shared by all commands */
struct Common {
    std::string out;
    std::string format = "csv";
};

ordered_json metaBlock(const std::string& command, const ordered_json& config,
    const ordered_json& tolerances)
{
    ordered_json meta;
    meta["program"] = "catseye";
    meta["version"] = VERSION;
    meta["command"] = command;
    meta["config"] = config;
    meta["tolerances"] = tolerances;
    return meta;
}

/// emit a table in the requested format, with extra JSON content merged in
void emit(const Common& c, const Table& t, const ordered_json& meta,
    const ordered_json& extra = ordered_json::object())
{
    if(c.format == "csv") {
        writeOutput(c.out, t.csv());
        return;
    }
    ordered_json doc;
    doc["meta"] = meta;
    doc["table"] = t.json();
    for(auto it = extra.begin(); it != extra.end(); ++it)
        doc[it.key()] = it.value();
    writeOutput(c.out, doc.dump(2) + "\n");
}

//---- steady ----//

struct SteadyConfig {
    double eps = 0;
    int nx = 64, ny = 64;
    double ymax = 4;
};

void cmdSteady(const Common& c, const SteadyConfig& cfg)
{
    if(cfg.nx < 1 || cfg.ny < 2)
        throw UsageError("steady: need nx >= 1 and ny >= 2");
    if(!(cfg.ymax > 0))
        throw UsageError("steady: ymax must be positive");
    catseye::steady::FlowParams p(cfg.eps);
    Table t;
    t.columns = {"x", "y", "psi", "omega", "u", "v", "eta", "gamma", "xi", "theta"};
    for(int j = 0; j < cfg.ny; j++) {
        double y = -cfg.ymax + 2 * cfg.ymax * j / (cfg.ny - 1);
        for(int i = 0; i < cfg.nx; i++) {
            double x = 2 * M_PI * i / cfg.nx;
            catseye::steady::PointXY pt{x, y};
            auto u = catseye::steady::velocity_u(p, pt);
            auto e = catseye::steady::coords(p, pt);
            t.rows.push_back({fmt17(x), fmt17(y), fmt17(catseye::steady::stream_psi(p, pt)),
                fmt17(catseye::steady::vorticity_omega(p, pt)), fmt17(u.first), fmt17(u.second),
                fmt17(e.eta), fmt17(e.gamma), fmt17(e.xi), fmt17(e.theta)});
        }
    }
    ordered_json config = {{"epsilon", fmt17(cfg.eps)}, {"nx", cfg.nx}, {"ny", cfg.ny},
        {"ymax", fmt17(cfg.ymax)}};
    emit(c, t, metaBlock("steady", config, ordered_json::object()));
}

//---- spectrum ----//

struct SpectrumConfig {
    bool exact = false, galerkin = false;
    std::string problem = "coperiodic";
    int m = 2;
    double alpha = 0.5;
    double lmax = 10;
    int N = 7;
    std::string eps = "0";
    int count = 10;
};

void cmdSpectrum(const Common& c, const SpectrumConfig& cfg)
{
    if(cfg.exact == cfg.galerkin)
        throw UsageError("spectrum: exactly one of --exact and --galerkin is required");
    if(cfg.exact) {
        catseye::spectra::Problem pr;
        if(cfg.problem == "coperiodic") pr.kind = catseye::spectra::Problem::CoPeriodic;
        else if(cfg.problem == "multiperiodic") {
            pr.kind = catseye::spectra::Problem::MultiPeriodic;
            pr.m = cfg.m;
        } else if(cfg.problem == "modulational") {
            pr.kind = catseye::spectra::Problem::Modulational;
            pr.alpha = cfg.alpha;
        } else
            throw UsageError("spectrum: unknown problem '" + cfg.problem + "'");
        pr.validate();
        Table t;
        t.columns = {"lambda", "multiplicity"};
        for(const auto& e: catseye::spectra::list_eigenvalues(pr, cfg.lmax))
            t.rows.push_back({fmt17(e.lambda), std::to_string(e.multiplicity)});
        ordered_json config = {{"mode", "exact"}, {"problem", cfg.problem}, {"m", pr.m},
            {"alpha", fmt17(pr.alpha)}, {"lmax", fmt17(cfg.lmax)}};
        emit(c, t, metaBlock("spectrum", config, {{"merge", "1e-12"}}));
        return;
    }
    if(cfg.N < 1 || cfg.count < 1)
        throw UsageError("spectrum: need N >= 1 and count >= 1");
    std::vector<double> grid = parseGrid(cfg.eps);
    for(double e: grid)
        if(!(e >= 0 && e < 1))
            throw UsageError("spectrum: epsilon values must lie in [0,1)");
    int dim = (2 * cfg.N + 1) * (2 * cfg.N + 1);
    int count = std::min(cfg.count, dim);
    Table t;
    t.columns = {"index"};
    std::vector<std::vector<double>> cols;
    for(double e: grid) {
        t.columns.push_back("eps=" + fmtShort(e));
        auto st = catseye::galerkin::solve_symmetric(catseye::galerkin::assemble_Atilde(e, cfg.N));
        std::vector<double> v;
        for(int i = 0; i < count; i++) v.push_back(st.eigenvalues[i].real());
        cols.push_back(v);
    }
    for(int i = 0; i < count; i++) {
        std::vector<std::string> row{std::to_string(i + 1)};
        for(const auto& col: cols) row.push_back(fmt17(col[i]));
        t.rows.push_back(row);
    }
    ordered_json config = {{"mode", "galerkin"}, {"N", cfg.N}, {"eps", cfg.eps}, {"count", count}};
    emit(c, t, metaBlock("spectrum", config, {{"symmetry_defect_max", "1e-10"},
        {"backward_error_max", "1e-10"}}));
}

//---- growth ----//

struct GrowthConfig {
    double alpha = 0.5;
    std::string eps = "0:0.4:0.02";
    int N = 7;
    int bisect = 4;
};

void cmdGrowth(const Common& c, const GrowthConfig& cfg)
{
    if(!(cfg.alpha > 0 && cfg.alpha <= 0.5))
        throw UsageError("growth: alpha must lie in (0, 1/2]");
    if(cfg.N < 1 || cfg.bisect < 0)
        throw UsageError("growth: need N >= 1 and bisect >= 0");
    std::vector<double> grid = parseGrid(cfg.eps);
    for(double e: grid)
        if(!(e >= 0 && e <= 0.4 + 1e-12))
            throw UsageError("growth: epsilon grid must lie within [0, 0.4]");
    auto rows = catseye::galerkin::growth_rate_sweep(cfg.alpha, grid, cfg.N);
    auto lm = catseye::galerkin::growth_landmarks(cfg.alpha, rows, cfg.N, cfg.bisect);
    std::size_t width = 0;
    for(const auto& r: rows) width = std::max(width, r.rates.size());
    Table t;
    t.columns = {"eps"};
    for(std::size_t i = 0; i < width; i++) t.columns.push_back("sigma" + std::to_string(i + 1));
    for(const auto& r: rows) {
        std::vector<std::string> row{fmtShort(r.epsilon)};
        for(std::size_t i = 0; i < width; i++)
            row.push_back(i < r.rates.size() ? fmt17(r.rates[i]) : "");
        t.rows.push_back(row);
    }
    ordered_json landmarks;
    landmarks["unstable_at_first"] = lm.unstable_at_first;
    if(lm.has_crossing) {
        landmarks["crossing_eps"] = fmt17(lm.crossing);
        landmarks["crossing_bracket"] = {fmt17(lm.crossing_lo), fmt17(lm.crossing_hi)};
    } else
        landmarks["crossing_eps"] = nullptr;
    landmarks["max_rate"] = fmt17(lm.max_rate);
    landmarks["max_rate_eps"] = fmt17(lm.max_rate_eps);
    ordered_json config = {{"alpha", fmt17(cfg.alpha)}, {"eps", cfg.eps}, {"N", cfg.N},
        {"bisect", cfg.bisect}};
    ordered_json meta = metaBlock("growth", config, {{"rate_floor", "1e-6"},
        {"real_sigma_tol", "1e-8"}});
    emit(c, t, meta, {{"landmarks", landmarks}});
    if(c.format == "csv") {
        ordered_json doc = {{"meta", meta}, {"landmarks", landmarks}};
        if(c.out.empty())
            std::cerr << doc.dump(2) << "\n";
        else
            writeOutput(c.out + ".landmarks.json", doc.dump(2) + "\n");
    }
}

//---- forms ----//

struct FormsConfig {
    std::string test;
    int k = 1;
    bool mod = false, modHalf = false, coalescence = false;
    std::string alpha = "0.5";
    std::string eps = "0.5";
    double innerTol = 1e-11, outerTol = 1e-9;
};

std::string periodLabel(int cells)
{
    return std::to_string(2 * cells) + "pi";
}

void cmdForms(const Common& c, const FormsConfig& cfg)
{
    namespace fm = catseye::forms;
    int modes = (!cfg.test.empty()) + cfg.mod + cfg.modHalf + cfg.coalescence;
    if(modes != 1)
        throw UsageError("forms: exactly one of --test, --mod, --mod-half, --coalescence is required");
    fm::CurveQuadrature q;
    q.inner_tol = cfg.innerTol;
    q.outer_tol = cfg.outerTol;
    std::vector<double> epsGrid = parseGrid(cfg.eps);
    for(double e: epsGrid)
        if(!(e >= 0 && e < 1))
            throw UsageError("forms: epsilon values must lie in [0,1)");
    ordered_json tol = {{"inner_tol", fmt17(q.inner_tol)}, {"outer_tol", fmt17(q.outer_tol)}};
    Table t;

    if(cfg.mod) {
        std::vector<double> alphaGrid = parseGrid(cfg.alpha);
        t.columns = {"alpha", "eps", "b1", "b2", "total", "verdict"};
        for(double a: alphaGrid)
            for(double e: epsGrid) {
                fm::TestFunction tf(fm::TestFunction::ModTest, 1, a);
                auto p = tf.params(e);
                double b1 = fm::form_b1(p, tf), b2 = fm::form_b2(p, tf, q);
                t.rows.push_back({fmtShort(a), fmtShort(e), fmt17(b1), fmt17(b2), fmt17(b1 + b2),
                    b1 + b2 < 0 ? "UNSTABLE(modulational)" : "INCONCLUSIVE"});
            }
        ordered_json config = {{"mode", "mod"}, {"alpha", cfg.alpha}, {"eps", cfg.eps}};
        emit(c, t, metaBlock("forms", config, tol));
        return;
    }

    if(epsGrid.size() != 1)
        throw UsageError("forms: a single epsilon value is required for this mode");
    const double e = epsGrid.front();
    ordered_json config = {{"eps", fmt17(e)}};
    t.columns = {"quantity", "value"};
    if(cfg.coalescence) {
        fm::TestFunction tf(fm::TestFunction::TestEven, 1);
        double v = fm::coalescence_check(tf.params(e));
        t.rows.push_back({"total", fmt17(v)});
        t.rows.push_back({"verdict", v < 0 ? "COALESCENCE-UNSTABLE" : "INCONCLUSIVE"});
        config["mode"] = "coalescence";
    } else {
        fm::TestFunction tf;
        if(cfg.modHalf) {
            tf = fm::TestFunction(fm::TestFunction::ModTestHalf);
            config["mode"] = "mod-half";
        } else {
            if(cfg.test == "even") tf = fm::TestFunction(fm::TestFunction::TestEven, cfg.k);
            else if(cfg.test == "odd1") tf = fm::TestFunction(fm::TestFunction::TestOdd1, cfg.k);
            else if(cfg.test == "odd2") tf = fm::TestFunction(fm::TestFunction::TestOdd2, cfg.k);
            else throw UsageError("forms: unknown test function '" + cfg.test + "'");
            config["mode"] = "test";
            config["test"] = cfg.test;
            config["k"] = cfg.k;
        }
        auto p = tf.params(e);
        double b1 = fm::form_b1(p, tf), b2 = fm::form_b2(p, tf, q);
        t.rows.push_back({"b1", fmt17(b1)});
        t.rows.push_back({"b2", fmt17(b2)});
        if(tf.id == fm::TestFunction::TestOdd1)
            t.rows.push_back({"b3", fmt17(fm::form_b3(p))});
        if(tf.id == fm::TestFunction::TestOdd2)
            t.rows.push_back({"b4", fmt17(fm::form_b4(p))});
        double total = b1 + b2;
        t.rows.push_back({"total", fmt17(total)});
        std::string verdict = total >= 0 ? "INCONCLUSIVE" :
            tf.modulational() ? "UNSTABLE(modulational)" : "UNSTABLE(" + periodLabel(tf.cells()) + ")";
        t.rows.push_back({"verdict", verdict});
    }
    emit(c, t, metaBlock("forms", config, tol));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"catseye: stability analysis of the Kelvin-Stuart cat's-eyes flow"};
    app.set_version_flag("--version", VERSION);
    app.require_subcommand(1);
    Common common;
    auto addCommon = [&](CLI::App* sub) {
        sub->add_option("-o,--out", common.out, "output file (default: standard output)");
        sub->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    SteadyConfig steadyCfg;
    auto* steady = app.add_subcommand("steady", "sample the equilibrium fields and coordinates");
    steady->add_option("--eps", steadyCfg.eps, "family parameter epsilon in [0,1)")->required();
    steady->add_option("--nx", steadyCfg.nx, "nodes in x");
    steady->add_option("--ny", steadyCfg.ny, "nodes in y");
    steady->add_option("--ymax", steadyCfg.ymax, "half-width of the y range");
    addCommon(steady);

    SpectrumConfig specCfg;
    auto* spectrum = app.add_subcommand("spectrum", "closed-form or Galerkin spectra");
    spectrum->add_flag("--exact", specCfg.exact, "list closed-form eigenvalues");
    spectrum->add_flag("--galerkin", specCfg.galerkin, "Galerkin eigenvalues of the co-periodic operator");
    spectrum->add_option("--problem", specCfg.problem, "coperiodic, multiperiodic or modulational");
    spectrum->add_option("--m", specCfg.m, "period multiplier (multiperiodic)");
    spectrum->add_option("--alpha", specCfg.alpha, "Floquet exponent (modulational)");
    spectrum->add_option("--lmax", specCfg.lmax, "largest eigenvalue listed");
    spectrum->add_option("--N", specCfg.N, "Galerkin truncation");
    spectrum->add_option("--eps", specCfg.eps, "epsilon grid start:stop:step");
    spectrum->add_option("--count", specCfg.count, "number of eigenvalues per column");
    addCommon(spectrum);

    GrowthConfig growthCfg;
    auto* growth = app.add_subcommand("growth", "modulational growth-rate sweep");
    growth->add_option("--alpha", growthCfg.alpha, "Floquet exponent in (0,1/2]")->required();
    growth->add_option("--eps", growthCfg.eps, "epsilon grid start:stop:step within [0,0.4]");
    growth->add_option("--N", growthCfg.N, "Galerkin truncation");
    growth->add_option("--bisect", growthCfg.bisect, "bisection steps for the crossing");
    addCommon(growth);

    FormsConfig formsCfg;
    auto* forms = app.add_subcommand("forms", "instability quadratic forms");
    forms->add_option("--test", formsCfg.test, "test function: even, odd1 or odd2");
    forms->add_option("--k", formsCfg.k, "period index of the test function");
    forms->add_flag("--mod", formsCfg.mod, "modulational test function (alpha, eps grids allowed)");
    forms->add_flag("--mod-half", formsCfg.modHalf, "modulational test function with alpha = 1/2");
    forms->add_flag("--coalescence", formsCfg.coalescence, "coalescence criterion");
    forms->add_option("--alpha", formsCfg.alpha, "alpha value or grid");
    forms->add_option("--eps", formsCfg.eps, "epsilon value (or grid with --mod)");
    forms->add_option("--inner-tol", formsCfg.innerTol, "curve quadrature tolerance");
    forms->add_option("--outer-tol", formsCfg.outerTol, "level quadrature tolerance");
    addCommon(forms);

    try {
        app.parse(argc, argv);
    }
    catch(const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : EXIT_USAGE;
    }

    try {
        if(*steady) cmdSteady(common, steadyCfg);
        else if(*spectrum) cmdSpectrum(common, specCfg);
        else if(*growth) cmdGrowth(common, growthCfg);
        else if(*forms) cmdForms(common, formsCfg);
    }
    catch(const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return EXIT_USAGE;
    }
    catch(const catseye::InvalidParams& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return EXIT_USAGE;
    }
    catch(const catseye::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return EXIT_NUMERIC;
    }
    catch(const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_NUMERIC;
    }
    return 0;
}
