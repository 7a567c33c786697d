#include "attrec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "attrec/forward_operator.hpp"
#include "attrec/resolution.hpp"

namespace attrec {

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct IniFile {
    // section -> key -> value
    std::map<std::string, std::map<std::string, std::string>> data;
    std::set<std::pair<std::string, std::string>> consumed;
    std::filesystem::path dir;

    const std::string* find(const std::string& sec, const std::string& key)
    {
        auto s = data.find(sec);
        if (s == data.end())
            return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end())
            return nullptr;
        consumed.insert({sec, key});
        return &k->second;
    }

    void check_all_consumed() const
    {
        for (const auto& [sec, kv] : data)
            for (const auto& [key, val] : kv)
                if (!consumed.count({sec, key}))
                    throw std::runtime_error("config: unknown key '" + key + "' in section ["
                                             + sec + "]");
    }
};

IniFile parse_ini(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config " + path.string());
    IniFile ini;
    ini.dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: line " + std::to_string(lineno)
                                         + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw std::runtime_error("config: line " + std::to_string(lineno)
                                         + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno)
                                     + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config: line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw std::runtime_error("config: line " + std::to_string(lineno)
                                     + ": key outside any section");
        if (!ini.data[section].insert({key, val}).second)
            throw std::runtime_error("config: line " + std::to_string(lineno)
                                     + ": duplicate key '" + key + "'");
    }
    return ini;
}

double to_double(const std::string& sec, const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::runtime_error("config: [" + sec + "] " + key + ": bad number '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& sec, const std::string& key, const std::string& v)
{
    try {
        if (!v.empty() && v.front() == '-')
            throw std::invalid_argument(v);
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::runtime_error("config: [" + sec + "] " + key + ": bad integer '" + v + "'");
    }
}

bool to_bool(const std::string& sec, const std::string& key, const std::string& v)
{
    std::string s = v;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "on" || s == "true" || s == "yes" || s == "1")
        return true;
    if (s == "off" || s == "false" || s == "no" || s == "0")
        return false;
    throw std::runtime_error("config: [" + sec + "] " + key + ": bad flag '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            parts.push_back(item);
    }
    return parts;
}

std::vector<double> to_double_list(const std::string& sec, const std::string& key,
                                   const std::string& v)
{
    std::vector<double> out;
    for (const auto& p : split_list(v))
        out.push_back(to_double(sec, key, p));
    return out;
}

std::filesystem::path resolve(const IniFile& ini, const std::string& v)
{
    std::filesystem::path p(v);
    if (p.is_absolute())
        return p;
    return ini.dir / p;
}

} // namespace

ExperimentConfig default_config()
{
    ExperimentConfig cfg;
    cfg.law.alpha0 = alpha0_from_db_cm_mhz(0.56701151453314302, 1.5);
    cfg.law.y = 1.5;
    cfg.law.c0 = 1540.0;
    cfg.law.omega_ref = 2.0 * std::numbers::pi * 1e6;
    cfg.law.dispersion = true;
    cfg.phantom.kind = PhantomKind::single_delta;
    cfg.phantom.positions = {6.5e-6};
    cfg.phantom.amplitudes = {1.0};
    cfg.phantom.smoothing_width = 25e-9;
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    IniFile ini = parse_ini(path);
    ExperimentConfig cfg = default_config();

    if (const auto* v = ini.find("grid", "n"))
        cfg.grid.n = static_cast<std::size_t>(to_u64("grid", "n", *v));
    if (const auto* v = ini.find("grid", "dt_s"))
        cfg.grid.dt = to_double("grid", "dt_s", *v);
    if (const auto* v = ini.find("grid", "t0_s"))
        cfg.grid.t0 = to_double("grid", "t0_s", *v);

    double alpha_db = 0.56701151453314302;
    if (const auto* v = ini.find("law", "exponent_y"))
        cfg.law.y = to_double("law", "exponent_y", *v);
    if (const auto* v = ini.find("law", "alpha0_db_cm_mhz_y"))
        alpha_db = to_double("law", "alpha0_db_cm_mhz_y", *v);
    cfg.law.alpha0 = alpha0_from_db_cm_mhz(alpha_db, cfg.law.y);
    if (const auto* v = ini.find("law", "c0_m_s"))
        cfg.law.c0 = to_double("law", "c0_m_s", *v);
    if (const auto* v = ini.find("law", "f_ref_hz"))
        cfg.law.omega_ref = 2.0 * std::numbers::pi * to_double("law", "f_ref_hz", *v);
    if (const auto* v = ini.find("law", "dispersion"))
        cfg.law.dispersion = to_bool("law", "dispersion", *v);

    if (const auto* v = ini.find("experiment", "r_list_m"))
        cfg.r_list = to_double_list("experiment", "r_list_m", *v);
    if (const auto* v = ini.find("experiment", "snr"))
        cfg.snr = to_double("experiment", "snr", *v);
    if (const auto* v = ini.find("experiment", "seed"))
        cfg.seed = to_u64("experiment", "seed", *v);
    if (const auto* v = ini.find("experiment", "out_dir"))
        cfg.out_dir = *v;
    if (const auto* v = ini.find("experiment", "impulse_response_csv"))
        cfg.impulse_response_csv = resolve(ini, *v);

    if (const auto* v = ini.find("phantom", "kind")) {
        if (*v == "single_delta")
            cfg.phantom.kind = PhantomKind::single_delta;
        else if (*v == "two_delta")
            cfg.phantom.kind = PhantomKind::two_delta;
        else if (*v == "from_file")
            cfg.phantom.kind = PhantomKind::from_file;
        else
            throw std::runtime_error("config: [phantom] kind: unknown kind '" + *v + "'");
    }
    if (const auto* v = ini.find("phantom", "positions_s"))
        cfg.phantom.positions = to_double_list("phantom", "positions_s", *v);
    if (const auto* v = ini.find("phantom", "amplitudes"))
        cfg.phantom.amplitudes = to_double_list("phantom", "amplitudes", *v);
    if (const auto* v = ini.find("phantom", "smoothing_width_s"))
        cfg.phantom.smoothing_width = to_double("phantom", "smoothing_width_s", *v);
    if (const auto* v = ini.find("phantom", "file"))
        cfg.phantom.file = resolve(ini, *v);

    if (const auto* v = ini.find("tsvd", "explicit_cut_rad_s"))
        cfg.tsvd_explicit_cut = to_double("tsvd", "explicit_cut_rad_s", *v);

    if (const auto* v = ini.find("dr", "lambda"))
        cfg.dr.lambda = to_double("dr", "lambda", *v);
    if (const auto* v = ini.find("dr", "tau"))
        cfg.dr.tau = to_double("dr", "tau", *v);
    if (const auto* v = ini.find("dr", "lambda_factor"))
        cfg.dr.lambda_factor = to_double("dr", "lambda_factor", *v);
    if (const auto* v = ini.find("dr", "tau_factor"))
        cfg.dr.tau_factor = to_double("dr", "tau_factor", *v);
    if (const auto* v = ini.find("dr", "relaxation"))
        cfg.dr.relaxation = to_double("dr", "relaxation", *v);
    if (const auto* v = ini.find("dr", "max_iters"))
        cfg.dr.max_iters = static_cast<std::size_t>(to_u64("dr", "max_iters", *v));
    if (const auto* v = ini.find("dr", "tol"))
        cfg.dr.tol = to_double("dr", "tol", *v);

    BenchmarkSettings& b = cfg.benchmark;
    if (const auto* v = ini.find("benchmark", "separation_factors"))
        b.separation_factors = to_double_list("benchmark", "separation_factors", *v);
    if (const auto* v = ini.find("benchmark", "separations_s"))
        b.separations_s = to_double_list("benchmark", "separations_s", *v);
    if (const auto* v = ini.find("benchmark", "center_position_s"))
        b.center_position = to_double("benchmark", "center_position_s", *v);
    if (const auto* v = ini.find("benchmark", "smoothing_width_s"))
        b.smoothing_width = to_double("benchmark", "smoothing_width_s", *v);
    if (const auto* v = ini.find("benchmark", "dr_iters")) {
        b.dr_iters.clear();
        for (const auto& p : split_list(*v))
            b.dr_iters.push_back(static_cast<std::size_t>(to_u64("benchmark", "dr_iters", p)));
    }
    if (const auto* v = ini.find("benchmark", "repeats"))
        b.repeats = static_cast<std::size_t>(to_u64("benchmark", "repeats", *v));
    if (const auto* v = ini.find("benchmark", "peak_threshold"))
        b.peak_threshold = to_double("benchmark", "peak_threshold", *v);
    if (const auto* v = ini.find("benchmark", "valley_threshold"))
        b.valley_threshold = to_double("benchmark", "valley_threshold", *v);
    if (const auto* v = ini.find("benchmark", "roi_pad_factor"))
        b.roi_pad_factor = to_double("benchmark", "roi_pad_factor", *v);
    if (const auto* v = ini.find("benchmark", "dr_tau_factor"))
        b.dr_tau_factor = to_double("benchmark", "dr_tau_factor", *v);
    if (const auto* v = ini.find("benchmark", "dr_lambda_factor"))
        b.dr_lambda_factor = to_double("benchmark", "dr_lambda_factor", *v);
    if (const auto* v = ini.find("benchmark", "dr_relaxation"))
        b.dr_relaxation = to_double("benchmark", "dr_relaxation", *v);
    if (const auto* v = ini.find("benchmark", "dr_tol"))
        b.dr_tol = to_double("benchmark", "dr_tol", *v);

    ini.check_all_consumed();
    validate_config(cfg);
    return cfg;
}

double wrap_energy_ratio(const AttenuationLaw& law, const Grid& grid, double r,
                         const Signal& phantom)
{
    Grid padded{grid.n * 2, grid.dt, grid.t0};
    Signal s;
    s.grid = padded;
    s.samples.assign(padded.n, 0.0);
    std::copy(phantom.samples.begin(), phantom.samples.end(), s.samples.begin());
    const ForwardOperator op = build_operator(law, r, padded);
    const Signal out = apply(op, s);

    double zone = 0.0;
    for (std::size_t i = grid.n; i < padded.n; ++i)
        zone += out.samples[i] * out.samples[i];
    double total = 0.0;
    for (double v : phantom.samples)
        total += v * v;
    if (total == 0.0)
        throw std::invalid_argument("wrap check needs a nonzero phantom");
    return zone / total;
}

void validate_config(const ExperimentConfig& cfg)
{
    validate_grid(cfg.grid);
    validate_law(cfg.law);
    if (cfg.r_list.empty())
        throw std::runtime_error("config: r_list_m must not be empty");
    for (double r : cfg.r_list)
        if (!(r > 0.0) || !std::isfinite(r))
            throw std::runtime_error("config: r_list_m entries must be positive");
    if (!(cfg.snr > 1.0))
        throw std::runtime_error("config: snr must exceed 1");

    if (cfg.dr.lambda && !(*cfg.dr.lambda >= 0.0))
        throw std::runtime_error("config: [dr] lambda must be nonnegative");
    if (cfg.dr.tau && !(*cfg.dr.tau > 0.0))
        throw std::runtime_error("config: [dr] tau must be positive");
    if (!(cfg.dr.lambda_factor >= 0.0) || !(cfg.dr.tau_factor > 0.0))
        throw std::runtime_error("config: [dr] factors must be positive");
    if (!(cfg.dr.relaxation > 0.0) || !(cfg.dr.relaxation < 2.0))
        throw std::runtime_error("config: [dr] relaxation must lie in (0, 2)");
    if (cfg.dr.max_iters == 0)
        throw std::runtime_error("config: [dr] max_iters must be positive");
    if (!(cfg.dr.tol >= 0.0))
        throw std::runtime_error("config: [dr] tol must be nonnegative");

    const BenchmarkSettings& b = cfg.benchmark;
    if (b.separation_factors.empty() && b.separations_s.empty())
        throw std::runtime_error("config: benchmark needs separation_factors or separations_s");
    for (double f : b.separation_factors)
        if (!(f > 0.0))
            throw std::runtime_error("config: benchmark separation factors must be positive");
    for (double s : b.separations_s)
        if (!(s > 0.0))
            throw std::runtime_error("config: benchmark separations must be positive");
    if (b.dr_iters.empty())
        throw std::runtime_error("config: benchmark dr_iters must not be empty");
    for (std::size_t k : b.dr_iters)
        if (k == 0)
            throw std::runtime_error("config: benchmark dr_iters entries must be positive");
    if (b.repeats == 0)
        throw std::runtime_error("config: benchmark repeats must be positive");
    if (!(b.peak_threshold > 0.0) || !(b.peak_threshold < 1.0))
        throw std::runtime_error("config: benchmark peak_threshold must lie in (0, 1)");
    if (!(b.valley_threshold > 0.0) || !(b.valley_threshold <= 1.0))
        throw std::runtime_error("config: benchmark valley_threshold must lie in (0, 1]");
    if (!(b.roi_pad_factor >= 0.0))
        throw std::runtime_error("config: benchmark roi_pad_factor must be nonnegative");
    if (!(b.dr_tau_factor > 0.0) || !(b.dr_lambda_factor >= 0.0))
        throw std::runtime_error("config: benchmark dr factors must be positive");
    if (!(b.dr_relaxation > 0.0) || !(b.dr_relaxation < 2.0))
        throw std::runtime_error("config: benchmark dr_relaxation must lie in (0, 2)");
    if (!(b.dr_tol >= 0.0))
        throw std::runtime_error("config: benchmark dr_tol must be nonnegative");

    // wrap-around guard: the window must hold the phantom support plus the
    // propagation tails at the worst-case distance
    const double r_max = *std::max_element(cfg.r_list.begin(), cfg.r_list.end());
    const Signal phantom = generate_phantom(cfg.phantom, cfg.grid);
    const double ratio = wrap_energy_ratio(cfg.law, cfg.grid, r_max, phantom);
    if (!(ratio < 1e-8)) {
        std::ostringstream msg;
        msg << "config: grid window too short, wrap-around energy ratio " << ratio
            << " exceeds 1e-8 at r = " << r_max;
        throw std::runtime_error(msg.str());
    }

    if (cfg.law.alpha0 > 0.0) {
        const ResolutionReport rep = cutoff_frequency(cfg.law, r_max, cfg.snr);
        std::vector<double> seps = b.separations_s;
        if (seps.empty())
            for (double f : b.separation_factors)
                seps.push_back(f * rep.delta_time);
        const double widest = *std::max_element(seps.begin(), seps.end());
        PhantomSpec two;
        two.kind = PhantomKind::two_delta;
        two.positions = {b.center_position - widest / 2.0, b.center_position + widest / 2.0};
        two.smoothing_width = b.smoothing_width;
        const Signal bench_phantom = generate_phantom(two, cfg.grid);
        const double bench_ratio = wrap_energy_ratio(cfg.law, cfg.grid, r_max, bench_phantom);
        if (!(bench_ratio < 1e-8)) {
            std::ostringstream msg;
            msg << "config: benchmark phantom wraps around the grid, energy ratio "
                << bench_ratio << " exceeds 1e-8 at r = " << r_max;
            throw std::runtime_error(msg.str());
        }
    }
}

} // namespace attrec
