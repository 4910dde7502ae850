#include "lifetime/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "lifetime/exit_laws.hpp"
#include "lifetime/tauberian.hpp"

namespace lifetime::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string> kTopKeys{"domain", "z",        "t_grid",     "t_list",  "method", "prediction",
                                     "process", "twisted", "parabola",   "tail",    "tolerances",
                                     "montecarlo", "output"};

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

template <class T>
T get_or(const json& obj, const char* key, T fallback)
{
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

DomainSpec parse_domain(const json& d, DomainSpec base)
{
    require_keys(d, {"type", "bounds", "modes"}, "domain");
    const std::string type = get_or<std::string>(d, "type", "interval");
    if (!d.contains("bounds") || !d.at("bounds").is_array()) throw ConfigError("domain: bounds must be an array");
    const json& b = d.at("bounds");
    auto pair = [](const json& s) {
        if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
            throw ConfigError("domain: each side is a pair [a, b]");
        return Interval{s[0].get<double>(), s[1].get<double>()};
    };
    if (type == "interval") {
        base.sides = {pair(b)};
    } else if (type == "box") {
        if (b.empty()) throw ConfigError("domain: a box needs at least one side");
        base.sides.clear();
        for (const auto& s : b) base.sides.push_back(pair(s));
    } else {
        throw ConfigError("domain: type must be interval or box");
    }
    base.modes = get_or<int>(d, "modes", base.modes);
    return base;
}

TailLaw parse_tail(const json& t)
{
    require_keys(t, {"kind", "A", "lambda", "C", "p", "alpha", "beta", "u0"}, "tail");
    const std::string kind = get_or<std::string>(t, "kind", "");
    TailLaw law;
    if (kind == "exponential")
        law = TailLaw::exponential(get_or<double>(t, "A", 1.0), get_or<double>(t, "lambda", 1.0));
    else if (kind == "polynomial")
        law = TailLaw::polynomial(get_or<double>(t, "C", 1.0));
    else if (kind == "stretched_log")
        law = TailLaw::stretched_log(get_or<double>(t, "C", 1.0), get_or<double>(t, "p", 1.0));
    else if (kind == "algebraic_log")
        law = TailLaw::algebraic_log(get_or<double>(t, "C", 1.0), get_or<double>(t, "alpha", 0.5),
                                     get_or<double>(t, "beta", 0.0));
    else if (kind == "point_mass")
        law = TailLaw::point_mass(get_or<double>(t, "u0", 1.0));
    else
        throw ConfigError("tail: kind must be exponential, polynomial, stretched_log, algebraic_log or point_mass");
    if (kind != "point_mass") law.u0 = get_or<double>(t, "u0", law.u0);
    return law;
}

json tail_to_json(const TailLaw& law)
{
    json j{{"kind", to_string(law.kind)}, {"u0", law.u0}};
    switch (law.kind) {
    case TailKind::exponential: j["A"] = law.A; j["lambda"] = law.lambda; break;
    case TailKind::polynomial: j["C"] = law.C; break;
    case TailKind::stretched_log: j["C"] = law.C; j["p"] = law.p; break;
    case TailKind::algebraic_log: j["C"] = law.C; j["alpha"] = law.alpha; j["beta"] = law.beta; break;
    case TailKind::point_mass: break;
    }
    return j;
}

ParabolaParams parse_parabola(const json& p)
{
    require_keys(p, {"variant", "p", "A", "alpha", "beta", "nu"}, "parabola");
    ParabolaParams out;
    const std::string v = get_or<std::string>(p, "variant", "exp_power");
    if (v == "exp_power")
        out.variant = ParabolaVariant::exp_power;
    else if (v == "algebraic")
        out.variant = ParabolaVariant::algebraic;
    else
        throw ConfigError("parabola: variant must be exp_power or algebraic");
    out.p = get_or<double>(p, "p", out.p);
    out.A = get_or<double>(p, "A", out.A);
    out.alpha = get_or<double>(p, "alpha", out.alpha);
    out.beta = get_or<double>(p, "beta", out.beta);
    out.nu = get_or<double>(p, "nu", out.nu);
    return out;
}

bool is_tail_side(const std::string& tag)
{
    return tag == "tail" || tag.rfind("tail.", 0) == 0 || tag.rfind("twisted.", 0) == 0 ||
           tag.rfind("parabola", 0) == 0;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

std::vector<double> split_numbers(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("cannot read number '" + item + "'");
        }
    }
    return out;
}

}  // namespace

SpectralDomain DomainSpec::build() const
{
    if (sides.size() == 1) return spectrum_interval(sides[0].a, sides[0].b, modes);
    return spectrum_box(sides, modes);
}

std::vector<double> geometric_grid(double start, double stop, int points)
{
    if (points < 1) throw ConfigError("t_grid: points must be at least 1");
    if (!(start > 0.0 && stop >= start)) throw ConfigError("t_grid: need 0 < start <= stop");
    if (points == 1) return {start};
    std::vector<double> out(points);
    const double step = std::log(stop / start) / (points - 1);
    for (int i = 0; i < points; ++i) out[i] = start * std::exp(step * i);
    out.front() = start;
    out.back() = stop;
    return out;
}

Method parse_method(const std::string& s)
{
    if (s == "quadrature") return Method::quadrature;
    if (s == "montecarlo") return Method::montecarlo;
    if (s == "both") return Method::both;
    throw ConfigError("method must be quadrature, montecarlo or both");
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::montecarlo: return "montecarlo";
    case Method::both: return "both";
    }
    return "unknown";
}

ExperimentConfig parse_config(const json& doc, ExperimentConfig c)
{
    require_keys(doc, kTopKeys, "config");
    if (doc.contains("domain")) c.domain = parse_domain(doc.at("domain"), c.domain);
    if (doc.contains("z")) {
        const json& z = doc.at("z");
        if (z.is_number())
            c.z = {z.get<double>()};
        else
            c.z = get_or<std::vector<double>>(doc, "z", c.z);
    }
    if (doc.contains("t_grid") && doc.contains("t_list")) throw ConfigError("give either t_grid or t_list, not both");
    if (doc.contains("t_grid")) {
        const json& g = doc.at("t_grid");
        require_keys(g, {"start", "stop", "points"}, "t_grid");
        c.ts = geometric_grid(get_or<double>(g, "start", 0.0), get_or<double>(g, "stop", 0.0),
                              get_or<int>(g, "points", 0));
    }
    if (doc.contains("t_list")) c.ts = get_or<std::vector<double>>(doc, "t_list", {});
    if (doc.contains("method")) c.method = parse_method(get_or<std::string>(doc, "method", ""));
    c.prediction = get_or<std::string>(doc, "prediction", c.prediction);
    c.process = get_or<std::string>(doc, "process", c.process);
    if (doc.contains("twisted")) {
        const json& t = doc.at("twisted");
        require_keys(t, {"gamma", "p"}, "twisted");
        c.twisted = TwistedParams{get_or<double>(t, "gamma", 1.0), get_or<double>(t, "p", 1.0)};
    }
    if (doc.contains("parabola")) c.parabola = parse_parabola(doc.at("parabola"));
    if (doc.contains("tail")) c.tail = parse_tail(doc.at("tail"));
    if (doc.contains("tolerances")) {
        const json& t = doc.at("tolerances");
        require_keys(t, {"rel_tol", "truncation_scale"}, "tolerances");
        c.rel_tol = get_or<double>(t, "rel_tol", c.rel_tol);
        c.truncation_scale = get_or<double>(t, "truncation_scale", c.truncation_scale);
    }
    if (doc.contains("montecarlo")) {
        const json& m = doc.at("montecarlo");
        require_keys(m, {"n", "seed", "workers"}, "montecarlo");
        c.n = get_or<std::uint64_t>(m, "n", c.n);
        c.seed = get_or<std::uint64_t>(m, "seed", c.seed);
        c.workers = get_or<unsigned>(m, "workers", c.workers);
    }
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        require_keys(o, {"csv", "json", "svg"}, "output");
        c.csv_path = get_or<std::string>(o, "csv", c.csv_path);
        c.json_path = get_or<std::string>(o, "json", c.json_path);
        c.svg_path = get_or<std::string>(o, "svg", c.svg_path);
    }
    return c;
}

json to_json(const ExperimentConfig& c)
{
    json j;
    json bounds = json::array();
    for (const auto& side : c.domain.sides) bounds.push_back({side.a, side.b});
    if (c.domain.sides.size() == 1)
        j["domain"] = {{"type", "interval"}, {"bounds", bounds[0]}, {"modes", c.domain.modes}};
    else
        j["domain"] = {{"type", "box"}, {"bounds", bounds}, {"modes", c.domain.modes}};
    j["z"] = c.z;
    j["t_list"] = c.ts;
    j["method"] = to_string(c.method);
    j["prediction"] = c.prediction;
    j["process"] = c.process;
    if (c.twisted) j["twisted"] = {{"gamma", c.twisted->gamma}, {"p", c.twisted->p}};
    if (c.parabola) {
        const auto& p = *c.parabola;
        j["parabola"] = {{"variant", p.variant == ParabolaVariant::exp_power ? "exp_power" : "algebraic"},
                         {"p", p.p}, {"A", p.A}, {"alpha", p.alpha}, {"beta", p.beta}, {"nu", p.nu}};
    }
    if (c.tail) j["tail"] = tail_to_json(*c.tail);
    j["tolerances"] = {{"rel_tol", c.rel_tol}, {"truncation_scale", c.truncation_scale}};
    j["montecarlo"] = {{"n", c.n}, {"seed", c.seed}, {"workers", c.workers}};
    j["output"] = {{"csv", c.csv_path}, {"json", c.json_path}, {"svg", c.svg_path}};
    return j;
}

void validate(const ExperimentConfig& c)
{
    if (c.ts.empty()) throw ConfigError("t grid is empty");
    for (std::size_t i = 0; i < c.ts.size(); ++i) {
        if (!(c.ts[i] > 0.0 && std::isfinite(c.ts[i]))) throw ConfigError("times must be positive and finite");
        if (i > 0 && !(c.ts[i] > c.ts[i - 1])) throw ConfigError("t grid must be strictly increasing");
    }
    if (!(c.rel_tol > 0.0)) throw ConfigError("tolerances: rel_tol must be positive");
    if (!(c.truncation_scale > 0.0)) throw ConfigError("tolerances: truncation_scale must be positive");
    if (c.n < 1) throw ConfigError("montecarlo: n must be at least 1");
    if (c.workers < 1) throw ConfigError("montecarlo: workers must be at least 1");
    if (c.domain.modes < 1) throw ConfigError("domain: modes must be at least 1");
    for (const auto& s : c.domain.sides)
        if (!(s.b > s.a)) throw ConfigError("domain: each side needs a < b");
    try {
        const SpectralDomain d = c.domain.build();
        if (c.z.size() != d.dimension()) throw ConfigError("z must have one coordinate per domain side");
        if (!d.contains(c.z)) throw ConfigError("z must lie strictly inside the domain");
        if (c.twisted) predict_twisted(*c.twisted);
        if (c.parabola) predict_parabola(*c.parabola);
        if (c.tail) c.tail->validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!c.process.empty() && c.process != "bm" && c.process != "ibm" && c.process != "btbm")
        throw ConfigError("process must be bm, ibm or btbm");
    if (c.tail && c.method != Method::quadrature)
        throw ConfigError("tail-transfer runs use quadrature only; Monte Carlo needs a spectral domain");
    if (!c.prediction.empty() && c.prediction != "none") {
        const PredictionTable table = collect_predictions(c);
        bool known = c.prediction == "tail" && c.tail.has_value();
        for (const auto& r : table.rows) known = known || r.tag == c.prediction;
        if (!known) throw ConfigError("prediction '" + c.prediction + "' is not available for this config");
        if (is_tail_side(c.prediction) && !c.tail)
            throw ConfigError("prediction '" + c.prediction + "' is a tail-transfer prediction and needs a tail spec");
    }
    resolve_process(c);
}

std::optional<AsymptoticPrediction> tail_prediction(const TailLaw& tail)
{
    AsymptoticPrediction p;
    p.tag = "tail.btbm";
    p.process = "btbm";
    p.form = ScaleForm::log;
    switch (tail.kind) {
    case TailKind::polynomial:
        p.log_power = -1.0;
        p.rate = -tail.C / 2.0;
        return p;
    case TailKind::stretched_log:
        p.t_power = 1.0 / 3.0;
        p.log_power = 4.0 / (3.0 * tail.p);
        p.rate = -parabola_exp_constant(tail.p, tail.C);
        return p;
    case TailKind::algebraic_log: {
        const double a = tail.alpha, b = tail.beta;
        p.t_power = (1.0 - a) / (3.0 + a);
        p.log_power = 4.0 * b * (1.0 + a) / (3.0 + a);
        p.rate = -algebraic_btbm_constant(tail.C, a, b);
        return p;
    }
    case TailKind::exponential: {
        // min over u of λu + π² t/(8u²)
        p.t_power = 1.0 / 3.0;
        p.rate = -1.5 * std::pow(tail.lambda, 2.0 / 3.0) * std::cbrt(std::numbers::pi * std::numbers::pi / 4.0);
        return p;
    }
    case TailKind::point_mass: return std::nullopt;
    }
    return std::nullopt;
}

PredictionTable collect_predictions(const ExperimentConfig& c)
{
    PredictionTable table;
    const SpectralDomain domain = c.domain.build();
    const Principal pr = principal(domain, c.z);
    const BoundedPredictions b = predict_bounded(domain, c.z);
    table.rows = {b.bm, b.ibm_log, b.ibm_sharp};
    table.constants = {{"lambda_D", pr.lambda},
                       {"psi(z)", pr.psi},
                       {"psi_integral", pr.psi_integral},
                       {"ibm_constant", *b.ibm_sharp.prefactor_constant},
                       {"ibm_rate", b.ibm_log.rate}};
    if (c.twisted) {
        const TwistedPredictions t = predict_twisted(*c.twisted);
        table.rows.insert(table.rows.end(), {t.bm, t.ibm, t.btbm});
        if (c.twisted->p == 1.0) {
            table.constants.emplace_back("C_gamma", twisted_c_gamma(c.twisted->gamma));
        } else {
            table.constants.emplace_back("l1", twisted_l1(c.twisted->gamma, c.twisted->p));
            table.constants.emplace_back("C_p", twisted_cp(c.twisted->p));
            table.constants.emplace_back("btbm_over_ibm", twisted_btbm_factor(c.twisted->p));
        }
    }
    if (c.parabola) {
        const ParabolaPredictions p = predict_parabola(*c.parabola);
        std::set<std::string> seen;
        for (const auto& r : {p.bm_lower, p.bm_upper, p.btbm_lower, p.btbm_upper, p.ibm_upper})
            if (seen.insert(r.tag).second) table.rows.push_back(r);
        table.constants.emplace_back("j_nu", bessel_zero(c.parabola->nu));
    }
    if (c.tail)
        if (auto p = tail_prediction(*c.tail)) table.rows.push_back(*p);
    return table;
}

std::optional<AsymptoticPrediction> select_prediction(const ExperimentConfig& c)
{
    std::string tag = c.prediction;
    if (tag == "none") return std::nullopt;
    if (tag.empty()) {
        if (c.tail) {
            tag = "tail";
        } else {
            const std::string proc = c.process.empty() ? "ibm" : c.process;
            if (proc == "ibm") tag = "bounded.ibm_sharp";
            else if (proc == "bm") tag = "bounded.bm";
            else return std::nullopt;
        }
    }
    if (tag == "tail") {
        if (!c.tail) throw ConfigError("prediction 'tail' needs a tail spec");
        return tail_prediction(*c.tail);
    }
    for (const auto& r : collect_predictions(c).rows)
        if (r.tag == tag) return r;
    throw ConfigError("prediction '" + tag + "' is not available for this config");
}

std::string resolve_process(const ExperimentConfig& c)
{
    const auto pred = select_prediction(c);
    std::string proc = c.process;
    if (proc.empty()) proc = pred ? pred->process : (c.tail ? "btbm" : "ibm");
    if (pred && pred->process != proc)
        throw ConfigError("process '" + proc + "' does not match prediction '" + pred->tag + "' (" + pred->process +
                          ")");
    if (c.tail && proc != "btbm") throw ConfigError("tail-transfer evaluates the BTBM survival only");
    return proc;
}

json to_json(const AsymptoticPrediction& p)
{
    json j{{"tag", p.tag},
           {"process", p.process},
           {"form", to_string(p.form)},
           {"scaled_quantity", p.scale_description()},
           {"t_power", p.t_power},
           {"log_power", p.log_power},
           {"rate", p.rate},
           {"prefactor_power", p.prefactor_power},
           {"bound", to_string(p.bound)},
           {"sharp", p.sharp}};
    j["prefactor_constant"] = p.prefactor_constant ? json(*p.prefactor_constant) : json(nullptr);
    return j;
}

json to_json(const PredictionTable& t)
{
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back(to_json(r));
    json constants = json::object();
    for (const auto& [k, v] : t.constants) constants[k] = v;
    return {{"schema", kPredictSchema}, {"predictions", rows}, {"constants", constants}};
}

namespace {

Estimate estimate_at(const ExperimentConfig& c, const SpectralDomain& domain, const std::string& proc, double t)
{
    SubordinationOptions opt;
    opt.rel_tol = c.rel_tol;
    opt.truncation_scale = c.truncation_scale;
    if (c.tail) return btbm_survival_tail(*c.tail, t, opt);
    if (proc == "ibm") return ibm_survival(domain, c.z, t, opt);
    if (proc == "btbm") return btbm_survival_density(domain, c.z, t, opt);
    Estimate e;
    e.log_value = log_domain_survival(domain, c.z, t);
    return e;
}

void fill_prediction(Row& r, const Estimate& e, const std::optional<AsymptoticPrediction>& p)
{
    r.scaled = r.prediction = r.ratio = kNaN;
    if (!p) return;
    if (p->form == ScaleForm::sharp) {
        r.scaled = scaled_ratio(e, r.t, *p);
        r.prediction = *p->prefactor_constant;
    } else {
        if (!(r.t > std::numbers::e)) return;
        r.scaled = log_scaled(e, r.t, *p);
        r.prediction = p->rate;
    }
    r.ratio = r.scaled / r.prediction;
}

ExitSampler make_sampler(const SpectralDomain& domain, const std::vector<double>& z, const std::string& proc)
{
    if (proc == "ibm") return [&domain, &z](DrawStream& r) { return sample_ibm_exit(domain, z, r); };
    if (proc == "btbm") return [&domain, &z](DrawStream& r) { return sample_btbm_exit(domain, z, r); };
    return [&domain, &z](DrawStream& r) { return sample_domain_exit(domain, z, r); };
}

}  // namespace

std::vector<Row> run_quadrature(const ExperimentConfig& c)
{
    validate(c);
    const SpectralDomain domain = c.domain.build();
    const std::string proc = resolve_process(c);
    const auto pred = select_prediction(c);
    std::vector<Row> rows;
    for (double t : c.ts) {
        const Estimate e = estimate_at(c, domain, proc, t);
        Row r;
        r.t = t;
        r.log_value = e.log_value;
        r.error = e.abs_error_log;
        fill_prediction(r, e, pred);
        r.local_slope = r.fitted_slope = r.mc_p_hat = r.mc_std_err = kNaN;
        rows.push_back(r);
    }
    return rows;
}

std::vector<Row> run_converge(const ExperimentConfig& c)
{
    if (c.method == Method::montecarlo) throw ConfigError("converge needs method quadrature or both");
    std::vector<Row> rows = run_quadrature(c);
    std::vector<double> lt, lp;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        lt.push_back(std::log(rows[i].t));
        lp.push_back(rows[i].log_value);
        if (i > 0) {
            rows[i].local_slope = (lp[i] - lp[i - 1]) / (lt[i] - lt[i - 1]);
            rows[i].fitted_slope = least_squares_slope(lt, lp);
        }
    }
    if (c.method == Method::both) {
        const SpectralDomain domain = c.domain.build();
        const std::vector<McEstimate> mc =
            estimate_survival(make_sampler(domain, c.z, resolve_process(c)), c.ts, c.n, c.seed, c.workers);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i].mc_p_hat = mc[i].p_hat;
            rows[i].mc_std_err = mc[i].std_err;
        }
    }
    return rows;
}

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_quadrature_csv(std::ostream& os, const std::vector<Row>& rows)
{
    os << kQuadratureHeader << '\n';
    for (const Row& r : rows)
        os << format_number(r.t) << ',' << format_number(r.log_value) << ',' << format_number(r.error) << ','
           << format_number(r.scaled) << ',' << format_number(r.prediction) << ',' << format_number(r.ratio) << '\n';
}

void write_converge_csv(std::ostream& os, const std::vector<Row>& rows, bool with_mc)
{
    os << kConvergeHeader << (with_mc ? kConvergeBothExtra : "") << '\n';
    for (const Row& r : rows) {
        os << format_number(r.t) << ',' << format_number(r.log_value) << ',' << format_number(r.error) << ','
           << format_number(r.scaled) << ',' << format_number(r.prediction) << ',' << format_number(r.ratio) << ','
           << format_number(r.local_slope) << ',' << format_number(r.fitted_slope);
        if (with_mc) os << ',' << format_number(r.mc_p_hat) << ',' << format_number(r.mc_std_err);
        os << '\n';
    }
}

void write_montecarlo_csv(std::ostream& os, const std::vector<double>& ts, const std::vector<McEstimate>& est)
{
    os << kMonteCarloHeader << '\n';
    for (std::size_t i = 0; i < ts.size(); ++i)
        os << format_number(ts[i]) << ',' << format_number(est[i].p_hat) << ',' << format_number(est[i].std_err)
           << ',' << est[i].n << ',' << est[i].seed << '\n';
}

void write_svg(std::ostream& os, const std::vector<double>& xs, const std::vector<double>& ys, const std::string& title,
               const std::string& y_label)
{
    const double W = 640, H = 400, ml = 70, mr = 20, mt = 40, mb = 50;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
        if (xs[i] > 0 && std::isfinite(ys[i])) pts.emplace_back(std::log10(xs[i]), ys[i]);
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!pts.empty()) {
        x0 = x1 = pts[0].first;
        y0 = y1 = pts[0].second;
        for (auto [x, y] : pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (x1 - x0 < 1e-12) x1 = x0 + 1, x0 -= 1;
    if (y1 - y0 < 1e-12 * std::max(1.0, std::abs(y0))) y1 = y0 + 1, y0 -= 1;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n"
       << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">log10 t</text>\n"
       << "<text x=\"16\" y=\"" << H / 2 << "\" transform=\"rotate(-90 16 " << H / 2
       << ")\" text-anchor=\"middle\" font-size=\"12\">" << y_label << "</text>\n";
    for (double v : {x0, x1})
        os << "<text x=\"" << px(v) << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
           << format_number(v) << "</text>\n";
    for (double v : {y0, y1})
        os << "<text x=\"" << ml - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
           << format_number(v) << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (auto [x, y] : pts) os << px(x) << ',' << py(y) << ' ';
    os << "\"/>\n";
    for (auto [x, y] : pts) os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"steelblue\"/>\n";
    os << "</svg>\n";
}

json acceptance_report(const std::vector<AcceptanceItem>& items)
{
    json arr = json::array();
    bool all = true;
    for (const auto& it : items) {
        json metrics = json::object();
        for (const auto& [k, v] : it.metrics) metrics[k] = std::isfinite(v) ? json(v) : json(format_number(v));
        arr.push_back({{"id", it.id},
                       {"name", it.name},
                       {"passed", it.passed},
                       {"detail", it.detail},
                       {"seconds", it.seconds},
                       {"budget_seconds", it.budget_seconds},
                       {"metrics", metrics}});
        all = all && it.passed;
    }
    return {{"schema", kReportSchema}, {"passed", all}, {"items", arr}};
}

std::string check_report_schema(const json& r)
{
    if (!r.is_object()) return "report is not an object";
    if (r.value("schema", "") != kReportSchema) return "schema field missing or wrong";
    if (!r.contains("passed") || !r["passed"].is_boolean()) return "passed must be a boolean";
    if (!r.contains("items") || !r["items"].is_array()) return "items must be an array";
    bool all = true;
    for (const auto& it : r["items"]) {
        if (!it.is_object()) return "item is not an object";
        if (!it.contains("id") || !it["id"].is_number_integer()) return "item id must be an integer";
        if (!it.contains("name") || !it["name"].is_string()) return "item name must be a string";
        if (!it.contains("passed") || !it["passed"].is_boolean()) return "item passed must be a boolean";
        if (!it.contains("detail") || !it["detail"].is_string()) return "item detail must be a string";
        if (!it.contains("seconds") || !it["seconds"].is_number()) return "item seconds must be a number";
        if (!it.contains("budget_seconds") || !it["budget_seconds"].is_number())
            return "item budget_seconds must be a number";
        if (!it.contains("metrics") || !it["metrics"].is_object()) return "item metrics must be an object";
        for (const auto& [k, v] : it["metrics"].items())
            if (!v.is_number() && !v.is_string()) return "metric " + k + " must be a number or string";
        all = all && it["passed"].get<bool>();
    }
    if (all != r["passed"].get<bool>()) return "passed disagrees with the items";
    return {};
}

namespace {

struct Overrides {
    std::string config_path;
    std::string interval, z, t_list, t_grid, method, prediction, process, csv, json_out, svg;
    std::vector<std::string> sets;
    std::uint64_t n = 0, seed = 0;
    unsigned workers = 0;
    double rel_tol = 0.0;
    bool n_set = false, seed_set = false, workers_set = false, rel_tol_set = false;
};

void add_common(CLI::App* sub, Overrides& o)
{
    sub->add_option("-c,--config", o.config_path, "JSON experiment config");
    sub->add_option("--interval", o.interval, "interval domain a,b");
    sub->add_option("--z", o.z, "starting point, comma separated");
    sub->add_option("--t", o.t_list, "times, comma separated");
    sub->add_option("--t-grid", o.t_grid, "geometric grid start,stop,points");
    sub->add_option("--method", o.method, "quadrature, montecarlo or both");
    sub->add_option("--prediction", o.prediction, "prediction tag, tail or none");
    sub->add_option("--process", o.process, "bm, ibm or btbm");
    sub->add_option("--n", o.n, "Monte Carlo sample count");
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
    sub->add_option("--workers", o.workers, "worker threads");
    sub->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    sub->add_option("--csv", o.csv, "CSV output path (default stdout)");
    sub->add_option("--json", o.json_out, "JSON output path");
    sub->add_option("--svg", o.svg, "SVG plot path");
    sub->add_option("--set", o.sets, "override a config key: path.to.key=<json value>");
}

void set_path(json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::exception&) {
        value = text;
    }
    json* node = &doc;
    std::stringstream ss(path);
    std::string key;
    std::vector<std::string> keys;
    while (std::getline(ss, key, '.')) keys.push_back(key);
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        json& next = (*node)[keys[i]];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) throw ConfigError("--set: '" + keys[i] + "' is not an object");
        node = &next;
    }
    (*node)[keys.back()] = value;
}

unsigned env_workers(unsigned fallback)
{
    const char* env = std::getenv(kWorkersEnv);
    if (!env) return fallback;
    try {
        std::size_t used = 0;
        const long w = std::stol(env, &used);
        if (w < 1 || env[used] != '\0') throw std::invalid_argument(env);
        return static_cast<unsigned>(w);
    } catch (const std::exception&) {
        throw ConfigError(std::string(kWorkersEnv) + " must be a positive integer");
    }
}

ExperimentConfig load(const Overrides& o)
{
    json doc = json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError("cannot open config '" + o.config_path + "'");
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError("config '" + o.config_path + "' is not valid JSON: " + e.what());
        }
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (!o.interval.empty()) {
        const auto v = split_numbers(o.interval);
        if (v.size() != 2) throw ConfigError("--interval expects a,b");
        doc["domain"] = {{"type", "interval"}, {"bounds", {v[0], v[1]}}};
    }
    if (!o.z.empty()) doc["z"] = split_numbers(o.z);
    if (!o.t_list.empty()) {
        doc.erase("t_grid");
        doc["t_list"] = split_numbers(o.t_list);
    }
    if (!o.t_grid.empty()) {
        const auto v = split_numbers(o.t_grid);
        if (v.size() != 3) throw ConfigError("--t-grid expects start,stop,points");
        doc.erase("t_list");
        doc["t_grid"] = {{"start", v[0]}, {"stop", v[1]}, {"points", static_cast<int>(v[2])}};
    }
    if (!o.method.empty()) doc["method"] = o.method;
    if (!o.prediction.empty()) doc["prediction"] = o.prediction;
    if (!o.process.empty()) doc["process"] = o.process;
    if (o.n_set) doc["montecarlo"]["n"] = o.n;
    if (o.seed_set) doc["montecarlo"]["seed"] = o.seed;
    if (o.workers_set) doc["montecarlo"]["workers"] = o.workers;
    if (o.rel_tol_set) doc["tolerances"]["rel_tol"] = o.rel_tol;
    if (!o.csv.empty()) doc["output"]["csv"] = o.csv;
    if (!o.json_out.empty()) doc["output"]["json"] = o.json_out;
    if (!o.svg.empty()) doc["output"]["svg"] = o.svg;
    for (const auto& s : o.sets) set_path(doc, s);

    ExperimentConfig base;
    base.workers = env_workers(base.workers);
    return parse_config(doc, base);
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    return f;
}

template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer w)
{
    if (path.empty() || path == "-") {
        w(out);
    } else {
        std::ofstream f = open_out(path);
        w(f);
    }
}

void emit_plot(const ExperimentConfig& c, const std::vector<Row>& rows, const std::string& title)
{
    if (c.svg_path.empty()) return;
    std::vector<double> xs, ys;
    bool have_ratio = false;
    for (const Row& r : rows) have_ratio = have_ratio || std::isfinite(r.ratio);
    for (const Row& r : rows) {
        xs.push_back(r.t);
        ys.push_back(have_ratio ? r.ratio : r.log_value);
    }
    std::ofstream f = open_out(c.svg_path);
    write_svg(f, xs, ys, title, have_ratio ? "ratio to prediction" : "log P");
}

int cmd_predict(const ExperimentConfig& c, bool as_json, std::ostream& out)
{
    validate(c);
    const PredictionTable table = collect_predictions(c);
    if (!c.json_path.empty()) {
        std::ofstream f = open_out(c.json_path);
        f << to_json(table).dump(2) << '\n';
    }
    if (as_json) {
        out << to_json(table).dump(2) << '\n';
        return kExitOk;
    }
    char line[256];
    std::snprintf(line, sizeof line, "%-26s %-6s %-36s %14s  %-6s %s\n", "tag", "proc", "scaled quantity", "value",
                  "bound", "sharp");
    out << line;
    for (const auto& r : table.rows) {
        const double v = r.form == ScaleForm::sharp ? *r.prefactor_constant : r.rate;
        std::snprintf(line, sizeof line, "%-26s %-6s %-36s %14.6g  %-6s %s\n", r.tag.c_str(), r.process.c_str(),
                      r.scale_description().c_str(), v, to_string(r.bound).c_str(), r.sharp ? "yes" : "no");
        out << line;
    }
    out << '\n';
    for (const auto& [k, v] : table.constants) {
        std::snprintf(line, sizeof line, "%-26s %.10g\n", k.c_str(), v);
        out << line;
    }
    return kExitOk;
}

int cmd_verify(const AcceptanceOptions& opt, const std::string& json_path, int only, std::ostream& out)
{
    std::vector<AcceptanceItem> items;
    if (only > 0)
        items.push_back(run_acceptance_item(only, opt));
    else
        items = run_acceptance(opt);
    for (const auto& it : items) {
        char line[160];
        std::snprintf(line, sizeof line, "[%s] %d %-32s %8.2fs  ", it.passed ? "PASS" : "FAIL", it.id,
                      it.name.c_str(), it.seconds);
        out << line << it.detail << '\n';
    }
    const json report = acceptance_report(items);
    if (!json_path.empty()) {
        std::ofstream f = open_out(json_path);
        f << report.dump(2) << '\n';
    }
    return report["passed"].get<bool>() ? kExitOk : kExitFailure;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Lifetime asymptotics for iterated and Brownian-time Brownian motion"};
    app.require_subcommand(1);

    Overrides po, qo, mo, co;
    bool predict_json = false;
    auto* predict = app.add_subcommand("predict", "closed-form constants for the configured domain");
    add_common(predict, po);
    predict->add_flag("--format-json", predict_json, "print JSON instead of the table");
    auto* quad = app.add_subcommand("quadrature", "survival by quadrature on the t grid");
    add_common(quad, qo);
    auto* mc = app.add_subcommand("montecarlo", "survival by Monte Carlo on the t grid");
    add_common(mc, mo);
    auto* conv = app.add_subcommand("converge", "scaled survival against the selected prediction");
    add_common(conv, co);

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    bool inject = false;
    std::string verify_json;
    int only = 0;
    AcceptanceOptions vopt;
    verify->add_flag("--inject-fault", inject, "perturb the sharp bounded-domain constant by 10%");
    verify->add_option("--json", verify_json, "JSON report path");
    verify->add_option("--item", only, "run a single item")->check(CLI::Range(1, 9));
    verify->add_option("--seed", vopt.seed, "Monte Carlo seed");
    auto* vworkers = verify->add_option("--workers", vopt.workers, "worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidConfig;
    }

    auto mark = [](CLI::App* sub, Overrides& o) {
        o.n_set = sub->count("--n") > 0;
        o.seed_set = sub->count("--seed") > 0;
        o.workers_set = sub->count("--workers") > 0;
        o.rel_tol_set = sub->count("--rel-tol") > 0;
    };

    try {
        if (*predict) {
            mark(predict, po);
            return cmd_predict(load(po), predict_json, out);
        }
        if (*quad) {
            mark(quad, qo);
            const ExperimentConfig c = load(qo);
            const auto rows = run_quadrature(c);
            emit(c.csv_path, out, [&](std::ostream& os) { write_quadrature_csv(os, rows); });
            emit_plot(c, rows, "quadrature");
            return kExitOk;
        }
        if (*mc) {
            mark(mc, mo);
            ExperimentConfig c = load(mo);
            if (c.tail) throw ConfigError("montecarlo needs a spectral domain, not a tail spec");
            c.method = Method::montecarlo;
            validate(c);
            const std::string proc = c.process.empty() ? "ibm" : c.process;
            if (proc != "bm" && proc != "ibm" && proc != "btbm") throw ConfigError("process must be bm, ibm or btbm");
            const SpectralDomain domain = c.domain.build();
            const auto est = estimate_survival(make_sampler(domain, c.z, proc), c.ts, c.n, c.seed, c.workers);
            emit(c.csv_path, out, [&](std::ostream& os) { write_montecarlo_csv(os, c.ts, est); });
            if (!c.svg_path.empty()) {
                std::vector<double> ys;
                for (const auto& e : est) ys.push_back(e.p_hat);
                std::ofstream f = open_out(c.svg_path);
                write_svg(f, c.ts, ys, "Monte Carlo survival", "p_hat");
            }
            return kExitOk;
        }
        if (*conv) {
            mark(conv, co);
            const ExperimentConfig c = load(co);
            const auto rows = run_converge(c);
            emit(c.csv_path, out,
                 [&](std::ostream& os) { write_converge_csv(os, rows, c.method == Method::both); });
            emit_plot(c, rows, "convergence");
            return kExitOk;
        }
        if (*verify) {
            if (inject) vopt.constant_scale = 1.1;
            if (vworkers->count() == 0)
                vopt.workers = env_workers(vopt.workers);
            return cmd_verify(vopt, verify_json, only, out);
        }
    } catch (const std::invalid_argument& e) {
        err << "invalid config: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace lifetime::cli
