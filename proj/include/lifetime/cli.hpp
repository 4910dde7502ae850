#pragma once

// Command-line front end: experiment configs, the five subcommands and the
// CSV / JSON / SVG writers they share.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "lifetime/acceptance.hpp"
#include "lifetime/domain_spectra.hpp"
#include "lifetime/montecarlo.hpp"
#include "lifetime/predictors.hpp"
#include "lifetime/subordination.hpp"

namespace lifetime::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidConfig = 2;

/// Worker-count default, read when the config and flags leave it unset.
inline constexpr const char* kWorkersEnv = "LIFETIME_WORKERS";

/// Stable CSV headers.
inline constexpr const char* kQuadratureHeader = "t,log_value,error,scaled,prediction,ratio";
inline constexpr const char* kConvergeHeader = "t,log_value,error,scaled,prediction,ratio,local_slope,fitted_slope";
inline constexpr const char* kConvergeBothExtra = ",mc_p_hat,mc_std_err";
inline constexpr const char* kMonteCarloHeader = "t,p_hat,std_err,n,seed";

inline constexpr const char* kReportSchema = "lifetime.verify/1";
inline constexpr const char* kPredictSchema = "lifetime.predict/1";

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Method { quadrature, montecarlo, both };

struct DomainSpec {
    std::vector<Interval> sides{{0.0, 1.0}};  ///< one side: interval, several: box
    int modes = kDefaultModes;
    SpectralDomain build() const;
};

struct ExperimentConfig {
    DomainSpec domain;
    std::vector<double> z{0.5};
    std::vector<double> ts{1e2, 1e3, 1e4, 1e5, 1e6};  ///< geometric, 5 points
    Method method = Method::quadrature;
    std::string prediction;  ///< tag, "tail", "none" or empty for the default
    std::string process;     ///< "ibm", "btbm", "bm" or empty for the prediction's
    std::optional<TwistedParams> twisted;
    std::optional<ParabolaParams> parabola;
    std::optional<TailLaw> tail;
    double rel_tol = 1e-9;
    double truncation_scale = 1.0;
    std::uint64_t n = 100000;
    std::uint64_t seed = 20240617;
    unsigned workers = 1;
    std::string csv_path, json_path, svg_path;
};

/// Geometric grid, `points` values from start to stop inclusive.
std::vector<double> geometric_grid(double start, double stop, int points);

/// Parse a config document. Missing keys keep their defaults.
ExperimentConfig parse_config(const nlohmann::json& doc, ExperimentConfig base = {});
nlohmann::json to_json(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

Method parse_method(const std::string& s);
std::string to_string(Method m);

/// Prediction for a synthetic BTBM driven by `tail`, when a closed form exists.
std::optional<AsymptoticPrediction> tail_prediction(const TailLaw& tail);

struct PredictionTable {
    std::vector<AsymptoticPrediction> rows;
    std::vector<std::pair<std::string, double>> constants;
};

PredictionTable collect_predictions(const ExperimentConfig& config);
/// The prediction a convergence run compares against, if any.
std::optional<AsymptoticPrediction> select_prediction(const ExperimentConfig& config);
/// Process resolved from the config and its prediction.
std::string resolve_process(const ExperimentConfig& config);

nlohmann::json to_json(const AsymptoticPrediction& p);
nlohmann::json to_json(const PredictionTable& table);

struct Row {
    double t = 0.0;
    double log_value = 0.0;
    double error = 0.0;
    double scaled = 0.0;
    double prediction = 0.0;
    double ratio = 0.0;
    double local_slope = 0.0;
    double fitted_slope = 0.0;
    double mc_p_hat = 0.0;
    double mc_std_err = 0.0;
};

std::vector<Row> run_quadrature(const ExperimentConfig& config);
std::vector<Row> run_converge(const ExperimentConfig& config);

std::string format_number(double v);

void write_quadrature_csv(std::ostream& os, const std::vector<Row>& rows);
void write_converge_csv(std::ostream& os, const std::vector<Row>& rows, bool with_mc);
void write_montecarlo_csv(std::ostream& os, const std::vector<double>& ts, const std::vector<McEstimate>& est);

/// Line plot with a logarithmic x axis.
void write_svg(std::ostream& os, const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& title, const std::string& y_label);

nlohmann::json acceptance_report(const std::vector<AcceptanceItem>& items);
/// Empty when the report matches the documented schema; otherwise the first violation.
std::string check_report_schema(const nlohmann::json& report);

/// Full command line; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lifetime::cli
