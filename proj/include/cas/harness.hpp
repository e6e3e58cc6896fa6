#pragma once

#include "cas/greeks.hpp"
#include "cas/models.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cas::harness {

// Estimator families from the experiment tables. RQMC_* integrate the raw
// payoff under a rotation, PRE_* pre-integrate the first rotated variable.
// PRE_AS is the chemical-network variant (last-step pre-integration plus a
// constrained rotation).
enum class Method { Mc, RqmcStd, RqmcPca, RqmcAs, PreStd, PrePca, PreCas, PreAs };

std::string to_string(Method method);
std::optional<Method> parse_method(const std::string& token);

struct SpreadProblem {
    models::BasketSpec spec;
};
struct SvProblem {
    models::SvSpec spec;
};
struct GreekProblem {
    models::GbmSpec spec;
    greeks::GreekKind kind = greeks::GreekKind::Delta;
};
struct CleProblem {
    models::CleSpec spec;
};
using Problem = std::variant<SpreadProblem, SvProblem, GreekProblem, CleProblem>;

std::string problem_name(const Problem& problem);
double problem_rho(const Problem& problem);
double problem_strike(const Problem& problem);

struct ExperimentConfig {
    Problem problem;
    std::vector<Method> methods; // MC is always added implicitly
    int n = 1 << 14;
    int reps = 50;
    int m_grad = 256;
    double eps_fd = 1e-6;
    std::uint64_t base_seed = 1;
    int workers = 0; // 0 = hardware concurrency
};

struct EstimatorResult {
    double mean = 0.0;   // mean of replicate means (discounted where applicable)
    double se = 0.0;     // standard error of the replicate means
    double setup_seconds = 0.0; // rotation / C-hat estimation, once per method
    double run_seconds = 0.0;
};

// Runs `reps` independent replicates of one method. Replicate r scrambles
// with a seed derived from (base_seed, method, r); rotations and C-hat are
// computed once up front from a dedicated sub-seed.
EstimatorResult run_estimator(const ExperimentConfig& config, Method method);

struct MethodRow {
    Method method = Method::Mc;
    double mean = 0.0;
    double se = 0.0;
    double erf = 1.0;
    double setup_seconds = 0.0;
    double run_seconds = 0.0;
};

struct ErfReport {
    std::string problem;
    double param_rho = 0.0;
    double param_k = 0.0;
    std::vector<MethodRow> rows; // MC first
};

// All methods of one configuration; ERF_m = se_MC / se_m.
ErfReport erf_table(const ExperimentConfig& config);

// CSV with header problem,param_rho,param_K,method,mean,stderr,erf and
// 17-significant-digit floats, rows in report order.
void emit_csv(const std::vector<ErfReport>& reports, std::ostream& out);
void emit_csv(const std::vector<ErfReport>& reports, const std::string& path);
std::vector<ErfReport> parse_csv(std::istream& in);

void print_table(const std::vector<ErfReport>& reports, std::ostream& out);

// Paper presets.
models::BasketSpec spread_preset(double rho, double k);
models::SvSpec sv_preset(models::SvKind kind, double rho, double k);
models::GbmSpec greek_preset(double k);
models::CleSpec cle_preset(double k);

std::vector<Method> default_methods_finance();
std::vector<Method> default_methods_cle();

// Entry point behind the casrqmc binary: subcommands spread, sv, greeks,
// cde, cle. Returns 0 on success, 2 on usage errors, 1 on runtime errors.
int cli(int argc, const char* const* argv);

} // namespace cas::harness
