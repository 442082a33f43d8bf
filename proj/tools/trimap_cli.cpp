// trimap: build, evaluate, invert, condition and diagnose monotone
// lower-triangular transport maps between a standard Gaussian reference and
// a target distribution.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "trimap/bod.hpp"
#include "trimap/diagnostics.hpp"
#include "trimap/direct_builder.hpp"
#include "trimap/errors.hpp"
#include "trimap/inverse_builder.hpp"
#include "trimap/map_io.hpp"
#include "trimap/mcmc.hpp"
#include "trimap/sample_io.hpp"
#include "trimap/tri_solver.hpp"
#include "trimap/version.hpp"

using namespace trimap;

namespace {

std::string g_command_line;

std::vector<std::string> standard_header(std::uint64_t seed) {
    return {std::string("command: ") + g_command_line, "seed " + std::to_string(seed)};
}

// Sample files already carry a seed line of their own.
std::vector<std::string> command_header() {
    return {std::string("command: ") + g_command_line};
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_real_list(text)) out.push_back(static_cast<int>(v));
    return out;
}

struct TargetFlags {
    std::string name = "gaussian";
    int dim = 1;
    std::string mean = "0";
    std::string var = "1";
    double rho = 0.0;
    std::string data;  // bod-posterior observations
};

std::unique_ptr<TargetDensity> make_target(const TargetFlags& flags) {
    if (flags.name == "gaussian") {
        const int n = flags.dim;
        std::vector<double> mean = parse_real_list(flags.mean);
        if (mean.size() == 1) mean.assign(n, mean[0]);
        std::vector<double> var = parse_real_list(flags.var);
        if (var.size() == 1) var.assign(n, var[0]);
        if (static_cast<int>(mean.size()) != n || static_cast<int>(var.size()) != n)
            throw std::invalid_argument("gaussian target: mean/var length must match --dim");
        std::vector<double> cov(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) cov[i * n + i] = var[i];
        if (flags.rho != 0.0) {
            if (n != 2) throw std::invalid_argument("gaussian target: --rho needs --dim 2");
            cov[1] = cov[2] = flags.rho * std::sqrt(var[0] * var[1]);
        }
        return std::make_unique<GaussianTarget>(std::move(mean), std::move(cov));
    }
    if (flags.name == "banana") return std::make_unique<BananaTarget>();
    if (flags.name == "bod-posterior") {
        std::array<double, 5> data = bod::kDataStar;
        if (!flags.data.empty()) {
            const auto values = parse_real_list(flags.data);
            if (values.size() != 5)
                throw std::invalid_argument("bod-posterior: --data needs 5 values");
            std::copy(values.begin(), values.end(), data.begin());
        }
        return std::make_unique<bod::Posterior>(data);
    }
    if (flags.name.rfind("pipe:", 0) == 0)
        return std::make_unique<PipeTarget>(flags.name.substr(5), flags.dim);
    throw std::invalid_argument("unknown target: " + flags.name +
                                " (gaussian | banana | bod-posterior | pipe:<command>)");
}

void add_target_flags(CLI::App* cmd, TargetFlags& flags) {
    cmd->add_option("--target", flags.name,
                    "built-in target (gaussian | banana | bod-posterior) or pipe:<command>");
    cmd->add_option("--dim", flags.dim, "target dimension (gaussian, pipe)");
    cmd->add_option("--target-mean", flags.mean, "gaussian mean (scalar or comma list)");
    cmd->add_option("--target-var", flags.var, "gaussian variances (scalar or comma list)");
    cmd->add_option("--target-rho", flags.rho, "gaussian correlation (2D only)");
    cmd->add_option("--data", flags.data, "bod-posterior observation vector (5 comma values)");
}

/// `key = value` config file; hash comments allowed, flags win over keys.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> out;
    if (path.empty()) return out;
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) out[key] = value;
    }
    return out;
}

ComponentSpec spec_from_kind(const std::string& kind, int degree) {
    ComponentSpec spec;
    spec.degree = degree;
    if (kind == "total") {
        spec.kind = ComponentKind::Polynomial;
        spec.index_kind = IndexSetKind::TotalOrder;
    } else if (kind == "nomixed") {
        spec.kind = ComponentKind::Polynomial;
        spec.index_kind = IndexSetKind::NoMixed;
    } else if (kind == "diagonal") {
        spec.kind = ComponentKind::Polynomial;
        spec.index_kind = IndexSetKind::Diagonal;
    } else if (kind == "monotone") {
        spec.kind = ComponentKind::IntegratedExponential;
        spec.index_kind = IndexSetKind::TotalOrder;
    } else if (kind == "rbf") {
        spec.kind = ComponentKind::LinearRbf;
        spec.index_kind = IndexSetKind::TotalOrder;
    } else {
        throw std::invalid_argument("unknown map kind: " + kind);
    }
    return spec;
}

void write_report(const std::string& path, const OptimizationReport& report,
                  const std::vector<std::string>& extra = {}) {
    if (path.empty()) return;
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open report file: " + path);
    os << "# trimap " << kVersion << '\n';
    os << "# command: " << g_command_line << '\n';
    os << "objective " << format_double(report.final_objective) << '\n';
    os << "gradient_norm " << format_double(report.gradient_norm) << '\n';
    os << "iterations " << report.iterations << '\n';
    os << "converged " << (report.converged ? 1 : 0) << '\n';
    if (report.kl_variance)
        os << "kl_variance " << format_double(*report.kl_variance) << '\n';
    if (report.log_normalizing_constant)
        os << "log_normalizing_constant " << format_double(*report.log_normalizing_constant)
           << '\n';
    os << "monotonicity_violations " << report.monotonicity_violations << '\n';
    os << "integration_points " << report.integration_points << '\n';
    for (const auto& w : report.warnings) os << "# warning: " << w << '\n';
    for (const auto& line : extra) os << line << '\n';
}

int run_build_direct(const TargetFlags& target_flags, const std::string& config_path,
                     const std::string& out, const std::string& report_path,
                     int degree_flag, const std::string& kind_flag) {
    const auto file = read_config(config_path);
    auto get = [&](const std::string& key, const std::string& fallback) {
        const auto it = file.find(key);
        return it == file.end() ? fallback : it->second;
    };

    TargetFlags tf = target_flags;
    if (tf.name == "gaussian" && file.count("target.dim"))
        tf.dim = std::stoi(file.at("target.dim"));
    const auto target = make_target(tf);

    DirectBuildConfig config;
    const int degree = degree_flag > 0 ? degree_flag : std::stoi(get("map.degree", "3"));
    const std::string kind = !kind_flag.empty() ? kind_flag : get("map.kind", "total");
    ComponentSpec spec = spec_from_kind(kind, degree);
    spec.rbf_count = std::stoi(get("map.rbf-count", "5"));
    spec.quad_order = std::stoi(get("map.quad-order", "32"));
    config.map = MapTemplate::uniform(target->dim(), spec);

    const std::string integ = get("integration.kind", "quadrature");
    if (integ == "quadrature") {
        config.integration.kind = IntegrationSpec::Kind::Quadrature;
        config.integration.order = std::stoi(get("integration.order", "10"));
    } else if (integ == "mc") {
        config.integration.kind = IntegrationSpec::Kind::MonteCarlo;
        config.integration.count = std::stoul(get("integration.count", "10000"));
    } else {
        throw std::invalid_argument("integration.kind must be quadrature or mc");
    }
    config.integration.seed = std::stoul(get("seed", "0"));
    config.optimizer.gradient_tolerance = std::stod(get("optimizer.tol", "1e-8"));
    config.optimizer.max_iterations = std::stoi(get("optimizer.maxiter", "500"));
    if (file.count("constraint"))
        config.constraint = file.at("constraint") == "pointwise"
                                ? ConstraintMode::PointwiseAtNodes
                                : ConstraintMode::MonotoneParam;

    const auto result = build_direct(*target, config);
    save_map(result.map, out, standard_header(config.integration.seed));
    write_report(report_path, result.report);
    for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << '\n';
    if (!result.report.converged) {
        std::cerr << "ERROR non-convergence gradient norm "
                  << result.report.gradient_norm << " after " << result.report.iterations
                  << " iterations\n";
        return 2;
    }
    return 0;
}

int run_build_inverse(const std::string& samples_path, int degree, const std::string& kind,
                      const std::string& out, const std::string& regress_path,
                      bool check_gaussianity, double tol, int maxiter,
                      const std::string& report_path) {
    const SampleSet samples = read_samples(samples_path);
    InverseBuildConfig config;
    config.map = MapTemplate::uniform(samples.dim, spec_from_kind(kind, degree));
    config.optimizer.gradient_tolerance = tol;
    config.optimizer.max_iterations = maxiter;

    const auto t0 = std::chrono::steady_clock::now();
    const auto result = build_inverse(samples, config);
    const auto t1 = std::chrono::steady_clock::now();
    save_map(result.map, out, standard_header(samples.seed));
    for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << '\n';

    std::vector<std::string> extra;
    extra.push_back("offline_build_seconds " +
                    std::to_string(std::chrono::duration<double>(t1 - t0).count()));

    if (!regress_path.empty()) {
        SampleSet pushed(samples.count, samples.dim, Provenance::Pushforward, samples.seed);
        for_each_index(samples.count, [&](std::size_t i) {
            result.map.evaluate(samples.row(i), pushed.row(i));
        });
        RegressionConfig rc;
        rc.optimizer.gradient_tolerance = tol;
        rc.optimizer.max_iterations = maxiter;
        const auto t2 = std::chrono::steady_clock::now();
        const auto direct = regress_direct_from_pairs(pushed, samples, config.map, rc);
        const auto t3 = std::chrono::steady_clock::now();
        for (const auto& w : direct.warnings) std::cerr << "warning: " << w << '\n';
        save_map(direct.map, regress_path, standard_header(samples.seed));
        extra.push_back("offline_regression_seconds " +
                        std::to_string(std::chrono::duration<double>(t3 - t2).count()));
    }

    if (check_gaussianity) {
        SampleSet pushed(samples.count, samples.dim, Provenance::Pushforward, samples.seed);
        for_each_index(samples.count, [&](std::size_t i) {
            result.map.evaluate(samples.row(i), pushed.row(i));
        });
        const auto g = gaussianity_check(pushed);
        std::cout << "gaussianity " << (g.pass ? "pass" : "fail") << " (z threshold "
                  << g.z_threshold << ")\n";
        for (std::size_t j = 0; j < g.coordinates.size(); ++j) {
            const auto& c = g.coordinates[j];
            std::cout << "  coord " << j + 1 << ": mean z " << c.z_mean << ", var z "
                      << c.z_variance << ", skew z " << c.z_skewness << ", kurt z "
                      << c.z_kurtosis << ", sqrt(M) KS " << c.ks_scaled << '\n';
        }
        for (const auto& corr : g.correlations)
            if (std::abs(corr.z) > g.z_threshold)
                std::cout << "  corr(" << corr.i << "," << corr.j << ") = " << corr.correlation
                          << " (z " << corr.z << ")\n";
    }
    write_report(report_path, result.report, extra);
    if (!result.report.converged) {
        std::cerr << "ERROR non-convergence at least one component stopped early\n";
        return 2;
    }
    return 0;
}

int run_invert(const std::string& map_path, const std::string& in, const std::string& out,
               double tol) {
    const TriangularMap map = load_map(map_path);
    const SampleSet points = read_samples(in);
    const auto result = push_inverse(map, points, InvertOptions{.tol = tol});
    auto header = command_header();
    if (!result.failed.empty()) {
        std::string line = "failed_rows";
        for (std::size_t i : result.failed) line += " " + std::to_string(i);
        header.push_back(line);
    }
    write_samples(out, result.points, header);
    if (!result.failed.empty()) {
        std::cerr << "ERROR bracket-failure " << result.failed.size()
                  << " of " << points.count << " points failed to invert\n";
        return 2;
    }
    return 0;
}

int run_sample(const std::string& map_path, std::size_t count, std::uint64_t seed,
               const std::string& out) {
    const TriangularMap map = load_map(map_path);
    const SampleSet refs = sample_reference(count, map.dim(), seed);
    SampleSet pushed(count, map.dim(), Provenance::Pushforward, seed);
    if (map.direction() == Direction::Direct) {
        for_each_index(count,
                       [&](std::size_t i) { map.evaluate(refs.row(i), pushed.row(i)); });
    } else {
        // Inverse maps sample the target by pointwise inversion, T = S^{-1}.
        const auto result = push_inverse(map, refs, InvertOptions{});
        if (!result.failed.empty()) {
            std::cerr << "ERROR bracket-failure " << result.failed.size()
                      << " reference points failed to invert\n";
            return 2;
        }
        pushed = result.points;
        pushed.seed = seed;
    }
    write_samples(out, pushed, command_header());
    return 0;
}

int run_condition(const std::string& map_path, int ny, const std::string& ystar_text,
                  std::size_t count, std::uint64_t seed, const std::string& out) {
    const TriangularMap map = load_map(map_path);
    const std::vector<double> y_star = parse_real_list(ystar_text);
    if (static_cast<int>(y_star.size()) != ny)
        throw std::invalid_argument("--ystar must supply exactly --ny values");
    const ConditionalMap cond = ConditionalMap::condition(map, ny, y_star);
    const SampleSet draws = cond.sample(count, seed);
    auto header = command_header();
    header.push_back("conditioned on the first " + std::to_string(ny) + " coordinates");
    write_samples(out, draws, header);
    return 0;
}

int run_diagnose(const std::string& map_path, const TargetFlags& target_flags,
                 const std::string& samples_path, const std::string& report_path, int order) {
    const TriangularMap map = load_map(map_path);
    TargetFlags tf = target_flags;
    tf.dim = map.dim();
    const auto target = make_target(tf);

    std::ofstream os(report_path);
    if (!os) throw std::invalid_argument("cannot open report file: " + report_path);
    os << "# trimap " << kVersion << '\n';
    os << "# command: " << g_command_line << '\n';

    if (map.direction() == Direction::Direct) {
        const auto rule = make_integration_rule({IntegrationSpec::Kind::Quadrature, order},
                                                map.dim());
        os << "kl_variance_direct " << format_double(kl_variance_direct(map, *target, rule))
           << '\n';
        os << "log_normalizing_constant "
           << format_double(estimate_log_normalizing_constant(map, *target, rule)) << '\n';
        os << "integration_points " << rule.count << '\n';
    }
    if (!samples_path.empty()) {
        const SampleSet samples = read_samples(samples_path);
        if (map.direction() == Direction::Inverse) {
            if (samples.count < 2)
                os << "# warning: single-sample variance is identically zero\n";
            os << "kl_variance_inverse "
               << format_double(kl_variance_inverse(map, samples, *target)) << '\n';
            os << "sample_count " << samples.count << '\n';
            SampleSet pushed(samples.count, samples.dim, Provenance::Pushforward);
            for_each_index(samples.count, [&](std::size_t i) {
                map.evaluate(samples.row(i), pushed.row(i));
            });
            const auto g = gaussianity_check(pushed);
            os << "gaussianity " << (g.pass ? "pass" : "fail") << '\n';
            for (std::size_t j = 0; j < g.coordinates.size(); ++j) {
                const auto& c = g.coordinates[j];
                os << "coord " << j + 1 << " z_mean " << format_double(c.z_mean) << " z_var "
                   << format_double(c.z_variance) << " z_skew " << format_double(c.z_skewness)
                   << " z_kurt " << format_double(c.z_kurtosis) << " ks_scaled "
                   << format_double(c.ks_scaled) << '\n';
            }
        }
    }
    return 0;
}

int run_mcmc(const TargetFlags& target_flags, std::size_t steps, std::size_t burn,
             std::uint64_t seed, const std::string& out, const std::string& precondition,
             double target_acceptance) {
    McmcConfig config;
    config.steps = steps;
    config.burn_in = burn;
    config.seed = seed;
    if (target_acceptance > 0.0) config.target_acceptance = target_acceptance;

    TargetFlags tf = target_flags;
    McmcResult result;
    if (!precondition.empty()) {
        const TriangularMap map = load_map(precondition);
        tf.dim = map.dim();
        const auto target = make_target(tf);
        result = preconditioned_sample(map, *target, config);
    } else {
        const auto target = make_target(tf);
        result = adaptive_metropolis(*target, config);
    }
    auto header = command_header();
    header.push_back("acceptance_rate " + format_double(result.acceptance_rate));
    std::string ess_line = "ess";
    for (double e : result.ess) ess_line += " " + format_double(e);
    header.push_back(ess_line);
    if (result.stuck_warning) header.push_back("warning: acceptance below 1%, chain may be stuck");
    write_samples(out, result.chain, header);
    std::cout << "acceptance " << result.acceptance_rate << "\n";
    return 0;
}

int run_bod_bench(const std::string& experiment, const std::string& degrees_text,
                  std::size_t sample_count, std::uint64_t seed, const std::string& outdir) {
    const std::vector<int> degrees = parse_int_list(degrees_text);
    if (degrees.empty()) throw std::invalid_argument("--degree must name at least one degree");

    if (experiment == "inverse") {
        std::ofstream table(outdir + "/moments.txt");
        if (!table) throw std::invalid_argument("cannot write to outdir: " + outdir);
        table << "# trimap " << kVersion << '\n';
        table << "# command: " << g_command_line << '\n';
        table << "# conditional moments at d* = (0.18, 0.32, 0.42, 0.49, 0.54)\n";
        table << "# degree samples mean1 mean2 var1 var2 skew1 skew2 kurt1 kurt2\n";
        for (int degree : degrees) {
            bod::InverseExperimentConfig config;
            config.training_samples = sample_count;
            config.degree = degree;
            config.seed = seed;
            const auto t0 = std::chrono::steady_clock::now();
            const auto result = bod::run_inverse_experiment(config);
            const auto t1 = std::chrono::steady_clock::now();
            const std::string tag = "p" + std::to_string(degree);
            save_map(result.inverse_map, outdir + "/inverse_" + tag + ".trimap",
                     standard_header(seed));
            save_map(result.direct_map, outdir + "/direct_" + tag + ".trimap",
                     standard_header(seed));
            write_samples(outdir + "/conditional_" + tag + ".txt", result.conditional_samples,
                          command_header());
            table << degree << ' ' << sample_count << ' ' << format_double(result.theta1.mean)
                  << ' ' << format_double(result.theta2.mean) << ' '
                  << format_double(result.theta1.variance) << ' '
                  << format_double(result.theta2.variance) << ' '
                  << format_double(result.theta1.skewness) << ' '
                  << format_double(result.theta2.skewness) << ' '
                  << format_double(result.theta1.kurtosis) << ' '
                  << format_double(result.theta2.kurtosis) << '\n';
            std::cout << "degree " << degree << " offline "
                      << std::chrono::duration<double>(t1 - t0).count() << " s\n";
        }
        return 0;
    }
    if (experiment == "direct") {
        bod::DirectExperimentConfig config;
        config.degrees = degrees;
        const auto result = bod::run_direct_experiment(config);
        std::ofstream report(outdir + "/direct_report.txt");
        if (!report) throw std::invalid_argument("cannot write to outdir: " + outdir);
        report << "# trimap " << kVersion << '\n';
        report << "# command: " << g_command_line << '\n';
        report << "# degree kl_variance log_normalizing_constant converged\n";
        for (std::size_t i = 0; i < result.degrees.size(); ++i) {
            const auto& r = result.reports[i];
            save_map(result.maps[i],
                     outdir + "/direct_p" + std::to_string(result.degrees[i]) + ".trimap",
                     standard_header(seed));
            report << result.degrees[i] << ' ' << format_double(r.kl_variance.value_or(-1.0))
                   << ' ' << format_double(r.log_normalizing_constant.value_or(0.0)) << ' '
                   << (r.converged ? 1 : 0) << '\n';
        }
        return 0;
    }
    throw std::invalid_argument("--experiment must be inverse or direct");
}

}  // namespace

int main(int argc, char** argv) {
    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
    g_command_line = cmd.str();

    CLI::App app{"triangular transport maps: construction, sampling, conditioning, diagnostics"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "cap the worker pool (default: hardware)");

    // build-direct
    auto* bd = app.add_subcommand("build-direct", "fit a map from an unnormalized log-density");
    TargetFlags bd_target;
    add_target_flags(bd, bd_target);
    std::string bd_config, bd_out = "map.trimap", bd_report;
    int bd_degree = 0;
    std::string bd_kind;
    bd->add_option("--config", bd_config, "key = value config file");
    bd->add_option("--out", bd_out, "output map file")->required();
    bd->add_option("--report", bd_report, "optimization report file");
    bd->add_option("--degree", bd_degree, "map degree (overrides config)");
    bd->add_option("--kind", bd_kind, "total|nomixed|diagonal|monotone|rbf (overrides config)");

    // build-inverse
    auto* bi = app.add_subcommand("build-inverse", "fit an inverse map from target samples");
    std::string bi_samples, bi_out = "map.trimap", bi_regress, bi_kind = "total", bi_report;
    int bi_degree = 3, bi_maxiter = 500;
    double bi_tol = 1e-8;
    bool bi_gauss = false;
    bi->add_option("--samples", bi_samples, "target sample file")->required();
    bi->add_option("--degree", bi_degree, "polynomial degree");
    bi->add_option("--kind", bi_kind, "total|nomixed|diagonal|monotone");
    bi->add_option("--out", bi_out, "output map file")->required();
    bi->add_option("--regress-direct", bi_regress, "also regress a direct map to this file");
    bi->add_flag("--check-gaussianity", bi_gauss, "test pushforward normality");
    bi->add_option("--tol", bi_tol, "optimizer gradient tolerance");
    bi->add_option("--maxiter", bi_maxiter, "optimizer iteration cap");
    bi->add_option("--report", bi_report, "optimization report file");

    // invert
    auto* inv = app.add_subcommand("invert", "apply the pointwise inverse of a map");
    std::string inv_map, inv_in, inv_out;
    double inv_tol = 1e-10;
    inv->add_option("--map", inv_map)->required();
    inv->add_option("--in", inv_in, "points to invert")->required();
    inv->add_option("--out", inv_out)->required();
    inv->add_option("--tol", inv_tol, "residual tolerance");

    // sample
    auto* smp = app.add_subcommand("sample", "push reference draws through a map");
    std::string smp_map, smp_out;
    std::size_t smp_n = 1000;
    std::uint64_t smp_seed = 0;
    smp->add_option("--map", smp_map)->required();
    smp->add_option("--n", smp_n, "number of draws");
    smp->add_option("--seed", smp_seed);
    smp->add_option("--out", smp_out)->required();

    // condition
    auto* cnd = app.add_subcommand("condition", "sample a conditional of a joint map");
    std::string cnd_map, cnd_ystar, cnd_out;
    int cnd_ny = 1;
    std::size_t cnd_n = 10000;
    std::uint64_t cnd_seed = 0;
    cnd->add_option("--map", cnd_map)->required();
    cnd->add_option("--ny", cnd_ny, "number of leading conditioning coordinates")->required();
    cnd->add_option("--ystar", cnd_ystar, "conditioning values, comma separated")->required();
    cnd->add_option("--samples", cnd_n, "number of conditional draws");
    cnd->add_option("--seed", cnd_seed);
    cnd->add_option("--out", cnd_out)->required();

    // diagnose
    auto* dg = app.add_subcommand("diagnose", "KL variance, normalizing constant, gaussianity");
    TargetFlags dg_target;
    add_target_flags(dg, dg_target);
    std::string dg_map, dg_samples, dg_report = "diagnostics.txt";
    int dg_order = 10;
    dg->add_option("--map", dg_map)->required();
    dg->add_option("--samples", dg_samples, "target samples (inverse-map diagnostics)");
    dg->add_option("--report", dg_report);
    dg->add_option("--order", dg_order, "per-dimension Gauss-Hermite order");

    // mcmc
    auto* mc = app.add_subcommand("mcmc", "adaptive Metropolis, optionally map-preconditioned");
    TargetFlags mc_target;
    add_target_flags(mc, mc_target);
    std::string mc_out, mc_precondition;
    std::size_t mc_steps = 100000, mc_burn = 10000;
    std::uint64_t mc_seed = 0;
    double mc_acc = 0.0;
    mc->add_option("--steps", mc_steps);
    mc->add_option("--burn", mc_burn);
    mc->add_option("--seed", mc_seed);
    mc->add_option("--out", mc_out)->required();
    mc->add_option("--precondition", mc_precondition, "run on the pullback through this map");
    mc->add_option("--target-acceptance", mc_acc, "tune the step size toward this rate");

    // bod-bench
    auto* bb = app.add_subcommand("bod-bench", "biochemical oxygen demand benchmark");
    std::string bb_experiment = "inverse", bb_degrees = "3", bb_outdir = ".";
    std::size_t bb_samples = 50000;
    std::uint64_t bb_seed = 1;
    bb->add_option("--experiment", bb_experiment, "inverse | direct");
    bb->add_option("--degree", bb_degrees, "degree or comma list");
    bb->add_option("--samples", bb_samples, "training sample count (inverse)");
    bb->add_option("--seed", bb_seed);
    bb->add_option("--outdir", bb_outdir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (threads == 0)
        if (const char* env = std::getenv("TRIMAP_THREADS")) threads = std::atoi(env);
    if (threads > 0) set_max_threads(threads);

    try {
        if (bd->parsed())
            return run_build_direct(bd_target, bd_config, bd_out, bd_report, bd_degree, bd_kind);
        if (bi->parsed())
            return run_build_inverse(bi_samples, bi_degree, bi_kind, bi_out, bi_regress,
                                     bi_gauss, bi_tol, bi_maxiter, bi_report);
        if (inv->parsed()) return run_invert(inv_map, inv_in, inv_out, inv_tol);
        if (smp->parsed()) return run_sample(smp_map, smp_n, smp_seed, smp_out);
        if (cnd->parsed())
            return run_condition(cnd_map, cnd_ny, cnd_ystar, cnd_n, cnd_seed, cnd_out);
        if (dg->parsed()) return run_diagnose(dg_map, dg_target, dg_samples, dg_report, dg_order);
        if (mc->parsed())
            return run_mcmc(mc_target, mc_steps, mc_burn, mc_seed, mc_out, mc_precondition,
                            mc_acc);
        if (bb->parsed())
            return run_bod_bench(bb_experiment, bb_degrees, bb_samples, bb_seed, bb_outdir);
    } catch (const CallbackError& e) {
        std::cerr << "ERROR callback-failure " << e.what() << '\n';
        return 2;
    } catch (const BracketFailureError& e) {
        std::cerr << "ERROR bracket-failure " << e.what() << '\n';
        return 2;
    } catch (const NonMonotoneError& e) {
        std::cerr << "ERROR non-monotone " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
