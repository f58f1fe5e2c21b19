#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bofuse/bench.hpp"
#include "bofuse/selection.hpp"
#include "bofuse/simgen.hpp"
#include "bofuse/tagging.hpp"

namespace fs = std::filesystem;
using namespace bofuse;

namespace {

void apply_overrides(ExperimentConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::size_t>& trials,
                     const std::optional<std::size_t>& threads,
                     const std::optional<std::string>& out) {
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (threads) cfg.threads = *threads;
    if (out) cfg.out_dir = *out;
}

int cmd_simulate(ExampleId example, std::size_t n, std::size_t n0, const std::string& mech,
                 std::uint64_t seed, const std::string& out) {
    NoiseSpec noise;
    noise.mechanism = mech == "class_high"  ? NoiseMechanism::class_high
                      : mech == "instance" ? NoiseMechanism::instance
                                           : NoiseMechanism::class_low;
    CleanSample clean = gen_clean({example, n, mix64(seed, 1)});
    const auto noisy_labels =
        inject_noise(clean.labels, clean.features, noise, Rng(mix64(seed, 2), 0));
    const NoisyDataset noisy{clean.features, noisy_labels};
    const AuditedDataset audited =
        make_audited(clean.features, clean.labels, noisy_labels, n0, Rng(mix64(seed, 3), 0));
    CleanSample eval = gen_clean({example, 20000, mix64(seed, 4)});
    // eval rows carry clean Bernoulli labels in the y_noisy column
    const NoisyDataset eval_ds{eval.features, eval.labels};

    fs::create_directories(out);
    write_csv(noisy, (fs::path(out) / "noisy.csv").string());
    write_csv(audited, (fs::path(out) / "audited.csv").string());
    write_csv(eval_ds, (fs::path(out) / "eval.csv").string());
    std::cout << "wrote noisy.csv audited.csv eval.csv under " << out << "\n";
    return 0;
}

int cmd_run(const ExperimentConfig& cfg) {
    const ExperimentReport report = run_experiment(cfg);
    const auto paths = emit_report(report, cfg.out_dir);
    if (!report.failures.empty()) {
        std::cerr << "warning: " << report.failures.size() << " trial(s) failed and were excluded\n";
        for (const auto& f : report.failures) {
            std::cerr << "  trial " << f.trial << ": " << f.message << "\n";
        }
    }
    for (const auto& p : paths) std::cout << "wrote " << p << "\n";
    const auto rows = aggregate(report);
    for (const auto& r : rows) {
        if (r.metric == "excess_risk" || r.metric == "f1") {
            std::cout << r.method << " " << r.metric << " = " << r.mean << " (" << r.stddev
                      << ") over " << r.trials << " trials\n";
        }
    }
    return report.failures.empty() ? 0 : 1;
}

int cmd_cv_tau(const ExperimentConfig& cfg) {
    CleanSample clean = gen_clean({cfg.example, cfg.n, mix64(cfg.seed, 1)});
    const auto noisy_labels =
        inject_noise(clean.labels, clean.features, cfg.noise, Rng(mix64(cfg.seed, 2), 0));
    const NoisyDataset noisy{clean.features, noisy_labels};
    const AuditedDataset audited = make_audited(clean.features, clean.labels, noisy_labels,
                                                cfg.n0, Rng(mix64(cfg.seed, 3), 0));
    CvSpecs specs{cfg.nuisance, cfg.noise_learner, cfg.final_learner, cfg.loss,
                  cfg.noise_estimator, 5};
    TauGrid grid{cfg.tau.grid};
    if (grid.candidates.empty()) grid.candidates = {0.01, 0.05, 0.1, 0.2, 0.3, 0.4};
    bool any_at = false;
    for (Method m : cfg.methods) {
        any_at |= m == Method::pro_at || m == Method::pro_at_budget || m == Method::pro_hybrid;
    }
    ExpertOracle oracle(clean.oracle.eta, Rng(mix64(cfg.seed, 4), 0));
    const CvReport report =
        select_tau_cv(grid, noisy, audited, any_at ? TagMode::AT : TagMode::PT, specs,
                      any_at ? &oracle : nullptr, Rng(mix64(cfg.seed, 5), 0));
    fs::create_directories(cfg.out_dir);
    write_cv_csv(report, (fs::path(cfg.out_dir) / "cv_tau.csv").string());
    write_cv_json(report, (fs::path(cfg.out_dir) / "cv_tau.json").string());
    std::cout << "tau* = " << report.tau_star << "\n";
    for (std::size_t j = 0; j < report.taus.size(); ++j) {
        std::cout << "  tau=" << report.taus[j] << " mean acc=" << report.mean_accuracy[j] << "\n";
    }
    return 0;
}

int cmd_report(const std::string& in_path, const std::string& out) {
    std::ifstream in(in_path);
    if (!in) {
        std::cerr << "cannot open " << in_path << "\n";
        return 1;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const ExperimentReport report = report_from_json(ss.str());
    for (const auto& p : emit_report(report, out)) std::cout << "wrote " << p << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayes-optimal extraction and tagging benchmark for label-noise classification"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate noisy/audited/eval CSV datasets");
    std::string sim_example = "ex1", sim_mech = "class_low", sim_out = "out";
    std::size_t sim_n = 5000, sim_n0 = 500;
    std::uint64_t sim_seed = 1;
    sim->add_option("--example", sim_example, "ex1|ex2|ex3");
    sim->add_option("--n", sim_n, "noisy sample size");
    sim->add_option("--n0", sim_n0, "audited sample size");
    sim->add_option("--noise", sim_mech, "class_low|class_high|instance");
    sim->add_option("--seed", sim_seed, "base seed");
    sim->add_option("--out", sim_out, "output directory");

    // shared run/cv-tau options
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials, threads;
    std::optional<std::string> out;

    auto* run = app.add_subcommand("run", "run a full experiment from a config file");
    run->add_option("--config", config_path, "config json path")->required();
    run->add_option("--seed", seed, "override base seed");
    run->add_option("--trials", trials, "override trial count");
    run->add_option("--threads", threads, "worker threads (also BOFUSE_THREADS)");
    run->add_option("--out", out, "override output directory");

    auto* cv = app.add_subcommand("cv-tau", "run the security-margin cross-validation once");
    cv->add_option("--config", config_path, "config json path")->required();
    cv->add_option("--seed", seed, "override base seed");
    cv->add_option("--out", out, "override output directory");

    auto* rep = app.add_subcommand("report", "re-aggregate a stored trial json");
    std::string rep_in, rep_out = "out";
    rep->add_option("--in", rep_in, "results.json path")->required();
    rep->add_option("--out", rep_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            ExampleId ex = sim_example == "ex2"   ? ExampleId::ex2
                           : sim_example == "ex3" ? ExampleId::ex3
                                                  : ExampleId::ex1;
            return cmd_simulate(ex, sim_n, sim_n0, sim_mech, sim_seed, sim_out);
        }
        if (run->parsed() || cv->parsed()) {
            ExperimentConfig cfg = load_config(config_path);
            apply_overrides(cfg, seed, trials, threads, out);
            return run->parsed() ? cmd_run(cfg) : cmd_cv_tau(cfg);
        }
        if (rep->parsed()) return cmd_report(rep_in, rep_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
