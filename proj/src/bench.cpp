#include "bofuse/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bofuse/errors.hpp"
#include "bofuse/tagging.hpp"

namespace bofuse {

using nlohmann::json;

namespace {

// stream roles for per-trial rng derivation
enum Role : std::uint64_t {
    kGen = 1,
    kNoise = 2,
    kAudit = 3,
    kNuisance = 4,
    kNoiseEst = 5,
    kEval = 6,
    kQuery = 7,
    kFit = 8,
    kPt = 9,
    kCv = 10,
    kCvQuery = 11,
};

std::uint64_t trial_seed(std::uint64_t base, std::size_t trial, std::uint64_t role) {
    return mix64(mix64(base, trial), role);
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::oracle: return "oracle";
        case Method::vanilla_d: return "vanilla_d";
        case Method::vanilla_drho: return "vanilla_drho";
        case Method::bo_only: return "bo_only";
        case Method::pro_pt: return "pro_pt";
        case Method::pro_at: return "pro_at";
        case Method::pro_at_budget: return "pro_at_budget";
        case Method::pro_hybrid: return "pro_hybrid";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    for (Method m : {Method::oracle, Method::vanilla_d, Method::vanilla_drho, Method::bo_only,
                     Method::pro_pt, Method::pro_at, Method::pro_at_budget, Method::pro_hybrid}) {
        if (method_name(m) == name) return m;
    }
    throw Error("unknown method: " + name);
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw Error("trials must be >= 1");
    if (n0 == 0 || n0 > n) throw Error("need 1 <= n0 <= n");
    if (n_eval == 0) throw Error("n_eval must be positive");
    if (!(budget_fraction >= 0.0 && budget_fraction <= 1.0)) {
        throw Error("budget_fraction must be in [0,1]");
    }
    if (!(hybrid_query_fraction >= 0.0 && hybrid_query_fraction <= 1.0)) {
        throw Error("hybrid_query_fraction must be in [0,1]");
    }
    if (methods.empty()) throw Error("method list must be nonempty");
    if (loss == LossKind::mse) throw Error("final loss must be hinge or sigmoid");
    nuisance.validate();
    final_learner.validate();
    if (tau.source == TauSource::cv) TauGrid{tau.grid}.validate();
    if (tau.source == TauSource::fixed && !(tau.value >= 0.0)) throw Error("tau must be >= 0");
}

namespace {

bool needs_nuisance(Method m) {
    return m == Method::bo_only || m == Method::pro_pt || m == Method::pro_at ||
           m == Method::pro_at_budget || m == Method::pro_hybrid;
}

struct EvalBundle {
    const FeatureMatrix& features;
    const std::vector<Label>& labels;
    const OracleAccess& oracle;
};

MetricsReport evaluate_model(const ScoringModel& model, const EvalBundle& ev) {
    MetricsReport rep;
    rep.n_eval = ev.features.rows;
    rep.excess_risk = excess_risk_mc(model, ev.features, ev.oracle.eta);
    const auto scores = score_all(model, ev.features);
    std::vector<Label> pred(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) pred[i] = sign_label(scores[i]);
    rep.acc = accuracy(pred, ev.labels);
    rep.auc = auc(scores, ev.labels);
    rep.f1 = f1(pred, ev.labels);
    rep.pr_auc = pr_auc(scores, ev.labels);
    return rep;
}

FeatureMatrix gather_rows(const FeatureMatrix& src, const std::vector<std::size_t>& idx) {
    FeatureMatrix out(idx.size(), src.dim);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        std::copy_n(src.row(idx[r]).data(), src.dim, out.row(r).data());
    }
    return out;
}

}  // namespace

std::vector<TrialResult> run_trial(const ExperimentConfig& cfg, std::size_t trial) {
    cfg.validate();
    const std::uint64_t base = cfg.seed;

    CleanSample clean = gen_clean({cfg.example, cfg.n, trial_seed(base, trial, kGen)});
    const OracleAccess noisy_oracle = attach_noise(clean.oracle, cfg.noise);
    NoisyDataset noisy{clean.features,
                       inject_noise(clean.labels, clean.features, cfg.noise,
                                    Rng(trial_seed(base, trial, kNoise), 0))};
    const AuditedDataset audited = make_audited(
        clean.features, clean.labels, noisy.noisy_labels, cfg.n0,
        Rng(trial_seed(base, trial, kAudit), 0));
    CleanSample eval = gen_clean({cfg.example, cfg.n_eval, trial_seed(base, trial, kEval)});
    const EvalBundle ev{eval.features, eval.labels, clean.oracle};

    bool want_nuisance = false;
    for (Method m : cfg.methods) want_nuisance |= needs_nuisance(m);

    std::optional<NoisyPosterior> eta_rho;
    std::optional<NoiseModel> noise_model;
    if (want_nuisance) {
        eta_rho = estimate_noisy_posterior(noisy, cfg.nuisance,
                                           Rng(trial_seed(base, trial, kNuisance), 0));
        if (cfg.noise_estimator == NoiseEstimatorKind::class_counts) {
            noise_model = estimate_class_noise(audited);
        } else {
            noise_model = estimate_instance_noise(audited, cfg.noise_learner,
                                                  Rng(trial_seed(base, trial, kNoiseEst), 0));
        }
    }

    // resolve tau for the tau-driven methods
    double tau_value = cfg.tau.value;
    if (want_nuisance && cfg.tau.source == TauSource::cv) {
        CvSpecs specs{cfg.nuisance, cfg.noise_learner, cfg.final_learner, cfg.loss,
                      cfg.noise_estimator, 5};
        bool any_at = false;
        for (Method m : cfg.methods) {
            any_at |= m == Method::pro_at || m == Method::pro_at_budget || m == Method::pro_hybrid;
        }
        ExpertOracle cv_oracle(clean.oracle.eta, Rng(trial_seed(base, trial, kCvQuery), 0));
        const CvReport cv = select_tau_cv(TauGrid{cfg.tau.grid}, noisy, audited,
                                          any_at ? TagMode::AT : TagMode::PT, specs,
                                          any_at ? &cv_oracle : nullptr,
                                          Rng(trial_seed(base, trial, kCv), 0));
        tau_value = cv.tau_star;
    } else if (want_nuisance && cfg.tau.source == TauSource::budget) {
        const std::size_t budget =
            static_cast<std::size_t>(std::floor(cfg.tau.fraction * static_cast<double>(cfg.n)));
        tau_value = budget_margin_search(noisy, *eta_rho, *noise_model, budget).tau;
    }

    std::vector<TrialResult> out;
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        const Method m = cfg.methods[mi];
        const auto t0 = std::chrono::steady_clock::now();
        TrialResult res;
        res.method = method_name(m);
        res.trial = trial;
        try {
            const Rng fit_rng(trial_seed(base, trial, kFit), mi);
            ModelPtr model;
            std::optional<Partition> part;
            switch (m) {
                case Method::oracle:
                    model = fit_classifier(noisy.features, LabelProvider::constant(clean.labels),
                                           cfg.loss, cfg.final_learner, fit_rng);
                    break;
                case Method::vanilla_d:
                    model = fit_classifier(audited.features,
                                           LabelProvider::constant(audited.clean_labels), cfg.loss,
                                           cfg.final_learner, fit_rng);
                    break;
                case Method::vanilla_drho:
                    model = fit_classifier(noisy.features,
                                           LabelProvider::constant(noisy.noisy_labels), cfg.loss,
                                           cfg.final_learner, fit_rng);
                    break;
                case Method::bo_only: {
                    part = extract_bo(noisy, *eta_rho, *noise_model, {tau_value});
                    const FeatureMatrix sub = gather_rows(noisy.features, part->bo_indices);
                    if (sub.rows == 0) throw EmptyDatasetError("bo_only: nothing extracted");
                    model = fit_classifier(sub, LabelProvider::constant(part->bo_labels), cfg.loss,
                                           cfg.final_learner, fit_rng);
                    break;
                }
                case Method::pro_at: {
                    part = extract_bo(noisy, *eta_rho, *noise_model, {tau_value});
                    ExpertOracle oracle(clean.oracle.eta, Rng(trial_seed(base, trial, kQuery), mi));
                    auto [fused, ledger] = pro_at_tag(*part, noisy, oracle);
                    res.query_cost = ledger.cost();
                    model = fit_classifier(fused.features, fused_label_provider(fused), cfg.loss,
                                           cfg.final_learner, fit_rng);
                    break;
                }
                case Method::pro_at_budget: {
                    const std::size_t budget = static_cast<std::size_t>(
                        std::floor(cfg.budget_fraction * static_cast<double>(cfg.n)));
                    part = extract_bo_with_budget(noisy, *eta_rho, *noise_model, budget);
                    ExpertOracle oracle(clean.oracle.eta, Rng(trial_seed(base, trial, kQuery), mi));
                    auto [fused, ledger] = pro_at_tag(*part, noisy, oracle);
                    res.query_cost = ledger.cost();
                    model = fit_classifier(fused.features, fused_label_provider(fused), cfg.loss,
                                           cfg.final_learner, fit_rng);
                    break;
                }
                case Method::pro_pt: {
                    part = extract_bo(noisy, *eta_rho, *noise_model, {tau_value});
                    const FusedTrainingSet fused = pro_pt_tag(*part, noisy, *eta_rho, *noise_model);
                    model = fit_classifier(
                        fused.features,
                        pt_label_provider(fused, Rng(trial_seed(base, trial, kPt), mi)), cfg.loss,
                        cfg.final_learner, fit_rng);
                    break;
                }
                case Method::pro_hybrid: {
                    part = extract_bo(noisy, *eta_rho, *noise_model, {tau_value});
                    ExpertOracle oracle(clean.oracle.eta, Rng(trial_seed(base, trial, kQuery), mi));
                    auto [fused, ledger] = pro_hybrid_tag(*part, noisy, oracle, *eta_rho,
                                                          *noise_model, cfg.hybrid_query_fraction);
                    res.query_cost = ledger.cost();
                    if (fused.mode == TagMode::PT) {
                        model = fit_classifier(
                            fused.features,
                            pt_label_provider(fused, Rng(trial_seed(base, trial, kPt), mi)),
                            cfg.loss, cfg.final_learner, fit_rng);
                    } else {
                        model = fit_classifier(fused.features, fused_label_provider(fused),
                                               cfg.loss, cfg.final_learner, fit_rng);
                    }
                    break;
                }
            }
            res.metrics = evaluate_model(*model, ev);
            if (part) {
                const auto st = extraction_stats(*part, noisy.features, &clean.oracle.eta);
                res.extraction_count = st.m;
                res.extraction_fraction = st.fraction;
                res.extraction_purity = st.purity;
                res.tau_used = part->tau.tau;
            }
        } catch (const Error& e) {
            throw Error("trial " + std::to_string(trial) + " method " + res.method + ": " +
                        e.what());
        }
        res.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(res));
    }
    return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    report.config = cfg;
    report.config_hash = config_hash(cfg);

    std::size_t threads = cfg.threads;
    if (threads == 0) {
        if (const char* env = std::getenv("BOFUSE_THREADS")) {
            threads = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
        }
    }
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<std::size_t>(threads, cfg.trials);

    std::vector<std::vector<TrialResult>> slots(cfg.trials);
    std::vector<std::optional<TrialFailure>> fails(cfg.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t t = next.fetch_add(1);
            if (t >= cfg.trials) break;
            try {
                slots[t] = run_trial(cfg, t);
            } catch (const std::exception& e) {
                fails[t] = TrialFailure{t, e.what()};
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // deterministic order: methods in config order, then trial index
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        const std::string name = method_name(cfg.methods[mi]);
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            for (auto& r : slots[t]) {
                if (r.method == name) report.results.push_back(r);
            }
        }
    }
    for (auto& f : fails) {
        if (f) report.failures.push_back(*f);
    }
    return report;
}

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<AggregateRow> aggregate(const ExperimentReport& report) {
    std::vector<AggregateRow> rows;
    std::vector<std::string> seen;
    for (const auto& r : report.results) {
        bool found = false;
        for (const auto& s : seen) found |= s == r.method;
        if (!found) seen.push_back(r.method);
    }
    const std::vector<std::string> metrics = {"excess_risk", "acc",  "auc",
                                              "f1",          "pr_auc", "extraction_fraction",
                                              "extraction_purity", "query_cost", "tau"};
    for (const auto& method : seen) {
        for (const auto& metric : metrics) {
            std::vector<double> vals;
            for (const auto& r : report.results) {
                if (r.method != method) continue;
                if (metric == "excess_risk" && r.metrics.excess_risk) {
                    vals.push_back(*r.metrics.excess_risk);
                } else if (metric == "acc") {
                    vals.push_back(r.metrics.acc);
                } else if (metric == "auc") {
                    vals.push_back(r.metrics.auc);
                } else if (metric == "f1") {
                    vals.push_back(r.metrics.f1);
                } else if (metric == "pr_auc") {
                    vals.push_back(r.metrics.pr_auc);
                } else if (metric == "extraction_fraction" && r.extraction_fraction) {
                    vals.push_back(*r.extraction_fraction);
                } else if (metric == "extraction_purity" && r.extraction_purity) {
                    vals.push_back(*r.extraction_purity);
                } else if (metric == "query_cost" && r.query_cost > 0) {
                    vals.push_back(static_cast<double>(r.query_cost));
                } else if (metric == "tau" && r.tau_used) {
                    vals.push_back(*r.tau_used);
                }
            }
            if (vals.empty()) continue;
            AggregateRow row;
            row.method = method;
            row.metric = metric;
            row.mean = mean_of(vals);
            row.stddev = std_of(vals, row.mean);
            row.trials = vals.size();
            rows.push_back(row);
        }
    }
    return rows;
}

// ---------------------------------------------------------------- json io

namespace {

std::string loss_name(LossKind k) {
    switch (k) {
        case LossKind::mse: return "mse";
        case LossKind::hinge: return "hinge";
        case LossKind::sigmoid: return "sigmoid";
    }
    return "?";
}

LossKind loss_from_name(const std::string& s) {
    if (s == "mse") return LossKind::mse;
    if (s == "hinge") return LossKind::hinge;
    if (s == "sigmoid") return LossKind::sigmoid;
    throw Error("unknown loss: " + s);
}

json learner_to_json(const LearnerSpec& s) {
    json j;
    switch (s.kind) {
        case LearnerKind::mlp:
            j["kind"] = "mlp";
            j["hidden"] = s.hidden;
            j["epochs"] = s.epochs;
            j["batch"] = s.batch;
            j["step_size"] = s.step_size;
            break;
        case LearnerKind::kernel:
            j["kind"] = "kernel";
            j["bandwidth"] = s.bandwidth;
            break;
        case LearnerKind::boosted_stumps:
            j["kind"] = "boosted_stumps";
            j["rounds"] = s.rounds;
            j["shrinkage"] = s.shrinkage;
            break;
    }
    return j;
}

LearnerSpec learner_from_json(const json& j) {
    LearnerSpec s;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "mlp") {
        s.kind = LearnerKind::mlp;
        if (j.contains("hidden")) s.hidden = j["hidden"].get<std::vector<std::size_t>>();
        if (j.contains("epochs")) s.epochs = j["epochs"].get<std::size_t>();
        if (j.contains("batch")) s.batch = j["batch"].get<std::size_t>();
        if (j.contains("step_size")) s.step_size = j["step_size"].get<double>();
    } else if (kind == "kernel") {
        s.kind = LearnerKind::kernel;
        if (j.contains("bandwidth")) s.bandwidth = j["bandwidth"].get<double>();
    } else if (kind == "boosted_stumps") {
        s.kind = LearnerKind::boosted_stumps;
        if (j.contains("rounds")) s.rounds = j["rounds"].get<std::size_t>();
        if (j.contains("shrinkage")) s.shrinkage = j["shrinkage"].get<double>();
    } else {
        throw Error("unknown learner kind: " + kind);
    }
    return s;
}

std::string example_name(ExampleId e) {
    switch (e) {
        case ExampleId::ex1: return "ex1";
        case ExampleId::ex2: return "ex2";
        case ExampleId::ex3: return "ex3";
    }
    return "?";
}

ExampleId example_from_name(const std::string& s) {
    if (s == "ex1") return ExampleId::ex1;
    if (s == "ex2") return ExampleId::ex2;
    if (s == "ex3") return ExampleId::ex3;
    throw Error("unknown example: " + s);
}

std::string mechanism_name(NoiseMechanism m) {
    switch (m) {
        case NoiseMechanism::class_low: return "class_low";
        case NoiseMechanism::class_high: return "class_high";
        case NoiseMechanism::instance: return "instance";
    }
    return "?";
}

NoiseMechanism mechanism_from_name(const std::string& s) {
    if (s == "class_low") return NoiseMechanism::class_low;
    if (s == "class_high") return NoiseMechanism::class_high;
    if (s == "instance") return NoiseMechanism::instance;
    throw Error("unknown noise mechanism: " + s);
}

json config_to_json_obj(const ExperimentConfig& cfg) {
    json j;
    j["example"] = example_name(cfg.example);
    j["n"] = cfg.n;
    j["n0"] = cfg.n0;
    j["n_eval"] = cfg.n_eval;
    j["noise"] = {{"mechanism", mechanism_name(cfg.noise.mechanism)},
                  {"minus_base", cfg.noise.minus_base},
                  {"minus_amp", cfg.noise.minus_amp},
                  {"plus_base", cfg.noise.plus_base},
                  {"plus_amp", cfg.noise.plus_amp}};
    json ms = json::array();
    for (Method m : cfg.methods) ms.push_back(method_name(m));
    j["methods"] = ms;
    j["nuisance"] = learner_to_json(cfg.nuisance);
    j["noise_learner"] = learner_to_json(cfg.noise_learner);
    j["final"] = learner_to_json(cfg.final_learner);
    j["loss"] = loss_name(cfg.loss);
    j["noise_estimator"] =
        cfg.noise_estimator == NoiseEstimatorKind::class_counts ? "class" : "instance";
    json tau;
    switch (cfg.tau.source) {
        case TauSource::fixed:
            tau["source"] = "fixed";
            tau["value"] = cfg.tau.value;
            break;
        case TauSource::cv:
            tau["source"] = "cv";
            tau["grid"] = cfg.tau.grid;
            break;
        case TauSource::budget:
            tau["source"] = "budget";
            tau["fraction"] = cfg.tau.fraction;
            break;
    }
    j["tau"] = tau;
    j["budget_fraction"] = cfg.budget_fraction;
    j["hybrid_query_fraction"] = cfg.hybrid_query_fraction;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["out"] = cfg.out_dir;
    return j;
}

ExperimentConfig config_from_json_obj(const json& j) {
    ExperimentConfig cfg;
    cfg.example = example_from_name(j.at("example").get<std::string>());
    cfg.n = j.at("n").get<std::size_t>();
    cfg.n0 = j.at("n0").get<std::size_t>();
    if (j.contains("n_eval")) cfg.n_eval = j["n_eval"].get<std::size_t>();
    if (j.contains("noise")) {
        const auto& nj = j["noise"];
        cfg.noise.mechanism = mechanism_from_name(nj.at("mechanism").get<std::string>());
        if (nj.contains("minus_base")) cfg.noise.minus_base = nj["minus_base"].get<double>();
        if (nj.contains("minus_amp")) cfg.noise.minus_amp = nj["minus_amp"].get<double>();
        if (nj.contains("plus_base")) cfg.noise.plus_base = nj["plus_base"].get<double>();
        if (nj.contains("plus_amp")) cfg.noise.plus_amp = nj["plus_amp"].get<double>();
    }
    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const auto& m : j["methods"]) cfg.methods.push_back(method_from_name(m.get<std::string>()));
    }
    if (j.contains("nuisance")) cfg.nuisance = learner_from_json(j["nuisance"]);
    cfg.noise_learner = j.contains("noise_learner") ? learner_from_json(j["noise_learner"])
                                                    : cfg.nuisance;
    if (j.contains("final")) cfg.final_learner = learner_from_json(j["final"]);
    if (j.contains("loss")) cfg.loss = loss_from_name(j["loss"].get<std::string>());
    if (j.contains("noise_estimator")) {
        const std::string s = j["noise_estimator"].get<std::string>();
        if (s == "class") {
            cfg.noise_estimator = NoiseEstimatorKind::class_counts;
        } else if (s == "instance") {
            cfg.noise_estimator = NoiseEstimatorKind::instance_regression;
        } else {
            throw Error("unknown noise_estimator: " + s);
        }
    }
    if (j.contains("tau")) {
        const auto& tj = j["tau"];
        const std::string src = tj.at("source").get<std::string>();
        if (src == "fixed") {
            cfg.tau.source = TauSource::fixed;
            cfg.tau.value = tj.at("value").get<double>();
        } else if (src == "cv") {
            cfg.tau.source = TauSource::cv;
            cfg.tau.grid = tj.at("grid").get<std::vector<double>>();
        } else if (src == "budget") {
            cfg.tau.source = TauSource::budget;
            cfg.tau.fraction = tj.at("fraction").get<double>();
        } else {
            throw Error("unknown tau source: " + src);
        }
    }
    if (j.contains("budget_fraction")) cfg.budget_fraction = j["budget_fraction"].get<double>();
    if (j.contains("hybrid_query_fraction")) {
        cfg.hybrid_query_fraction = j["hybrid_query_fraction"].get<double>();
    }
    if (j.contains("trials")) cfg.trials = j["trials"].get<std::size_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<std::size_t>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    return cfg;
}

json trial_to_json(const TrialResult& r) {
    json j;
    j["method"] = r.method;
    j["trial"] = r.trial;
    json m;
    if (r.metrics.excess_risk) m["excess_risk"] = *r.metrics.excess_risk;
    m["acc"] = r.metrics.acc;
    m["auc"] = r.metrics.auc;
    m["f1"] = r.metrics.f1;
    m["pr_auc"] = r.metrics.pr_auc;
    m["n_eval"] = r.metrics.n_eval;
    j["metrics"] = m;
    if (r.extraction_fraction) j["extraction_fraction"] = *r.extraction_fraction;
    if (r.extraction_purity) j["extraction_purity"] = *r.extraction_purity;
    if (r.extraction_count) j["extraction_count"] = *r.extraction_count;
    j["query_cost"] = r.query_cost;
    if (r.tau_used) j["tau"] = *r.tau_used;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

TrialResult trial_from_json(const json& j) {
    TrialResult r;
    r.method = j.at("method").get<std::string>();
    r.trial = j.at("trial").get<std::size_t>();
    const auto& m = j.at("metrics");
    if (m.contains("excess_risk")) r.metrics.excess_risk = m["excess_risk"].get<double>();
    r.metrics.acc = m.at("acc").get<double>();
    r.metrics.auc = m.at("auc").get<double>();
    r.metrics.f1 = m.at("f1").get<double>();
    r.metrics.pr_auc = m.at("pr_auc").get<double>();
    r.metrics.n_eval = m.at("n_eval").get<std::size_t>();
    if (j.contains("extraction_fraction")) r.extraction_fraction = j["extraction_fraction"].get<double>();
    if (j.contains("extraction_purity")) r.extraction_purity = j["extraction_purity"].get<double>();
    if (j.contains("extraction_count")) r.extraction_count = j["extraction_count"].get<std::size_t>();
    r.query_cost = j.at("query_cost").get<std::size_t>();
    if (j.contains("tau")) r.tau_used = j["tau"].get<double>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    return r;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
    return config_to_json_obj(cfg).dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    return config_from_json_obj(json::parse(text));
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string canon = config_to_json_obj(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string report_to_json(const ExperimentReport& report) {
    json j;
    j["config"] = config_to_json_obj(report.config);
    j["config_hash"] = report.config_hash;
    json rs = json::array();
    for (const auto& r : report.results) rs.push_back(trial_to_json(r));
    j["results"] = rs;
    json fs = json::array();
    for (const auto& f : report.failures) fs.push_back({{"trial", f.trial}, {"message", f.message}});
    j["failures"] = fs;
    return j.dump(2);
}

ExperimentReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentReport rep;
    rep.config = config_from_json_obj(j.at("config"));
    rep.config_hash = j.at("config_hash").get<std::string>();
    for (const auto& r : j.at("results")) rep.results.push_back(trial_from_json(r));
    for (const auto& f : j.at("failures")) {
        rep.failures.push_back({f.at("trial").get<std::size_t>(), f.at("message").get<std::string>()});
    }
    return rep;
}

std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& out_dir) {
    if (report.results.empty()) throw Error("emit_report: no results");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto rows = aggregate(report);
    std::vector<std::string> paths;

    const std::string csv_path = (fs::path(out_dir) / "results.csv").string();
    {
        std::ofstream out(csv_path);
        if (!out) throw IoError("cannot write " + csv_path);
        out << "method,metric,mean,std,trials\n";
        char a[40], b[40];
        for (const auto& r : rows) {
            std::snprintf(a, sizeof(a), "%.10g", r.mean);
            std::snprintf(b, sizeof(b), "%.10g", r.stddev);
            out << r.method << "," << r.metric << "," << a << "," << b << "," << r.trials << "\n";
        }
        paths.push_back(csv_path);
    }

    const std::string md_path = (fs::path(out_dir) / "results.md").string();
    {
        std::ofstream out(md_path);
        if (!out) throw IoError("cannot write " + md_path);
        auto cell = [&](const std::string& method, const std::string& metric) -> std::string {
            for (const auto& r : rows) {
                if (r.method == method && r.metric == metric) {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%.4f(%.4f)", r.mean, r.stddev);
                    return buf;
                }
            }
            return "-";
        };
        out << "| Method | Excess 0-1 risk | ACC | AUC | F1 | PR-AUC |\n";
        out << "|---|---|---|---|---|---|\n";
        std::vector<std::string> seen;
        for (const auto& r : report.results) {
            bool found = false;
            for (const auto& s : seen) found |= s == r.method;
            if (!found) seen.push_back(r.method);
        }
        for (const auto& m : seen) {
            out << "| " << m << " | " << cell(m, "excess_risk") << " | " << cell(m, "acc") << " | "
                << cell(m, "auc") << " | " << cell(m, "f1") << " | " << cell(m, "pr_auc")
                << " |\n";
        }
        paths.push_back(md_path);
    }

    const std::string json_path = (fs::path(out_dir) / "results.json").string();
    {
        std::ofstream out(json_path);
        if (!out) throw IoError("cannot write " + json_path);
        out << report_to_json(report) << "\n";
        paths.push_back(json_path);
    }
    return paths;
}

}  // namespace bofuse
