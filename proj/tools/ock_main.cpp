#include "ock/datasets.hpp"
#include "ock/model_io.hpp"
#include "ock/ode_inference.hpp"
#include "ock/pde_learner.hpp"
#include "ock/tuning.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

using nlohmann::json;

namespace {

// exit codes: 0 success, 2 usage or config error, 3 numerical failure
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

json preset_config(const std::string& name) {
    if (name == "fhn-desk")
        return {{"system", "fhn"},     {"trajectories", 10}, {"snapshots", 50},
                {"t0", 0.0},           {"t1", 2.0},          {"noise", 0.0},
                {"seed", 0},           {"kernel", "gaussian"}, {"lengthscales", {4.0}},
                {"lambdas", {1e-10}},  {"split", {0.7, 0.1, 0.2}}};
    if (name == "lorenz63-desk")
        return {{"system", "lorenz63"}, {"trajectories", 20}, {"snapshots", 201},
                {"t0", 0.0},            {"t1", 2.0},          {"noise", 0.0},
                {"seed", 0},            {"kernel", "gaussian"}, {"lengthscales", {16.0}},
                {"lambdas", {1e-10}},   {"split", {0.75, 0.0, 0.25}}};
    if (name == "lorenz96-16-desk" || name == "lorenz96-128-desk")
        return {{"system", "lorenz96"},
                {"dim", name == "lorenz96-16-desk" ? 16 : 128},
                {"trajectories", 10},
                {"snapshots", 243},
                {"t0", 0.0},
                {"t1", 5.0},
                {"noise", 0.0},
                {"seed", 0},
                {"kernel", "gaussian"},
                {"lengthscales", {32.0}},
                {"lambdas", {name == "lorenz96-16-desk" ? 1e-10 : 1e-8}},
                {"split", {0.7, 0.1, 0.2}}};
    if (name == "pde-desk")
        return {{"grids", "100x10,200x20,400x40,800x80"},
                {"features", 100},
                {"lambda1", 1e-8},
                {"lambda2", 1e-8},
                {"lengthscale_alpha", 1.0},
                {"lengthscale_f", 0.1},
                {"seed", 0},
                {"eval_points", 1001}};
    throw std::invalid_argument("unknown preset '" + name +
                                "' (fhn-desk, lorenz63-desk, lorenz96-16-desk, "
                                "lorenz96-128-desk, pde-desk)");
}

// precedence: flags > config file > preset
json resolve_config(const std::string& preset, const std::string& config_path) {
    json cfg = json::object();
    if (!preset.empty()) cfg.merge_patch(preset_config(preset));
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot open config file '" + config_path + "'");
        try {
            cfg.merge_patch(json::parse(in));
        } catch (const json::parse_error& e) {
            throw std::invalid_argument(std::string("config file: ") + e.what());
        }
    }
    return cfg;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse " + what + " entry '" + tok + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(what + " list is empty");
    return out;
}

ock::GeneratorConfig generator_from_json(const json& cfg) {
    std::string system = cfg.value("system", "");
    if (system.empty())
        throw std::invalid_argument("no dataset configured; pass --system, --preset, or --config");
    ock::GeneratorConfig gen;
    ock::SystemKind kind = ock::system_from_name(system);
    if (kind == ock::SystemKind::FitzHughNagumo) gen = ock::GeneratorConfig::fhn();
    if (kind == ock::SystemKind::Lorenz63) gen = ock::GeneratorConfig::lorenz63();
    if (kind == ock::SystemKind::Lorenz96) gen = ock::GeneratorConfig::lorenz96(cfg.value("dim", 16));
    gen.n_trajectories = cfg.value("trajectories", gen.n_trajectories);
    gen.n_snapshots = cfg.value("snapshots", gen.n_snapshots);
    gen.t_start = cfg.value("t0", gen.t_start);
    gen.t_end = cfg.value("t1", gen.t_end);
    gen.noise_std = cfg.value("noise", gen.noise_std);
    gen.seed = cfg.value("seed", gen.seed);
    gen.substeps = cfg.value("substeps_generate", gen.substeps);
    if (cfg.contains("params"))
        for (const auto& [key, value] : cfg.at("params").items())
            gen.params[key] = value.get<double>();
    if (cfg.contains("init_box")) {
        gen.init_box.clear();
        for (const auto& b : cfg.at("init_box"))
            gen.init_box.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    }
    gen.validate();
    return gen;
}

json generator_to_json(const ock::GeneratorConfig& gen) {
    json j;
    j["system"] = ock::system_name(gen.system);
    j["dim"] = gen.dimension;
    j["trajectories"] = gen.n_trajectories;
    j["snapshots"] = gen.n_snapshots;
    j["t0"] = gen.t_start;
    j["t1"] = gen.t_end;
    j["noise"] = gen.noise_std;
    j["seed"] = gen.seed;
    j["substeps_generate"] = gen.substeps;
    j["params"] = gen.params;
    json box = json::array();
    for (const auto& b : gen.init_box) box.push_back({b[0], b[1]});
    j["init_box"] = std::move(box);
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

json summary_to_json(const ock::EvalSummary& s) {
    auto clean = [](double v) -> json {
        return std::isfinite(v) ? json(v) : json(nullptr);  // inf is not valid JSON
    };
    return {{"mean", clean(s.mean)}, {"median", clean(s.median)},
            {"diverged_count", s.diverged_count}};
}

struct DatasetArgs {
    std::string preset, config_path;
    std::string system;
    int dim = 16;
    int trajectories = 0, snapshots = 0;
    double t0 = 0.0, t1 = 0.0, noise = 0.0;
    std::uint64_t seed = 0;
    int substeps_generate = 20;
    std::vector<std::string> params;
    std::string init_box;

    CLI::Option *system_opt = nullptr, *dim_opt = nullptr, *traj_opt = nullptr,
                *snap_opt = nullptr, *t0_opt = nullptr, *t1_opt = nullptr, *noise_opt = nullptr,
                *seed_opt = nullptr, *sub_opt = nullptr, *param_opt = nullptr, *box_opt = nullptr;

    void add_to(CLI::App* app) {
        app->add_option("--preset", preset, "built-in desk preset");
        app->add_option("--config", config_path, "JSON config file");
        system_opt = app->add_option("--system", system, "fhn, lorenz63, or lorenz96");
        dim_opt = app->add_option("--dim", dim, "state dimension (lorenz96)");
        traj_opt = app->add_option("--trajectories", trajectories, "trajectory count");
        snap_opt = app->add_option("--snapshots", snapshots, "snapshots per trajectory");
        t0_opt = app->add_option("--t0", t0, "start time");
        t1_opt = app->add_option("--t1", t1, "end time");
        noise_opt = app->add_option("--noise", noise, "observation noise std");
        seed_opt = app->add_option("--seed", seed, "generator seed");
        sub_opt = app->add_option("--substeps-generate", substeps_generate,
                                  "internal RK4 substeps per snapshot interval");
        param_opt = app->add_option("--param", params, "system parameter as name=value");
        box_opt = app->add_option("--init-box", init_box,
                                  "initial-condition box as lo:hi,lo:hi,...");
    }

    void overlay(json& cfg) const {
        if (*system_opt) cfg["system"] = system;
        if (*dim_opt) cfg["dim"] = dim;
        if (*traj_opt) cfg["trajectories"] = trajectories;
        if (*snap_opt) cfg["snapshots"] = snapshots;
        if (*t0_opt) cfg["t0"] = t0;
        if (*t1_opt) cfg["t1"] = t1;
        if (*noise_opt) cfg["noise"] = noise;
        if (*seed_opt) cfg["seed"] = seed;
        if (*sub_opt) cfg["substeps_generate"] = substeps_generate;
        for (const std::string& p : params) {
            std::size_t eq = p.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--param expects name=value, got '" + p + "'");
            try {
                cfg["params"][p.substr(0, eq)] = std::stod(p.substr(eq + 1));
            } catch (const std::exception&) {
                throw std::invalid_argument("cannot parse --param value in '" + p + "'");
            }
        }
        if (*box_opt) {
            json box = json::array();
            std::istringstream ss(init_box);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                std::size_t colon = tok.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("--init-box expects lo:hi pairs");
                try {
                    box.push_back({std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))});
                } catch (const std::exception&) {
                    throw std::invalid_argument("cannot parse --init-box entry '" + tok + "'");
                }
            }
            cfg["init_box"] = std::move(box);
        }
    }
};

struct TrainArgs {
    std::string data_path;
    std::string kernel;
    std::string lengthscales, multipliers, lambdas;
    int features = 0;
    std::uint64_t rff_seed = 0;
    std::string split;
    std::uint64_t split_seed = 0;
    int substeps = 0;

    CLI::Option *kernel_opt = nullptr, *ls_opt = nullptr, *mult_opt = nullptr,
                *lam_opt = nullptr, *feat_opt = nullptr, *rffseed_opt = nullptr,
                *split_opt = nullptr, *splitseed_opt = nullptr, *sub_opt = nullptr;

    void add_to(CLI::App* app) {
        app->add_option("--data", data_path, "snapshot CSV (instead of a generated dataset)");
        kernel_opt = app->add_option("--kernel", kernel, "gaussian or rff");
        ls_opt = app->add_option("--lengthscales", lengthscales,
                                 "comma-separated absolute lengthscale grid");
        mult_opt = app->add_option("--lengthscale-multipliers", multipliers,
                                   "grid as multiples of the median pairwise distance");
        lam_opt = app->add_option("--lambdas", lambdas, "comma-separated ridge grid");
        feat_opt = app->add_option("--features", features, "random Fourier feature count");
        rffseed_opt = app->add_option("--rff-seed", rff_seed, "feature map seed");
        split_opt = app->add_option("--split", split, "train,validation,test fractions");
        splitseed_opt = app->add_option("--split-seed", split_seed, "split shuffle seed");
        sub_opt = app->add_option("--substeps", substeps, "RK4 substeps per interval");
    }

    void overlay(json& cfg) const {
        if (*kernel_opt) cfg["kernel"] = kernel;
        if (*ls_opt) cfg["lengthscales"] = parse_double_list(lengthscales, "lengthscale");
        if (*mult_opt)
            cfg["lengthscale_multipliers"] = parse_double_list(multipliers, "multiplier");
        if (*lam_opt) cfg["lambdas"] = parse_double_list(lambdas, "lambda");
        if (*feat_opt) cfg["features"] = features;
        if (*rffseed_opt) cfg["rff_seed"] = rff_seed;
        if (*split_opt) {
            std::vector<double> f = parse_double_list(split, "split fraction");
            if (f.size() != 3)
                throw std::invalid_argument("--split expects exactly 3 fractions");
            cfg["split"] = f;
        }
        if (*splitseed_opt) cfg["split_seed"] = split_seed;
        if (*sub_opt) cfg["substeps"] = substeps;
    }
};

ock::TrainOptions train_options_from_json(const json& cfg) {
    ock::TrainOptions opts;
    std::string kernel = cfg.value("kernel", "gaussian");
    if (kernel == "gaussian") {
        opts.kind = ock::KernelKind::Gaussian;
    } else if (kernel == "rff") {
        opts.kind = ock::KernelKind::RandomFourier;
    } else {
        throw std::invalid_argument("kernel must be gaussian or rff, got '" + kernel + "'");
    }
    if (cfg.contains("lengthscales"))
        opts.lengthscales = cfg.at("lengthscales").get<std::vector<double>>();
    if (cfg.contains("lengthscale_multipliers"))
        opts.lengthscale_multipliers =
            cfg.at("lengthscale_multipliers").get<std::vector<double>>();
    if (cfg.contains("lambdas")) opts.lambdas = cfg.at("lambdas").get<std::vector<double>>();
    opts.feature_count = cfg.value("features", opts.feature_count);
    opts.rff_seed = cfg.value("rff_seed", opts.rff_seed);
    opts.substeps = cfg.value("substeps", opts.substeps);
    return opts;
}

std::array<double, 3> split_from_json(const json& cfg) {
    std::array<double, 3> fractions{0.7, 0.1, 0.2};
    if (cfg.contains("split")) {
        auto f = cfg.at("split").get<std::vector<double>>();
        if (f.size() != 3) throw std::invalid_argument("split needs exactly 3 fractions");
        fractions = {f[0], f[1], f[2]};
    }
    return fractions;
}

struct LoadedDataset {
    std::vector<ock::SnapshotSeries> series;
    json provenance;
};

LoadedDataset dataset_for_training(const json& cfg, const std::string& data_path) {
    LoadedDataset out;
    if (!data_path.empty()) {
        out.series = ock::load_series_csv(data_path).series;
        out.provenance = {{"csv", data_path}};
    } else {
        ock::GeneratorConfig gen = generator_from_json(cfg);
        out.series = ock::generate(gen);
        out.provenance = generator_to_json(gen);
    }
    return out;
}

json grid_scores_to_json(const ock::TrainOutcome& outcome) {
    json scores = json::array();
    for (const ock::GridScore& s : outcome.scores) {
        json row = {{"lengthscale", s.lengthscale}, {"lambda", s.lambda}};
        row["val_err"] = std::isfinite(s.val_err) ? json(s.val_err) : json(nullptr);
        scores.push_back(std::move(row));
    }
    return scores;
}

int cmd_generate(const DatasetArgs& ds, const std::string& out_path) {
    json cfg = resolve_config(ds.preset, ds.config_path);
    ds.overlay(cfg);
    ock::GeneratorConfig gen = generator_from_json(cfg);
    std::vector<ock::SnapshotSeries> series = ock::generate(gen);
    ock::save_series_csv(out_path, series);
    write_json_file(out_path + ".meta.json", generator_to_json(gen));
    std::cout << "wrote " << series.size() << " series (" << series.front().size()
              << " snapshots, d=" << gen.dimension << ") to " << out_path << "\n";
    return 0;
}

int cmd_train(const DatasetArgs& ds, const TrainArgs& tr, const std::string& model_path,
              const std::string& report_path, bool tune_only) {
    json cfg = resolve_config(ds.preset, ds.config_path);
    ds.overlay(cfg);
    tr.overlay(cfg);

    LoadedDataset data = dataset_for_training(cfg, tr.data_path);
    std::array<double, 3> fractions = split_from_json(cfg);
    std::uint64_t split_seed = cfg.value("split_seed", 0);
    ock::SplitResult parts = ock::split_series(data.series, fractions, split_seed);
    ock::TrainOptions opts = train_options_from_json(cfg);

    ock::TrainOutcome outcome = tune_only ? ock::tune_model(parts.train, parts.validation, opts)
                                          : ock::train_model(parts.train, parts.validation, opts);

    json report;
    report["config"] = cfg;
    report["dataset"] = data.provenance;
    report["split_sizes"] = {parts.train.size(), parts.validation.size(), parts.test.size()};
    report["train_segments"] = outcome.train_segments;
    if (outcome.median_distance > 0.0) report["median_pairwise_distance"] = outcome.median_distance;
    report["grid"] = grid_scores_to_json(outcome);
    report["chosen"] = {{"lengthscale", outcome.chosen_lengthscale},
                        {"lambda", outcome.chosen_lambda}};
    report["timings_seconds"] = {{"search", outcome.seconds_search},
                                 {"final_fit", outcome.seconds_final_fit}};

    if (!tune_only) {
        ock::save_model(model_path, outcome.model);
        report["model_file"] = model_path;

        if (!parts.test.empty()) {
            ock::VectorField field = ock::FieldEvaluator(outcome.model).as_field();
            std::vector<double> errs, one_steps, nulls;
            int diverged = 0;
            for (const ock::SnapshotSeries& s : parts.test) {
                ock::PredictedTrajectory pred =
                    ock::integrate(field, s.states.row(0).transpose(), s.times, opts.substeps);
                if (pred.diverged) {
                    ++diverged;
                } else {
                    errs.push_back(ock::err_metric(s, pred));
                }
                one_steps.push_back(ock::one_step_err(s, outcome.model, opts.substeps));
                nulls.push_back(ock::null_model_err(s));
            }
            report["test"] = {{"err", summary_to_json(ock::summarize_errs(errs, diverged))},
                              {"one_step_err", summary_to_json(ock::summarize_errs(one_steps))},
                              {"null_err", summary_to_json(ock::summarize_errs(nulls))}};
        }
    }
    write_json_file(report_path, report);

    std::cout << (tune_only ? "tuned: " : "trained: ") << "lengthscale "
              << outcome.chosen_lengthscale << ", lambda " << outcome.chosen_lambda << " ("
              << outcome.train_segments << " segments)\n";
    if (!tune_only) std::cout << "model: " << model_path << "\n";
    std::cout << "report: " << report_path << "\n";
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& ics_path,
                const std::string& out_path, std::optional<double> t0, std::optional<double> t1,
                std::optional<int> steps, int substeps) {
    ock::OckModel model = ock::load_model(model_path);
    ock::LoadedCsv input = ock::load_series_csv(ics_path);
    ock::VectorField field = ock::FieldEvaluator(model).as_field();

    bool uniform_grid = t0.has_value() || t1.has_value() || steps.has_value();
    if (uniform_grid && !(t0 && t1 && steps))
        throw std::invalid_argument("--t0, --t1, and --steps must be given together");
    std::vector<double> grid;
    if (uniform_grid) {
        if (*steps < 1 || *t1 <= *t0)
            throw std::invalid_argument("time grid needs steps >= 1 and t1 > t0");
        for (int i = 0; i <= *steps; ++i)
            grid.push_back(*t0 + (*t1 - *t0) * i / *steps);
    }

    std::vector<ock::SnapshotSeries> preds;
    std::map<int, bool> diverged;
    for (const ock::SnapshotSeries& s : input.series) {
        if (s.dimension() != model.dimension)
            throw std::invalid_argument("dataset dimension " + std::to_string(s.dimension()) +
                                        " does not match model dimension " +
                                        std::to_string(model.dimension));
        const std::vector<double>& times = uniform_grid ? grid : s.times;
        ock::PredictedTrajectory pred =
            ock::integrate(field, s.states.row(0).transpose(), times, substeps);
        ock::SnapshotSeries out;
        out.series_id = s.series_id;
        out.times = pred.times;
        out.states = pred.states;
        preds.push_back(std::move(out));
        diverged[s.series_id] = pred.diverged;
    }
    ock::save_predictions_csv(out_path, preds, diverged);
    int bad = 0;
    for (const auto& [sid, flag] : diverged) bad += flag ? 1 : 0;
    std::cout << "predicted " << preds.size() << " series to " << out_path;
    if (bad > 0) std::cout << " (" << bad << " diverged)";
    std::cout << "\n";
    return 0;
}

int cmd_evaluate(const std::string& truth_path, const std::string& pred_path,
                 const std::string& model_path, const std::string& out_prefix, int substeps) {
    ock::LoadedCsv truth = ock::load_series_csv(truth_path);
    ock::LoadedCsv pred = ock::load_series_csv(pred_path);

    std::map<int, const ock::SnapshotSeries*> pred_by_id;
    for (const ock::SnapshotSeries& s : pred.series) pred_by_id[s.series_id] = &s;
    if (truth.series.size() != pred.series.size())
        throw std::invalid_argument("truth and prediction series counts differ");

    std::optional<ock::OckModel> model;
    if (!model_path.empty()) model = ock::load_model(model_path);

    const double inf = std::numeric_limits<double>::infinity();
    json per_series = json::array();
    std::vector<double> errs, one_steps, nulls;
    int diverged_count = 0;

    std::ofstream csv(out_prefix + ".csv");
    if (!csv) throw std::invalid_argument("cannot open '" + out_prefix + ".csv' for writing");
    csv << "series_id,err,one_step_err,null_err,diverged\n";

    for (const ock::SnapshotSeries& t : truth.series) {
        auto it = pred_by_id.find(t.series_id);
        if (it == pred_by_id.end())
            throw std::invalid_argument("prediction file is missing series " +
                                        std::to_string(t.series_id));
        const ock::SnapshotSeries& p = *it->second;
        bool was_diverged = pred.has_diverged_column && pred.diverged[t.series_id];

        double err;
        if (was_diverged) {
            err = inf;
            ++diverged_count;
        } else {
            ock::PredictedTrajectory as_pred;
            as_pred.times = p.times;
            as_pred.states = p.states;
            err = ock::err_metric(t, as_pred);
            errs.push_back(err);
        }
        double null_err = ock::null_model_err(t);
        nulls.push_back(null_err);
        double one_step = std::numeric_limits<double>::quiet_NaN();
        if (model) {
            one_step = ock::one_step_err(t, *model, substeps);
            one_steps.push_back(one_step);
        }

        char line[256];
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,%d\n", t.series_id, err, one_step,
                      null_err, was_diverged ? 1 : 0);
        csv << line;
        json row = {{"series_id", t.series_id},
                    {"err", std::isfinite(err) ? json(err) : json(nullptr)},
                    {"null_err", null_err},
                    {"diverged", was_diverged}};
        if (model) row["one_step_err"] = std::isfinite(one_step) ? json(one_step) : json(nullptr);
        per_series.push_back(std::move(row));
    }

    json report;
    report["per_series"] = std::move(per_series);
    report["aggregate"]["err"] = summary_to_json(ock::summarize_errs(errs, diverged_count));
    report["aggregate"]["null_err"] = summary_to_json(ock::summarize_errs(nulls));
    if (model)
        report["aggregate"]["one_step_err"] = summary_to_json(ock::summarize_errs(one_steps));
    write_json_file(out_prefix + ".json", report);

    const json& agg = report["aggregate"];
    std::cout << "evaluated " << truth.series.size() << " series: mean err "
              << agg["err"]["mean"].dump() << ", mean null " << agg["null_err"]["mean"].dump();
    if (diverged_count > 0) std::cout << " (" << diverged_count << " diverged)";
    std::cout << "\n" << out_prefix << ".csv, " << out_prefix << ".json\n";
    return 0;
}

int cmd_pde_study(const std::string& preset, const std::string& config_path,
                  const std::string& grids_flag, const json& flag_overlay,
                  const std::string& out_path) {
    json cfg = resolve_config(preset, config_path);
    if (!grids_flag.empty()) cfg["grids"] = grids_flag;
    cfg.merge_patch(flag_overlay);

    ock::PdeStudyConfig study;
    std::string grids = cfg.value("grids", "100x10,200x20,400x40,800x80");
    study.grids.clear();
    std::istringstream ss(grids);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t x = tok.find('x');
        if (x == std::string::npos)
            throw std::invalid_argument("grid '" + tok + "' must look like 200x20");
        try {
            study.grids.push_back({std::stoi(tok.substr(0, x)), std::stoi(tok.substr(x + 1))});
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse grid '" + tok + "'");
        }
    }
    study.feature_count = cfg.value("features", study.feature_count);
    study.lengthscale_alpha = cfg.value("lengthscale_alpha", study.lengthscale_alpha);
    study.lengthscale_f = cfg.value("lengthscale_f", study.lengthscale_f);
    study.lambda1 = cfg.value("lambda1", study.lambda1);
    study.lambda2 = cfg.value("lambda2", study.lambda2);
    study.seed = cfg.value("seed", study.seed);
    study.eval_points = cfg.value("eval_points", study.eval_points);

    ock::PdeStudyResult result = ock::run_pde_study(study);

    std::ofstream csv(out_path);
    if (!csv) throw std::invalid_argument("cannot open '" + out_path + "' for writing");
    csv << "n,m,alpha_err,f_err\n";
    char line[160];
    for (const ock::PdeStudyRow& r : result.rows) {
        std::snprintf(line, sizeof(line), "%d,%d,%.17g,%.17g\n", r.n, r.m, r.alpha_err, r.f_err);
        csv << line;
        std::printf("%6d x %4d  alpha_err %.4g  f_err %.4g\n", r.n, r.m, r.alpha_err, r.f_err);
    }
    std::printf("log-log slope vs n*m: alpha %.3f, f %.3f\n", result.alpha_slope, result.f_slope);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"occupation-kernel learning of ODE vector fields and quasilinear PDE "
                 "coefficients from trajectory snapshots"};
    app.require_subcommand(1);

    // generate
    CLI::App* generate = app.add_subcommand("generate", "write a synthetic snapshot dataset");
    DatasetArgs gen_ds;
    gen_ds.add_to(generate);
    std::string gen_out = "dataset.csv";
    generate->add_option("--out", gen_out, "output CSV path");

    // train / tune share their argument block
    CLI::App* train = app.add_subcommand("train", "fit a vector field, with grid search");
    DatasetArgs train_ds;
    TrainArgs train_tr;
    train_ds.add_to(train);
    train_tr.add_to(train);
    std::string train_model_path = "model.json", train_report_path = "train_report.json";
    train->add_option("--out", train_model_path, "output model file");
    train->add_option("--report", train_report_path, "output report JSON");

    CLI::App* tune = app.add_subcommand("tune", "grid search only; report scores, write no model");
    DatasetArgs tune_ds;
    TrainArgs tune_tr;
    tune_ds.add_to(tune);
    tune_tr.add_to(tune);
    std::string tune_report_path = "tune_report.json";
    tune->add_option("--report", tune_report_path, "output report JSON");

    // predict
    CLI::App* predict = app.add_subcommand("predict", "integrate a fitted model from initial conditions");
    std::string pr_model, pr_ics, pr_out = "predictions.csv";
    double pr_t0 = 0.0, pr_t1 = 0.0;
    int pr_steps = 0, pr_substeps = 10;
    predict->add_option("--model", pr_model, "model file")->required();
    predict->add_option("--ics", pr_ics, "CSV whose first row per series is the initial condition")
        ->required();
    predict->add_option("--out", pr_out, "output predictions CSV");
    CLI::Option* pr_t0_opt = predict->add_option("--t0", pr_t0, "uniform grid start");
    CLI::Option* pr_t1_opt = predict->add_option("--t1", pr_t1, "uniform grid end");
    CLI::Option* pr_steps_opt =
        predict->add_option("--steps", pr_steps, "uniform grid interval count");
    predict->add_option("--substeps", pr_substeps, "RK4 substeps per interval");

    // evaluate
    CLI::App* evaluate = app.add_subcommand("evaluate", "score predictions against truth");
    std::string ev_truth, ev_pred, ev_model, ev_prefix = "metrics";
    int ev_substeps = 10;
    evaluate->add_option("--truth", ev_truth, "truth CSV")->required();
    evaluate->add_option("--pred", ev_pred, "predictions CSV")->required();
    evaluate->add_option("--model", ev_model, "model file; enables one-step error");
    evaluate->add_option("--out-prefix", ev_prefix, "output prefix for .csv and .json");
    evaluate->add_option("--substeps", ev_substeps, "RK4 substeps for one-step error");

    // pde-study
    CLI::App* pde = app.add_subcommand("pde-study", "coefficient-recovery error vs grid resolution");
    std::string pde_preset, pde_config, pde_grids, pde_out = "pde_study.csv";
    int pde_features = 0, pde_eval_points = 0;
    double pde_l1 = 0.0, pde_l2 = 0.0, pde_ls_a = 0.0, pde_ls_f = 0.0;
    std::uint64_t pde_seed = 0;
    pde->add_option("--preset", pde_preset, "built-in desk preset");
    pde->add_option("--config", pde_config, "JSON config file");
    pde->add_option("--grids", pde_grids, "comma-separated n x m list, e.g. 100x10,200x20");
    CLI::Option* pde_feat_opt = pde->add_option("--features", pde_features, "RFF count per function");
    CLI::Option* pde_l1_opt = pde->add_option("--lambda1", pde_l1, "ridge for alpha weights");
    CLI::Option* pde_l2_opt = pde->add_option("--lambda2", pde_l2, "ridge for f weights");
    CLI::Option* pde_lsa_opt =
        pde->add_option("--lengthscale-alpha", pde_ls_a, "feature lengthscale over x");
    CLI::Option* pde_lsf_opt =
        pde->add_option("--lengthscale-f", pde_ls_f, "feature lengthscale over u");
    CLI::Option* pde_seed_opt = pde->add_option("--seed", pde_seed, "feature draw seed");
    CLI::Option* pde_eval_opt =
        pde->add_option("--eval-points", pde_eval_points, "error evaluation point count");
    pde->add_option("--out", pde_out, "output study CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen_ds, gen_out);
        if (train->parsed())
            return cmd_train(train_ds, train_tr, train_model_path, train_report_path, false);
        if (tune->parsed()) return cmd_train(tune_ds, tune_tr, "", tune_report_path, true);
        if (predict->parsed()) {
            std::optional<double> t0, t1;
            std::optional<int> steps;
            if (*pr_t0_opt) t0 = pr_t0;
            if (*pr_t1_opt) t1 = pr_t1;
            if (*pr_steps_opt) steps = pr_steps;
            return cmd_predict(pr_model, pr_ics, pr_out, t0, t1, steps, pr_substeps);
        }
        if (evaluate->parsed())
            return cmd_evaluate(ev_truth, ev_pred, ev_model, ev_prefix, ev_substeps);
        if (pde->parsed()) {
            json overlay = json::object();
            if (*pde_feat_opt) overlay["features"] = pde_features;
            if (*pde_l1_opt) overlay["lambda1"] = pde_l1;
            if (*pde_l2_opt) overlay["lambda2"] = pde_l2;
            if (*pde_lsa_opt) overlay["lengthscale_alpha"] = pde_ls_a;
            if (*pde_lsf_opt) overlay["lengthscale_f"] = pde_ls_f;
            if (*pde_seed_opt) overlay["seed"] = pde_seed;
            if (*pde_eval_opt) overlay["eval_points"] = pde_eval_points;
            return cmd_pde_study(pde_preset, pde_config, pde_grids, overlay, pde_out);
        }
    } catch (const ock::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ock::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
