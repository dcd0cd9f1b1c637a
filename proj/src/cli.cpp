#include "poshawk/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "poshawk/baselines.hpp"
#include "poshawk/errors.hpp"
#include "poshawk/evaluate.hpp"
#include "poshawk/events.hpp"
#include "poshawk/intensity.hpp"
#include "poshawk/model_io.hpp"
#include "poshawk/report.hpp"
#include "poshawk/simulate.hpp"

namespace poshawk {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0')
        throw IoError("config: malformed number for '" + key + "': '" + s + "'");
    return v;
}

CivilDateTime parse_epoch(const std::string& s) {
    if (s.size() == 10) return parse_civil_date(s);
    return parse_civil_datetime(s);
}

}  // namespace

void CliConfig::apply_kv(const std::string& key, const std::string& value) {
    if (key == "events") events_path = value;
    else if (key == "calendar") calendar_path = value;
    else if (key == "model_in") model_in = value;
    else if (key == "model_out") model_out = value;
    else if (key == "out") out_path = value;
    else if (key == "svg") svg_path = value;
    else if (key == "epoch") epoch = value;
    else if (key == "timezone") timezone = value;
    else if (key == "kernel_mode") kernel_mode = value;
    else if (key == "future_integral") future_integral = value;
    else if (key == "phat_contributors") phat_contributors = value;
    else if (key == "models") models = value;
    else if (key == "window_s") window_s = to_double(value, key);
    else if (key == "ridge") ridge = to_double(value, key);
    else if (key == "gradient_tol") gradient_tol = to_double(value, key);
    else if (key == "early_window_s") early_window_s = to_double(value, key);
    else if (key == "horizon_hours") horizon_hours = to_double(value, key);
    else if (key == "n_realizations") n_realizations = static_cast<int>(to_double(value, key));
    else if (key == "train_days") train_days = static_cast<int>(to_double(value, key));
    else if (key == "block_days") block_days = static_cast<int>(to_double(value, key));
    else if (key == "eval_days") eval_days = static_cast<int>(to_double(value, key));
    else if (key == "synth_days") synth_days = static_cast<int>(to_double(value, key));
    else if (key == "seed") seed = std::strtoull(value.c_str(), nullptr, 10);
    else throw IoError("config: unknown key '" + key + "'");
}

std::string CliConfig::echo() const {
    std::ostringstream out;
    out << "# effective config\n";
    out << "events = " << events_path << '\n';
    out << "calendar = " << calendar_path << '\n';
    out << "model_in = " << model_in << '\n';
    out << "model_out = " << model_out << '\n';
    out << "out = " << out_path << '\n';
    out << "svg = " << svg_path << '\n';
    out << "epoch = " << epoch << '\n';
    out << "timezone = " << timezone << '\n';
    out << "kernel_mode = " << kernel_mode << '\n';
    out << "future_integral = " << future_integral << '\n';
    out << "phat_contributors = " << phat_contributors << '\n';
    out << "models = " << models << '\n';
    out << "window_s = " << fmt(window_s) << '\n';
    out << "ridge = " << fmt(ridge) << '\n';
    out << "gradient_tol = " << fmt(gradient_tol) << '\n';
    out << "early_window_s = " << fmt(early_window_s) << '\n';
    out << "horizon_hours = " << fmt(horizon_hours) << '\n';
    out << "n_realizations = " << n_realizations << '\n';
    out << "train_days = " << train_days << '\n';
    out << "block_days = " << block_days << '\n';
    out << "eval_days = " << eval_days << '\n';
    out << "synth_days = " << synth_days << '\n';
    out << "seed = " << seed << '\n';
    return out.str();
}

namespace {

void load_config_file(CliConfig& cfg, const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw IoError("config: malformed line '" + t + "' in " + path);
        cfg.apply_kv(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

struct Frame {
    CivilDateTime epoch;
    TimeZoneOffset zone;
};

Frame frame_of(const CliConfig& cfg) {
    Frame f;
    try {
        f.epoch = parse_epoch(cfg.epoch);
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("config: bad epoch: ") + e.what());
    }
    f.zone = TimeZoneOffset::parse(cfg.timezone);
    return f;
}

CovariateCalendar load_calendar(const CliConfig& cfg, const Frame& f) {
    if (cfg.calendar_path.empty()) throw IoError("no calendar file given (--calendar)");
    return parse_calendar_csv(read_file(cfg.calendar_path), f.epoch, f.zone);
}

Dataset load_dataset(const CliConfig& cfg, const Frame& f) {
    if (cfg.events_path.empty()) throw IoError("no events file given (--events)");
    ParseResult pr = parse_events(read_file(cfg.events_path), f.epoch, f.zone);
    for (const auto& w : pr.warnings) std::cerr << "warning: " << w << '\n';
    Dataset ds = build_cascades(pr.events);
    if (ds.dropped_orphans > 0)
        std::cerr << "warning: dropped " << ds.dropped_orphans << " orphan retweets\n";
    return ds;
}

void emit(const CliConfig& cfg, const std::string& content) {
    if (cfg.out_path.empty())
        std::cout << content;
    else
        write_file(cfg.out_path, content);
}

int cmd_fit(const CliConfig& cfg) {
    const Frame f = frame_of(cfg);
    const CovariateCalendar cal = load_calendar(cfg, f);
    const Dataset ds = load_dataset(cfg, f);

    FitOptions bopts;
    bopts.gradient_tol = cfg.gradient_tol;
    bopts.ridge = cfg.ridge;
    InfluenceFitOptions iopts;
    iopts.window_s = cfg.window_s;
    iopts.mode = kernel_mode_from_string(cfg.kernel_mode);
    iopts.contributors = phat_contributors_from_string(cfg.phat_contributors);
    iopts.seed = cfg.seed;

    HawkesModel model;
    model.background = fit_beta(ds, cal, bopts);
    model.influence = fit_influence(ds, iopts);
    model.dists = empirical_distributions(ds, model.influence.p0_by_origin);
    model.mode = iopts.mode;
    model.t_b = ds.t_b;
    model.future_integral = future_integral_from_string(cfg.future_integral);

    std::cout << "fitted background coefficients:\n";
    for (int i = 0; i < kCovariateDim; ++i)
        std::cout << "  beta." << kCovariateNames[i] << " = "
                  << fmt(model.background.beta[i]) << '\n';
    // am + pm = 1 inside the intercept, so only these combinations are
    // identifiable without the ridge term.
    const auto& b = model.background.beta;
    std::cout << "identifiable combinations:\n";
    std::cout << "  intercept+pm = " << fmt(b[0] + b[3]) << '\n';
    std::cout << "  am-pm = " << fmt(b[2] - b[3]) << '\n';
    std::cout << "influence fit: r0 = " << fmt(model.influence.r0)
              << ", phi0 = " << fmt(model.influence.phi0)
              << " s, tau_m = " << fmt(model.influence.tau_m)
              << " s, loss = " << fmt(model.influence.loss)
              << ", origins = " << model.influence.p0_by_origin.size() << '\n';
    for (const auto& w : model.influence.warnings) std::cerr << "warning: " << w << '\n';
    if (auto w = subcriticality_warning(model)) std::cerr << "warning: " << *w << '\n';

    ModelFile mf;
    mf.model = model;
    mf.epoch = f.epoch;
    mf.zone = f.zone;
    mf.contributors = iopts.contributors;
    mf.fingerprint = dataset_fingerprint(ds, f.epoch, f.zone);
    const std::string out_path = cfg.model_out.empty() ? "model.txt" : cfg.model_out;
    write_file(out_path, mf.serialize());
    std::cout << "model written to " << out_path << '\n';

    if (!cfg.svg_path.empty()) {
        std::vector<std::string> names(kCovariateNames.begin(), kCovariateNames.end());
        std::vector<double> values(b.begin(), b.end());
        write_file(cfg.svg_path, svg_bar_chart(names, values, "background coefficients"));
    }
    return 0;
}

int cmd_predict(const CliConfig& cfg) {
    if (cfg.model_in.empty()) throw IoError("no model file given (--model-in)");
    const ModelFile mf = ModelFile::deserialize(read_file(cfg.model_in));
    CliConfig eff = cfg;
    eff.epoch = format_civil_datetime(mf.epoch);
    eff.timezone = mf.zone.name();
    const Frame f{mf.epoch, mf.zone};
    const CovariateCalendar cal = load_calendar(eff, f);

    if (eff.events_path.empty()) throw IoError("no events file given (--events)");
    ParseResult pr = parse_events(read_file(eff.events_path), f.epoch, f.zone);
    for (const auto& w : pr.warnings) std::cerr << "warning: " << w << '\n';
    std::vector<TweetEvent> history;
    double t_max = -1e300;
    for (const auto& e : pr.events) {
        t_max = std::max(t_max, e.time_s);
        if (e.time_s <= mf.model.t_b) history.push_back(e);
    }
    const Dataset ds = build_cascades(history, std::nullopt, mf.model.t_b);

    if (cfg.horizon_hours < 0)
        throw NumericError("predict: horizon ends before the model window");
    const double t_start = mf.model.t_b;
    const double t_end = t_start + cfg.horizon_hours * 3600.0;
    const HourlyForecast fc = forecast(mf.model, ds, cal, t_start, t_end,
                                       cfg.n_realizations, cfg.seed);

    const bool covered = t_max >= t_end - 1e-9 && t_end > t_start;
    std::vector<double> observed_times;
    for (const auto& e : pr.events)
        if (e.time_s >= t_start && e.time_s < t_end) observed_times.push_back(e.time_s);
    const std::vector<int> observed = bin_hourly(observed_times, t_start, t_end);

    std::ostringstream csv;
    csv << "hour_start,predicted_mean,observed";
    for (int r = 1; r <= cfg.n_realizations; ++r) csv << ",realization_" << r;
    csv << '\n';
    for (std::size_t h = 0; h < fc.hour_starts.size(); ++h) {
        csv << fmt(fc.hour_starts[h]) << ',' << fmt(fc.mean[h]) << ',';
        if (covered) csv << observed[h];
        for (const auto& real : fc.realizations) csv << ',' << real[h];
        csv << '\n';
    }
    emit(cfg, csv.str());

    if (!cfg.svg_path.empty()) {
        std::vector<double> obs;
        if (covered) obs.assign(observed.begin(), observed.end());
        write_file(cfg.svg_path, svg_forecast_chart(cal, fc.hour_starts, fc.mean, obs,
                                                    "predicted vs observed hourly counts"));
    }
    return 0;
}

int cmd_evaluate(const CliConfig& cfg) {
    const Frame f = frame_of(cfg);
    const CovariateCalendar cal = load_calendar(cfg, f);
    const Dataset ds = load_dataset(cfg, f);

    CvConfig cc;
    cc.train_days = cfg.train_days;
    cc.block_days = cfg.block_days;
    cc.eval_days = cfg.eval_days;
    cc.n_realizations = cfg.n_realizations;
    cc.mode = kernel_mode_from_string(cfg.kernel_mode);
    cc.background.gradient_tol = cfg.gradient_tol;
    cc.background.ridge = cfg.ridge;
    cc.influence.window_s = cfg.window_s;
    cc.influence.mode = cc.mode;
    cc.influence.contributors = phat_contributors_from_string(cfg.phat_contributors);
    cc.influence.seed = cfg.seed;
    cc.early_window_s = cfg.early_window_s;

    std::vector<ModelKind> kinds;
    std::istringstream ms(cfg.models);
    std::string item;
    while (std::getline(ms, item, ','))
        if (!trim(item).empty()) kinds.push_back(model_kind_from_string(trim(item)));
    if (kinds.empty()) throw IoError("evaluate: no model kinds requested");

    std::string csv;
    std::cout << "model  mae_mean  mae_sd  pearson_mean  pearson_sd  folds  failed"
                 "  pearson_undefined\n";
    for (ModelKind kind : kinds) {
        const CvResult res = run_cv(ds, cal, kind, cc, cfg.seed);
        const std::string fold_csv = cv_fold_csv(res);
        if (csv.empty())
            csv = fold_csv;
        else
            csv += fold_csv.substr(fold_csv.find('\n') + 1);
        std::cout << model_kind_name(kind) << "  " << fmt(res.mae_mean) << "  "
                  << fmt(res.mae_sd) << "  " << fmt(res.pearson_mean) << "  "
                  << fmt(res.pearson_sd) << "  " << res.folds.size() << "  "
                  << res.n_failed << "  " << res.n_pearson_undefined << '\n';
        for (const auto& fm : res.folds)
            if (fm.error)
                std::cerr << "warning: " << model_kind_name(kind) << " fold " << fm.fold
                          << " failed: " << *fm.error << '\n';
    }
    emit(cfg, csv);
    return 0;
}

int cmd_synth(const CliConfig& cfg) {
    const Frame f = frame_of(cfg);
    const SyntheticTruth truth = default_synthetic_truth();
    const CovariateCalendar cal =
        default_synthetic_calendar(f.epoch, f.zone, cfg.synth_days, cfg.seed);
    const Dataset ds =
        generate_synthetic(truth, cal, cfg.synth_days * 86400.0, cfg.seed);

    const std::filesystem::path dir = cfg.out_path.empty() ? "." : cfg.out_path;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());
    write_file((dir / "events.csv").string(),
               serialize_events_csv(flatten_events(ds), f.epoch, f.zone));
    write_file((dir / "calendar.csv").string(), serialize_calendar_csv(cal));

    std::ostringstream man;
    man << "seed = " << cfg.seed << '\n';
    man << "days = " << cfg.synth_days << '\n';
    man << "epoch = " << format_civil_datetime(f.epoch) << '\n';
    man << "timezone = " << f.zone.name() << '\n';
    man << "kernel_mode = " << kernel_mode_name(truth.mode) << '\n';
    for (int i = 0; i < kCovariateDim; ++i)
        man << "beta." << kCovariateNames[i] << " = " << fmt(truth.beta[i]) << '\n';
    man << "r0 = " << fmt(truth.r0) << '\n';
    man << "phi0 = " << fmt(truth.phi0) << '\n';
    man << "tau_m = " << fmt(truth.tau_m) << '\n';
    man << "excitation_scale = " << fmt(truth.excitation_scale) << '\n';
    auto pool_line = [&](const std::string& key, const auto& pool) {
        man << key << " = ";
        for (std::size_t i = 0; i < pool.size(); ++i)
            man << (i ? "," : "") << pool[i];
        man << '\n';
    };
    pool_line("p0_pool", truth.p0_pool);
    pool_line("follower_pool", truth.follower_pool);
    pool_line("pos_pool", truth.pos_pool);
    write_file((dir / "truth.txt").string(), man.str());
    std::cout << "synthetic dataset: " << ds.cascades.size() << " cascades, "
              << ds.total_events() << " events -> " << dir.string() << '\n';
    return 0;
}

int cmd_simulate(const CliConfig& cfg) {
    if (cfg.model_in.empty()) throw IoError("no model file given (--model-in)");
    const ModelFile mf = ModelFile::deserialize(read_file(cfg.model_in));
    CliConfig eff = cfg;
    eff.epoch = format_civil_datetime(mf.epoch);
    eff.timezone = mf.zone.name();
    const Frame f{mf.epoch, mf.zone};
    const CovariateCalendar cal = load_calendar(eff, f);

    const double t_start = mf.model.t_b;
    const double t_end = t_start + cfg.horizon_hours * 3600.0;
    const std::vector<SampledOriginal> sampled =
        sample_originals(mf.model, cal, t_start, t_end, cfg.seed);
    std::ostringstream csv;
    csv << "time_s,pos,p0,followers\n";
    for (const auto& o : sampled)
        csv << fmt(o.t0) << ',' << o.pos << ',' << fmt(o.p0) << ',' << o.followers << '\n';
    emit(cfg, csv.str());
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CliConfig cfg;
    try {
        // The config file applies before flag overrides, so find it first.
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size())
                load_config_file(cfg, args[i + 1]);
            else if (args[i].rfind("--config=", 0) == 0)
                load_config_file(cfg, args[i].substr(9));
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    CLI::App app{"covariate-modulated Hawkes forecaster for hourly post volumes"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--events", cfg.events_path, "events CSV");
    app.add_option("--calendar", cfg.calendar_path, "calendar CSV");
    app.add_option("--model-in", cfg.model_in, "model file to read");
    app.add_option("--model-out", cfg.model_out, "model file to write");
    app.add_option("--out", cfg.out_path, "output CSV path (synth: output directory)");
    app.add_option("--svg", cfg.svg_path, "optional SVG chart path");
    app.add_option("--epoch", cfg.epoch, "model time origin, local civil datetime");
    app.add_option("--timezone", cfg.timezone, "fixed-offset zone, e.g. UTC-05:00");
    app.add_option("--kernel-mode", cfg.kernel_mode, "paper|continuous");
    app.add_option("--future-integral", cfg.future_integral, "causal|paper");
    app.add_option("--phat-contributors", cfg.phat_contributors, "history|window");
    app.add_option("--model", cfg.models, "comma list: hawkes,nhpp,regression");
    app.add_option("--window-s", cfg.window_s, "influence estimation window (s)");
    app.add_option("--ridge", cfg.ridge, "ridge strength for background fits");
    app.add_option("--gradient-tol", cfg.gradient_tol, "optimizer gradient tolerance");
    app.add_option("--early-window-s", cfg.early_window_s, "regression early-count window");
    app.add_option("--horizon-hours", cfg.horizon_hours, "forecast horizon in hours");
    app.add_option("--n-realizations", cfg.n_realizations, "forecast realizations");
    app.add_option("--train-days", cfg.train_days, "CV training window");
    app.add_option("--block-days", cfg.block_days, "CV advance block");
    app.add_option("--eval-days", cfg.eval_days, "CV test window");
    app.add_option("--synth-days", cfg.synth_days, "synthetic horizon in days");
    app.add_option("--seed", cfg.seed, "root RNG seed");

    auto* fit = app.add_subcommand("fit", "fit background + influence, write a model file");
    auto* predict = app.add_subcommand("predict", "hourly forecast from a fitted model");
    auto* evaluate = app.add_subcommand("evaluate", "rolling-origin cross-validation");
    auto* synth = app.add_subcommand("synth", "emit a synthetic dataset + truth manifest");
    auto* simulate = app.add_subcommand("simulate", "raw background thinning utility");
    for (auto* sub : {fit, predict, evaluate, synth, simulate}) sub->fallthrough();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::cout << cfg.echo();
    try {
        if (fit->parsed()) return cmd_fit(cfg);
        if (predict->parsed()) return cmd_predict(cfg);
        if (evaluate->parsed()) return cmd_evaluate(cfg);
        if (synth->parsed()) return cmd_synth(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        std::cerr << "error: no subcommand given\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace poshawk
