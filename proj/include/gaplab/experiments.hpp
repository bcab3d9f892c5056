// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Experiment orchestration: a JSON-configured front door over the simulation
// and statistics layers.  Each experiment kind maps a configured grid to
// replicated simulations, reduces them with the statistical tests, and emits
// a report plus plot-ready CSV files.  Everything under the report's
// "statistics" key is a deterministic function of (config, master_seed);
// wall-clock time lives outside it.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <gaplab/gap_scan.hpp>
#include <gaplab/gap_stats.hpp>
#include <gaplab/limit_laws.hpp>
#include <gaplab/parallel.hpp>
#include <gaplab/process_gen.hpp>
#include <gaplab/rate_model.hpp>
#include <gaplab/stats.hpp>
#include <gaplab/weighted_max.hpp>

namespace gaplab {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds = {
        "gap-limit",        "point-process",   "weighted-max",
        "truncated-max",    "alpha0-invariance", "condition-check",
        "generator-equivalence", "lemma-rv-probe"};
    return kinds;
}

struct ExperimentConfig {
    std::string kind;
    bool alpha_zero = false;
    RateModel model;
    LogRateModel log_model;
    std::vector<double> grid;
    long long replications = 0;
    double z_max = 0.0;
    std::uint64_t master_seed = 1;
    std::string output_dir = ".";
    std::map<std::string, double> thresholds;
    std::vector<GapRect> rects;
    std::string weight_kind = "from_model";
    double weight_gamma = 1.0;
    std::vector<double> z_list;
    std::string probe_speed = "one_over_log";
    std::string probe_target = "inverse";
    std::string probe_x = "one_over_log";

    double threshold(const std::string& key, double fallback) const {
        auto it = thresholds.find(key);
        return it == thresholds.end() ? fallback : it->second;
    }
};

// centering constant used by the gap experiments: the homogeneous case
// centers at log(lambda1 t), the pure power law at its closed form, and
// every slowly varying correction at log Lambda(t) - log log t - log(1-alpha)
inline double gap_centering(const RateModel& m, double t) {
    if (m.alpha == 1.0) return std::log(m.lambda1 * t);
    if (m.sv_kind == SvKind::constant) return norm_const_power(m.alpha, m.lambda1, t);
    return norm_const_rv(m, t);
}

namespace detail {

inline void reject_unknown_fields(const nlohmann::json& j,
                                  const std::set<std::string>& allowed,
                                  const std::string& where) {
    if (!j.is_object()) throw config_error(where + " must be a JSON object");
    for (const auto& item : j.items())
        if (allowed.find(item.key()) == allowed.end())
            throw config_error("unknown field \"" + item.key() + "\" in " + where);
}

inline double require_number(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number()) throw config_error(where + " must be a number");
    return j.get<double>();
}

inline std::string require_string(const nlohmann::json& j, const std::string& where) {
    if (!j.is_string()) throw config_error(where + " must be a string");
    return j.get<std::string>();
}

inline std::vector<double> require_number_list(const nlohmann::json& j,
                                               const std::string& where) {
    if (!j.is_array() || j.empty())
        throw config_error(where + " must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : j) out.push_back(require_number(e, where + " entry"));
    return out;
}

inline SvKind parse_sv_kind(const std::string& name) {
    if (name == "constant") return SvKind::constant;
    if (name == "power_of_log") return SvKind::power_of_log;
    if (name == "log_log") return SvKind::log_log;
    if (name == "exp_log_log_squared") return SvKind::exp_log_log_squared;
    throw config_error("model.sv_kind must be one of constant, power_of_log, "
                       "log_log, exp_log_log_squared");
}

} // namespace detail

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
    detail::reject_unknown_fields(
        j,
        {"kind", "model", "grid", "replications", "z_max", "master_seed",
         "output_dir", "thresholds", "rects", "weight", "z_list", "probe_speed",
         "probe_target", "probe_x"},
        "config");

    ExperimentConfig cfg;
    if (!j.contains("kind")) throw config_error("config requires \"kind\"");
    cfg.kind = detail::require_string(j.at("kind"), "kind");
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
        throw config_error("unknown experiment kind \"" + cfg.kind + "\"");

    if (!j.contains("model")) throw config_error("config requires \"model\"");
    const auto& jm = j.at("model");
    detail::reject_unknown_fields(jm, {"alpha", "lambda1", "sv_kind", "sv_param"},
                                  "model");
    double alpha = jm.contains("alpha")
                       ? detail::require_number(jm.at("alpha"), "model.alpha")
                       : 0.5;
    double lambda1 = jm.contains("lambda1")
                         ? detail::require_number(jm.at("lambda1"), "model.lambda1")
                         : 1.0;
    if (!(lambda1 > 0.0)) throw config_error("model.lambda1 must be positive");
    if (alpha == 0.0) {
        if (cfg.kind != "alpha0-invariance")
            throw config_error("model.alpha = 0 is only valid for alpha0-invariance");
        cfg.alpha_zero = true;
        cfg.log_model.lambda1 = lambda1;
    } else {
        if (cfg.kind == "alpha0-invariance")
            throw config_error("alpha0-invariance requires model.alpha = 0");
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw config_error("model.alpha must be in (0,1] (or 0 for "
                               "alpha0-invariance)");
        SvKind kind = SvKind::constant;
        double sv_param = 0.0;
        if (jm.contains("sv_kind"))
            kind = detail::parse_sv_kind(
                detail::require_string(jm.at("sv_kind"), "model.sv_kind"));
        if (jm.contains("sv_param"))
            sv_param = detail::require_number(jm.at("sv_param"), "model.sv_param");
        cfg.model = make_rate_model(alpha, lambda1, kind, sv_param);
    }

    if (j.contains("grid")) {
        cfg.grid = detail::require_number_list(j.at("grid"), "grid");
        for (std::size_t i = 1; i < cfg.grid.size(); ++i)
            if (!(cfg.grid[i] > cfg.grid[i - 1]))
                throw config_error("grid must be strictly increasing");
    } else if (cfg.kind == "alpha0-invariance") {
        cfg.grid = {1.0, 10.0, 1000.0};
    } else {
        throw config_error("config requires \"grid\"");
    }

    const bool needs_reps = cfg.kind != "condition-check" && cfg.kind != "lemma-rv-probe";
    if (j.contains("replications")) {
        double r = detail::require_number(j.at("replications"), "replications");
        if (!(r >= 1.0 && r <= 1e9) || r != std::floor(r))
            throw config_error("replications must be an integer in [1, 1e9]");
        cfg.replications = static_cast<long long>(r);
    } else if (needs_reps) {
        throw config_error("config requires \"replications\"");
    }

    if (j.contains("z_max")) {
        cfg.z_max = detail::require_number(j.at("z_max"), "z_max");
        if (!(cfg.z_max >= 0.0)) throw config_error("z_max must be >= 0");
    }
    if (j.contains("master_seed")) {
        double s = detail::require_number(j.at("master_seed"), "master_seed");
        if (!(s >= 0.0 && s <= 1.8e19) || s != std::floor(s))
            throw config_error("master_seed must be a nonnegative integer");
        cfg.master_seed = static_cast<std::uint64_t>(s);
    }
    if (j.contains("output_dir"))
        cfg.output_dir = detail::require_string(j.at("output_dir"), "output_dir");

    if (j.contains("thresholds")) {
        const auto& jt = j.at("thresholds");
        detail::reject_unknown_fields(jt,
                                      {"final_ks_x", "final_ks_z", "final_ks_max",
                                       "final_ks_loc", "median_tol", "p_floor",
                                       "r_tol"},
                                      "thresholds");
        for (const auto& item : jt.items())
            cfg.thresholds[item.key()] =
                detail::require_number(item.value(), "thresholds." + item.key());
    }

    if (j.contains("rects")) {
        if (cfg.kind != "point-process")
            throw config_error("\"rects\" applies only to point-process");
        if (!j.at("rects").is_array() || j.at("rects").empty())
            throw config_error("rects must be a non-empty array");
        for (const auto& jr : j.at("rects")) {
            detail::reject_unknown_fields(jr, {"x", "z"}, "rects entry");
            GapRect r;
            if (jr.contains("x")) r.x = detail::require_number(jr.at("x"), "rects.x");
            if (jr.contains("z")) r.z = detail::require_number(jr.at("z"), "rects.z");
            if (!(r.z >= 0.0)) throw config_error("rects.z must be >= 0");
            cfg.rects.push_back(r);
        }
    }

    if (j.contains("weight")) {
        if (cfg.kind != "weighted-max" && cfg.kind != "truncated-max")
            throw config_error("\"weight\" applies only to weighted-max and "
                               "truncated-max");
        const auto& jw = j.at("weight");
        detail::reject_unknown_fields(jw, {"kind", "gamma"}, "weight");
        if (jw.contains("kind"))
            cfg.weight_kind = detail::require_string(jw.at("kind"), "weight.kind");
        if (cfg.weight_kind != "power" && cfg.weight_kind != "from_model")
            throw config_error("weight.kind must be power or from_model");
        if (jw.contains("gamma")) {
            cfg.weight_gamma = detail::require_number(jw.at("gamma"), "weight.gamma");
            if (!(cfg.weight_gamma > 0.0))
                throw config_error("weight.gamma must be positive");
        } else if (cfg.weight_kind == "power") {
            throw config_error("weight.kind = power requires weight.gamma");
        }
    }

    if (j.contains("z_list")) {
        if (cfg.kind != "truncated-max")
            throw config_error("\"z_list\" applies only to truncated-max");
        cfg.z_list = detail::require_number_list(j.at("z_list"), "z_list");
        for (double z : cfg.z_list)
            if (!(z >= 0.0)) throw config_error("z_list entries must be >= 0");
    } else if (cfg.kind == "truncated-max") {
        cfg.z_list = {0.0, 1.0};
    }

    if (j.contains("probe_speed")) {
        if (cfg.kind != "condition-check")
            throw config_error("\"probe_speed\" applies only to condition-check");
        cfg.probe_speed = detail::require_string(j.at("probe_speed"), "probe_speed");
        if (cfg.probe_speed != "one_over_log" && cfg.probe_speed != "one_over_log_sq")
            throw config_error("probe_speed must be one_over_log or one_over_log_sq");
    }
    if (j.contains("probe_target")) {
        if (cfg.kind != "lemma-rv-probe")
            throw config_error("\"probe_target\" applies only to lemma-rv-probe");
        cfg.probe_target = detail::require_string(j.at("probe_target"), "probe_target");
        if (cfg.probe_target != "inverse" && cfg.probe_target != "cumulative")
            throw config_error("probe_target must be inverse or cumulative");
    }
    if (j.contains("probe_x")) {
        if (cfg.kind != "lemma-rv-probe")
            throw config_error("\"probe_x\" applies only to lemma-rv-probe");
        cfg.probe_x = detail::require_string(j.at("probe_x"), "probe_x");
        if (cfg.probe_x != "one_over_log" && cfg.probe_x != "quarter_power")
            throw config_error("probe_x must be one_over_log or quarter_power");
    }

    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_experiment_config(j);
}

struct ExperimentResult {
    bool pass = false;
    nlohmann::json report;
};

namespace detail {

struct KindOutput {
    bool pass = true;
    nlohmann::json stats;
    std::vector<std::pair<std::string, std::string>> files;
};

inline std::string format_full(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline std::string ecdf_csv(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::ostringstream os;
    os.precision(17);
    os << "value,ecdf\n";
    double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        os << values[i] << ',' << (static_cast<double>(i) + 1.0) / n << '\n';
    return os.str();
}

inline double sample_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double ks_stat_against(const std::vector<double>& fold,
                              const std::function<double(double)>& cdf) {
    return ks_one_sample(fold, cdf).statistic;
}

inline nlohmann::json independence_json(const IndependenceResult& r) {
    nlohmann::json j;
    j["pass"] = r.pass;
    j["correlation"] = r.correlation;
    j["correlation_threshold"] = r.correlation_threshold;
    j["chi_square_p"] = r.chi_square_p;
    j["chi_square_level"] = r.chi_square_level;
    return j;
}

inline Weight config_weight(const ExperimentConfig& cfg) {
    if (cfg.weight_kind == "power") return Weight::pure_power(cfg.weight_gamma);
    if (!(cfg.model.alpha < 1.0))
        throw config_error("weight.kind = from_model requires model.alpha < 1");
    return Weight::from_model(cfg.model);
}

inline KindOutput run_gap_limit(const ExperimentConfig& cfg) {
    KindOutput out;
    const RateModel& m = cfg.model;
    const bool has_z = m.alpha < 1.0;
    const double z_rate = m.alpha * (1.0 - m.alpha);
    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    auto gumbel = [](double x) { return gumbel_cdf(x); };
    auto z_target = [z_rate](double z) { return exp_cdf(z_rate, z); };

    std::vector<SweepPoint> pts_x, pts_z;
    nlohmann::json points = nlohmann::json::array();
    std::vector<double> last_x, last_z;
    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
        const double t = cfg.grid[gi];
        GapScanConfig sc;
        sc.model = m;
        sc.t = t;
        sc.z_max = cfg.z_max;
        sc.b_t = gap_centering(m, t);
        sc.rate_at_t = eval_rate(m, t);
        std::vector<double> xs(reps), zs(reps);
        std::vector<double> zp(reps, std::numeric_limits<double>::quiet_NaN());
        std::vector<char> beyond(reps, 0);
        std::vector<std::string> rows(reps);
        parallel_for_reps(reps, [&](std::size_t rep) {
            auto r = scan_gaps(sc, {cfg.master_seed, gi * reps + rep});
            xs[rep] = r.summary.x_norm;
            zs[rep] = r.summary.z_norm;
            if (r.summary.z_plus_norm) zp[rep] = *r.summary.z_plus_norm;
            if (r.summary.sigma_plus && r.summary.L_plus &&
                *r.summary.sigma_plus - *r.summary.L_plus > t)
                beyond[rep] = 1;
            rows[rep] = gap_summary_csv_row(static_cast<long long>(rep), r.summary);
        });

        auto ks_x = ks_one_sample(xs, gumbel);
        double se_x = subsampled_se(
            xs, [&](const std::vector<double>& f) { return ks_stat_against(f, gumbel); });
        pts_x.push_back({t, ks_x.statistic, se_x});

        nlohmann::json p;
        p["t"] = t;
        p["b_t"] = sc.b_t;
        p["rate_at_t"] = sc.rate_at_t;
        p["ks_x"] = ks_x.statistic;
        p["p_x"] = ks_x.p_value;
        p["se_x"] = se_x;
        if (has_z) {
            auto ks_z = ks_one_sample(zs, z_target);
            double se_z = subsampled_se(zs, [&](const std::vector<double>& f) {
                return ks_stat_against(f, z_target);
            });
            pts_z.push_back({t, ks_z.statistic, se_z});
            p["ks_z"] = ks_z.statistic;
            p["p_z"] = ks_z.p_value;
            p["se_z"] = se_z;
        }
        if (cfg.z_max > 0.0 && has_z) {
            std::vector<double> zp_found;
            std::size_t n_beyond = 0;
            for (std::size_t rep = 0; rep < reps; ++rep) {
                if (!std::isnan(zp[rep])) zp_found.push_back(zp[rep]);
                if (beyond[rep]) ++n_beyond;
            }
            p["plus_found_fraction"] =
                static_cast<double>(zp_found.size()) / static_cast<double>(reps);
            p["plus_left_endpoint_beyond_t_fraction"] =
                static_cast<double>(n_beyond) / static_cast<double>(reps);
            if (zp_found.size() >= 10)
                p["ks_z_plus"] = ks_one_sample(zp_found, z_target).statistic;
        }
        points.push_back(p);

        std::string tag = std::to_string(gi);
        out.files.emplace_back("ecdf_x_" + tag + ".csv", ecdf_csv(xs));
        if (has_z) out.files.emplace_back("ecdf_z_" + tag + ".csv", ecdf_csv(zs));
        std::ostringstream gaps;
        gaps << gap_summary_csv_header() << '\n';
        for (const auto& row : rows) gaps << row << '\n';
        out.files.emplace_back("gaps_" + tag + ".csv", gaps.str());
        if (gi + 1 == cfg.grid.size()) {
            last_x = std::move(xs);
            last_z = std::move(zs);
        }
    }

    const bool multi = cfg.grid.size() >= 2;
    const double ceiling_x = cfg.threshold("final_ks_x", 0.1);
    bool trend_x = !multi || sweep_trend_ok(pts_x, TrendMode::non_increasing);
    bool final_x = pts_x.back().statistic < ceiling_x;
    out.stats["points"] = points;
    out.stats["trend_x_ok"] = trend_x;
    out.stats["final_ks_x"] = pts_x.back().statistic;
    out.stats["final_ks_x_ceiling"] = ceiling_x;
    out.pass = trend_x && final_x;
    if (has_z) {
        const double ceiling_z = cfg.threshold("final_ks_z", 0.1);
        bool trend_z = !multi || sweep_trend_ok(pts_z, TrendMode::non_increasing);
        bool final_z = pts_z.back().statistic < ceiling_z;
        out.stats["trend_z_ok"] = trend_z;
        out.stats["final_ks_z"] = pts_z.back().statistic;
        out.stats["final_ks_z_ceiling"] = ceiling_z;
        out.pass = out.pass && trend_z && final_z;
        if (last_x.size() >= 1000) {
            std::vector<std::pair<double, double>> pairs(last_x.size());
            for (std::size_t i = 0; i < last_x.size(); ++i)
                pairs[i] = {last_x[i], last_z[i]};
            auto indep = independence_check(pairs);
            out.stats["independence"] = independence_json(indep);
            out.pass = out.pass && indep.pass;
        }
    }
    return out;
}

inline KindOutput run_point_process(const ExperimentConfig& cfg) {
    KindOutput out;
    const RateModel& m = cfg.model;
    if (!(m.alpha < 1.0))
        throw config_error("point-process requires model.alpha < 1");
    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    const double t = cfg.grid.back();

    GapScanConfig sc;
    sc.model = m;
    sc.t = t;
    sc.z_max = cfg.z_max;
    sc.b_t = gap_centering(m, t);
    sc.rate_at_t = eval_rate(m, t);
    sc.rects = cfg.rects.empty()
                   ? std::vector<GapRect>{{0.0, 0.0}, {1.0, 1.0}}
                   : cfg.rects;

    std::vector<std::vector<long long>> counts(sc.rects.size(),
                                               std::vector<long long>(reps));
    parallel_for_reps(reps, [&](std::size_t rep) {
        auto r = scan_gaps(sc, {cfg.master_seed, rep});
        for (std::size_t k = 0; k < sc.rects.size(); ++k)
            counts[k][rep] = static_cast<long long>(r.rect_counts[k]);
    });

    nlohmann::json rect_stats = nlohmann::json::array();
    for (std::size_t k = 0; k < sc.rects.size(); ++k) {
        double target = mu_rect(m.alpha, sc.rects[k].x, sc.rects[k].z);
        auto pt = poisson_count_test(counts[k], target);
        nlohmann::json jr;
        jr["x"] = sc.rects[k].x;
        jr["z"] = sc.rects[k].z;
        jr["mean_target"] = target;
        jr["emp_mean"] = pt.emp_mean;
        jr["emp_dispersion"] = pt.emp_dispersion;
        jr["mean_se"] = pt.mean_se;
        jr["mean_ok"] = pt.mean_ok;
        jr["dispersion_ok"] = pt.dispersion_ok;
        jr["pass"] = pt.pass;
        rect_stats.push_back(jr);
        out.pass = out.pass && pt.pass;
    }
    out.stats["t"] = t;
    out.stats["rects"] = rect_stats;

    std::ostringstream csv;
    csv << "rep";
    for (std::size_t k = 0; k < sc.rects.size(); ++k) csv << ",rect" << k;
    csv << '\n';
    for (std::size_t rep = 0; rep < reps; ++rep) {
        csv << rep;
        for (std::size_t k = 0; k < sc.rects.size(); ++k) csv << ',' << counts[k][rep];
        csv << '\n';
    }
    out.files.emplace_back("rect_counts.csv", csv.str());
    return out;
}

inline KindOutput run_weighted_max(const ExperimentConfig& cfg) {
    KindOutput out;
    Weight w = config_weight(cfg);
    const double g = w.gamma();
    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    auto gumbel = [](double x) { return gumbel_cdf(x); };
    auto loc_target = [g](double z) { return exp_cdf(g, z); };

    std::vector<SweepPoint> pts_max, pts_loc;
    nlohmann::json points = nlohmann::json::array();
    std::vector<double> last_max, last_loc;
    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
        double n_real = cfg.grid[gi];
        if (!(n_real >= 100.0 && n_real == std::floor(n_real)))
            throw config_error("weighted-max grid entries must be integers >= 100");
        std::size_t n = static_cast<std::size_t>(n_real);
        std::vector<double> ms(reps), ls(reps);
        parallel_for_reps(reps, [&](std::size_t rep) {
            auto r = sample_weighted_max(n, w, {cfg.master_seed, gi * reps + rep});
            ms[rep] = r.x_norm;
            ls[rep] = r.z_norm;
        });

        auto ks_m = ks_one_sample(ms, gumbel);
        double se_m = subsampled_se(
            ms, [&](const std::vector<double>& f) { return ks_stat_against(f, gumbel); });
        auto ks_l = ks_one_sample(ls, loc_target);
        double se_l = subsampled_se(ls, [&](const std::vector<double>& f) {
            return ks_stat_against(f, loc_target);
        });
        pts_max.push_back({n_real, ks_m.statistic, se_m});
        pts_loc.push_back({n_real, ks_l.statistic, se_l});

        nlohmann::json p;
        p["n"] = n_real;
        p["ks_max"] = ks_m.statistic;
        p["p_max"] = ks_m.p_value;
        p["se_max"] = se_m;
        p["ks_loc"] = ks_l.statistic;
        p["p_loc"] = ks_l.p_value;
        p["se_loc"] = se_l;
        points.push_back(p);

        std::string tag = std::to_string(gi);
        out.files.emplace_back("ecdf_max_" + tag + ".csv", ecdf_csv(ms));
        out.files.emplace_back("ecdf_loc_" + tag + ".csv", ecdf_csv(ls));
        if (gi + 1 == cfg.grid.size()) {
            last_max = std::move(ms);
            last_loc = std::move(ls);
        }
    }

    const bool multi = cfg.grid.size() >= 2;
    const double ceiling_m = cfg.threshold("final_ks_max", 0.05);
    const double ceiling_l = cfg.threshold("final_ks_loc", 0.05);
    bool trend_m = !multi || sweep_trend_ok(pts_max, TrendMode::non_increasing);
    bool trend_l = !multi || sweep_trend_ok(pts_loc, TrendMode::non_increasing);
    out.stats["gamma"] = g;
    out.stats["points"] = points;
    out.stats["trend_max_ok"] = trend_m;
    out.stats["trend_loc_ok"] = trend_l;
    out.stats["final_ks_max"] = pts_max.back().statistic;
    out.stats["final_ks_loc"] = pts_loc.back().statistic;
    out.stats["final_ks_max_ceiling"] = ceiling_m;
    out.stats["final_ks_loc_ceiling"] = ceiling_l;
    out.pass = trend_m && trend_l && pts_max.back().statistic < ceiling_m &&
               pts_loc.back().statistic < ceiling_l;
    if (last_max.size() >= 1000) {
        std::vector<std::pair<double, double>> pairs(last_max.size());
        for (std::size_t i = 0; i < last_max.size(); ++i)
            pairs[i] = {last_max[i], last_loc[i]};
        auto indep = independence_check(pairs);
        out.stats["independence"] = independence_json(indep);
        out.pass = out.pass && indep.pass;
    }
    return out;
}

inline KindOutput run_truncated_max(const ExperimentConfig& cfg) {
    KindOutput out;
    Weight w = config_weight(cfg);
    const double g = w.gamma();
    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    const double median_tol = cfg.threshold("median_tol", 0.03);
    const double gumbel_median = -std::log(std::log(2.0));

    nlohmann::json points = nlohmann::json::array();
    bool final_ok = true;
    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
        double n_real = cfg.grid[gi];
        if (!(n_real >= 100.0 && n_real == std::floor(n_real)))
            throw config_error("truncated-max grid entries must be integers >= 100");
        WeightedScanConfig wc;
        wc.n = static_cast<std::size_t>(n_real);
        wc.z_list = cfg.z_list;
        std::vector<std::vector<double>> vals(cfg.z_list.size(),
                                              std::vector<double>(reps));
        parallel_for_reps(reps, [&](std::size_t rep) {
            auto r = scan_weighted(w, wc, {cfg.master_seed, gi * reps + rep});
            for (std::size_t k = 0; k < cfg.z_list.size(); ++k)
                vals[k][rep] = r.trunc_x_norm[k];
        });
        for (std::size_t k = 0; k < cfg.z_list.size(); ++k) {
            double med = sample_median(vals[k]);
            double target = gumbel_median - g * cfg.z_list[k];
            nlohmann::json p;
            p["n"] = n_real;
            p["z"] = cfg.z_list[k];
            p["median"] = med;
            p["median_target"] = target;
            p["abs_error"] = std::fabs(med - target);
            points.push_back(p);
            if (gi + 1 == cfg.grid.size() && !(std::fabs(med - target) <= median_tol))
                final_ok = false;
            out.files.emplace_back("ecdf_trunc_" + std::to_string(gi) + "_" +
                                       std::to_string(k) + ".csv",
                                   ecdf_csv(vals[k]));
        }
    }
    out.stats["gamma"] = g;
    out.stats["median_tol"] = median_tol;
    out.stats["points"] = points;
    out.pass = final_ok;
    return out;
}

inline KindOutput run_alpha0_invariance(const ExperimentConfig& cfg) {
    KindOutput out;
    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    const double p_floor = cfg.threshold("p_floor", 1e-3);

    std::vector<std::vector<double>> scaled_L(cfg.grid.size()),
        scaled_sigma(cfg.grid.size());
    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
        const double t = cfg.grid[gi];
        scaled_L[gi].resize(reps);
        scaled_sigma[gi].resize(reps);
        parallel_for_reps(reps, [&](std::size_t rep) {
            auto path = gen_log_process(cfg.log_model, t,
                                        {cfg.master_seed, gi * reps + rep});
            auto s = summarize_gaps(path, t, 0.0, 1.0);
            scaled_L[gi][rep] = s.L_t / t;
            scaled_sigma[gi][rep] = s.sigma_t / t;
        });
        std::ostringstream csv;
        csv << "rep,L_over_t,sigma_over_t\n";
        csv.precision(17);
        for (std::size_t rep = 0; rep < reps; ++rep)
            csv << rep << ',' << scaled_L[gi][rep] << ',' << scaled_sigma[gi][rep]
                << '\n';
        out.files.emplace_back("alpha0_arm" + std::to_string(gi) + ".csv", csv.str());
    }

    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        for (std::size_t jdx = i + 1; jdx < cfg.grid.size(); ++jdx) {
            auto ks_L = ks_two_sample(scaled_L[i], scaled_L[jdx]);
            auto ks_s = ks_two_sample(scaled_sigma[i], scaled_sigma[jdx]);
            nlohmann::json p;
            p["t_a"] = cfg.grid[i];
            p["t_b"] = cfg.grid[jdx];
            p["ks_L"] = ks_L.statistic;
            p["p_L"] = ks_L.p_value;
            p["ks_sigma"] = ks_s.statistic;
            p["p_sigma"] = ks_s.p_value;
            bool ok = ks_L.p_value > p_floor && ks_s.p_value > p_floor;
            p["pass"] = ok;
            pairs.push_back(p);
            out.pass = out.pass && ok;
        }
    }
    out.stats["p_floor"] = p_floor;
    out.stats["pairs"] = pairs;
    return out;
}

inline KindOutput run_condition_check(const ExperimentConfig& cfg) {
    KindOutput out;
    ProbeSpeed speed = cfg.probe_speed == "one_over_log_sq"
                           ? ProbeSpeed::one_over_log_sq
                           : ProbeSpeed::one_over_log;
    auto rep = check_condition_loc(cfg.model, cfg.grid, speed);
    out.pass = rep.verdict == ConditionVerdict::pass;
    out.stats["verdict"] = to_string(rep.verdict);
    out.stats["probe_speed"] = cfg.probe_speed;
    out.stats["diagnostic_first"] = rep.diagnostic_first;
    out.stats["diagnostic_last"] = rep.diagnostic_last;
    out.stats["probe_first"] = rep.probe_first;
    out.stats["probe_last"] = rep.probe_last;
    out.stats["decay_factor"] = rep.decay_factor;
    out.stats["endpoint_ratio"] = rep.endpoint_ratio;
    nlohmann::json points = nlohmann::json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "log_t,diagnostic,probe\n";
    for (const auto& p : rep.points) {
        nlohmann::json jp;
        jp["log_t"] = p.log_t;
        jp["diagnostic"] = p.diagnostic;
        jp["probe"] = p.probe;
        points.push_back(jp);
        csv << p.log_t << ',' << p.diagnostic << ',' << p.probe << '\n';
    }
    out.stats["points"] = points;
    out.files.emplace_back("condition_points.csv", csv.str());
    return out;
}

inline KindOutput run_generator_equivalence(const ExperimentConfig& cfg) {
    KindOutput out;
    const RateModel& m = cfg.model;
    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    const double t = cfg.grid.back();
    const double b = gap_centering(m, t);
    const double rate = eval_rate(m, t);
    const double p_floor = cfg.threshold("p_floor", 1e-3);

    std::vector<double> L_a(reps), L_b(reps);
    std::vector<long long> n_a(reps), n_b(reps);
    parallel_for_reps(reps, [&](std::size_t rep) {
        auto path = gen_time_change(m, t, 0.0, {cfg.master_seed, rep});
        L_a[rep] = summarize_gaps(path, t, b, rate).L_t;
        n_a[rep] = static_cast<long long>(path.epochs.size());
    });
    parallel_for_reps(reps, [&](std::size_t rep) {
        auto path = gen_thinning(m, t, 0.0, {cfg.master_seed, reps + rep});
        L_b[rep] = summarize_gaps(path, t, b, rate).L_t;
        n_b[rep] = static_cast<long long>(path.epochs.size());
    });

    auto ks = ks_two_sample(L_a, L_b);
    auto hom = chi_square_homogeneity(n_a, n_b);
    out.stats["t"] = t;
    out.stats["ks_L"] = ks.statistic;
    out.stats["p_L"] = ks.p_value;
    out.stats["counts_chi_square"] = hom.statistic;
    out.stats["counts_p"] = hom.p_value;
    out.stats["counts_bins"] = hom.bins;
    out.stats["p_floor"] = p_floor;
    out.pass = ks.p_value > p_floor && hom.p_value > p_floor;

    std::ostringstream csv;
    csv.precision(17);
    csv << "rep,L_time_change,L_thinning,count_time_change,count_thinning\n";
    for (std::size_t rep = 0; rep < reps; ++rep)
        csv << rep << ',' << L_a[rep] << ',' << L_b[rep] << ',' << n_a[rep] << ','
            << n_b[rep] << '\n';
    out.files.emplace_back("generator_equivalence.csv", csv.str());
    return out;
}

inline KindOutput run_lemma_rv_probe(const ExperimentConfig& cfg) {
    KindOutput out;
    ProbeTarget target = cfg.probe_target == "cumulative" ? ProbeTarget::cum
                                                          : ProbeTarget::inverse_cum;
    ProbeX xk = cfg.probe_x == "quarter_power" ? ProbeX::quarter_power
                                               : ProbeX::one_over_log;
    auto pts = check_lemma_rv(cfg.model, cfg.grid, target, xk);
    const double r_tol = cfg.threshold("r_tol", 1e-2);
    nlohmann::json points = nlohmann::json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "log_t,x,r\n";
    for (const auto& p : pts) {
        nlohmann::json jp;
        jp["log_t"] = p.log_t;
        jp["x"] = p.x;
        jp["r"] = p.r;
        points.push_back(jp);
        csv << p.log_t << ',' << p.x << ',' << p.r << '\n';
    }
    double r_last = pts.back().r;
    out.stats["points"] = points;
    out.stats["r_last"] = r_last;
    out.stats["r_tol"] = r_tol;
    out.stats["probe_target"] = cfg.probe_target;
    out.stats["probe_x"] = cfg.probe_x;
    out.pass = std::fabs(r_last - 1.0) <= r_tol;
    out.files.emplace_back("rv_probe.csv", csv.str());
    return out;
}

inline nlohmann::json config_echo(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["kind"] = cfg.kind;
    nlohmann::json jm;
    if (cfg.alpha_zero) {
        jm["alpha"] = 0.0;
        jm["lambda1"] = cfg.log_model.lambda1;
    } else {
        jm["alpha"] = cfg.model.alpha;
        jm["lambda1"] = cfg.model.lambda1;
        jm["sv_kind"] = to_string(cfg.model.sv_kind);
        jm["sv_param"] = cfg.model.sv_param;
    }
    j["model"] = jm;
    j["grid"] = cfg.grid;
    j["replications"] = cfg.replications;
    j["z_max"] = cfg.z_max;
    j["master_seed"] = cfg.master_seed;
    if (!cfg.thresholds.empty()) j["thresholds"] = cfg.thresholds;
    return j;
}

} // namespace detail

// Runs the configured experiment, writes report.json and the CSV artifacts
// into output_dir, and returns the verdict plus the report.  Everything
// under report["statistics"] is deterministic given (config, master_seed).
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    detail::KindOutput k;
    if (cfg.kind == "gap-limit")
        k = detail::run_gap_limit(cfg);
    else if (cfg.kind == "point-process")
        k = detail::run_point_process(cfg);
    else if (cfg.kind == "weighted-max")
        k = detail::run_weighted_max(cfg);
    else if (cfg.kind == "truncated-max")
        k = detail::run_truncated_max(cfg);
    else if (cfg.kind == "alpha0-invariance")
        k = detail::run_alpha0_invariance(cfg);
    else if (cfg.kind == "condition-check")
        k = detail::run_condition_check(cfg);
    else if (cfg.kind == "generator-equivalence")
        k = detail::run_generator_equivalence(cfg);
    else if (cfg.kind == "lemma-rv-probe")
        k = detail::run_lemma_rv_probe(cfg);
    else
        throw config_error("unknown experiment kind \"" + cfg.kind + "\"");
    auto t1 = std::chrono::steady_clock::now();

    ExperimentResult result;
    result.pass = k.pass;
    result.report["experiment"] = cfg.kind;
    result.report["config"] = detail::config_echo(cfg);
    result.report["verdict"] = k.pass ? "PASS" : "FAIL";
    result.report["statistics"] = k.stats;
    result.report["wall_clock_seconds"] =
        std::chrono::duration<double>(t1 - t0).count();

    namespace fs = std::filesystem;
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    auto write_file = [&](const fs::path& name, const std::string& content) {
        std::ofstream os(dir / name, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
        os << content;
    };
    write_file("report.json", result.report.dump(2) + "\n");
    for (const auto& [name, content] : k.files) write_file(name, content);
    return result;
}

} // namespace gaplab
