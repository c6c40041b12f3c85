#include "threshold_lab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "threshold_lab/resonance.hpp"

namespace tlab {

using nlohmann::json;
namespace fs = std::filesystem;

void LambdaGrid::validate() const {
    if (!(lambda_min > 0.0) || !(lambda_max > 0.0) || !(lambda_min < lambda_max))
        throw ConfigError("lambda_grid requires 0 < lambda_min < lambda_max");
    if (points < 3)
        throw ConfigError("lambda_grid requires at least 3 points");
}

std::vector<double> LambdaGrid::values() const {
    validate();
    std::vector<double> grid;
    grid.resize(std::size_t(points));
    const double ratio = lambda_min / lambda_max;
    for (int i = 0; i < points; ++i)
        grid[std::size_t(i)] = lambda_max * std::pow(ratio, double(i) / double(points - 1));
    return grid;
}

double Experiment::tol(const std::string& name, double fallback) const {
    auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
}

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open file: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// accepts either a path (string) or an inline JSON object
std::string resolve_json_text(const json& node, const fs::path& base) {
    if (node.is_string())
        return slurp(base / fs::path(node.get<std::string>()));
    return node.dump();
}

int max_threads() {
    if (const char* env = std::getenv("THRESHOLD_LAB_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

template <typename Fn>
void parallel_rows(std::size_t n, Fn&& fn) {
    const int threads = std::min<int>(max_threads(), int(n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

json row_to_json(const SweepRow& r) {
    json j{{"lambda", r.lambda},       {"alpha", r.alpha},
           {"e_measured", r.found ? json(r.e_measured) : json()},
           {"e_predicted", r.e_predicted},
           {"ratio", r.found ? json(r.ratio) : json()},
           {"omega", r.found ? json(r.omega) : json()},
           {"residual_ratio", r.residual_ratio},
           {"status", r.status}};
    if (r.quasimode_built) {
        j["certificate_gap"] = r.certificate_gap;
        j["certificate_bound"] = r.certificate_bound;
        j["certificate_ok"] = r.certificate_ok;
    }
    return j;
}

std::string format_double(double v) {
    if (std::isnan(v))
        return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Experiment Experiment::from_json_text(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid experiment JSON: ") + e.what());
    }
    const fs::path base(base_dir);
    Experiment e;
    try {
        e.u = potential_from_json(resolve_json_text(j.at("U_path"), base));
        e.v = potential_from_json(resolve_json_text(j.at("V_path"), base));
        e.scaling = scaling_from_json(resolve_json_text(j.at("scaling_path"), base));
        e.which = j.value("case", std::string("auto"));
        const json& g = j.at("lambda_grid");
        e.grid.lambda_max = g.at("lambda_max").get<double>();
        e.grid.lambda_min = g.at("lambda_min").get<double>();
        e.grid.points = g.value("points", 25);
        if (j.contains("tolerances"))
            for (const auto& [key, value] : j.at("tolerances").items())
                e.tolerances[key] = value.get<double>();
        if (j.contains("output")) {
            e.out_path = j.at("output").value("path", std::string());
            e.out_format = j.at("output").value("format", std::string("json"));
        }
        e.force = j.value("force", false);
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("invalid experiment config: ") + ex.what());
    }
    if (e.which != "auto" && e.which != "t1" && e.which != "t2" && e.which != "t3" &&
        e.which != "t4")
        throw ConfigError("case must be one of auto|t1|t2|t3|t4");
    if (e.out_format != "json" && e.out_format != "csv")
        throw ConfigError("output format must be json or csv");
    e.grid.validate();
    return e;
}

Experiment Experiment::load(const std::string& config_path) {
    const fs::path path(config_path);
    return from_json_text(slurp(path), path.parent_path().string());
}

ThresholdPrediction make_prediction(const Experiment& e, const HalfBoundState& h) {
    ThresholdPrediction p;
    if (e.which == "auto" || e.which == "t1")
        p = predict_order2(e.u, e.v, e.scaling, h);
    else if (e.which == "t2")
        p = predict_t2(e.u, e.v, e.scaling, h);
    else if (e.which == "t3")
        p = predict_t3(e.u, e.v, e.scaling, h);
    else if (e.which == "t4")
        p = predict_t4(e.u, e.v, e.scaling, h);
    else
        throw ConfigError("unknown case: " + e.which);
    if (!p.conditions_ok && !e.force) {
        std::string failed;
        for (const auto& c : p.conditions)
            if (!c.satisfied)
                failed += (failed.empty() ? "" : ", ") + c.name;
        throw ConditionsViolated("theorem conditions not satisfied: " + failed +
                                 " (use force to sweep anyway)");
    }
    return p;
}

namespace {

SweepReport run(const Experiment& e, bool with_quasimodes) {
    const ResonanceResult res = detect_resonance(e.u, e.tol("resonance", 1e-9));
    if (!res.resonant)
        throw Error("U has no zero-energy resonance (|h'(b)| = " +
                    std::to_string(res.mismatch) + "); the theorems do not apply");
    const HalfBoundState& h = *res.state;

    SweepReport report;
    report.prediction = make_prediction(e, h);
    report.which = case_name(report.prediction.which);
    report.k_predicted = report.prediction.k;

    const std::vector<double> lambdas = e.grid.values();
    report.rows.resize(lambdas.size());

    const ThresholdCase regime = report.prediction.which;
    const bool quasi = with_quasimodes &&
                       (regime == ThresholdCase::T2 || regime == ThresholdCase::T3 ||
                        regime == ThresholdCase::T4);

    parallel_rows(lambdas.size(), [&](std::size_t i) {
        SweepRow& row = report.rows[i];
        row.lambda = lambdas[i];
        row.e_measured = row.ratio = row.omega = row.residual_ratio =
            std::numeric_limits<double>::quiet_NaN();
        try {
            row.alpha = e.scaling.alpha_at(row.lambda);
            row.scale = report.prediction.rate_scale(row.lambda);
            row.e_predicted = report.prediction.predicted_e(row.lambda);

            const ScaledProblem problem{e.u, e.v, e.scaling, row.lambda};
            const PiecewisePotential q = problem.scaled_q();
            const auto e_meas = threshold_eigenvalue(q);
            if (!e_meas) {
                row.status = "no-bound-state";
            } else {
                row.found = true;
                row.e_measured = *e_meas;
                row.omega = std::sqrt(-row.e_measured);
                row.ratio = row.e_measured / row.e_predicted;
                const MismatchValue m = mismatch_scaled(q, row.omega);
                row.residual_ratio = std::abs(m.value) / std::max(m.scale, 1e-300);
                row.status = "ok";
            }

            if (quasi) {
                try {
                    Quasimode qm;
                    if (regime == ThresholdCase::T2)
                        qm = build_quasimode_t2(e.u, e.v, e.scaling,
                                                *report.prediction.eps, row.lambda, h);
                    else if (regime == ThresholdCase::T3)
                        qm = build_quasimode_t3(e.u, e.v, e.scaling, row.lambda, h);
                    else
                        qm = build_quasimode_t4(e.u, e.v, e.scaling, row.lambda, h);
                    row.quasimode_built = true;
                    row.residual_ratio = qm.accuracy_ratio;
                    if (row.found) {
                        row.certificate_gap = std::abs(row.e_measured + qm.omega * qm.omega);
                        row.certificate_bound = qm.residual / qm.norm;
                        row.certificate_ok = row.certificate_gap <= row.certificate_bound;
                    }
                } catch (const ConditionsViolated&) {
                    if (row.status == "ok")
                        row.status = "ok;no-quasimode";
                    else
                        row.status += ";no-quasimode";
                }
            }
        } catch (const Error& err) {
            row.status = std::string("error: ") + err.what();
        }
    });

    // fitted_k from the smallest successful lambda
    const SweepRow* smallest = nullptr;
    for (const auto& row : report.rows)
        if (row.found)
            smallest = &row;
    report.fitted_k = std::numeric_limits<double>::quiet_NaN();
    report.relative_error = std::numeric_limits<double>::quiet_NaN();
    if (smallest) {
        report.fitted_k = smallest->omega / smallest->scale;
        if (report.k_predicted != 0.0)
            report.relative_error = std::abs(report.fitted_k - std::abs(report.k_predicted)) /
                                    std::abs(report.k_predicted);
    }

    try {
        auto [exponent, constant] = fit_rate(report.rows);
        report.fit_exponent = exponent;
        report.fit_constant = constant;
    } catch (const InsufficientData&) {
    }

    // verdict: relative error at the smallest lambda, plus |ratio - 1|
    // non-increasing over the last three successful grid points
    const double k_tol = e.tol("k_rel", 0.1);
    report.pass = true;
    if (!smallest) {
        report.pass = false;
        report.failure_reason = "no-bound-state";
    } else if (!(report.relative_error <= k_tol)) {
        report.pass = false;
        report.failure_reason = "rate-constant-mismatch";
    } else {
        std::vector<const SweepRow*> ok;
        for (const auto& row : report.rows)
            if (row.found)
                ok.push_back(&row);
        if (ok.size() < 3) {
            report.pass = false;
            report.failure_reason = "fewer-than-3-successful-rows";
        } else {
            for (std::size_t i = ok.size() - 2; i < ok.size(); ++i) {
                const double prev = std::abs(ok[i - 1]->ratio - 1.0);
                const double curr = std::abs(ok[i]->ratio - 1.0);
                if (curr > prev * (1.0 + 1e-9)) {
                    report.pass = false;
                    report.failure_reason = "ratio-not-trending-to-1";
                    break;
                }
            }
        }
    }

    if (quasi && report.pass) {
        std::vector<const SweepRow*> built;
        for (const auto& row : report.rows)
            if (row.quasimode_built && row.found)
                built.push_back(&row);
        for (const auto* row : built)
            if (!row->certificate_ok) {
                report.pass = false;
                report.failure_reason = "quasimode-certificate-violated";
                break;
            }
        if (report.pass && built.size() >= 3) {
            for (std::size_t i = built.size() - 2; i < built.size(); ++i)
                if (built[i]->residual_ratio > built[i - 1]->residual_ratio * (1.0 + 1e-9)) {
                    report.pass = false;
                    report.failure_reason = "accuracy-ratio-not-decreasing";
                    break;
                }
        } else if (report.pass && built.empty()) {
            report.pass = false;
            report.failure_reason = "no-quasimode-built";
        }
    }
    return report;
}

} // namespace

SweepReport sweep(const Experiment& e) { return run(e, false); }

SweepReport verify(const Experiment& e) { return run(e, true); }

std::pair<double, double> fit_rate(const std::vector<SweepRow>& rows) {
    std::vector<std::pair<double, double>> pts; // (log scale, log |e|)
    for (const auto& row : rows)
        if (row.found && row.e_measured < 0.0 && row.scale > 0.0)
            pts.emplace_back(std::log(row.scale), std::log(-row.e_measured));
    if (pts.size() < 3)
        throw InsufficientData("fit_rate needs at least 3 successful rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = double(pts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    return {slope, std::exp(intercept)};
}

std::string SweepReport::to_json() const {
    json conditions = json::array();
    for (const auto& c : prediction.conditions)
        conditions.push_back({{"name", c.name},
                              {"value", std::isnan(c.value) ? json() : json(c.value)},
                              {"satisfied", c.satisfied}});
    json rows_json = json::array();
    for (const auto& row : rows)
        rows_json.push_back(row_to_json(row));
    json j{{"case", which},
           {"k_predicted", k_predicted},
           {"theta", prediction.theta},
           {"rate", prediction.rate},
           {"conditions", conditions},
           {"conditions_ok", prediction.conditions_ok},
           {"fitted_k", std::isnan(fitted_k) ? json() : json(fitted_k)},
           {"relative_error", std::isnan(relative_error) ? json() : json(relative_error)},
           {"verdict", pass ? "pass" : "fail"},
           {"rows", rows_json}};
    if (!failure_reason.empty())
        j["failure_reason"] = failure_reason;
    if (fit_exponent) {
        j["fit"] = {{"exponent", *fit_exponent}, {"constant", *fit_constant}};
    }
    return j.dump(2);
}

std::string SweepReport::to_csv() const {
    std::ostringstream out;
    out << "lambda,alpha,e_measured,e_predicted,ratio,omega,residual_ratio,status\n";
    for (const auto& row : rows) {
        out << format_double(row.lambda) << ',' << format_double(row.alpha) << ','
            << format_double(row.e_measured) << ',' << format_double(row.e_predicted) << ','
            << format_double(row.ratio) << ',' << format_double(row.omega) << ','
            << format_double(row.residual_ratio) << ',' << row.status << '\n';
    }
    return out.str();
}

} // namespace tlab
