#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "threshold_lab/harness.hpp"
#include "threshold_lab/quasimode.hpp"
#include "threshold_lab/resonance.hpp"
#include "threshold_lab/spectrum.hpp"
#include "threshold_lab/threshold.hpp"

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw tlab::ConfigError("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

json prediction_to_json(const tlab::ThresholdPrediction& p) {
    json conditions = json::array();
    for (const auto& c : p.conditions)
        conditions.push_back({{"name", c.name},
                              {"value", std::isnan(c.value) ? json() : json(c.value)},
                              {"satisfied", c.satisfied}});
    return {{"case", tlab::case_name(p.which)},
            {"k", p.k},
            {"theta", p.theta},
            {"rate", p.rate},
            {"conditions", conditions},
            {"conditions_ok", p.conditions_ok}};
}

tlab::HalfBoundState require_resonance(const tlab::PiecewisePotential& u, double tol) {
    const auto res = tlab::detect_resonance(u, tol);
    if (!res.resonant)
        throw tlab::Error("U has no zero-energy resonance (|h'(b)| = " +
                          std::to_string(res.mismatch) + ")");
    return *res.state;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw tlab::ConfigError("cannot write output file: " + out_path);
    out << text << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"threshold-lab: coupling constant thresholds of 1D Schrodinger operators"};
    app.require_subcommand(1);

    // resonance
    std::string res_potential;
    double res_tol = 1e-9;
    auto* cmd_res = app.add_subcommand("resonance", "detect a zero-energy resonance of H0");
    cmd_res->add_option("--potential", res_potential, "potential JSON file")->required();
    cmd_res->add_option("--tol", res_tol, "resonance mismatch tolerance");

    // tune
    std::string tune_potential;
    double tune_lo = 0.0, tune_hi = 0.0, tune_tol = 1e-10;
    auto* cmd_tune = app.add_subcommand("tune", "tune gamma*U to a zero-energy resonance");
    cmd_tune->add_option("--potential", tune_potential, "potential JSON file")->required();
    cmd_tune->add_option("--lo", tune_lo, "bracket lower end")->required();
    cmd_tune->add_option("--hi", tune_hi, "bracket upper end")->required();
    cmd_tune->add_option("--tol", tune_tol, "bracket width tolerance");

    // spectrum
    std::string sp_u, sp_v, sp_scaling;
    double sp_lambda = 0.0;
    auto* cmd_sp = app.add_subcommand("spectrum", "negative eigenvalues of H_lambda");
    cmd_sp->add_option("--U", sp_u, "U potential JSON file")->required();
    cmd_sp->add_option("--V", sp_v, "V potential JSON file")->required();
    cmd_sp->add_option("--scaling", sp_scaling, "scaling family JSON file")->required();
    cmd_sp->add_option("--lambda", sp_lambda, "coupling parameter")->required();

    // predict
    std::string pr_u, pr_v, pr_scaling, pr_case = "auto";
    double pr_tol = 1e-9;
    auto* cmd_pr = app.add_subcommand("predict", "closed-form threshold constants");
    cmd_pr->add_option("--U", pr_u, "U potential JSON file")->required();
    cmd_pr->add_option("--V", pr_v, "V potential JSON file")->required();
    cmd_pr->add_option("--scaling", pr_scaling, "scaling family JSON file")->required();
    cmd_pr->add_option("--case", pr_case, "auto|t1|t2|t3|t4");
    cmd_pr->add_option("--tol", pr_tol, "resonance mismatch tolerance");

    // quasimode
    std::string qm_u, qm_v, qm_scaling, qm_case;
    double qm_lambda = 0.0, qm_tol = 1e-9;
    auto* cmd_qm = app.add_subcommand("quasimode", "build a quasimode and its residual");
    cmd_qm->add_option("--case", qm_case, "t2|t3|t4")->required();
    cmd_qm->add_option("--U", qm_u, "U potential JSON file")->required();
    cmd_qm->add_option("--V", qm_v, "V potential JSON file")->required();
    cmd_qm->add_option("--scaling", qm_scaling, "scaling family JSON file")->required();
    cmd_qm->add_option("--lambda", qm_lambda, "coupling parameter")->required();
    cmd_qm->add_option("--tol", qm_tol, "resonance mismatch tolerance");

    // sweep / verify
    std::string sw_config, sw_out;
    bool sw_force = false;
    std::optional<double> sw_tol;
    auto add_sweep_opts = [&](CLI::App* cmd) {
        cmd->add_option("--config", sw_config, "experiment config JSON")->required();
        cmd->add_option("--out", sw_out, "write the report here (suffix controls format)");
        cmd->add_flag("--force", sw_force, "sweep even when theorem conditions fail");
        cmd->add_option("--tol", [&sw_tol](const std::vector<std::string>& vals) {
            sw_tol = std::stod(vals.at(0));
            return true;
        }, "override the k_rel tolerance");
    };
    auto* cmd_sweep = app.add_subcommand("sweep", "measure e_lambda across a lambda grid");
    add_sweep_opts(cmd_sweep);
    auto* cmd_verify =
        app.add_subcommand("verify", "sweep plus quasimode certificates (t2/t3/t4)");
    add_sweep_opts(cmd_verify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_res->parsed()) {
            const auto u = tlab::potential_from_json(slurp(res_potential));
            const auto res = tlab::detect_resonance(u, res_tol);
            json j{{"resonant", res.resonant}, {"mismatch", res.mismatch}};
            if (res.resonant) {
                j["theta"] = res.state->theta();
                j["u0"] = res.state->u_at_0();
                j["du0"] = res.state->du_at_0();
            }
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (cmd_tune->parsed()) {
            const auto u = tlab::potential_from_json(slurp(tune_potential));
            const double gamma = tlab::tune_to_resonance(u, tune_lo, tune_hi, tune_tol);
            std::cout << json{{"gamma", gamma}}.dump(2) << '\n';
            return 0;
        }
        if (cmd_sp->parsed()) {
            tlab::ScaledProblem problem{tlab::potential_from_json(slurp(sp_u)),
                                        tlab::potential_from_json(slurp(sp_v)),
                                        tlab::scaling_from_json(slurp(sp_scaling)), sp_lambda};
            const auto result = tlab::find_negative_eigenvalues(problem.scaled_q());
            json j{{"lambda", sp_lambda},
                   {"alpha", problem.family.alpha_at(sp_lambda)},
                   {"eigenvalues", result.eigenvalues},
                   {"omegas", result.omegas},
                   {"residuals", result.residuals},
                   {"bracket_count", result.bracket_count}};
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (cmd_pr->parsed()) {
            const auto u = tlab::potential_from_json(slurp(pr_u));
            const auto v = tlab::potential_from_json(slurp(pr_v));
            const auto f = tlab::scaling_from_json(slurp(pr_scaling));
            const auto h = require_resonance(u, pr_tol);
            tlab::ThresholdPrediction p;
            if (pr_case == "auto" || pr_case == "t1")
                p = tlab::predict_order2(u, v, f, h);
            else if (pr_case == "t2")
                p = tlab::predict_t2(u, v, f, h);
            else if (pr_case == "t3")
                p = tlab::predict_t3(u, v, f, h);
            else if (pr_case == "t4")
                p = tlab::predict_t4(u, v, f, h);
            else
                throw tlab::ConfigError("unknown case: " + pr_case);
            std::cout << prediction_to_json(p).dump(2) << '\n';
            return 0;
        }
        if (cmd_qm->parsed()) {
            const auto u = tlab::potential_from_json(slurp(qm_u));
            const auto v = tlab::potential_from_json(slurp(qm_v));
            const auto f = tlab::scaling_from_json(slurp(qm_scaling));
            const auto h = require_resonance(u, qm_tol);
            tlab::Quasimode q;
            if (qm_case == "t2") {
                const auto eps = f.epsilon();
                if (!eps)
                    throw tlab::ConfigError(
                        "t2 requires a const+power scaling family (alpha + c*lambda^p)");
                q = tlab::build_quasimode_t2(u, v, f, *eps, qm_lambda, h);
            } else if (qm_case == "t3") {
                q = tlab::build_quasimode_t3(u, v, f, qm_lambda, h);
            } else if (qm_case == "t4") {
                q = tlab::build_quasimode_t4(u, v, f, qm_lambda, h);
            } else {
                throw tlab::ConfigError("quasimode case must be t2|t3|t4");
            }
            const auto& je = q.junction_errors;
            json j{{"case", qm_case},
                   {"lambda", q.lambda},
                   {"alpha", q.alpha_lambda},
                   {"omega", q.omega},
                   {"k_lambda", q.k_lambda},
                   {"a0", q.a0},
                   {"a1", q.a1},
                   {"norm", q.norm},
                   {"residual", q.residual},
                   {"accuracy_ratio", q.accuracy_ratio},
                   {"junction_errors",
                    {{"psi_left", je.psi_left},
                     {"dpsi_left", je.dpsi_left},
                     {"psi_right", je.psi_right},
                     {"dpsi_right", je.dpsi_right},
                     {"psi_glue_end", je.psi_glue},
                     {"dpsi_glue_end", je.dpsi_glue},
                     {"wprime_defect", je.wprime_defect}}}};
            if (q.regime == tlab::ThresholdCase::T2)
                j["eps_lambda"] = q.eps_lambda;
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (cmd_sweep->parsed() || cmd_verify->parsed()) {
            tlab::Experiment e = tlab::Experiment::load(sw_config);
            if (sw_force)
                e.force = true;
            if (sw_tol)
                e.tolerances["k_rel"] = *sw_tol;
            if (!sw_out.empty())
                e.out_path = sw_out;
            const tlab::SweepReport report =
                cmd_verify->parsed() ? tlab::verify(e) : tlab::sweep(e);
            const bool csv = (e.out_format == "csv") ||
                             (e.out_path.size() > 4 &&
                              e.out_path.substr(e.out_path.size() - 4) == ".csv");
            emit(csv ? report.to_csv() : report.to_json(), e.out_path);
            if (!e.out_path.empty())
                std::cerr << (report.pass ? "pass" : "fail: " + report.failure_reason) << '\n';
            return report.pass ? 0 : 1;
        }
    } catch (const tlab::ConfigError& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return 2;
    } catch (const tlab::Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    }
    return 0;
}
