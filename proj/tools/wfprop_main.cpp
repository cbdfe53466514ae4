#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "wfprop/harness.hpp"

namespace {

using namespace wfprop;

void print_run(const RunResult& r) {
    const LedgerSummary& led = r.ledger;
    std::printf("method=%s steps=%lld/%lld status=%s\n", method_name(r.config.method).c_str(),
                r.steps_completed, r.config.planned_steps(), r.aborted ? "error" : "ok");
    if (r.aborted) std::printf("abort: %s\n", r.abort_message.c_str());
    std::printf(
        "matvecs: counter=%lld ledger=%lld reconciled=%s (first=%lld per_step=%lld "
        "steps=%lld replacements=%lld fresh_drops=%lld aborted_step=%lld)\n",
        r.operator_matvecs, led.total(), r.reconciled ? "yes" : "no", led.first_step,
        led.per_step, led.steps_after_first, led.replacements, led.fresh_drops,
        led.aborted_step);
    std::printf("final_norm=%.17g\n", r.final_norm);
    if (r.errors.size() > 0)
        std::printf("final_error=%.17g at t=%.17g\n", std::abs(r.errors.v.back()),
                    r.errors.t.back());
    std::printf("wall_seconds=%.3f\n", r.wall_seconds);
    std::printf("outputs: %s\n", r.config.output_dir.c_str());
}

struct Overrides {
    std::string method, output;
    double dt = 0, t_final = 0, threshold = 0, cheb_dT = 0;
    int m = 0, n = 0, K = 0, mu = 0, cheb_terms = 0;
    bool auto_shrink = false;

    CLI::Option *o_method = nullptr, *o_output = nullptr, *o_dt = nullptr,
                *o_t_final = nullptr, *o_threshold = nullptr, *o_cheb_dT = nullptr,
                *o_m = nullptr, *o_n = nullptr, *o_K = nullptr, *o_mu = nullptr,
                *o_cheb_terms = nullptr, *o_auto_shrink = nullptr;

    void attach(CLI::App* sub) {
        o_method = sub->add_option("--method", method, "original | extended | chebyshev");
        o_dt = sub->add_option("--dt", dt, "time step");
        o_t_final = sub->add_option("--t-final", t_final, "propagation horizon");
        o_m = sub->add_option("--m", m, "fresh powers per step");
        o_n = sub->add_option("--n", n, "total subspace dimension");
        o_K = sub->add_option("--K", K, "maximum recycled age in steps");
        o_mu = sub->add_option("--mu", mu, "Krylov budget of the original stepper");
        o_threshold = sub->add_option("--threshold", threshold, "dependence threshold");
        o_auto_shrink = sub->add_flag("--auto-shrink", auto_shrink,
                                      "drop dependent recycled states instead of replacing");
        o_cheb_terms = sub->add_option("--cheb-terms", cheb_terms, "expansion terms");
        o_cheb_dT = sub->add_option("--cheb-dT", cheb_dT, "expansion block length");
        o_output = sub->add_option("--output", output, "output directory");
    }

    void apply(RunConfig& cfg) const {
        if (*o_method) cfg.method = method_from_name(method);
        if (*o_dt) cfg.dt = dt;
        if (*o_t_final) cfg.t_final = t_final;
        if (*o_m) cfg.m = m;
        if (*o_n) cfg.n = n;
        if (*o_K) cfg.K = K;
        if (*o_mu) cfg.mu = mu;
        if (*o_threshold) cfg.threshold = threshold;
        if (*o_auto_shrink) cfg.auto_shrink = auto_shrink;
        if (*o_cheb_terms) cfg.cheb_terms = cheb_terms;
        if (*o_cheb_dT) cfg.cheb_dT = cheb_dT;
        if (*o_output) cfg.output_dir = output;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wave-function propagation workbench"};
    app.require_subcommand(1);

    std::string preset_name, config_path, config_a, config_b, out_dir, print_path;
    bool with_reference = false, print_config = false;
    unsigned long long seed = 0;
    int repeat = 1;
    std::string oracle_out = "oracle_report.json";

    CLI::App* prop = app.add_subcommand("propagate", "run one propagation");
    prop->add_option("--preset", preset_name, "named parameter set");
    prop->add_option("--config", config_path, "JSON config file");
    prop->add_flag("--with-reference", with_reference,
                   "co-propagate the expansion reference and record checkpoint errors");
    prop->add_flag("--print-config", print_config, "print the effective config and exit");
    Overrides prop_ov;
    prop_ov.attach(prop);

    CLI::App* comp = app.add_subcommand("compare", "run a method pair against the reference");
    comp->add_option("--preset", preset_name, "named parameter set with a partner");
    comp->add_option("--config-a", config_a, "JSON config for run a");
    comp->add_option("--config-b", config_b, "JSON config for run b");
    comp->add_option("--output", out_dir, "output directory");

    CLI::App* orc = app.add_subcommand("oracle", "run the dense property batteries");
    orc->add_option("--seed", seed, "base seed");
    orc->add_option("--repeat", repeat, "number of consecutive seeds")->check(CLI::PositiveNumber);
    orc->add_option("--output", oracle_out, "report path (suffixed when repeating)");

    CLI::App* pre = app.add_subcommand("presets", "preset utilities");
    CLI::App* pre_list = pre->add_subcommand("list", "list available presets");
    pre->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (prop->parsed()) {
            RunConfig cfg;
            if (!preset_name.empty() && !config_path.empty())
                throw std::invalid_argument("use --preset or --config, not both");
            if (!preset_name.empty())
                cfg = preset_by_name(preset_name).primary;
            else if (!config_path.empty())
                cfg = load_config(config_path);
            prop_ov.apply(cfg);
            if (print_config) {
                std::fputs(config_to_json_text(cfg).c_str(), stdout);
                return 0;
            }
            cfg.validate();
            RunResult r;
            if (with_reference) {
                const ReferenceStates ref = compute_reference(cfg);
                std::printf("reference_matvecs=%lld\n", ref.matvecs);
                r = run_propagation(cfg, &ref);
            } else {
                r = run_propagation(cfg);
            }
            write_run_outputs(r);
            print_run(r);
            return r.aborted ? 3 : 0;
        }

        if (comp->parsed()) {
            RunConfig a, b;
            if (!preset_name.empty()) {
                const Preset& p = preset_by_name(preset_name);
                if (!p.partner)
                    throw std::invalid_argument("preset has no comparison partner");
                a = p.primary;
                b = *p.partner;
                if (out_dir.empty()) out_dir = "out/" + p.name;
            } else {
                if (config_a.empty() || config_b.empty())
                    throw std::invalid_argument("compare needs --preset or both configs");
                a = load_config(config_a);
                b = load_config(config_b);
                if (out_dir.empty()) out_dir = "out/compare";
            }
            ComparisonResult cr = run_comparison(a, b);
            write_comparison_outputs(out_dir, cr);
            std::printf("reference_matvecs=%lld\n", cr.reference_matvecs);
            std::printf("--- a ---\n");
            print_run(cr.a);
            std::printf("--- b ---\n");
            print_run(cr.b);
            if (!cr.ratio.empty())
                std::printf("final: err_a=%.6e err_b=%.6e ratio=%.6e\n", cr.err_a.back(),
                            cr.err_b.back(), cr.ratio.back());
            if (std::isfinite(cr.slope_a)) std::printf("slope_a=%.4f\n", cr.slope_a);
            if (std::isfinite(cr.slope_b)) std::printf("slope_b=%.4f\n", cr.slope_b);
            std::printf("outputs: %s\n", out_dir.c_str());
            return (cr.a.aborted || cr.b.aborted) ? 3 : 0;
        }

        if (orc->parsed()) {
            bool all_ok = true;
            for (int k = 0; k < repeat; ++k) {
                const unsigned long long s = seed + static_cast<unsigned long long>(k);
                OracleReport rep = run_oracle_suite(s);
                std::string path = oracle_out;
                if (repeat > 1) {
                    const auto dot = path.rfind('.');
                    const std::string suffix = "_s" + std::to_string(s);
                    if (dot == std::string::npos)
                        path += suffix;
                    else
                        path.insert(dot, suffix);
                }
                write_oracle_report(path, rep);
                for (const OracleEntry& e : rep.entries)
                    std::printf("[%s] %-36s value=%.6e bound=%.6e %s\n",
                                e.passed ? "pass" : "FAIL", e.name.c_str(), e.value, e.bound,
                                e.note.c_str());
                std::printf("seed=%llu all_passed=%s report=%s\n", s,
                            rep.all_passed() ? "yes" : "no", path.c_str());
                all_ok = all_ok && rep.all_passed();
            }
            return all_ok ? 0 : 1;
        }

        if (pre_list->parsed()) {
            for (const Preset& p : presets()) {
                const RunConfig& c = p.primary;
                std::printf("%-12s m=%d n=%-3d K=%d dt=%g t_final=%g partner_mu=%d\n",
                            p.name.c_str(), c.m, c.n, c.K, c.dt, c.t_final,
                            p.partner ? p.partner->mu : 0);
                std::printf("             %s\n", p.description.c_str());
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
