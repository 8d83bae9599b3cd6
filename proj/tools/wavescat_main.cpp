#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavescat/errors.hpp"
#include "wavescat/runner.hpp"

namespace {

using wavescat::ExperimentConfig;

void emit_diagnostics(const std::string& command, const std::string& kind,
                      const std::string& message, int exit_code,
                      const std::string& out_hint) {
    nlohmann::json diag{
        {"command", command},
        {"error", kind},
        {"message", message},
        {"exit_code", exit_code},
    };
    std::cerr << diag.dump(2) << "\n";
    if (!out_hint.empty()) {
        std::ofstream f(out_hint + ".diag.json");
        if (f) f << diag.dump(2) << "\n";
    }
}

struct CommonArgs {
    std::string config_path;
    std::string out;
    int threads = -1;
    long long seed = -1;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool out_required) {
    cmd->add_option("--config", args.config_path, "experiment config file")->required();
    auto* out = cmd->add_option("--out", args.out, "output path");
    if (out_required) out->required();
    cmd->add_option("--threads", args.threads, "worker thread count (0 = auto)");
    cmd->add_option("--seed", args.seed, "random seed override");
    cmd->add_flag("--verbose", args.verbose, "verbose progress output");
}

ExperimentConfig load(const CommonArgs& args) {
    ExperimentConfig cfg = wavescat::load_config(args.config_path);
    if (args.threads >= 0) cfg.threads = args.threads;
    if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavescat: per-frequency scattering for weakly damped abstract "
                 "wave equations"};
    app.require_subcommand(1);

    CommonArgs sim_args, cls_args, wop_args, res_args, two_args, ver_args;
    bool dump_modes = false;
    bool with_minus = false;
    std::string waveop_path;
    std::string suite = "all";

    auto* sim = app.add_subcommand("simulate", "trajectories and energies");
    add_common(sim, sim_args, true);
    sim->add_flag("--dump-modes", dump_modes, "emit per-mode state columns");

    auto* cls = app.add_subcommand("classify", "validate the declared regime");
    add_common(cls, cls_args, false);

    auto* wop = app.add_subcommand("wave-op", "per-mode modified wave operators");
    add_common(wop, wop_args, true);
    wop->add_flag("--with-minus", with_minus, "also build W- (writes *_minus.csv)");

    auto* res = app.add_subcommand("scatter-residual",
                                   "asymptotic-equivalence residual sweep");
    add_common(res, res_args, true);
    res->add_option("--waveop", waveop_path, "wave-operator table csv")->required();

    auto* two = app.add_subcommand("two-sided", "lambda(t) * energy product sweep");
    add_common(two, two_args, true);

    auto* ver = app.add_subcommand("verify", "run the verification suites");
    add_common(ver, ver_args, false);
    ver->add_option("suite", suite,
                    "zone-bounds | hyperbolic-rep | detn1 | q1-tail | "
                    "energy-estimate | all");

    CLI11_PARSE(app, argc, argv);

    std::string command = "?", out_hint;
    try {
        if (sim->parsed()) {
            command = "simulate";
            out_hint = sim_args.out;
            ExperimentConfig cfg = load(sim_args);
            cfg.dump_modes = cfg.dump_modes || dump_modes;
            return wavescat::run_simulate(cfg, sim_args.out);
        }
        if (cls->parsed()) {
            command = "classify";
            out_hint = cls_args.out;
            return wavescat::run_classify(load(cls_args), cls_args.out);
        }
        if (wop->parsed()) {
            command = "wave-op";
            out_hint = wop_args.out;
            return wavescat::run_wave_op(load(wop_args), wop_args.out, with_minus);
        }
        if (res->parsed()) {
            command = "scatter-residual";
            out_hint = res_args.out;
            return wavescat::run_scatter_residual(load(res_args), waveop_path,
                                                  res_args.out);
        }
        if (two->parsed()) {
            command = "two-sided";
            out_hint = two_args.out;
            return wavescat::run_two_sided(load(two_args), two_args.out);
        }
        if (ver->parsed()) {
            command = "verify";
            out_hint = ver_args.out;
            return wavescat::run_verify(load(ver_args), ver_args.out, suite,
                                        ver_args.verbose);
        }
    } catch (const wavescat::ConfigError& e) {
        emit_diagnostics(command, "config", e.what(), wavescat::kExitConfigError, "");
        return wavescat::kExitConfigError;
    } catch (const wavescat::ValidationError& e) {
        emit_diagnostics(command, "validation", e.what(),
                         wavescat::kExitCheckFailure, out_hint);
        return wavescat::kExitCheckFailure;
    } catch (const wavescat::InconsistencyError& e) {
        emit_diagnostics(command, "inconsistency", e.what(),
                         wavescat::kExitNumericalFailure, out_hint);
        return wavescat::kExitNumericalFailure;
    } catch (const wavescat::NumericalError& e) {
        emit_diagnostics(command, "numerical", e.what(),
                         wavescat::kExitNumericalFailure, out_hint);
        return wavescat::kExitNumericalFailure;
    } catch (const wavescat::Error& e) {
        emit_diagnostics(command, "argument", e.what(), wavescat::kExitConfigError,
                         out_hint);
        return wavescat::kExitConfigError;
    } catch (const std::exception& e) {
        emit_diagnostics(command, "internal", e.what(),
                         wavescat::kExitNumericalFailure, out_hint);
        return wavescat::kExitNumericalFailure;
    }
    return wavescat::kExitConfigError;
}
