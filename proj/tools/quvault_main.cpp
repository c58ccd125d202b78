// Command line front end: capacity sweeps, the image vault protocol,
// simulated tomography with bootstrap error bars, and CP-divisibility scans.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qv/capacities.hpp"
#include "qv/channels.hpp"
#include "qv/io_util.hpp"
#include "qv/kernels.hpp"
#include "qv/states.hpp"
#include "qv/tomography.hpp"
#include "qv/vault.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::uint64_t seed = 12345;
    std::string scenario = "uniform";
    std::string out_dir = "run";
    std::vector<double> weights;  // custom scenario
    int n = 4;
    int s = 2;
};

qv::MapSchedule make_schedule(const CommonOpts& c) {
    if (c.scenario == "uniform") return qv::MapSchedule::uniform(c.n, c.s);
    if (c.scenario == "simplified") return qv::MapSchedule::simplified();
    if (c.scenario == "s4") return qv::MapSchedule::uniform(4, 4);
    if (c.scenario == "s1") return qv::MapSchedule::uniform(4, 1);
    if (c.scenario == "custom") return qv::MapSchedule::custom(c.n, c.s, c.weights);
    throw qv::Error("unknown scenario " + c.scenario);
}

qv::DensityMatrix load_input_state(const std::string& spec_str) {
    if (spec_str == "chaotic") return qv::DensityMatrix::maximally_mixed(4);
    if (spec_str.size() == 2 && spec_str[0] == 'e' && spec_str[1] >= '1' && spec_str[1] <= '4')
        return qv::DensityMatrix::from_pure(qv::encoding_basis_d4()[spec_str[1] - '1']);
    std::istringstream is(qv::read_text_file(spec_str));
    return qv::DensityMatrix::make(qv::read_density_csv(is));
}

qv::CapacityKind parse_kind(const std::string& name) {
    for (qv::CapacityKind k :
         {qv::CapacityKind::Rec, qv::CapacityKind::EntropyExchange, qv::CapacityKind::Qmi,
          qv::CapacityKind::CoherentInfo, qv::CapacityKind::Loss})
        if (qv::capacity_label(k) == name) return k;
    throw qv::Error("unknown capacity kind " + name);
}

qv::MetaBlock base_meta(const CommonOpts& c, const qv::MapSchedule& sched,
                        const std::string& grid_desc) {
    qv::MetaBlock m;
    m.add("seed", std::to_string(c.seed));
    m.add("scenario", sched.label());
    m.add("grid", grid_desc);
    m.add("version", qv::kVersion);
    return m;
}

json meta_json(const CommonOpts& c, const qv::MapSchedule& sched, const std::string& grid_desc) {
    return json{{"seed", c.seed},
                {"scenario", sched.label()},
                {"grid", grid_desc},
                {"version", qv::kVersion}};
}

void write_file(const fs::path& dir, const std::string& name, const std::string& content,
                std::vector<std::string>& outputs) {
    qv::write_text_file((dir / name).string(), content);
    outputs.push_back(name);
}

void write_manifest(const fs::path& dir, const std::string& command, const json& meta,
                    const json& params, std::vector<std::string> outputs) {
    json manifest{{"command", command}, {"meta", meta}, {"params", params}};
    std::sort(outputs.begin(), outputs.end());
    manifest["outputs"] = outputs;
    qv::write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------- capacities

struct CapacitiesOpts {
    CommonOpts common;
    std::string kind = "all";
    std::string input = "chaotic";
    int grid_points = 101;
};

int run_capacities(const CapacitiesOpts& o) {
    const qv::MapSchedule sched = make_schedule(o.common);
    const qv::DensityMatrix input = load_input_state(o.input);
    const std::vector<double> grid = qv::uniform_grid(o.grid_points);

    std::vector<qv::CapacityKind> kinds;
    if (o.kind == "all")
        kinds = {qv::CapacityKind::Rec, qv::CapacityKind::EntropyExchange, qv::CapacityKind::Qmi,
                 qv::CapacityKind::CoherentInfo, qv::CapacityKind::Loss};
    else
        kinds = {parse_kind(o.kind)};

    const fs::path dir(o.common.out_dir);
    fs::create_directories(dir);
    const std::string grid_desc = std::to_string(o.grid_points);
    std::vector<std::string> outputs;

    json summary;
    summary["meta"] = meta_json(o.common, sched, grid_desc);
    summary["curves"] = json::array();

    for (qv::CapacityKind kind : kinds) {
        const qv::CapacityCurve curve = qv::sweep(sched, input, kind, grid, o.input);
        qv::MetaBlock meta = base_meta(o.common, sched, grid_desc);
        meta.add("input", o.input);
        meta.add("kind", qv::capacity_label(kind));

        std::ostringstream csv;
        csv << qv::comment_block(meta) << "t,value\n";
        for (std::size_t i = 0; i < curve.t.size(); ++i)
            csv << qv::format_sig(curve.t[i]) << "," << qv::format_sig(curve.value[i]) << "\n";
        write_file(dir, "capacities_" + qv::capacity_label(kind) + ".csv", csv.str(), outputs);

        const std::size_t imin = qv::argmin_index(curve.value);
        const std::size_t imax = qv::argmax_index(curve.value);
        summary["curves"].push_back(json{{"kind", qv::capacity_label(kind)},
                                         {"input", o.input},
                                         {"argmin_t", curve.t[imin]},
                                         {"min_value", curve.value[imin]},
                                         {"argmax_t", curve.t[imax]},
                                         {"max_value", curve.value[imax]},
                                         {"value_at_0", curve.value.front()},
                                         {"value_at_1", curve.value.back()}});
    }
    write_file(dir, "summary.json", summary.dump(2) + "\n", outputs);

    write_manifest(dir, "capacities", summary["meta"],
                   json{{"kind", o.kind}, {"input", o.input}, {"grid_points", o.grid_points}},
                   outputs);
    return 0;
}

// --------------------------------------------------------------------- vault

struct VaultOpts {
    CommonOpts common;
    std::string image_path;
    std::string mode = "exact";
    double t = -1.0;  // negative means the standard three stages
    bool compensate = false;
    bool forget_register = false;
    std::string target = "pair_swap";
    std::string relabel = "auto";
};

qv::VaultImage load_image(const std::string& path) {
    const std::string text = qv::read_text_file(path);
    std::istringstream is(text);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return qv::read_cmyk_csv(is);
    return qv::read_ppm(is);
}

int run_vault(const VaultOpts& o) {
    const qv::MapSchedule sched = make_schedule(o.common);
    const qv::VaultImage stored = load_image(o.image_path);
    const qv::EvolveMode mode =
        o.mode == "sampled" ? qv::EvolveMode::Sampled : qv::EvolveMode::ExactAverage;
    if (o.mode != "sampled" && o.mode != "exact") throw qv::Error("unknown mode " + o.mode);
    if (o.compensate && mode != qv::EvolveMode::Sampled)
        throw qv::Error("compensation needs sampled mode and its register");
    if (o.compensate && o.forget_register)
        throw qv::Error("cannot compensate after discarding the register");
    const qv::CompensateTarget target = [&] {
        if (o.target == "identity") return qv::CompensateTarget::Identity;
        if (o.target == "pair_swap") return qv::CompensateTarget::PairSwap;
        throw qv::Error("unknown compensation target " + o.target);
    }();

    struct Stage {
        std::string label;
        double t;
    };
    std::vector<Stage> stages;
    if (o.t >= 0.0) {
        stages.push_back({"t", o.t});
    } else {
        stages.push_back({"t0", 0.0});
        const auto tmin = sched.minimum_readability_t();
        if (tmin.has_value()) stages.push_back({"tmin", *tmin});
        stages.push_back({"t1", 1.0});
    }
    std::string grid_desc;
    for (const Stage& s : stages) grid_desc += (grid_desc.empty() ? "" : ";") + qv::format_sig(s.t);

    const fs::path dir(o.common.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> outputs;

    {
        std::ostringstream ppm;
        qv::MetaBlock meta = base_meta(o.common, sched, grid_desc);
        meta.add("stage", "input");
        qv::write_ppm(ppm, stored, &meta);
        write_file(dir, "vault_input.ppm", ppm.str(), outputs);
    }

    json report;
    report["meta"] = meta_json(o.common, sched, grid_desc);
    report["stages"] = json::array();

    qv::Rng rng(o.common.seed);
    for (const Stage& stage : stages) {
        qv::EvolvedImage evolved = qv::evolve_image(stored, sched, stage.t, mode, rng);
        if (o.forget_register) evolved.reg.reset();

        if (evolved.reg.has_value()) {
            std::ostringstream csv;
            qv::MetaBlock meta = base_meta(o.common, sched, grid_desc);
            meta.add("stage", stage.label);
            csv << qv::comment_block(meta) << "x,y,index\n";
            for (int y = 0; y < evolved.height; ++y)
                for (int x = 0; x < evolved.width; ++x)
                    csv << x << "," << y << ","
                        << (*evolved.reg)[static_cast<std::size_t>(y) * evolved.width + x] << "\n";
            write_file(dir, "vault_register_" + stage.label + ".csv", csv.str(), outputs);
        }

        std::optional<std::array<int, 4>> relabel;
        if (o.compensate) {
            evolved = qv::compensate(evolved, sched, target);
            if (o.relabel == "auto") relabel = qv::relabel_for_target(target);
        }
        if (o.relabel == "swap") relabel = std::array<int, 4>{3, 2, 1, 0};
        else if (o.relabel != "auto" && o.relabel != "none")
            throw qv::Error("unknown relabel " + o.relabel);

        const qv::VaultImage rendered = qv::mixture_image(evolved);
        {
            std::ostringstream ppm;
            qv::MetaBlock meta = base_meta(o.common, sched, grid_desc);
            meta.add("stage", stage.label);
            meta.add("t", qv::format_sig(stage.t));
            qv::write_ppm(ppm, rendered, &meta);
            write_file(dir, "vault_stage_" + stage.label + ".ppm", ppm.str(), outputs);
        }
        {
            std::ostringstream csv;
            qv::MetaBlock meta = base_meta(o.common, sched, grid_desc);
            meta.add("stage", stage.label);
            meta.add("t", qv::format_sig(stage.t));
            qv::write_cmyk_csv(csv, rendered, &meta);
            write_file(dir, "vault_stage_" + stage.label + ".csv", csv.str(), outputs);
        }

        const qv::DecodeReport decoded = qv::decode_image(evolved, stored, relabel);
        report["stages"].push_back(json{{"stage", stage.label},
                                        {"t", stage.t},
                                        {"scenario", sched.label()},
                                        {"accuracy", decoded.accuracy},
                                        {"tie_count", decoded.tie_count},
                                        {"mean_fidelity", decoded.mean_fidelity},
                                        {"compensated", o.compensate}});
    }
    write_file(dir, "decode_report.json", report.dump(2) + "\n", outputs);

    write_manifest(dir, "vault", report["meta"],
                   json{{"image", fs::path(o.image_path).filename().string()},
                        {"mode", o.mode},
                        {"compensate", o.compensate},
                        {"forget_register", o.forget_register},
                        {"target", o.target},
                        {"relabel", o.relabel}},
                   outputs);
    return 0;
}

// ---------------------------------------------------------------- tomography

struct TomographyOpts {
    CommonOpts common;
    std::string state = "e2";
    double t = 0.75;
    long long shots = 40000;
    int replicas = 1000;
    std::string noise = "multinomial";
    std::string statistic = "rec";
    int max_iters = 10000;
};

int run_tomography(const TomographyOpts& o) {
    const qv::MapSchedule sched = make_schedule(o.common);
    const qv::DensityMatrix input = load_input_state(o.state);
    const qv::KrausChannel channel = sched.channel_at(o.t);
    const qv::DensityMatrix truth = qv::apply(channel, input);
    const qv::MubSet mubs = qv::build_mubs_d4();
    const qv::NoiseMode noise = [&] {
        if (o.noise == "multinomial") return qv::NoiseMode::Multinomial;
        if (o.noise == "poisson") return qv::NoiseMode::Poisson;
        throw qv::Error("unknown noise mode " + o.noise);
    }();
    const qv::CapacityKind stat_kind = parse_kind(o.statistic);

    qv::Rng rng(o.common.seed);
    const qv::CountRecord counts = qv::simulate_counts(truth, mubs, o.shots, noise, rng);
    const qv::MleResult fit = qv::mle_reconstruct(counts, mubs, o.max_iters);

    const auto statistic = [&](const qv::DensityMatrix& rho) {
        return stat_kind == qv::CapacityKind::Rec ? qv::rec(rho)
                                                  : qv::evaluate(stat_kind, rho, channel);
    };
    const qv::MonteCarloStats stats =
        qv::monte_carlo_errors(counts, mubs, o.replicas, statistic, rng, o.max_iters);

    const std::string grid_desc = "t=" + qv::format_sig(o.t);
    const fs::path dir(o.common.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> outputs;

    {
        std::ostringstream csv;
        qv::MetaBlock meta = base_meta(o.common, sched, grid_desc);
        meta.add("state", o.state);
        qv::write_counts_csv(csv, counts, &meta);
        write_file(dir, "counts.csv", csv.str(), outputs);
    }
    {
        std::ostringstream csv;
        qv::MetaBlock meta = base_meta(o.common, sched, grid_desc);
        qv::write_density_csv(csv, fit.rho.matrix(), &meta);
        write_file(dir, "rho_hat.csv", csv.str(), outputs);
    }
    {
        std::ostringstream csv;
        qv::MetaBlock meta = base_meta(o.common, sched, grid_desc);
        qv::write_mub_csv(csv, mubs, &meta);
        write_file(dir, "mub_bases.csv", csv.str(), outputs);
    }

    json report{{"meta", meta_json(o.common, sched, grid_desc)},
                {"state", o.state},
                {"t", o.t},
                {"shots_per_basis", o.shots},
                {"noise", o.noise},
                {"fidelity_to_truth", qv::fidelity(fit.rho, truth)},
                {"iterations", fit.iterations},
                {"converged", fit.converged},
                {"log_likelihood", fit.log_likelihood},
                {"statistic", o.statistic},
                {"statistic_point", statistic(fit.rho)},
                {"statistic_mean", stats.mean},
                {"statistic_stddev", stats.stddev},
                {"replicas", o.replicas}};
    write_file(dir, "report.json", report.dump(2) + "\n", outputs);

    write_manifest(dir, "tomography", report["meta"],
                   json{{"state", o.state},
                        {"t", o.t},
                        {"shots", o.shots},
                        {"replicas", o.replicas},
                        {"noise", o.noise},
                        {"statistic", o.statistic},
                        {"max_iters", o.max_iters}},
                   outputs);
    return fit.converged ? 0 : 1;
}

// -------------------------------------------------------------- divisibility

struct DivisibilityOpts {
    CommonOpts common;
    int grid_points = 21;
};

int run_divisibility(const DivisibilityOpts& o) {
    const qv::MapSchedule sched = make_schedule(o.common);
    const std::vector<double> grid = qv::uniform_grid(o.grid_points);

    json pairs = json::array();
    int n_cp = 0, n_notcp = 0, n_indet = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const qv::IntermediateMap im = qv::intermediate_map(sched, grid[i], grid[j]);
            switch (im.verdict) {
                case qv::CpVerdict::CP: ++n_cp; break;
                case qv::CpVerdict::NotCP: ++n_notcp; break;
                case qv::CpVerdict::Indeterminate: ++n_indet; break;
            }
            pairs.push_back(json{{"s", grid[i]},
                                 {"t", grid[j]},
                                 {"min_choi_eigenvalue", im.min_choi_eigenvalue},
                                 {"rank", im.rank_s},
                                 {"verdict", qv::verdict_label(im.verdict)}});
        }
    }

    const std::string grid_desc = std::to_string(o.grid_points);
    const fs::path dir(o.common.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> outputs;

    json verdicts{{"meta", meta_json(o.common, sched, grid_desc)},
                  {"pairs", pairs},
                  {"summary",
                   json{{"cp", n_cp},
                        {"not_cp", n_notcp},
                        {"indeterminate", n_indet},
                        {"non_markovian", n_notcp > 0}}}};
    write_file(dir, "verdicts.json", verdicts.dump(2) + "\n", outputs);

    write_manifest(dir, "divisibility", verdicts["meta"], json{{"grid_points", o.grid_points}},
                   outputs);
    return (n_cp + n_notcp) == 0 ? 1 : 0;
}

void add_common(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--seed", c.seed, "Random seed")->envname("QVAULT_SEED");
    sub->add_option("--scenario", c.scenario, "uniform|simplified|s4|s1|custom")
        ->default_str("uniform");
    sub->add_option("--out", c.out_dir, "Output directory")->default_str("run");
    sub->add_option("--n", c.n, "System dimension for uniform/custom");
    sub->add_option("--s", c.s, "Block size for uniform/custom");
    sub->add_option("--weights", c.weights,
                    "Custom scenario weights over the non-identity permutations");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permutation-channel toolbox: capacities, vault, tomography, divisibility"};
    app.require_subcommand(1);

    std::string kernel_lane = "auto";
    app.add_option("--kernel", kernel_lane, "Kernel lane: auto|scalar|avx2");

    CapacitiesOpts cap;
    CLI::App* cap_cmd = app.add_subcommand("capacities", "Sweep capacity curves over t");
    add_common(cap_cmd, cap.common);
    cap_cmd->add_option("--kind", cap.kind, "rec|entropy_exchange|qmi|coherent_info|loss|all");
    cap_cmd->add_option("--input", cap.input, "e1..e4, chaotic, or a density CSV path");
    cap_cmd->add_option("--grid", cap.grid_points, "Grid points over [0,1]")
        ->check(CLI::Range(2, 100000));

    VaultOpts vault;
    CLI::App* vault_cmd = app.add_subcommand("vault", "Encode, evolve and decode an image");
    vault.common.scenario = "simplified";
    add_common(vault_cmd, vault.common);
    vault_cmd->add_option("--image", vault.image_path, "Input image (.ppm or .csv)")->required();
    vault_cmd->add_option("--mode", vault.mode, "exact|sampled");
    vault_cmd->add_option("--t", vault.t, "Single mixing parameter instead of the three stages");
    vault_cmd->add_flag("--compensate", vault.compensate, "Undo the sampled unitaries");
    vault_cmd->add_flag("--forget-register", vault.forget_register,
                        "Discard the applied-unitary register");
    vault_cmd->add_option("--target", vault.target, "Compensation target: identity|pair_swap");
    vault_cmd->add_option("--relabel", vault.relabel, "auto|none|swap");

    TomographyOpts tomo;
    CLI::App* tomo_cmd = app.add_subcommand("tomography", "Simulate counts and reconstruct");
    add_common(tomo_cmd, tomo.common);
    tomo_cmd->add_option("--state", tomo.state, "e1..e4, chaotic, or a density CSV path");
    tomo_cmd->add_option("--t", tomo.t, "Mixing parameter of the channel")
        ->check(CLI::Range(0.0, 1.0));
    tomo_cmd->add_option("--shots", tomo.shots, "Shots per basis")->check(CLI::PositiveNumber);
    tomo_cmd->add_option("--reps", tomo.replicas, "Bootstrap replicas")
        ->check(CLI::Range(2, 1000000));
    tomo_cmd->add_option("--noise", tomo.noise, "multinomial|poisson");
    tomo_cmd->add_option("--statistic", tomo.statistic,
                         "rec|entropy_exchange|qmi|coherent_info|loss");
    tomo_cmd->add_option("--max-iters", tomo.max_iters, "Reconstruction iteration cap")
        ->check(CLI::PositiveNumber);

    DivisibilityOpts div;
    CLI::App* div_cmd = app.add_subcommand("divisibility", "Scan intermediate maps for CP");
    add_common(div_cmd, div.common);
    div_cmd->add_option("--grid", div.grid_points, "Grid points over [0,1]")
        ->check(CLI::Range(2, 10000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (!qv::kernels::set_lane(kernel_lane)) {
        std::cerr << "error: kernel lane '" << kernel_lane << "' is not available\n";
        return 2;
    }

    try {
        if (cap_cmd->parsed()) return run_capacities(cap);
        if (vault_cmd->parsed()) return run_vault(vault);
        if (tomo_cmd->parsed()) return run_tomography(tomo);
        if (div_cmd->parsed()) return run_divisibility(div);
        return 2;
    } catch (const qv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
