/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "marlin/baselines.hpp"
#include "marlin/generate.hpp"
#include "marlin/io.hpp"
#include "marlin/sweep.hpp"
#include "marlin/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct CommonOptions {
    std::string scenario_path;
    std::uint64_t seed = 1;
    std::string out_path;
    int jobs = 1;
    int max_iter = 600;
    double tol = 1e-4;
};

marlin::SolverConfig make_config(const CommonOptions& opt) {
    marlin::SolverConfig config;
    config.max_iterations = opt.max_iter;
    config.convergence_tol = opt.tol;
    config.seed = opt.seed;
    config.jobs = 1;
    return config;
}

/// Stream sink: file when --out given, stdout otherwise.
class OutSink {
public:
    explicit OutSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

int cmd_simulate(const CommonOptions& opt, const std::string& scheme_name,
                 const std::string& dump_allocation, const std::string& dump_channel) {
    const marlin::Scenario scenario = marlin::load_scenario_file(opt.scenario_path);
    const marlin::ChannelTensor channel = marlin::build_channel_tensor(scenario);
    if (!dump_channel.empty()) marlin::dump_tensor(channel.gains, dump_channel);

    marlin::SolverConfig config = make_config(opt);
    config.jobs = std::max(1, opt.jobs);
    const marlin::Scheme scheme = marlin::parse_scheme(scheme_name);
    marlin::AllocationResult result;
    switch (scheme) {
        case marlin::Scheme::proposed:
            result = marlin::run_allocation(channel, scenario, config);
            break;
        case marlin::Scheme::myopic: {
            marlin::RngStream rng(config.seed);
            result = marlin::run_myopic(channel, scenario, config, rng);
            break;
        }
        case marlin::Scheme::equal_power:
            result = marlin::run_equal_power(channel, scenario, config);
            break;
    }

    if (!dump_allocation.empty()) {
        std::ofstream out(dump_allocation, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open dump file: " + dump_allocation);
        marlin::write_allocation_csv(result.allocation, out);
    }
    OutSink sink(opt.out_path);
    sink.stream() << marlin::result_summary(result, scenario);
    return result.feasible ? kExitOk : kExitInfeasible;
}

int cmd_sweep(const CommonOptions& opt, const std::string& axis, const std::string& values,
              const std::string& schemes, int replications) {
    const marlin::Scenario base = marlin::load_scenario_file(opt.scenario_path);

    marlin::SweepSpec spec;
    if (axis == "M")
        spec.axis = marlin::SweepAxis::slots_m;
    else if (axis == "N")
        spec.axis = marlin::SweepAxis::subcarriers_n;
    else
        throw std::invalid_argument("axis must be M or N");

    std::stringstream vs(values);
    for (std::string item; std::getline(vs, item, ',');)
        if (!item.empty()) spec.values.push_back(std::stoi(item));
    std::stringstream ss(schemes);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) spec.schemes.push_back(marlin::parse_scheme(item));
    spec.replications = replications;

    const auto rows = marlin::run_sweep(base, spec, make_config(opt), std::max(1, opt.jobs));
    OutSink sink(opt.out_path);
    marlin::write_sweep_csv(rows, sink.stream());
    return kExitOk;
}

int cmd_verify(const CommonOptions& opt, const std::string& suite) {
    std::vector<marlin::verify::CheckResult> checks;
    std::unique_ptr<OutSink> sink;
    if (!opt.out_path.empty()) sink = std::make_unique<OutSink>(opt.out_path);

    if (suite == "rate") {
        const marlin::verify::RateReport report = marlin::verify::rate_suite(opt.seed);
        checks = report.checks;
        if (sink) marlin::write_rate_csv(report.rows, sink->stream());
    } else if (suite == "fixedpoint") {
        checks = marlin::verify::fixedpoint_suite(opt.seed);
        if (sink) marlin::write_checks_csv(checks, sink->stream());
    } else if (suite == "theorem1") {
        checks = marlin::verify::theorem1_suite(opt.seed);
        if (sink) marlin::write_checks_csv(checks, sink->stream());
    } else if (suite == "smallcase") {
        checks = marlin::verify::smallcase_suite(opt.seed);
        if (sink) marlin::write_checks_csv(checks, sink->stream());
    } else {
        throw std::invalid_argument("unknown suite: " + suite);
    }

    bool ok = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                  << " observed=" << marlin::format_g9(c.observed)
                  << " tolerance=" << marlin::format_g9(c.tolerance) << '\n';
        ok = ok && c.pass;
    }
    return ok ? kExitOk : kExitError;
}

int cmd_generate(const marlin::GeneratorParams& params, const std::string& out_path) {
    const marlin::Scenario scenario = marlin::make_paper_scenario(params);
    OutSink sink(out_path);
    sink.stream() << marlin::emit_scenario(scenario);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shore-to-ship OFDMA long-term resource allocation simulator"};
    app.require_subcommand(1);

    CommonOptions opt;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        if (needs_scenario)
            cmd->add_option("--scenario", opt.scenario_path, "scenario document path")
                ->required();
        cmd->add_option("--seed", opt.seed, "random seed");
        cmd->add_option("--out", opt.out_path, "output path (default: stdout)");
        cmd->add_option("--jobs", opt.jobs, "parallel worker count");
        cmd->add_option("--max-iter", opt.max_iter, "solver iteration cap");
        cmd->add_option("--tol", opt.tol, "solver convergence tolerance");
    };

    // simulate
    std::string scheme = "proposed";
    std::string dump_allocation, dump_channel;
    CLI::App* simulate = app.add_subcommand("simulate", "run one allocation");
    add_common(simulate, true);
    simulate->add_option("--scheme", scheme, "proposed|myopic|equal_power");
    simulate->add_option("--dump-allocation", dump_allocation, "write allocation CSV here");
    simulate->add_option("--dump-channel", dump_channel, "write binary gain tensor here");

    // sweep
    std::string axis = "M", values, schemes = "proposed";
    int replications = 1;
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    add_common(sweep, true);
    sweep->add_option("--axis", axis, "M|N");
    sweep->add_option("--values", values, "comma-separated axis values")->required();
    sweep->add_option("--schemes", schemes, "comma-separated schemes");
    sweep->add_option("--replications", replications, "replications per cell");

    // verify
    std::string suite;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "rate|fixedpoint|theorem1|smallcase")->required();
    add_common(verify, false);

    // generate
    marlin::GeneratorParams gen;
    std::string preset = "paper";
    CLI::App* generate = app.add_subcommand("generate", "write a synthetic scenario");
    generate->add_option("--preset", preset, "paper");
    generate->add_option("--seed", gen.seed, "generator seed");
    std::string gen_out;
    generate->add_option("--out", gen_out, "output path (default: stdout)");
    generate->add_option("--users", gen.users, "user count");
    generate->add_option("--stations", gen.stations, "station count");
    generate->add_option("--slots", gen.slots, "slot count");
    generate->add_option("--subcarriers", gen.subcarriers, "subcarrier count");
    generate->add_option("--slot-length", gen.slot_length_s, "slot length, s");
    generate->add_option("--max-power", gen.max_power_w, "per-station cap, W");
    generate->add_option("--demand-min", gen.demand_min_bits, "min demand, bits");
    generate->add_option("--demand-max", gen.demand_max_bits, "max demand, bits");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(opt, scheme, dump_allocation, dump_channel);
        if (sweep->parsed()) return cmd_sweep(opt, axis, values, schemes, replications);
        if (verify->parsed()) return cmd_verify(opt, suite);
        if (generate->parsed()) {
            if (preset != "paper") throw std::invalid_argument("unknown preset: " + preset);
            return cmd_generate(gen, gen_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
