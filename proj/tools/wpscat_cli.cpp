// Config-driven experiment runner: `run <config>` executes one experiment,
// `suite <dir>` runs every config in a directory (the acceptance battery).
// Exit codes: 0 success, 1 config error, 2 runtime error, 3 suite/expectation
// failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <CLI11.hpp>

#include "wpscat/wpscat.hpp"

namespace fs = std::filesystem;
using namespace wpscat;

namespace {

enum ExitCode { exit_ok = 0, exit_config = 1, exit_runtime = 2, exit_acceptance = 3 };

struct RunOutcome {
    int code = exit_ok;
    std::string name;
    std::string message; // failure detail, empty on success
};

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot read config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    ExperimentConfig c = parse_config_text(buf.str());
    if (c.name == experiment_name(c.kind)) c.name = path.stem().string();
    return c;
}

RunOutcome run_one(const fs::path& config_path, const fs::path& output_dir, bool csv,
                   bool json_out) {
    RunOutcome out;
    out.name = config_path.filename().string();
    try {
        ExperimentConfig c = load_config(config_path);
        out.name = c.name;
        Report rep = run_experiment(c);
        emit_report(rep, c.name, output_dir, csv, json_out);
        if (!rep.ok()) {
            out.code = exit_acceptance;
            std::string joined;
            for (const std::string& f : rep.failures)
                joined += (joined.empty() ? "" : "; ") + f;
            out.message = joined;
        }
    } catch (const ConfigInvalid& e) {
        out.code = exit_config;
        out.message = e.what();
    } catch (const std::exception& e) {
        out.code = exit_runtime;
        out.message = e.what();
    }
    return out;
}

int run_suite(const fs::path& dir, const fs::path& output_dir, bool csv, bool json_out,
              int threads) {
    if (!fs::is_directory(dir)) {
        std::fprintf(stderr, "suite directory '%s' does not exist\n", dir.string().c_str());
        return exit_config;
    }
    std::vector<fs::path> configs;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            configs.push_back(entry.path());
    std::sort(configs.begin(), configs.end());
    if (configs.empty()) {
        std::fprintf(stderr, "no config files in '%s'\n", dir.string().c_str());
        return exit_config;
    }

    // bounded fan-out: at most `threads` configs in flight
    std::vector<RunOutcome> outcomes(configs.size());
    std::vector<std::future<RunOutcome>> slots;
    std::size_t next = 0, done = 0;
    std::vector<std::size_t> slot_index;
    while (done < configs.size()) {
        while (slots.size() < static_cast<std::size_t>(threads) && next < configs.size()) {
            slots.push_back(std::async(std::launch::async, run_one, configs[next],
                                       output_dir, csv, json_out));
            slot_index.push_back(next);
            ++next;
        }
        outcomes[slot_index.front()] = slots.front().get();
        slots.erase(slots.begin());
        slot_index.erase(slot_index.begin());
        ++done;
    }

    bool any_config = false, any_runtime = false, any_accept = false;
    for (const RunOutcome& o : outcomes) {
        const char* tag = o.code == exit_ok ? "pass" : "FAIL";
        std::printf("%-28s %s%s%s\n", o.name.c_str(), tag, o.message.empty() ? "" : ": ",
                    o.message.c_str());
        any_config = any_config || o.code == exit_config;
        any_runtime = any_runtime || o.code == exit_runtime;
        any_accept = any_accept || o.code == exit_acceptance;
    }
    if (any_config) return exit_config;
    if (any_runtime) return exit_runtime;
    if (any_accept) return exit_acceptance;
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-space scattering laboratory"};
    app.require_subcommand(1);

    std::string output_dir = "out";
    std::string format = "both";
    int threads = 1;
    app.add_option("--output-dir", output_dir, "directory for report files");
    app.add_option("--threads", threads, "max concurrent experiments (suite)")
        ->check(CLI::Range(1, 64));
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "run a single experiment config");
    run_cmd->fallthrough(); // --output-dir etc. may follow the subcommand
    run_cmd->add_option("config", run_config, "experiment config file")->required();

    std::string suite_dir;
    auto* suite_cmd = app.add_subcommand("suite", "run every config in a directory");
    suite_cmd->fallthrough();
    suite_cmd->add_option("directory", suite_dir, "directory of config files")->required();

    CLI11_PARSE(app, argc, argv);

    const bool csv = format != "json";
    const bool json_out = format != "csv";

    if (run_cmd->parsed()) {
        RunOutcome o = run_one(run_config, output_dir, csv, json_out);
        if (o.code == exit_ok) {
            std::printf("%s: ok\n", o.name.c_str());
        } else {
            std::fprintf(stderr, "%s: %s\n", o.name.c_str(), o.message.c_str());
        }
        return o.code;
    }
    return run_suite(suite_dir, output_dir, csv, json_out, threads);
}
