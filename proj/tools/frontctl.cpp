#include <string>

#include <CLI11.hpp>

#include "sharpwave/tasks.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sharp traveling-wave toolkit for delayed degenerate reaction-diffusion"};
    app.name("frontctl");

    std::string task;
    std::string scenario_path;
    std::string out_dir = "out";
    int parallel = 1;

    app.add_option("task", task,
                   "check | shoot | find-speed | phase | variational | simulate | sweep | "
                   "regularity")
        ->required();
    app.add_option("--scenario", scenario_path, "scenario file (INI sections)")->required();
    app.add_option("--out", out_dir, "output directory (created if missing)");
    app.add_option("--parallel", parallel, "worker threads for sweep cells");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 reserves its own exit codes; fold every usage problem into 2
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    return sharpwave::run_task(task, scenario_path, out_dir, parallel);
}
