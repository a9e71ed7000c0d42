// gsing: command-line front end over the C API.
//
//   gsing verify --input data/case_study.json --out results/
//
// Exit codes: 0 success, 1 verification findings, 2 input error,
// 3 internal-consistency error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gsing/gsing.h"
#include "json.hpp"

namespace {

int exit_code(gsing_status s) {
    switch (s) {
        case GSING_OK: return 0;
        case GSING_FINDINGS: return 1;
        case GSING_INTERNAL: return 3;
        default: return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gough-Stewart platform singularity toolkit"};
    app.set_version_flag("--version", std::string(gsing_version()));

    std::string command, input, out;
    double tol = 1e-8;
    std::uint64_t seed = 1, random_seed = 0;
    std::size_t samples = 100, grid = 32, restarts = 2000;
    std::string box, precision, max_den;

    app.add_option("command", command, "surface | twist | quadric | param | lines | infinity | verify | mesh")
        ->required()
        ->check(CLI::IsMember({"surface", "twist", "quadric", "param", "lines", "infinity", "verify", "mesh"}));
    auto* in_opt = app.add_option("--input,-i", input, "platform file (schema gsing-platform/1)");
    auto* rnd_opt = app.add_option("--random", random_seed, "use a random rational platform from this seed");
    in_opt->excludes(rnd_opt);
    app.add_option("--out,-o", out, "output directory for the report and artifacts");
    app.add_option("--tol", tol, "relative tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "random seed");
    app.add_option("--samples", samples, "sample count");
    app.add_option("--grid", grid, "mesh grid points per axis");
    app.add_option("--box", box, "mesh box: h or xmin,xmax,ymin,ymax,zmin,zmax");
    app.add_option("--precision", precision, "double | extended (quad) | exact")
        ->check(CLI::IsMember({"double", "extended", "quad", "exact"}));
    app.add_option("--restarts", restarts, "Newton restarts per chart for the line search");
    app.add_option("--max-den", max_den, "denominator bound for orbit rationalization");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (input.empty() && !*rnd_opt) {
        std::cerr << "error: --input or --random is required\n";
        return 2;
    }

    gsing_platform* platform = nullptr;
    gsing_status st = input.empty() ? gsing_platform_random(random_seed, &platform)
                                    : gsing_platform_load(input.c_str(), &platform);
    if (st != GSING_OK) {
        std::cerr << "error: " << gsing_last_error() << "\n";
        return 2;
    }

    nlohmann::json opts;
    opts["tol"] = tol;
    opts["seed"] = seed;
    opts["samples"] = samples;
    opts["grid"] = grid;
    opts["restarts"] = restarts;
    if (!box.empty()) opts["box"] = box;
    if (!precision.empty()) opts["precision"] = precision;
    if (!max_den.empty()) opts["max_den"] = max_den;
    if (!out.empty()) opts["out"] = out;

    char* report = nullptr;
    st = gsing_run(platform, command.c_str(), opts.dump().c_str(), &report);
    gsing_platform_free(platform);
    if (!report) {
        std::cerr << "error: " << gsing_last_error() << "\n";
        return exit_code(st);
    }

    if (out.empty()) {
        std::cout << report;
    } else {
        std::error_code ec;
        std::filesystem::create_directories(out, ec);
        auto path = std::filesystem::path(out) / (command + "_report.json");
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << path << "\n";
            gsing_free_string(report);
            return 2;
        }
        f << report;
        std::cerr << command << ": " << path.string() << "\n";
    }
    auto parsed = nlohmann::json::parse(report, nullptr, false);
    gsing_free_string(report);
    if (!parsed.is_discarded()) {
        for (const auto& f : parsed["findings"]) std::cerr << "finding: " << f.get<std::string>() << "\n";
        if (parsed.contains("error")) std::cerr << "error: " << parsed["error"]["message"].get<std::string>() << "\n";
    }
    return exit_code(st);
}
