#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "keldysh/commands.hpp"
#include "keldysh/config.hpp"
#include "keldysh/errors.hpp"

// Exit codes: 0 success, 1 CLI usage error, 2 configuration error,
// 3 numerical nonconvergence, 4 verification failure.

int main(int argc, char** argv) {
    CLI::App app{"Boundary kernels of degenerate elliptic equations on a half space"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    int threads = 0;

    const struct {
        const char* name;
        const char* help;
    } subs[] = {
        {"eval", "Evaluate the configured kernel at the configured points"},
        {"mass", "Check the lateral kernel mass against its closed form"},
        {"solve", "Solve the Dirichlet problem by convolution at the configured points"},
        {"verify", "Run the approximate-identity and residual checks"},
        {"example", "Tabulate the worked half-plane solution pair"},
    };
    for (const auto& s : subs) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        cmd->add_option("--config", config_path, "Configuration file")->required();
        cmd->add_option("--out", out_path, "Output file (default: stdout)");
        if (std::string(s.name) == "solve")
            cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        keldysh::RunConfig cfg = keldysh::parse_config_file(config_path);

        std::ofstream file_out;
        if (!out_path.empty()) {
            file_out.open(out_path);
            if (!file_out)
                throw keldysh::config_error("config error: cannot open output file '" + out_path +
                                            "'");
        }
        std::ostream& os = out_path.empty() ? std::cout : file_out;

        if (app.got_subcommand("eval")) return keldysh::cmd_eval(cfg, os);
        if (app.got_subcommand("mass")) return keldysh::cmd_mass(cfg, os);
        if (app.got_subcommand("solve")) return keldysh::cmd_solve(cfg, os, threads);
        if (app.got_subcommand("verify")) return keldysh::cmd_verify(cfg, os);
        return keldysh::cmd_example(cfg, os);
    } catch (const keldysh::config_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const keldysh::quadrature_error& e) {
        std::cerr << "numerical nonconvergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
