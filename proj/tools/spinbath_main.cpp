#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spinbath/experiments.hpp"

namespace {

bool parse_thread_count(const std::string& text, unsigned& out) {
    try {
        std::size_t end = 0;
        const unsigned long v = std::stoul(text, &end);
        if (end != text.size() || v == 0 || v > 4096) return false;
        out = static_cast<unsigned>(v);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-bath decoherence and echo experiments"};
    app.get_formatter()->column_width(30);

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool validate_only = false;

    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--set", sets, "override a config field: dotpath=value (repeatable)");
    app.add_option("--out", out_dir, "output directory for the run");
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    auto* threads_opt =
        app.add_option("--threads", threads, "worker threads; results do not depend on it");
    app.add_flag("--validate-only", validate_only,
                 "report config violations without running");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (threads_opt->count() == 0) {
        if (const char* env = std::getenv("SPINBATH_THREADS")) {
            if (!parse_thread_count(env, threads)) {
                std::cerr << "error: SPINBATH_THREADS: expected a thread count, got \"" << env
                          << "\"\n";
                return 2;
            }
        } else {
            threads = 1;
        }
    } else if (threads == 0) {
        std::cerr << "error: --threads: must be >= 1\n";
        return 2;
    }

    try {
        spinbath::ExperimentConfig config = spinbath::ExperimentConfig::from_file(config_path);
        for (const std::string& s : sets) {
            const std::size_t eq = s.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw std::invalid_argument("--set: expected dotpath=value, got \"" + s + "\"");
            }
            config.set_path(s.substr(0, eq), s.substr(eq + 1));
        }
        if (seed_opt->count() > 0) {
            config.set_seed(seed);
        }

        if (validate_only) {
            const std::vector<std::string> violations = config.validate();
            if (violations.empty()) {
                std::cout << "ok\n";
                return 0;
            }
            for (const std::string& v : violations) {
                std::cout << v << "\n";
            }
            return 2;
        }

        if (out_dir.empty()) {
            throw std::invalid_argument("--out: required unless --validate-only");
        }
        const spinbath::RunResult result = spinbath::run_experiment(config, out_dir, threads);
        for (const std::string& name : result.artifacts) {
            std::cout << "wrote " << (std::filesystem::path(out_dir) / name).string() << "\n";
        }
        return 0;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
