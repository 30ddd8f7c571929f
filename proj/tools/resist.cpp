// Command-line front end. Each subcommand builds a RunConfig, optionally
// seeded from a JSON file (--config), with explicit flags taking precedence.

#include "resist/run.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) resist::fail(resist::ErrorKind::ConfigError, "cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Records which flags were actually given so that only those override the
// JSON config.
struct Binder {
    std::vector<std::function<void(resist::RunConfig&)>> appliers;

    template <typename T, typename Member>
    void bind(CLI::App* cmd, const std::string& flag, T& slot, Member member,
              const std::string& desc) {
        CLI::Option* opt = cmd->add_option(flag, slot, desc);
        appliers.push_back([opt, &slot, member](resist::RunConfig& cfg) {
            if (opt->count()) cfg.*member = slot;
        });
    }

    void apply(resist::RunConfig& cfg) const {
        for (const auto& fn : appliers) fn(cfg);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Newton minimal-resistance toolkit"};
    app.require_subcommand(1);
    // Long-only help; the short -h would collide with the --h mesh flag.
    app.set_help_flag("--help", "print help and exit");
    auto add_sub = [&](const char* name, const char* desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        cmd->set_help_flag("--help", "print help and exit");
        return cmd;
    };

    struct Slots {
        std::string config, law, omega, body, apex, s_grid, suite, x0, out_dir;
        double M = 0, L = 0, h = 0, support_radius = 0, delta = 0;
        int N = 0, starts = 0;
        std::uint64_t seed = 0;
        std::vector<double> taus;
    } slot;

    Binder binder;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", slot.config, "JSON config file; flags override its values");
        binder.bind(cmd, "--seed", slot.seed, &resist::RunConfig::seed, "RNG seed");
        binder.bind(cmd, "--out", slot.out_dir, &resist::RunConfig::out_dir, "output directory");
    };

    CLI::App* radial = add_sub("solve-radial", "optimize a radially symmetric profile");
    binder.bind(radial, "--M", slot.M, &resist::RunConfig::M, "height bound");
    binder.bind(radial, "--L", slot.L, &resist::RunConfig::L, "disc radius");
    binder.bind(radial, "--N", slot.N, &resist::RunConfig::N, "radial cell count");
    binder.bind(radial, "--starts", slot.starts, &resist::RunConfig::starts, "multistart count");
    binder.bind(radial, "--delta", slot.delta, &resist::RunConfig::delta, "forbidden-band delta");
    add_common(radial);

    CLI::App* field = add_sub("solve-2d", "optimize a heightfield on a convex domain");
    binder.bind(field, "--law", slot.law, &resist::RunConfig::law, "pressure law");
    binder.bind(field, "--M", slot.M, &resist::RunConfig::M, "height bound");
    binder.bind(field, "--omega", slot.omega, &resist::RunConfig::omega,
                "domain, disc:R:n or poly:x1,y1;...");
    binder.bind(field, "--h", slot.h, &resist::RunConfig::h, "target mesh spacing");
    binder.bind(field, "--starts", slot.starts, &resist::RunConfig::starts, "multistart count");
    binder.bind(field, "--delta", slot.delta, &resist::RunConfig::delta, "forbidden-band delta");
    add_common(field);

    CLI::App* stretch = add_sub("stretch", "sample a nose-stretching family");
    binder.bind(stretch, "--law", slot.law, &resist::RunConfig::law, "pressure law");
    binder.bind(stretch, "--body", slot.body, &resist::RunConfig::body,
                "'cube' or a mesh file (.off/.obj)");
    binder.bind(stretch, "--apex", slot.apex, &resist::RunConfig::apex, "apex point x,y,z");
    binder.bind(stretch, "--s,--s-grid", slot.s_grid, &resist::RunConfig::s_grid,
                "parameter grid a:step:b");
    add_common(stretch);

    CLI::App* verify = add_sub("verify", "run a verification suite");
    binder.bind(verify, "--suite", slot.suite, &resist::RunConfig::suite,
                "appendix | measures | solver");
    binder.bind(verify, "--delta", slot.delta, &resist::RunConfig::delta, "forbidden-band delta");
    add_common(verify);

    CLI::App* probe = add_sub("probe", "second-variation probe of a heightfield");
    binder.bind(probe, "--law", slot.law, &resist::RunConfig::law, "pressure law");
    binder.bind(probe, "--body", slot.body, &resist::RunConfig::body,
                "'cap' or a saved field base path");
    binder.bind(probe, "--omega", slot.omega, &resist::RunConfig::omega, "domain for 'cap'");
    binder.bind(probe, "--h", slot.h, &resist::RunConfig::h, "mesh spacing for 'cap'");
    binder.bind(probe, "--M", slot.M, &resist::RunConfig::M, "height bound for 'cap'");
    binder.bind(probe, "--x0", slot.x0, &resist::RunConfig::x0, "probe location x,y");
    probe->add_option("--tau", slot.taus, "oscillation periods")->delimiter(',');
    binder.appliers.push_back([&](resist::RunConfig& cfg) {
        if (!slot.taus.empty()) cfg.taus = slot.taus;
    });
    binder.bind(probe, "--support-radius", slot.support_radius,
                &resist::RunConfig::support_radius, "bump support radius");
    add_common(probe);

    try {
        app.parse(argc, argv);
        resist::RunConfig cfg;
        if (!slot.config.empty()) {
            cfg = resist::config_from_json_text(slurp(slot.config));
        } else {
            cfg.seed = resist::default_seed();
        }
        cfg.command = app.get_subcommands().front()->get_name();
        binder.apply(cfg);
        return resist::run(cfg);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const resist::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == resist::ErrorKind::ConfigError ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
