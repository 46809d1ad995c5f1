#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "detlab/commands.hpp"

namespace {

using namespace detlab;

// Used only when the caller gives no seed; the derived value is printed so
// the run can be reproduced.
std::uint64_t fresh_seed() {
    std::random_device rd;
    std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    s ^= static_cast<std::uint64_t>(
        std::chrono::steady_clock::now().time_since_epoch().count());
    return s ? s : 1;
}

Json load_expect_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read expected-results file " + path);
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        throw InputError(std::string("invalid expected-results JSON: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace detlab;

    CLI::App app{"exact rank, stratum, and discriminant checks for subspace and lattice tuples"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"text", "json"}));
    std::string expect_path;
    app.add_option("--expect", expect_path, "expected-results JSON file");
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = app.add_option("--seed", seed, "random seed");
    std::uint64_t prime = 0;
    app.add_option("--prime", prime, "modulus for modular sampling");
    long long trials = 0;
    app.add_option("--trials", trials, "trial count for sampled checks")
        ->check(CLI::PositiveNumber);
    int sections = 0;
    app.add_option("--sections", sections, "plane sections for irreducibility sampling")
        ->check(CLI::PositiveNumber);
    std::string mode_name;
    app.add_option("--mode", mode_name, "execution mode for parallel kernels")
        ->check(CLI::IsMember({"serial", "openmp"}));

    CLI::App* analyze = app.add_subcommand(
        "analyze", "rank survey, predicates, flats, and the dual rank sweep");
    std::string analyze_file;
    analyze->add_option("instance", analyze_file, "instance JSON file")->required();
    analyze->fallthrough();

    CLI::App* verify = app.add_subcommand("verify", "check one statement against an instance");
    std::string verify_which, verify_file;
    verify->add_option("which", verify_which,
                       "one of lemma2, lemma3, prop4, lemma5, prop6, prop1")
        ->required();
    verify->add_option("instance", verify_file, "instance JSON file")->required();
    verify->fallthrough();

    CLI::App* theorem = app.add_subcommand("theorem", "irreducibility verdicts");
    std::string theorem_which, theorem_file;
    theorem->add_option("which", theorem_which, "a (determinant) or b (discriminantal)")
        ->required();
    theorem->add_option("instance", theorem_file, "instance JSON file")->required();
    theorem->fallthrough();

    CLI::App* discr = app.add_subcommand("discriminant", "discriminantal pipeline actions");
    std::string discr_action, discr_file;
    discr->add_option("action", discr_action, "one of build, classify, codim, eliminate")
        ->required();
    discr->add_option("instance", discr_file, "instance JSON file")->required();
    discr->fallthrough();

    CLI::App* random_cmd = app.add_subcommand("random", "generate a random instance file");
    std::string random_kind;
    random_cmd->add_option("kind", random_kind, "subspace or lattice")->required();
    std::vector<int> random_dims;
    random_cmd
        ->add_option("--dims", random_dims,
                     "subspace dimensions, or points per set for lattice instances")
        ->required()
        ->delimiter(',');
    int random_ambient = 0;
    random_cmd->add_option("--ambient", random_ambient, "ambient dimension or rank")
        ->required();
    int random_bound = 9;
    random_cmd->add_option("--bound", random_bound, "coordinate bound");
    std::string random_out;
    random_cmd->add_option("--out", random_out, "output file (default stdout)");
    random_cmd->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!mode_name.empty())
            set_default_exec_mode(mode_name == "openmp" ? ExecMode::openmp : ExecMode::serial);

        const bool randomized =
            verify->parsed()
                ? (verify_which != "lemma2" && verify_which != "prop6")
                : (theorem->parsed() || random_cmd->parsed() ||
                   (discr->parsed() && discr_action == "codim"));
        if (randomized && seed_opt->count() == 0) {
            seed = fresh_seed();
            std::cerr << "derived seed: " << seed << "\n";
        }

        const auto t0 = std::chrono::steady_clock::now();

        if (random_cmd->parsed()) {
            InstanceDoc doc =
                cmd_random(random_kind, random_dims, random_ambient, random_bound, seed);
            const std::string text = serialize_instance(doc);
            // the generated file must re-parse to the same canonical form
            if (serialize_instance(parse_instance(text)) != text)
                throw CheckFailure("generated instance failed to round-trip");
            if (!doc.warning.empty()) std::cerr << "warning: " << doc.warning << "\n";
            if (random_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(random_out);
                if (!out) throw InputError("cannot write " + random_out);
                out << text;
                std::cerr << "wrote " << random_out << " (digest " << instance_digest(doc)
                          << ")\n";
            }
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            std::cerr << "elapsed: " << ms << " ms\n";
            return 0;
        }

        RunReport rep;
        if (analyze->parsed()) {
            rep = cmd_analyze(load_instance(analyze_file));
        } else if (verify->parsed()) {
            rep = cmd_verify(load_instance(verify_file), verify_which, prime, trials, seed);
        } else if (theorem->parsed()) {
            rep = cmd_theorem(load_instance(theorem_file), theorem_which, sections, seed);
        } else {
            rep = cmd_discriminant(load_instance(discr_file), discr_action, prime,
                                   static_cast<int>(trials), seed);
        }
        if (!expect_path.empty()) apply_expectations(rep, load_expect_file(expect_path));

        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        std::cout << (format == "json" ? render_json(rep) : render_text(rep));
        std::cerr << "elapsed: " << ms << " ms\n";
        return rep.ok ? 0 : 1;
    } catch (const PreconditionFailure& e) {
        std::cerr << "precondition failed (" << e.check << ", witness " << mask_str(e.witness)
                  << "): " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const CheckFailure& e) {
        std::cerr << "invariant check failed: " << e.what() << "\n";
        return 1;
    } catch (const MathError& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 1;
    }
}
