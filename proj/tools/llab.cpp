#include "llab/acceptance.hpp"
#include "llab/dimensions.hpp"
#include "llab/errors.hpp"
#include "llab/harness.hpp"
#include "llab/io.hpp"
#include "llab/oracles.hpp"
#include "llab/soa.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

namespace {

int cmd_dims(const std::string& class_file) {
    const auto c = llab::io::read_class(class_file);
    llab::DimensionSolver solver(c);
    const int L = solver.littlestone();
    nlohmann::json out;
    out["littlestone"] = L;
    try {
        out["sequential_graph"] = llab::sequential_graph_dim(c);
    } catch (const llab::ResourceError& e) {
        out["sequential_graph"] = nullptr;
        std::cerr << "sequential_graph skipped: " << e.what() << "\n";
    }
    if (L < 0) {
        out["witness_depth"] = -1;
    } else {
        const auto tree = solver.shattered_tree(c.all(), L);
        out["witness_depth"] = tree ? tree->depth : -1;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_soa_run(const std::string& class_file, const std::string& sequence_file) {
    const auto c = llab::io::read_class(class_file);
    const auto s = llab::io::read_sequence(sequence_file);
    s.validate(c);
    const auto run = llab::soa_run(c, s);
    std::ostringstream out;
    out << "t,pred,correct,mistakes\n";
    std::size_t mistakes = 0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const bool correct = run.predictions[t] == s[t].label;
        mistakes += correct ? 0 : 1;
        out << t + 1 << ',' << run.predictions[t] << ',' << (correct ? 1 : 0) << ',' << mistakes << '\n';
    }
    std::cout << out.str();
    return 0;
}

int cmd_simulate(const llab::ExperimentConfig& config) {
    const auto report = llab::run_experiment(config);
    std::cout << report.to_json().dump(2) << "\n";
    if (!report.passed()) {
        std::cerr << "one or more checks failed\n";
        return 1;
    }
    return 0;
}

int cmd_verify(std::uint64_t seed, const std::string& out_file) {
    const auto report = llab::run_acceptance(seed, &std::cerr);
    const std::string text = report.text();
    std::cout << text;
    if (!out_file.empty()) llab::io::write_text(out_file, text);
    return report.passed() ? 0 : 1;
}

int cmd_rademacher(const std::string& class_file, std::size_t horizon) {
    const auto c = llab::io::read_class(class_file);
    nlohmann::json out;
    out["horizon"] = horizon;
    out["value"] = llab::sequential_rademacher(c, horizon);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_example1(unsigned m, const std::string& out_file) {
    const auto c = llab::example1_class(m);
    llab::io::write_text(out_file, llab::io::class_to_json(c).dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact online-learning bounds on finite concept classes"};
    app.require_subcommand(1);

    std::string class_file, sequence_file, out_file;
    std::size_t horizon = 0;

    auto* dims = app.add_subcommand("dims", "Littlestone and sequential graph dimensions of a class");
    dims->add_option("--class", class_file, "class JSON file")->required();

    auto* soa = app.add_subcommand("soa-run", "Run SOA over a sequence; CSV t,pred,correct,mistakes");
    soa->add_option("--class", class_file, "class JSON file")->required();
    soa->add_option("--sequence", sequence_file, "sequence JSON file")->required();

    llab::ExperimentConfig config;
    auto* sim = app.add_subcommand("simulate", "Run a learner against a sequence or adversary and check its bounds");
    sim->add_option("--class", config.class_source, "class file, example1:M or random:NX,NY,NH")->required();
    auto* seq_opt = sim->add_option("--sequence", config.sequence_file, "sequence JSON file");
    sim->add_option("--adversary", config.adversary, "noisy, minmass or treewalk")
        ->check(CLI::IsMember({"noisy", "minmass", "treewalk"}))
        ->excludes(seq_opt);
    sim->add_option("--rate", config.noise_rate, "label noise rate of the noisy adversary")->check(CLI::Range(0.0, 1.0));
    sim->add_option("--learner", config.learner, "aag, finitey or soa")->check(CLI::IsMember({"aag", "finitey", "soa"}));
    sim->add_option("--horizon", config.horizon, "rounds (default: sequence length)");
    sim->add_option("--trials", config.trials, "independent trials")->check(CLI::PositiveNumber);
    sim->add_option("--seed", config.seed, "random seed");
    sim->add_option("--out", config.out_prefix, "output prefix for PREFIX.json and PREFIX.csv");
    sim->add_option("--cap", config.cap_cells, "resource cap in table cells");
    sim->add_option("--budget", config.budget_override, "expert budget used instead of L");
    sim->add_option("--bound-scale", config.bound_scale, "multiply every regret bound (self-test hook)");

    std::uint64_t seed = llab::kDefaultAcceptanceSeed;
    auto* verify = app.add_subcommand("verify", "Run the full acceptance suite");
    verify->add_option("--seed", seed, "acceptance seed");
    verify->add_option("--out", out_file, "also write the report to this file");

    auto* rad = app.add_subcommand("rademacher", "Exact sequential Rademacher complexity of the loss class");
    rad->add_option("--class", class_file, "class JSON file")->required();
    rad->add_option("--horizon", horizon, "tree depth T")->required();

    unsigned m = 0;
    auto* ex1 = app.add_subcommand("example1", "Write the finite truncation class on m points");
    ex1->add_option("--m", m, "number of points")->required();
    ex1->add_option("--out", out_file, "output class file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*dims) return cmd_dims(class_file);
        if (*soa) return cmd_soa_run(class_file, sequence_file);
        if (*sim) return cmd_simulate(config);
        if (*verify) return cmd_verify(seed, out_file);
        if (*rad) return cmd_rademacher(class_file, horizon);
        if (*ex1) return cmd_example1(m, out_file);
    } catch (const llab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
