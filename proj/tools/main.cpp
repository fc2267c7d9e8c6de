#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cfgloc/error.hpp"
#include "cfgloc/harness/bench.hpp"
#include "cfgloc/harness/generate.hpp"
#include "cfgloc/harness/inject.hpp"
#include "cfgloc/net/parse.hpp"
#include "cfgloc/pipeline.hpp"

namespace fs = std::filesystem;
using namespace cfgloc;

namespace {

constexpr int kCompliant = 0;
constexpr int kViolated = 1;
constexpr int kFailure = 2;

struct LocalizeArgs {
    std::string configs, topology, requirements;
    int maxFailures = -1;
    double timeBudget = 600;
    std::string rankMode = "smallest";
    bool noDedup = false;
    std::string mss = "bisect";
    std::string output = "json";
    bool dump = false;
    std::string scenarioLog;
    unsigned threads = 0;
};

report::Sources readSources(const net::Network& network, const fs::path& dir) {
    report::Sources out;
    for (const auto& [name, cfg] : network.routers) {
        std::ifstream in(dir / cfg.file);
        std::string line;
        auto& lines = out[cfg.file];
        while (std::getline(in, line)) lines.push_back(line);
    }
    return out;
}

int runLocalize(const LocalizeArgs& a) {
    net::Network network = net::loadNetwork(a.configs, a.topology);
    for (const auto& [name, cfg] : network.routers)
        for (const auto& w : cfg.warnings) std::cerr << "warning: " << w.str() << "\n";
    auto requirements = req::parseRequirements(net::readFile(a.requirements), network.topology);

    LocalizeOptions opts;
    opts.maxFailuresOverride = a.maxFailures;
    opts.timeBudgetSeconds = a.timeBudget;
    opts.rankMode = *report::parseRankMode(a.rankMode);
    opts.dedupScenarios = !a.noDedup;
    opts.mss = a.mss == "linear" ? mcs::MssStrategy::Linear : mcs::MssStrategy::Bisect;
    opts.threads = a.threads;
    std::ofstream scenarioLog;
    if (!a.scenarioLog.empty()) {
        scenarioLog.open(a.scenarioLog);
        if (!scenarioLog) throw Error("cannot write " + a.scenarioLog);
        opts.scenarioLog = &scenarioLog;
    }
    if (a.dump) opts.dump = &std::cerr;

    LocalizeResult res = localize(network, requirements, opts);
    const report::Report& rep = res.report;
    if (a.output == "text") {
        report::Sources sources = readSources(network, a.configs);
        report::writeText(std::cout, rep, &sources);
    } else {
        report::writeJson(std::cout, rep);
    }
    for (const auto& r : rep.requirements)
        if (!r.error.empty()) std::cerr << "error: requirement " << r.id << ": " << r.error << "\n";
    if (rep.status() == "error") return kFailure;
    if (rep.violated()) return kViolated;
    if (!rep.complete()) {
        std::cerr << "error: time budget exhausted before compliance could be established\n";
        return kFailure;
    }
    return kCompliant;
}

struct InjectArgs {
    std::string configs, topology, type, out;
    std::uint64_t seed = 1;
};

int runInject(const InjectArgs& a) {
    net::Network network = net::loadNetwork(a.configs, a.topology);
    auto type = harness::parseErrorType(a.type);
    harness::Injection inj = harness::inject(network, *type, a.seed);
    fs::path out(a.out);
    fs::create_directories(out / "configs");
    for (const auto& [name, cfg] : inj.network.routers) {
        fs::path dst = out / "configs" / cfg.file;
        if (network.router(name).file == cfg.file && net::structurallyEqual(network.router(name), cfg)) {
            fs::copy_file(fs::path(a.configs) / cfg.file, dst, fs::copy_options::overwrite_existing);
        } else {
            std::ofstream(dst) << net::printConfig(cfg);
        }
    }
    fs::copy_file(a.topology, out / "topology.json", fs::copy_options::overwrite_existing);

    nlohmann::ordered_json j;
    j["type"] = harness::errorTypeName(inj.error.type);
    j["seed"] = inj.error.seed;
    j["description"] = inj.error.description;
    j["items"] = nlohmann::ordered_json::array();
    for (const auto& item : inj.error.items) {
        nlohmann::ordered_json spans = nlohmann::ordered_json::array();
        for (const auto& s : item.spans) spans.push_back(s.str());
        j["items"].push_back({{"router", item.router}, {"sites", item.sites}, {"spans", spans}});
    }
    std::ofstream(out / "truth.json") << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\n";
    return 0;
}

int runGenerate(const std::string& kind, int size, const std::string& out) {
    harness::generate(kind, size).write(out);
    return 0;
}

struct BenchArgs {
    std::string suite = "table2";
    std::vector<int> sizes{8};
    int treeLevels = 3;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    double timeBudget = 600;
    std::string output;
    std::string mss = "bisect";
    unsigned threads = 0;
};

int runBench(const BenchArgs& a) {
    harness::SuiteOptions so;
    so.ringSizes = a.sizes;
    so.treeLevels = a.treeLevels;
    so.seeds = a.seeds;
    harness::BenchOptions bo;
    bo.timeBudgetSeconds = a.timeBudget;
    bo.threads = a.threads;
    bo.mss = a.mss == "linear" ? mcs::MssStrategy::Linear : mcs::MssStrategy::Bisect;
    std::ofstream file;
    if (!a.output.empty()) {
        file.open(a.output);
        if (!file) throw Error("cannot write " + a.output);
    }
    std::ostream& out = a.output.empty() ? std::cout : file;
    harness::writeCsvHeader(out);
    harness::runSuite(a.suite, so, bo, [&](const harness::Trial& t) {
        harness::writeCsv(out, t);
        out.flush();
        if (!t.violated)
            std::cerr << "note: " << harness::errorTypeName(t.type) << " on " << t.network << " seed " << t.seed
                      << ": no injection produced a violation\n";
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Localize configuration errors that violate network requirements"};
    app.require_subcommand(1);

    LocalizeArgs la;
    auto* loc = app.add_subcommand("localize", "Find the configuration statements responsible for violations");
    loc->add_option("--configs", la.configs, "Directory of router configurations (*.cfg)")
        ->required()
        ->check(CLI::ExistingDirectory);
    loc->add_option("--topology", la.topology, "Topology JSON")->required()->check(CLI::ExistingFile);
    loc->add_option("--requirements", la.requirements, "Requirements JSON")->required()->check(CLI::ExistingFile);
    loc->add_option("--max-failures", la.maxFailures, "Override every requirement's failure budget")
        ->check(CLI::NonNegativeNumber);
    loc->add_option("--time-budget", la.timeBudget, "Seconds for the whole run")->capture_default_str();
    loc->add_option("--rank-mode", la.rankMode, "smallest|three|intersect|all")
        ->capture_default_str()
        ->check(CLI::IsMember({"smallest", "three", "intersect", "all"}));
    loc->add_flag("--no-dedup-scenarios", la.noDedup, "Report every violating failure set");
    loc->add_option("--mss-strategy", la.mss, "linear|bisect")
        ->capture_default_str()
        ->check(CLI::IsMember({"linear", "bisect"}));
    loc->add_option("--output", la.output, "json|text")->capture_default_str()->check(CLI::IsMember({"json", "text"}));
    loc->add_flag("--dump-constraints", la.dump, "Write the labeled constraints to stderr");
    loc->add_option("--scenario-log", la.scenarioLog, "Write one JSON line per violating scenario to this file");
    loc->add_option("--threads", la.threads, "Worker threads (0: hardware concurrency)");

    InjectArgs ia;
    auto* inj = app.add_subcommand("inject", "Inject one synthetic configuration error");
    inj->add_option("--configs", ia.configs)->required()->check(CLI::ExistingDirectory);
    inj->add_option("--topology", ia.topology)->required()->check(CLI::ExistingFile);
    inj->add_option("--type", ia.type, "OmitNw|OmitNb|OmitAcl|OmitAclRule|ExtraAcl")
        ->required()
        ->check(CLI::IsMember({"OmitNw", "OmitNb", "OmitAcl", "OmitAclRule", "ExtraAcl"}));
    inj->add_option("--seed", ia.seed)->required();
    inj->add_option("--out", ia.out, "Output directory: configs/, topology.json, truth.json")->required();

    std::string genKind;
    int genSize = 8;
    std::string genOut;
    auto* gen = app.add_subcommand("generate", "Write a synthetic network with its requirements");
    gen->add_option("--kind", genKind, "ring|tree|campus")->required()->check(CLI::IsMember({"ring", "tree", "campus"}));
    gen->add_option("--size", genSize, "Routers for ring, levels for tree")->capture_default_str();
    gen->add_option("--out", genOut)->required();

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "Run the error-injection suite and print CSV");
    bench->add_option("--suite", ba.suite)->capture_default_str()->check(CLI::IsMember({"table2"}));
    bench->add_option("--sizes", ba.sizes, "Ring sizes")->delimiter(',')->capture_default_str();
    bench->add_option("--tree-levels", ba.treeLevels)->capture_default_str();
    bench->add_option("--seeds", ba.seeds)->delimiter(',')->capture_default_str();
    bench->add_option("--time-budget", ba.timeBudget, "Seconds per trial")->capture_default_str();
    bench->add_option("--mss-strategy", ba.mss)->check(CLI::IsMember({"linear", "bisect"}));
    bench->add_option("--threads", ba.threads);
    bench->add_option("--output", ba.output, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kFailure;
    }

    try {
        if (loc->parsed()) return runLocalize(la);
        if (inj->parsed()) return runInject(ia);
        if (gen->parsed()) return runGenerate(genKind, genSize, genOut);
        if (bench->parsed()) return runBench(ba);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kFailure;
}
