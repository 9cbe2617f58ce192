#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hpng/analysis.hpp"
#include "hpng/errors.hpp"
#include "hpng/model.hpp"
#include "hpng/parallel.hpp"
#include "hpng/plt.hpp"
#include "hpng/property.hpp"
#include "hpng/simulate.hpp"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kResource = 2, kBadArgs = 3, kInternal = 4 };

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw hpng::ConfigError("cannot write " + path);
    out << text;
}

hpng::Model load_valid(const std::string& path) {
    hpng::Model m = hpng::load_model(path);
    const auto diags = hpng::validate(m);
    if (!diags.empty()) {
        for (const auto& d : diags) std::cerr << path << ": " << d.code << ": " << d.message << '\n';
        throw hpng::ParseError(path, "model failed validation");
    }
    return m;
}

struct Common {
    std::string model;
    int threads = 0;
    std::size_t samples = 100000;
    int iterations = 5;
    std::uint64_t seed = 1;
    bool plainMc = false;
    bool csv = false;
};

hpng::McConfig mc_config(const Common& c) {
    hpng::McConfig cfg;
    cfg.samples = c.samples;
    cfg.iterations = c.iterations;
    cfg.seed = c.seed;
    cfg.adaptive = !c.plainMc;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transient analysis of hybrid Petri nets with general transitions"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--threads", common.threads, "Worker threads (default HPNG_THREADS or hardware)");

    auto* validate = app.add_subcommand("validate", "Parse and check a model file");
    validate->add_option("model", common.model)->required();

    double tauMax = 0.0;
    std::string dotOut, jsonOut;
    auto* plt = app.add_subcommand("plt", "Build the parametric location tree");
    plt->add_option("model", common.model)->required();
    plt->add_option("--tau-max", tauMax, "Time horizon")->required();
    plt->add_option("--dot", dotOut, "Graphviz output ('-' for stdout)");
    plt->add_option("--json", jsonOut, "JSON output ('-' for stdout)");

    double tPrime = 0.0;
    std::string methodName = "intervals", propertyText, out;
    auto* transient = app.add_subcommand("transient", "Probability that a property holds at t'");
    transient->add_option("model", common.model)->required();
    transient->add_option("--time", tPrime, "Time point t'")->required();
    transient->add_option("--tau-max", tauMax, "Tree horizon (default t')");
    transient->add_option("--method", methodName, "intervals, simplices or polytopes");
    transient->add_option("--property", propertyText, "Conjunction of m(P) OP int / x(P) OP real");
    transient->add_option("--samples", common.samples, "Samples per iteration");
    transient->add_option("--iterations", common.iterations, "Monte Carlo iterations");
    transient->add_option("--seed", common.seed);
    transient->add_flag("--plain-mc", common.plainMc, "Disable VEGAS grid adaptation");
    transient->add_option("--out", out, "Result JSON file (default stdout)");

    hpng::SimConfig sim;
    std::string traceOut;
    auto* simulate = app.add_subcommand("simulate", "Estimate a probability by simulation");
    simulate->add_option("model", common.model)->required();
    simulate->add_option("--time", tPrime)->required();
    simulate->add_option("--property", propertyText)->required();
    simulate->add_option("--confidence", sim.confidence)->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--halfwidth", sim.halfWidth)->check(CLI::PositiveNumber);
    simulate->add_option("--max-runs", sim.maxRuns);
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--trace", traceOut, "CSV trace of the first run");
    simulate->add_option("--out", out);

    auto* compare = app.add_subcommand("compare", "All numeric methods plus simulation");
    compare->add_option("model", common.model)->required();
    compare->add_option("--time", tPrime)->required();
    compare->add_option("--tau-max", tauMax);
    compare->add_option("--property", propertyText);
    compare->add_option("--samples", common.samples);
    compare->add_option("--iterations", common.iterations);
    compare->add_option("--seed", common.seed);
    compare->add_option("--confidence", sim.confidence)->check(CLI::Range(0.0, 1.0));
    compare->add_option("--halfwidth", sim.halfWidth)->check(CLI::PositiveNumber);
    compare->add_flag("--csv", common.csv, "CSV rows, one per method, instead of JSON");
    compare->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadArgs;
    }

    try {
        const unsigned threads = hpng::resolve_threads(common.threads);
        if (validate->parsed()) {
            hpng::Model m = hpng::load_model(common.model);
            const auto diags = hpng::validate(m);
            for (const auto& d : diags) std::cerr << common.model << ": " << d.code << ": " << d.message << '\n';
            if (!diags.empty()) return kInvalid;
            std::cout << common.model << ": ok (" << m.dplaces.size() + m.cplaces.size() << " places, "
                      << m.transitions.size() << " transitions)\n";
            return kOk;
        }
        const hpng::Model model = load_valid(common.model);
        if (plt->parsed()) {
            const hpng::PLTree tree = hpng::build_plt(model, tauMax);
            if (!dotOut.empty()) emit(dotOut, hpng::to_dot(tree));
            if (!jsonOut.empty()) emit(jsonOut, hpng::to_json(tree));
            if (dotOut.empty() && jsonOut.empty())
                std::cout << tree.nodes.size() << " locations\n";
            return kOk;
        }
        const hpng::Property prop = hpng::parse_property(propertyText, model);
        if (transient->parsed()) {
            const hpng::Method method = hpng::parse_method(methodName);
            const hpng::PLTree tree = hpng::build_plt(model, tauMax > 0 ? tauMax : tPrime);
            const auto r = hpng::analyze(tree, tPrime, prop, method, mc_config(common), threads);
            emit(out, hpng::result_json(r));
            return kOk;
        }
        if (simulate->parsed()) {
            if (!traceOut.empty()) {
                hpng::CounterRng rng(sim.seed, 0);
                emit(traceOut, hpng::trace_csv(model, hpng::simulate_run(model, tPrime, {}, &rng)));
            }
            const auto e = hpng::estimate_probability(model, tPrime, prop, sim, threads);
            emit(out, hpng::simulation_json(e, tPrime, prop));
            return kOk;
        }
        if (compare->parsed()) {
            const hpng::PLTree tree = hpng::build_plt(model, tauMax > 0 ? tauMax : tPrime);
            sim.seed = common.seed;
            nlohmann::ordered_json row;
            row["tPrime"] = tPrime;
            row["property"] = prop.text;
            std::ostringstream csv;
            csv << "method,p,error,ms\n";
            std::size_t dim = 0;
            for (auto m : {hpng::Method::Intervals, hpng::Method::Simplices, hpng::Method::Polytopes}) {
                const auto r = hpng::analyze(tree, tPrime, prop, m, mc_config(common), threads);
                dim = std::max(dim, r.dimension);
                row[r.method] = {{"p", r.total}, {"error", r.error}, {"wallTimeMs", r.wallTimeMs}};
                csv << r.method << ',' << r.total << ',' << r.error << ',' << r.wallTimeMs << '\n';
            }
            const auto e = hpng::estimate_probability(model, tPrime, prop, sim, threads);
            row["simulation"] = {{"p", e.p}, {"ciHalfWidth", e.halfWidth}, {"runs", e.runs}, {"wallTimeMs", e.wallTimeMs}};
            row["dimension"] = dim;
            csv << "simulation," << e.p << ',' << e.halfWidth << ',' << e.wallTimeMs << '\n';
            emit(out, common.csv ? csv.str() : row.dump(2) + "\n");
            return kOk;
        }
    } catch (const hpng::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const hpng::ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kResource;
    } catch (const hpng::RunawayError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kResource;
    } catch (const hpng::RangeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadArgs;
    } catch (const hpng::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kBadArgs;
}
