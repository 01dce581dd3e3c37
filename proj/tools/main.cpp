#include "cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    lpiso::cli::JobSpec job;
    CLI::App app{"lpiso: disjointness tests, disintegrations and isometries of L^p presentations"};
    app.add_option("verb", job.verb, "sigma | disintegrate | isometry | verify")
        ->required()
        ->check(CLI::IsMember({"sigma", "disintegrate", "isometry", "verify"}));
    app.add_option("inputs", job.inputs, "input JSON files")->required();
    long precision = -1;
    app.add_option("--precision,-k", precision, "precision exponent k (bounds are 2^-k)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--budget,-n", job.budget, "stage budget n")->check(CLI::NonNegativeNumber);
    app.add_option("--strategy", job.strategy, "stage search")
        ->check(CLI::IsMember({"whitebox", "dovetail"}));
    app.add_option("--seed", job.seed, "seed for probe vectors");
    app.add_option("--probes", job.probes, "probe vectors for isometry verification");
    app.add_option("--report", job.report, "report path (default: stdout)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return lpiso::cli::kParse;
    }
    if (precision >= 0) {
        job.precision = precision;
    }
    return lpiso::cli::run(job);
}
