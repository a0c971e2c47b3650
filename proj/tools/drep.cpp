#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include <drep/report.hpp>

int main(int argc, char **argv)
{
    CLI::App app{"Exact computations for flat connections on iterated Laurent series fields"};

    drep::RunOptions opt;
    std::optional<int> precision;
    std::string format = "kv";
    std::vector<std::string> args;
    app.add_option("--precision", precision, "terms per level for series expansions (default 32)")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-window", opt.max_window, "largest window half-width")->check(CLI::Range(8, 4096));
    app.add_option("--seed", opt.seed, "seed for the cyclic-vector search");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"kv", "json-like"}));

    app.add_option("args", args, "[command] spec-file; the command defaults to the file's [task] command")
        ->expected(1, 2)
        ->required();
    app.footer("Commands: cohomology, irregularity, cyclic, epsilon, verify.\n"
               "Exit codes: 0 success, 2 unstabilized window computation, 3 validation failure.");
    CLI11_PARSE(app, argc, argv);
    opt.precision = precision;
    const std::string path = args.back();
    std::optional<std::string> command;
    if (args.size() == 2) {
        command = args.front();
        if (!drep::spec_commands().count(*command)) {
            std::cerr << "UnknownKey: unknown command '" << *command << "'\n";
            return 3;
        }
    }

    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "IOError: cannot read " << path << "\n";
        return 3;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    try {
        drep::SpecFile spec = drep::parse_spec(buf.str());
        if (command) {
            spec.task.command = *command;
        }
        const drep::Report r = drep::run(spec, opt);
        std::cout << drep::render(r, format == "kv" ? drep::ReportFormat::kv : drep::ReportFormat::json_like);
        if (!r.diagnostic.empty()) {
            std::cerr << r.diagnostic << "\n";
        }
        return r.exit_code;
    } catch (const drep::error &e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return drep::exit_code_for(e);
    }
}
