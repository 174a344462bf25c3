// Acceptance suite: one PASS/FAIL/WARN line per criterion, plus a verdict
// JSON document. Exit status 0 iff every hard criterion passed.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "oldroyd/acceptance.hpp"

int main(int argc, char** argv)
{
    using namespace oldroyd::cli;
    CLI::App app{"oldroyd acceptance suite"};
    SuiteOptions opt;
    std::vector<std::string> ids;
    std::string json_path;
    bool verbose = false;
    app.add_flag("--quick", opt.quick, "reduced resolutions and horizons");
    app.add_flag("-v,--verbose", verbose, "progress of the run-based criteria on stderr");
    app.add_option("--out-dir", opt.out_dir, "directory for run artefacts");
    app.add_option("--json", json_path, "verdict document path (default <out-dir>/acceptance.verdict.json)");
    app.add_option("ids", ids, "criteria to run (default all)");
    CLI11_PARSE(app, argc, argv);
    opt.quiet = !verbose;

    std::vector<Criterion> criteria;
    try {
        criteria = select_criteria(ids);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    const auto verdicts = run_criteria(criteria, opt, [](const Verdict& v) {
        std::printf("%s\n", summary_line(v).c_str());
        if (!v.note.empty())
            std::printf("       note: %s\n", v.note.c_str());
        std::fflush(stdout);
    });

    std::filesystem::create_directories(opt.out_dir);
    if (json_path.empty())
        json_path = (opt.out_dir / "acceptance.verdict.json").string();
    nlohmann::json meta;
    meta["quick"] = opt.quick;
    std::ofstream(json_path) << verdict_document("acceptance", verdicts, meta).dump(2) << '\n';
    return all_pass(verdicts) ? 0 : 1;
}
