#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "bosedyn/run_registry.hpp"

int main(int argc, char** argv) {
    CLI::App app{"condensate and fluctuation dynamics laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "runs";
    std::vector<std::string> overrides;
    std::string emit_series, emit_out, emit_run;

    const std::vector<std::string> names = {"hartree", "nls",         "bogoliubov", "exact",
                                            "sweep",   "gn-constant", "check"};
    std::vector<CLI::App*> subs;
    for (const auto& n : names) {
        CLI::App* sub = app.add_subcommand(n);
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--set", overrides, "override key=value (dotted paths)");
        sub->add_option("--out", out_dir, "output directory");
        subs.push_back(sub);
    }
    CLI::App* emit = app.add_subcommand("emit-plotdata", "extract a series from a run");
    emit->add_option("--run", emit_run, "run directory")->required();
    emit->add_option("--series", emit_series, "series name")->required();
    emit->add_option("--csv", emit_out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (emit->parsed()) {
            bosedyn::emit_plotdata(emit_run, emit_series, emit_out);
            return 0;
        }
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (!subs[i]->parsed()) continue;
            const auto cmd = bosedyn::command_from_string(names[i]);
            const auto cfg = bosedyn::load_config(cmd, config_path, overrides, out_dir);
            const auto rec = bosedyn::dispatch(cfg);
            if (cmd == bosedyn::Command::check) {
                for (const auto& item : rec.summary.at("checks"))
                    std::printf("[%s] %s (%.3e)\n",
                                item.at("pass").get<bool>() ? "PASS" : "FAIL",
                                item.at("name").get<std::string>().c_str(),
                                item.at("value").get<double>());
            }
            if (!rec.message.empty()) std::cerr << "error: " << rec.message << "\n";
            std::printf("run %s -> %s (exit %d)\n", rec.run_id.c_str(), rec.run_dir.c_str(),
                        rec.exit_code);
            return rec.exit_code;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
