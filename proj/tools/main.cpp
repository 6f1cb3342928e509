#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maxmart/core_paths.hpp"
#include "maxmart/decompositions.hpp"
#include "maxmart/random_times.hpp"
#include "maxmart/suites.hpp"

namespace {

using maxmart::Path;
using maxmart::TimeGrid;

Path read_path_csv(const std::string& file) {
    std::ifstream f(file);
    if (!f) throw std::invalid_argument("cannot open " + file);
    std::string line;
    if (!std::getline(f, line)) throw std::invalid_argument("empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,value") throw std::invalid_argument("expected header 't,value'");
    std::vector<double> ts, vs;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 't,value'");
        try {
            ts.push_back(std::stod(line.substr(0, comma)));
            vs.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": bad number");
        }
    }
    if (ts.size() < 2) throw std::invalid_argument("need at least 2 rows");
    const double step = ts[1] - ts[0];
    if (step <= 0.0) throw std::invalid_argument("time column must increase");
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double expect = ts[0] + step * double(i);
        if (std::abs(ts[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw std::invalid_argument("time grid is not uniform at row " + std::to_string(i + 1));
    }
    return Path(TimeGrid(ts[0], step, ts.size()), std::move(vs));
}

int cmd_decompose(const std::string& input, const std::string& out_csv,
                  const std::string& out_json) {
    Path raw = read_path_csv(input);
    for (double v : raw.values)
        if (!(v > 0.0)) throw std::invalid_argument("decompose needs strictly positive values");
    // normalize to N_0 = 1 (scale invariance of the ratio)
    const double x0 = raw[0];
    for (auto& v : raw.values) v /= x0;
    raw.values[0] = 1.0;

    const auto dec = maxmart::decompose(raw);
    const auto g = maxmart::last_passage(dec.N, dec.S);
    const auto [rho, r_rho] = maxmart::pseudo_stopping_time(dec.N, dec.S, g);

    std::ofstream c(out_csv, std::ios::binary);
    if (!c) throw std::invalid_argument("cannot open " + out_csv);
    c << "t,N,S,Z,M,A\n";
    c.precision(17);
    for (std::size_t i = 0; i < dec.N.size(); ++i)
        c << dec.N.grid.time_at(i) << "," << dec.N[i] << "," << dec.S[i] << "," << dec.Z[i] << ","
          << dec.M[i] << "," << dec.A[i] << "\n";

    const std::size_t last = dec.N.size() - 1;
    double mbar = dec.M[0];
    double sko_residual = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        mbar = std::max(mbar, dec.M[i]);
        sko_residual = std::max(sko_residual, std::abs(dec.A[i] - (mbar - 1.0)));
    }
    nlohmann::json j;
    j["n_points"] = dec.N.size();
    j["normalized_by"] = x0;
    j["g_index"] = g.attained() ? nlohmann::json(g.index) : nlohmann::json(-1);
    j["rho_index"] = rho.attained() ? nlohmann::json(rho.index) : nlohmann::json(-1);
    j["r_rho"] = r_rho;
    j["terminal"] = {{"N", dec.N[last]}, {"S", dec.S[last]}, {"Z", dec.Z[last]},
                     {"M", dec.M[last]}, {"A", dec.A[last]}};
    j["terminal_martingale_residual"] = dec.M[last] - (1.0 + dec.A[last]);
    j["sko_sup_residual"] = sko_residual;
    std::ofstream jf(out_json, std::ios::binary);
    if (!jf) throw std::invalid_argument("cannot open " + out_json);
    jf << j.dump(2) << "\n";
    return 0;
}

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification engine for supremum-based path decompositions"};
    app.require_subcommand(1);

    // verify ----------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run verification suites and write a JSON report");
    std::string config_file, generator, suites_arg, out_file = "report.json";
    std::string dump_times, dump_samples;
    std::uint64_t n_paths = 100000, seed = 42;
    double step = 1e-3, horizon = 0.0;
    unsigned workers = 0;
    verify->add_option("--config", config_file, "flat JSON config; flags override its values");
    verify->add_option("--generator", generator, "generator name (must match the suite)");
    verify->add_option("--n-paths", n_paths, "number of paths");
    verify->add_option("--step", step, "grid step");
    verify->add_option("--horizon", horizon, "override the suite's default horizon/window");
    verify->add_option("--seed", seed, "master seed");
    verify->add_option("--suite", suites_arg, "comma-separated suite names (or 'all')");
    verify->add_option("--workers", workers, "worker threads (0 = hardware)");
    verify->add_option("--out", out_file, "report JSON file");
    verify->add_option("--dump-times", dump_times, "write per-path random-time records CSV");
    verify->add_option("--dump-samples", dump_samples, "write per-path scalar samples CSV");

    // decompose --------------------------------------------------------------
    auto* dec = app.add_subcommand("decompose", "decompose a path CSV into t,N,S,Z,M,A");
    std::string in_csv, out_csv = "decomposed.csv", out_json = "decomposed.json";
    dec->add_option("input", in_csv, "input CSV with header t,value")->required();
    dec->add_option("--out", out_csv, "output CSV");
    dec->add_option("--summary", out_json, "output JSON summary");

    // list-suites -------------------------------------------------------------
    auto* ls = app.add_subcommand("list-suites", "print available suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ls->parsed()) {
            for (const auto& s : maxmart::suite_registry())
                std::cout << s.name << "  [" << s.generator << ", n >= " << s.min_n << "]  "
                          << s.description << "\n";
            return 0;
        }
        if (dec->parsed()) {
            return cmd_decompose(in_csv, out_csv, out_json);
        }

        // verify
        maxmart::SuiteParams params;
        std::vector<std::string> suites;
        if (!config_file.empty()) {
            std::ifstream f(config_file);
            if (!f) throw std::invalid_argument("cannot open config " + config_file);
            nlohmann::json j;
            f >> j;
            if (j.contains("n_paths")) params.n_paths = j["n_paths"].get<std::uint64_t>();
            if (j.contains("step")) params.step = j["step"].get<double>();
            if (j.contains("horizon")) params.horizon = j["horizon"].get<double>();
            if (j.contains("seed")) params.seed = j["seed"].get<std::uint64_t>();
            if (j.contains("workers")) params.workers = j["workers"].get<unsigned>();
            if (j.contains("generator")) params.generator = j["generator"].get<std::string>();
            if (j.contains("out") && !verify->count("--out")) out_file = j["out"].get<std::string>();
            if (j.contains("suite")) {
                if (j["suite"].is_array())
                    for (const auto& s : j["suite"]) suites.push_back(s.get<std::string>());
                else
                    suites = split_csv_list(j["suite"].get<std::string>());
            }
        }
        // flags override the config file
        if (verify->count("--n-paths")) params.n_paths = n_paths;
        if (verify->count("--step")) params.step = step;
        if (verify->count("--horizon")) params.horizon = horizon;
        if (verify->count("--seed")) params.seed = seed;
        if (verify->count("--workers")) params.workers = workers;
        if (verify->count("--generator")) params.generator = generator;
        if (!suites_arg.empty()) suites = split_csv_list(suites_arg);
        if (suites.size() == 1 && suites[0] == "all") {
            suites.clear();
            for (const auto& s : maxmart::suite_registry()) suites.push_back(s.name);
        }
        if (suites.empty()) throw std::invalid_argument("no suite selected (--suite)");

        // reject unknown names and bad params before any simulation
        for (const auto& s : suites) maxmart::validate_suite_params(s, params);

        params.dump_samples = dump_samples;
        nlohmann::json out;
        out["reports"] = nlohmann::json::array();
        bool all_pass = true;
        for (const auto& s : suites) {
            const auto rep = maxmart::run_suite(s, params);
            all_pass = all_pass && rep.pass;
            out["reports"].push_back(nlohmann::json::parse(maxmart::report_to_json(rep)));
            std::cout << (rep.pass ? "[PASS] " : "[FAIL] ") << s << "  statistic="
                      << rep.statistic << " threshold=" << rep.threshold << " ("
                      << rep.runtime_ms << " ms)\n";
        }
        if (!dump_times.empty()) {
            const auto* info = maxmart::find_suite(suites.front());
            maxmart::dump_random_times_csv(
                params.generator.empty() ? info->generator : params.generator, params, dump_times);
        }
        out["summary"] = {{"pass", all_pass},
                          {"total", suites.size()},
                          {"seed", params.seed},
                          {"n_paths", params.n_paths},
                          {"step", params.step}};
        std::ofstream of(out_file, std::ios::binary);
        if (!of) throw std::invalid_argument("cannot open " + out_file);
        of << out.dump(2) << "\n";
        return all_pass ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
