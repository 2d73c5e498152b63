// Copyright 2026 The cmoe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cmoe/bounds.hpp"
#include "cmoe/errors.hpp"
#include "cmoe/io.hpp"
#include "cmoe/kernels.hpp"
#include "cmoe/optimizer.hpp"
#include "cmoe/specfun.hpp"
#include "cmoe/wehrl.hpp"

namespace cmoe::cli {

namespace {

// Bad flags, bad config, bad grids.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

double parse_number(const std::string& token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + token + "'");
    }
    if (used != token.size() || !std::isfinite(v)) {
        throw UsageError("not a number: '" + token + "'");
    }
    return v;
}

// Plain number, or g(E) for the thermal entropy at mean energy E.
double parse_entropy_token(const std::string& token) {
    if (token.size() > 3 && token.rfind("g(", 0) == 0 && token.back() == ')') {
        const double e = parse_number(trim(std::string_view(token).substr(2, token.size() - 3)));
        if (e < 0.0) {
            throw UsageError("g() needs a nonnegative energy: '" + token + "'");
        }
        return g(e);
    }
    return parse_number(token);
}

std::uint64_t parse_uint(const std::string& token) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
        throw UsageError("not a seed: '" + token + "'");
    }
    try {
        return std::stoull(token);
    } catch (const std::exception&) {
        throw UsageError("seed out of range: '" + token + "'");
    }
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

bool is_wehrl(const RunConfig& cfg) {
    return cfg.family == "wehrl";
}

ChannelSpec channel_of(const RunConfig& cfg) {
    if (is_wehrl(cfg)) {
        throw UsageError("family 'wehrl' is not a channel here");
    }
    ChannelSpec spec;
    spec.family = parse_family(cfg.family);
    spec.lambda = cfg.lambda;
    spec.kappa = cfg.kappa;
    spec.env_energy = cfg.env_energy;
    spec.n_modes = cfg.modes;
    spec.validate();
    return spec;
}

void require_modes(const RunConfig& cfg) {
    if (cfg.modes < 1) {
        throw UsageError("--modes must be at least 1");
    }
}

void write_out(const std::string& path, const std::string& content) {
    try {
        write_file_atomic(path, content);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
    } else {
        write_out(path, content);
    }
}

// --out prefix for verify: "x", "x.csv" and "x.json" all mean x.csv + x.json.
std::string out_prefix(const std::string& out) {
    std::filesystem::path p(out);
    if (p.extension() == ".csv" || p.extension() == ".json") {
        p.replace_extension();
    }
    return p.string();
}

int exit_for(std::size_t violations, std::size_t flagged) {
    if (violations > 0) {
        return kExitViolation;
    }
    return flagged > 0 ? kExitNumeric : kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_modes(cfg);
    SweepConfig sc;
    if (is_wehrl(cfg)) {
        sc.specs.emplace_back(WehrlMeasure{cfg.modes});
    } else {
        sc.specs.emplace_back(channel_of(cfg));
    }
    sc.input = parse_input_family(cfg.input);
    sc.cutoff = cfg.cutoff.value_or(cfg.modes == 1 ? 40 : 15);
    if (sc.cutoff < 0) {
        throw UsageError("--cutoff must be nonnegative");
    }
    if (dense_size(cfg.modes, sc.cutoff) > kMaxDenseEntries) {
        throw UsageError("modes/cutoff exceed the dense budget");
    }
    sc.seeds = parse_seeds(cfg.seeds.empty() ? "100" : cfg.seeds);
    if (cfg.concentration <= 0.0) {
        throw UsageError("--concentration must be positive");
    }
    sc.concentration = cfg.concentration;
    sc.input_energy = cfg.input_energy;
    if (cfg.tol) {
        if (!(*cfg.tol >= 0.0)) {
            throw UsageError("--tol must be nonnegative");
        }
        sc.tolerances.classical_margin = *cfg.tol;
        sc.tolerances.wehrl_margin = *cfg.tol;
    }

    const auto reports = sweep(sc);
    const auto summary = summarize(reports);
    const std::string csv = reports_to_csv(reports);
    if (cfg.out.empty()) {
        out << csv;
    } else {
        const std::string prefix = out_prefix(cfg.out);
        write_out(prefix + ".csv", csv);
        write_out(prefix + ".json", reports_to_json(reports).dump(2) + "\n");
    }
    for (const auto& r : reports) {
        if (r.violation()) {
            err << "violation: " << r.instance << " margin=" << std::setprecision(17) << r.margin << "\n";
        } else if (!r.valid) {
            err << "flagged: " << r.instance << " (" << r.flag << ")\n";
        }
    }
    err << "verified " << summary.total << " instances: " << summary.valid << " valid, " << summary.flagged
        << " flagged, " << summary.violations << " violations, min margin " << std::setprecision(6)
        << summary.min_margin << "\n";
    return exit_for(summary.violations, summary.flagged);
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_modes(cfg);
    const ChannelSpec channel = channel_of(cfg);
    const auto seeds = parse_seeds(cfg.seeds.empty() ? "1" : cfg.seeds);
    const int cutoff = cfg.cutoff.value_or(30);
    const double gap_tol = cfg.tol.value_or(1e-6);
    if (cfg.starts < 1) {
        throw UsageError("--starts must be at least 1");
    }

    Json doc;
    int code = kExitOk;
    if (cfg.grid) {
        const auto grid = parse_grid(*cfg.grid);
        for (double s : grid) {
            OptimizationProblem p;
            p.channel = channel;
            p.target_entropy = s;
            p.cutoff = cutoff;
            p.validate();
        }
        const auto summary = counterexample_search(channel, grid, seeds, cutoff, cfg.starts, gap_tol);
        doc["schema"] = "cmoe-search v1";
        doc["channel"] = channel_to_json(channel);
        doc["cutoff"] = cutoff;
        doc["starts"] = cfg.starts;
        doc["seeds"] = seeds;
        Json points = Json::array();
        bool all_converged = true;
        for (const auto& pt : summary.points) {
            Json jp;
            jp["target_entropy"] = pt.target_entropy;
            jp["min_gap"] = pt.min_gap;
            jp["best"] = result_to_json(pt.best);
            points.push_back(std::move(jp));
            all_converged = all_converged && pt.best.converged;
        }
        doc["points"] = std::move(points);
        doc["min_gap"] = summary.min_gap;
        doc["candidates"] = summary.candidates;
        err << "searched " << summary.points.size() << " targets: min gap " << std::setprecision(6) << summary.min_gap
            << ", " << summary.candidates << " candidates\n";
        code = exit_for(summary.candidates, all_converged ? 0 : 1);
    } else {
        if (!cfg.entropy) {
            throw UsageError("optimize needs --entropy or --grid");
        }
        OptimizationProblem p;
        p.channel = channel;
        p.target_entropy = *cfg.entropy;
        p.cutoff = cutoff;
        p.starts = cfg.starts;
        p.seed = seeds.front();
        p.gap_tolerance = gap_tol;
        p.validate();
        const auto result = minimize_output_entropy(p);
        doc["schema"] = "cmoe-optimize v1";
        doc["problem"] = problem_to_json(p);
        doc["result"] = result_to_json(result);
        err << "output entropy " << std::setprecision(12) << result.output_entropy << ", bound " << result.bound
            << ", gap " << std::setprecision(6) << result.gap << ", tv to geometric " << result.tv_to_geometric
            << (result.converged ? "" : " (not converged)") << "\n";
        code = exit_for(result.gap < -gap_tol ? 1 : 0, result.converged ? 0 : 1);
    }
    // timestamp stays out of the hash
    Json payload = doc;
    doc["payload_fnv1a64"] = hex64(fnv1a64(payload.dump()));
    doc["timestamp"] = iso_timestamp();
    emit(cfg.out, doc.dump(2) + "\n", out);
    return code;
}

std::string params_of(const ChannelSpec& spec) {
    std::ostringstream os;
    os << std::setprecision(17);
    switch (spec.family) {
        case Family::thinning:
            os << "lambda=" << spec.lambda;
            break;
        case Family::attenuator:
            os << "lambda=" << spec.lambda << ";E=" << spec.env_energy;
            break;
        case Family::additive_noise:
            os << "E=" << spec.env_energy;
            break;
        case Family::amplifier:
        case Family::contravariant:
            os << "kappa=" << spec.kappa << ";E=" << spec.env_energy;
            break;
    }
    return os.str();
}

int cmd_tables(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require_modes(cfg);
    const auto grid = parse_grid(cfg.grid.value_or("0:5:11"));
    std::vector<std::pair<BoundSpec, std::string>> rows;
    auto add_family = [&](const std::string& name) {
        if (name == "wehrl") {
            rows.emplace_back(WehrlMeasure{cfg.modes}, "-");
            return;
        }
        RunConfig c = cfg;
        c.family = name;
        const ChannelSpec spec = channel_of(c);
        rows.emplace_back(spec, params_of(spec));
    };
    if (cfg.family == "all") {
        for (const char* name : {"thinning", "attenuator", "amplifier", "additive_noise", "contravariant", "wehrl"}) {
            add_family(name);
        }
    } else {
        add_family(cfg.family);
    }

    std::ostringstream os;
    os << "# cmoe-table-csv v1\n"
       << "family,params,s,f(s),n,n*f(s/n)\n"
       << std::setprecision(17);
    for (const auto& [spec, params] : rows) {
        const std::string family =
            std::holds_alternative<WehrlMeasure>(spec) ? "wehrl" : std::string(to_string(std::get<ChannelSpec>(spec).family));
        for (double s : grid) {
            os << family << ',' << params << ',' << s << ',' << single_copy_bound(spec, s) << ',' << cfg.modes << ','
               << lifted_bound(spec, s) << '\n';
        }
    }
    emit(cfg.out, os.str(), out);
    return kExitOk;
}

int cmd_kernel_dump(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    RunConfig c = cfg;
    c.modes = 1;
    const ChannelSpec spec = channel_of(c);
    const int cutoff = cfg.cutoff.value_or(10);
    if (cutoff < 0 || (cfg.out_cutoff && *cfg.out_cutoff < 0)) {
        throw UsageError("cutoffs must be nonnegative");
    }
    const auto kernel = build_channel(spec, cutoff, cfg.out_cutoff);
    emit(cfg.out, kernel_to_csv(kernel, spec.describe()), out);
    return kExitOk;
}

int cmd_wehrl(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_modes(cfg);
    const int cutoff = cfg.cutoff.value_or(40);
    if (cutoff < 0) {
        throw UsageError("--cutoff must be nonnegative");
    }
    Tolerances tol;
    if (cfg.tol) {
        tol.wehrl_margin = *cfg.tol;
    }
    const auto seeds = parse_seeds(cfg.seeds.empty() ? "1" : cfg.seeds);
    VerificationReport report;
    std::string state = cfg.state;
    try {
        if (!cfg.density.empty()) {
            if (cfg.modes != 1) {
                throw UsageError("--density is single-mode");
            }
            Json j;
            try {
                j = Json::parse(read_file(cfg.density));
            } catch (const nlohmann::json::exception& e) {
                throw UsageError(std::string("bad density file: ") + e.what());
            }
            state = "file:" + cfg.density;
            report = verify_wehrl(density_from_json(j), tol);
        } else if (cfg.modes > 1) {
            if (dense_size(cfg.modes, cutoff) > kMaxDenseEntries) {
                throw UsageError("modes/cutoff exceed the dense budget");
            }
            if (state == "thermal") {
                report = verify_wehrl(geometric_product(cfg.input_energy, cutoff, cfg.modes), tol);
            } else if (state == "random") {
                report = verify_wehrl(random_dist(cfg.modes, cutoff, seeds.front(), cfg.concentration), tol);
            } else {
                throw UsageError("multimode wehrl supports --state thermal or random");
            }
        } else {
            std::optional<DensityMatrix> rho;
            if (state == "thermal") {
                rho = DensityMatrix::thermal(cfg.input_energy, cutoff);
            } else if (state == "vacuum") {
                rho = DensityMatrix::fock(0, cutoff);
            } else if (state == "fock") {
                const double k = std::round(cfg.input_energy);
                if (k < 0.0 || k > cutoff) {
                    throw UsageError("fock level must lie in [0, cutoff]");
                }
                rho = DensityMatrix::fock(static_cast<int>(k), cutoff);
            } else if (state == "coherent") {
                rho = DensityMatrix::coherent(cfg.input_energy, cutoff);
            } else if (state == "random") {
                rho = DensityMatrix::random_mixed(cutoff, cutoff + 1, seeds.front());
            } else {
                throw UsageError("unknown --state '" + state + "'");
            }
            report = verify_wehrl(*rho, tol);
        }
    } catch (const NumericError& e) {
        report = VerificationReport{};
        report.family = "wehrl";
        report.n_modes = cfg.modes;
        report.valid = false;
        report.flag = e.what();
    }
    report.instance = "wehrl state=" + state;
    Json doc;
    doc["schema"] = "cmoe-wehrl v1";
    doc["state"] = state;
    doc["cutoff"] = cutoff;
    doc["report"] = report_to_json(report);
    emit(cfg.out, doc.dump(2) + "\n", out);
    err << "input entropy " << std::setprecision(12) << report.input_entropy << ", wehrl entropy "
        << report.output_entropy << ", bound " << report.bound << ", margin " << std::setprecision(6) << report.margin
        << (report.valid ? "" : " (flagged: " + report.flag + ")") << "\n";
    return exit_for(report.violation() ? 1 : 0, report.valid ? 0 : 1);
}

const std::map<std::string, std::string>& config_keys() {
    // config key -> flag
    static const std::map<std::string, std::string> keys = {
        {"family", "--family"},   {"lambda", "--lambda"},         {"kappa", "--kappa"},
        {"env_energy", "--env-energy"}, {"modes", "--modes"},     {"cutoff", "--cutoff"},
        {"out_cutoff", "--out-cutoff"}, {"entropy", "--entropy"}, {"grid", "--grid"},
        {"seeds", "--seeds"},     {"out", "--out"},               {"tol", "--tol"},
        {"input", "--input"},     {"input_energy", "--input-energy"}, {"concentration", "--concentration"},
        {"starts", "--starts"},   {"state", "--state"},           {"density", "--density"},
    };
    return keys;
}

std::string json_text(const Json& v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_integer() || v.is_number_unsigned()) {
        return v.dump();
    }
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) {
            if (!e.is_number() && !e.is_string()) {
                throw UsageError("config list entries must be numbers or strings");
            }
            s += (s.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
        }
        return s;
    }
    throw UsageError("config value must be a string, integer or list");
}

void apply_config_value(RunConfig& cfg, const std::string& key, const Json& v) {
    try {
        if (key == "family" || key == "input" || key == "state" || key == "out" || key == "density") {
            const std::string s = v.get<std::string>();
            if (key == "family") cfg.family = s;
            if (key == "input") cfg.input = s;
            if (key == "state") cfg.state = s;
            if (key == "out") cfg.out = s;
            if (key == "density") cfg.density = s;
        } else if (key == "grid" || key == "seeds") {
            if (key == "grid") cfg.grid = json_text(v);
            if (key == "seeds") cfg.seeds = json_text(v);
        } else if (key == "modes") {
            cfg.modes = v.get<int>();
        } else if (key == "starts") {
            cfg.starts = v.get<int>();
        } else if (key == "cutoff") {
            cfg.cutoff = v.get<int>();
        } else if (key == "out_cutoff") {
            cfg.out_cutoff = v.get<int>();
        } else if (key == "entropy") {
            cfg.entropy = v.is_string() ? parse_entropy_token(v.get<std::string>()) : v.get<double>();
        } else if (key == "tol") {
            cfg.tol = v.get<double>();
        } else if (key == "lambda") {
            cfg.lambda = v.get<double>();
        } else if (key == "kappa") {
            cfg.kappa = v.get<double>();
        } else if (key == "env_energy") {
            cfg.env_energy = v.get<double>();
        } else if (key == "input_energy") {
            cfg.input_energy = v.get<double>();
        } else if (key == "concentration") {
            cfg.concentration = v.get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config key '" + key + "': " + e.what());
    }
}

void load_config(RunConfig& cfg, const std::string& path, const CLI::App& sub) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
    if (!j.is_object()) {
        throw UsageError("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            if (!value.is_string() || value.get<std::string>() != cfg.command) {
                throw UsageError("config command does not match '" + cfg.command + "'");
            }
            continue;
        }
        const auto it = config_keys().find(key);
        if (it == config_keys().end()) {
            throw UsageError("config: unknown key '" + key + "'");
        }
        if (sub.get_option(it->second)->count() > 0) {
            continue;  // flags win
        }
        apply_config_value(cfg, key, value);
    }
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
    const std::string t = trim(text);
    if (t.empty()) {
        throw UsageError("empty grid");
    }
    std::vector<double> grid;
    if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) {
            throw UsageError("grid must be lo:hi:count");
        }
        const double lo = parse_entropy_token(parts[0]);
        const double hi = parse_entropy_token(parts[1]);
        const auto count = parse_uint(parts[2]);
        if (count < 1 || count > 1000000 || hi < lo) {
            throw UsageError("grid needs count >= 1 and lo <= hi");
        }
        if (count == 1 && hi != lo) {
            throw UsageError("single-point grid needs lo == hi");
        }
        for (std::uint64_t i = 0; i < count; ++i) {
            grid.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
        }
    } else {
        for (const auto& token : split(t, ',')) {
            grid.push_back(parse_entropy_token(token));
        }
    }
    for (double s : grid) {
        if (!(s >= 0.0)) {
            throw UsageError("grid entropies must be nonnegative");
        }
    }
    return grid;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
    const std::string t = trim(text);
    std::vector<std::uint64_t> seeds;
    if (t.find(',') != std::string::npos) {
        for (const auto& token : split(t, ',')) {
            seeds.push_back(parse_uint(token));
        }
    } else if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 2) {
            throw UsageError("seed range must be a:b");
        }
        const auto a = parse_uint(parts[0]);
        const auto b = parse_uint(parts[1]);
        if (b <= a || b - a > 10000000) {
            throw UsageError("seed range must be nonempty");
        }
        for (auto s = a; s < b; ++s) {
            seeds.push_back(s);
        }
    } else {
        const auto n = parse_uint(t);
        if (n < 1 || n > 10000000) {
            throw UsageError("seed count must be positive");
        }
        for (std::uint64_t s = 0; s < n; ++s) {
            seeds.push_back(s);
        }
    }
    return seeds;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"cmoe: constrained minimum output entropy checks for bosonic and classical channels"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string config_path;
    int cutoff = 0;
    int out_cutoff = 0;
    double tol = 0.0;
    std::string entropy;

    auto add_flags = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run config; flags override it");
        sub->add_option("--family", cfg.family,
                        "thinning, attenuator, amplifier, additive_noise, contravariant, wehrl (tables: also all)");
        sub->add_option("--lambda", cfg.lambda, "transmissivity");
        sub->add_option("--kappa", cfg.kappa, "gain");
        sub->add_option("--env-energy", cfg.env_energy, "environment thermal energy");
        sub->add_option("--modes", cfg.modes, "number of modes");
        sub->add_option("--cutoff", cutoff, "per-mode photon-number cutoff");
        sub->add_option("--out-cutoff", out_cutoff, "kernel output cutoff");
        sub->add_option("--entropy", entropy, "target input entropy in nats, or g(E)");
        sub->add_option("--grid", cfg.grid, "entropy grid: lo:hi:count or a comma list");
        sub->add_option("--seeds", cfg.seeds, "N, a:b or a comma list");
        sub->add_option("--out", cfg.out, "output path (stdout when absent)");
        sub->add_option("--tol", tol, "margin / gap tolerance");
        sub->add_option("--input", cfg.input, "random, perturbed_geometric, geometric, point_mass");
        sub->add_option("--input-energy", cfg.input_energy, "mean energy of geometric inputs and states");
        sub->add_option("--concentration", cfg.concentration, "Dirichlet concentration of random inputs");
        sub->add_option("--starts", cfg.starts, "optimizer starts");
        sub->add_option("--state", cfg.state, "wehrl state: thermal, vacuum, fock, coherent, random");
        sub->add_option("--density", cfg.density, "wehrl density-matrix JSON file");
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"verify", "check the entropy bound on seeded inputs"},
             {"optimize", "minimize output entropy at fixed input entropy"},
             {"tables", "tabulate bound functions"},
             {"kernel-dump", "write a channel's photon-number kernel"},
             {"wehrl", "Wehrl entropy of a state against its bound"}}) {
        auto* sub = app.add_subcommand(name, help);
        add_flags(sub);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        CLI::App* sub = nullptr;
        for (auto* s : subs) {
            if (s->parsed()) {
                sub = s;
            }
        }
        cfg.command = sub->get_name();
        if (sub->get_option("--cutoff")->count() > 0) cfg.cutoff = cutoff;
        if (sub->get_option("--out-cutoff")->count() > 0) cfg.out_cutoff = out_cutoff;
        if (sub->get_option("--tol")->count() > 0) cfg.tol = tol;
        if (sub->get_option("--entropy")->count() > 0) cfg.entropy = parse_entropy_token(trim(entropy));
        if (!config_path.empty()) {
            load_config(cfg, config_path, *sub);
        }
        if (cfg.command == "verify") return cmd_verify(cfg, out, err);
        if (cfg.command == "optimize") return cmd_optimize(cfg, out, err);
        if (cfg.command == "tables") return cmd_tables(cfg, out, err);
        if (cfg.command == "kernel-dump") return cmd_kernel_dump(cfg, out, err);
        return cmd_wehrl(cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace cmoe::cli
