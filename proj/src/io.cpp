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

#include "cmoe/io.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "cmoe/errors.hpp"

namespace cmoe {

namespace {

void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
    if (!j.is_object()) {
        throw DomainError(std::string(what) + ": expected a JSON object");
    }
    const std::set<std::string_view> keys(allowed);
    for (const auto& [key, value] : j.items()) {
        if (!keys.contains(key)) {
            throw DomainError(std::string(what) + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
T required(const Json& j, const char* key, std::string_view what) {
    if (!j.contains(key)) {
        throw DomainError(std::string(what) + ": missing key '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string(what) + ": bad value for '" + key + "': " + e.what());
    }
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

Json dist_to_json(const TruncatedDist& d) {
    Json j;
    j["n_modes"] = d.n_modes();
    j["cutoff"] = d.cutoff();
    j["probs"] = std::vector<double>(d.probs().begin(), d.probs().end());
    j["tail_mass"] = d.tail_mass();
    return j;
}

TruncatedDist dist_from_json(const Json& j) {
    constexpr std::string_view what = "distribution";
    reject_unknown_keys(j, {"n_modes", "cutoff", "probs", "tail_mass"}, what);
    return TruncatedDist(required<std::vector<double>>(j, "probs", what), required<int>(j, "n_modes", what),
                         required<int>(j, "cutoff", what), required<double>(j, "tail_mass", what));
}

Json density_to_json(const DensityMatrix& rho) {
    const auto& m = rho.entries();
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json rr = Json::array();
        Json ii = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ii.push_back(m(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ii));
    }
    Json j;
    j["cutoff"] = rho.cutoff();
    j["real"] = std::move(re);
    j["imag"] = std::move(im);
    return j;
}

DensityMatrix density_from_json(const Json& j) {
    constexpr std::string_view what = "density matrix";
    reject_unknown_keys(j, {"cutoff", "real", "imag"}, what);
    const int cutoff = required<int>(j, "cutoff", what);
    const auto re = required<std::vector<std::vector<double>>>(j, "real", what);
    const auto im = j.contains("imag") ? required<std::vector<std::vector<double>>>(j, "imag", what)
                                       : std::vector<std::vector<double>>(re.size(), std::vector<double>(re.size()));
    const auto dim = static_cast<std::size_t>(cutoff) + 1;
    if (cutoff < 0 || re.size() != dim || im.size() != dim) {
        throw DomainError("density matrix: dimensions do not match cutoff");
    }
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        if (re[r].size() != dim || im[r].size() != dim) {
            throw DomainError("density matrix: ragged rows");
        }
        for (std::size_t c = 0; c < dim; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {re[r][c], im[r][c]};
        }
    }
    return DensityMatrix(std::move(m));
}

Json channel_to_json(const ChannelSpec& spec) {
    Json j;
    j["family"] = std::string(to_string(spec.family));
    j["lambda"] = spec.lambda;
    j["kappa"] = spec.kappa;
    j["env_energy"] = spec.env_energy;
    j["n_modes"] = spec.n_modes;
    return j;
}

ChannelSpec channel_from_json(const Json& j) {
    constexpr std::string_view what = "channel";
    reject_unknown_keys(j, {"family", "lambda", "kappa", "env_energy", "n_modes"}, what);
    ChannelSpec spec;
    spec.family = parse_family(required<std::string>(j, "family", what));
    spec.lambda = j.value("lambda", spec.lambda);
    spec.kappa = j.value("kappa", spec.kappa);
    spec.env_energy = j.value("env_energy", spec.env_energy);
    spec.n_modes = j.value("n_modes", spec.n_modes);
    spec.validate();
    return spec;
}

Json problem_to_json(const OptimizationProblem& problem) {
    Json j;
    j["channel"] = channel_to_json(problem.channel);
    j["target_entropy"] = problem.target_entropy;
    j["cutoff"] = problem.cutoff;
    j["starts"] = problem.starts;
    j["seed"] = problem.seed;
    j["max_iterations"] = problem.max_iterations;
    j["gradient_tolerance"] = problem.gradient_tolerance;
    j["stall_tolerance"] = problem.stall_tolerance;
    j["stall_window"] = problem.stall_window;
    j["gap_tolerance"] = problem.gap_tolerance;
    return j;
}

OptimizationProblem problem_from_json(const Json& j) {
    constexpr std::string_view what = "optimization problem";
    reject_unknown_keys(j,
                        {"channel", "target_entropy", "cutoff", "starts", "seed", "max_iterations",
                         "gradient_tolerance", "stall_tolerance", "stall_window", "gap_tolerance"},
                        what);
    OptimizationProblem p;
    p.channel = channel_from_json(required<Json>(j, "channel", what));
    p.target_entropy = required<double>(j, "target_entropy", what);
    p.cutoff = j.value("cutoff", p.cutoff);
    p.starts = j.value("starts", p.starts);
    p.seed = j.value("seed", p.seed);
    p.max_iterations = j.value("max_iterations", p.max_iterations);
    p.gradient_tolerance = j.value("gradient_tolerance", p.gradient_tolerance);
    p.stall_tolerance = j.value("stall_tolerance", p.stall_tolerance);
    p.stall_window = j.value("stall_window", p.stall_window);
    p.gap_tolerance = j.value("gap_tolerance", p.gap_tolerance);
    p.validate();
    return p;
}

Json result_to_json(const OptimizationResult& r) {
    Json j;
    j["label"] = r.label;
    j["target_entropy"] = r.target_entropy;
    j["input_entropy"] = r.input_entropy;
    j["output_entropy"] = r.output_entropy;
    j["bound"] = r.bound;
    j["gap"] = r.gap;
    j["tv_to_geometric"] = r.tv_to_geometric;
    j["gradient_norm"] = r.gradient_norm;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["best_start"] = r.best_start;
    j["start_kind"] = r.start_kind;
    j["start_objectives"] = r.start_objectives;
    j["argmin"] = dist_to_json(r.argmin);
    return j;
}

Json report_to_json(const VerificationReport& r) {
    Json j;
    j["instance"] = r.instance;
    j["family"] = r.family;
    j["n_modes"] = r.n_modes;
    j["input_entropy"] = r.input_entropy;
    j["output_entropy"] = r.output_entropy;
    j["bound"] = r.bound;
    j["margin"] = r.margin;
    j["input_tail"] = r.input_tail;
    j["output_tail"] = r.output_tail;
    j["max_leak"] = r.max_leak;
    j["tail_entropy_bound"] = r.tail_entropy_bound;
    j["tolerance"] = r.tolerance;
    j["valid"] = r.valid;
    j["violation"] = r.violation();
    j["flag"] = r.flag;
    return j;
}

Json reports_to_json(std::span<const VerificationReport> reports) {
    Json j = Json::array();
    for (const auto& r : reports) {
        j.push_back(report_to_json(r));
    }
    return j;
}

std::string reports_to_csv(std::span<const VerificationReport> reports) {
    std::ostringstream os;
    os << "# cmoe-report-csv v1\n"
       << "instance,family,n_modes,input_entropy,output_entropy,bound,margin,input_tail,output_tail,max_leak,"
          "tail_entropy_bound,tolerance,valid,violation,flag\n"
       << std::setprecision(17);
    for (const auto& r : reports) {
        os << csv_field(r.instance) << ',' << csv_field(r.family) << ',' << r.n_modes << ',' << r.input_entropy << ','
           << r.output_entropy << ',' << r.bound << ',' << r.margin << ',' << r.input_tail << ',' << r.output_tail
           << ',' << r.max_leak << ',' << r.tail_entropy_bound << ',' << r.tolerance << ',' << (r.valid ? 1 : 0) << ','
           << (r.violation() ? 1 : 0) << ',' << csv_field(r.flag) << '\n';
    }
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace cmoe
