/**
 * Copyright 2026 The qmultinomial Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmn/qmn.hpp"

namespace qmn::cli {

namespace {

using json = nlohmann::ordered_json;
using Matrix = InterferometerMatrix<double>;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string subcommand;

    // Matrix source; exactly one (verify: at most one).
    std::optional<double> bs;
    std::optional<int> fourier_k;
    std::string tritter;
    std::string matrix_path;
    bool allow_nonunitary = false;

    std::string input;
    std::string format = "json";
    double tolerance = kUnitarityTolerance;

    int mode = 1;
    double threshold = kSuppressionThreshold;

    int k_max = 4;
    int m_max = 5;
    int seeds = 20;
    std::uint64_t seed = 0;
    double max_deviation = 1e-10;

    int sources() const {
        return bs.has_value() + fourier_k.has_value() + !tritter.empty() + !matrix_path.empty();
    }
};

double default_tolerance() {
    const char* env = std::getenv(kToleranceEnv);
    if (env == nullptr || *env == '\0') return kUnitarityTolerance;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) {
        throw ConfigError(std::string(kToleranceEnv) + " must be a positive number, got '" + env + "'");
    }
    return v;
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (field.empty() || *end != '\0') throw ConfigError("cannot parse number '" + field + "' in '" + text + "'");
        out.push_back(v);
    }
    return out;
}

Matrix load_matrix(const RunConfig& cfg) {
    if (cfg.sources() != 1) {
        throw ConfigError("exactly one of --bs, --fourier, --tritter, --matrix is required");
    }
    if (cfg.bs) return beam_splitter(*cfg.bs);
    if (cfg.fourier_k) return fourier(*cfg.fourier_k);
    if (!cfg.tritter.empty()) {
        const auto p = parse_doubles(cfg.tritter);
        if (p.size() != 4) throw ConfigError("--tritter expects theta12,theta13,theta23,phase");
        return tritter(p[0], p[1], p[2], p[3]);
    }
    return read_matrix(cfg.matrix_path, {cfg.tolerance, cfg.allow_nonunitary});
}

std::string describe_source(const RunConfig& cfg) {
    std::ostringstream out;
    if (cfg.bs) out << "bs " << *cfg.bs;
    else if (cfg.fourier_k) out << "fourier " << *cfg.fourier_k;
    else if (!cfg.tritter.empty()) out << "tritter " << cfg.tritter;
    else if (!cfg.matrix_path.empty()) out << "file " << cfg.matrix_path;
    else out << "random grid";
    return out.str();
}

Composition load_input(const RunConfig& cfg, const Matrix& u) {
    if (cfg.input.empty()) throw ConfigError("--input is required");
    Composition n = Composition::parse(cfg.input);
    if (n.ports() != u.ports()) {
        throw ConfigError("--input has " + std::to_string(n.ports()) + " entries but the matrix has " +
                          std::to_string(u.ports()) + " ports");
    }
    return n;
}

json counts(const Composition& c) { return json(std::vector<int>(c.counts().begin(), c.counts().end())); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

/// CSV of doc["rows"]; array-valued fields expand into key_1..key_k columns.
void write_csv(const json& rows, std::ostream& out) {
    if (rows.empty()) return;
    const json& first = rows.front();
    bool head = true;
    for (const auto& [key, value] : first.items()) {
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                out << (head ? "" : ",") << key << '_' << i + 1;
                head = false;
            }
        } else {
            out << (head ? "" : ",") << key;
            head = false;
        }
    }
    out << '\n';
    for (const auto& row : rows) {
        bool first_cell = true;
        for (const auto& [key, value] : row.items()) {
            if (value.is_array()) {
                for (const auto& x : value) {
                    out << (first_cell ? "" : ",") << csv_cell(x);
                    first_cell = false;
                }
            } else {
                out << (first_cell ? "" : ",") << csv_cell(value);
                first_cell = false;
            }
        }
        out << '\n';
    }
}

void emit(const json& doc, const RunConfig& cfg, std::ostream& out) {
    if (cfg.format == "csv") write_csv(doc["rows"], out);
    else out << doc.dump(2) << '\n';
}

int cmd_dist(const RunConfig& cfg, std::ostream& out) {
    const Matrix u = load_matrix(cfg);
    const Composition n = load_input(cfg, u);
    const bool fermions = n.collision_free();
    json rows = json::array();
    for (const Composition& c : enumerate_compositions(n.total(), n.ports())) {
        const auto rep = p_quantum(u, n, c);
        const double classical = rep.output_prefactor.as<double>() * rep.incoherent_sum;
        json row;
        row["output"] = counts(c);
        row["p_boson"] = clamp_for_report(rep.probability);
        row["p_classical"] = clamp_for_report(classical);
        if (fermions) row["p_fermion"] = clamp_for_report(transition_probability(u, n, c, Statistics::fermion));
        row["ratio"] = optional_number(rep.ratio);
        rows.push_back(std::move(row));
    }
    json doc;
    doc["command"] = "dist";
    doc["matrix"] = describe_source(cfg);
    doc["k"] = u.ports();
    doc["input"] = counts(n);
    doc["rows"] = std::move(rows);
    emit(doc, cfg, out);
    return kOk;
}

int cmd_moments(const RunConfig& cfg, std::ostream& out) {
    const Matrix u = load_matrix(cfg);
    const Composition n = load_input(cfg, u);
    if (cfg.mode < 1 || cfg.mode > u.ports()) {
        throw ConfigError("--mode must lie in 1.." + std::to_string(u.ports()));
    }
    const int port = cfg.mode - 1;
    const auto rep = moment_report(u, n, port);
    const auto brute_q = moments_bruteforce(output_distribution(u, n, Statistics::boson), port, 4);
    const auto brute_cl = moments_bruteforce(output_distribution(u, n, Statistics::distinguishable), port, 4);

    json rows = json::array();
    for (int r = 1; r <= 4; ++r) {
        json row;
        row["r"] = r;
        row["factorial_quantum_closed"] = rep.factorial_quantum[r - 1];
        row["factorial_quantum_brute"] = brute_q[r - 1];
        row["abs_diff_quantum"] = std::abs(rep.factorial_quantum[r - 1] - brute_q[r - 1]);
        row["factorial_classical_closed"] = rep.factorial_classical[r - 1];
        row["factorial_classical_brute"] = brute_cl[r - 1];
        row["abs_diff_classical"] = std::abs(rep.factorial_classical[r - 1] - brute_cl[r - 1]);
        row["kappa_quantum"] = rep.cumulants_quantum[r - 1];
        row["kappa_classical"] = rep.cumulants_classical[r - 1];
        rows.push_back(std::move(row));
    }
    json covs = json::array();
    for (int l = 0; l < u.ports(); ++l) {
        if (l == port) continue;
        const auto cov = covariance(u, n, port, l);
        covs.push_back({{"other_mode", l + 1}, {"quantum", cov.quantum}, {"classical", cov.classical}});
    }
    json doc;
    doc["command"] = "moments";
    doc["matrix"] = describe_source(cfg);
    doc["input"] = counts(n);
    doc["mode"] = cfg.mode;
    doc["mean"] = rep.mean;
    doc["variance_quantum"] = rep.variance_quantum;
    doc["variance_classical"] = rep.variance_classical;
    doc["variance_ratio"] =
        rep.variance_classical > 0 ? json(rep.variance_quantum / rep.variance_classical) : json(nullptr);
    doc["covariances"] = std::move(covs);
    doc["rows"] = std::move(rows);
    emit(doc, cfg, out);
    return kOk;
}

struct GridStats {
    double permanent_dev = 0;
    double determinant_dev = 0;
    double normalization_err = 0;
    long transitions = 0;
};

/// Oracle equivalence and normalization for every input of total m <= m_max.
void verify_matrix(const Matrix& u, int m_max, GridStats& stats) {
    const int k = u.ports();
    for (int m = 1; m <= m_max; ++m) {
        const auto comps = enumerate_compositions(m, k);
        for (const Composition& n : comps) {
            const bool fermions = n.collision_free();
            double total_b = 0, total_d = 0, total_f = 0;
            for (const Composition& c : comps) {
                const auto rep = p_quantum(u, n, c);
                total_b += rep.probability;
                total_d += rep.output_prefactor.as<double>() * rep.incoherent_sum;
                stats.permanent_dev = std::max(stats.permanent_dev, std::abs(rep.probability - p_via_permanent(u, n, c)));
                ++stats.transitions;
                if (fermions && c.collision_free()) {
                    const double pf = p_fermionic(u, n, c).probability;
                    total_f += pf;
                    stats.determinant_dev = std::max(stats.determinant_dev, std::abs(pf - p_via_determinant(u, n, c)));
                }
            }
            stats.normalization_err = std::max({stats.normalization_err, std::abs(total_b - 1), std::abs(total_d - 1)});
            if (fermions) stats.normalization_err = std::max(stats.normalization_err, std::abs(total_f - 1));
        }
    }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    if (cfg.sources() > 1) throw ConfigError("at most one matrix source may be given to verify");
    if (cfg.k_max < 2 || cfg.m_max < 1 || cfg.seeds < 1) throw ConfigError("verify needs --k >= 2, --m >= 1, --seeds >= 1");
    json rows = json::array();
    GridStats worst;
    auto record = [&](int k, json seed, const GridStats& s) {
        json row;
        row["k"] = k;
        row["seed"] = std::move(seed);
        row["transitions"] = s.transitions;
        row["max_permanent_deviation"] = s.permanent_dev;
        row["max_determinant_deviation"] = s.determinant_dev;
        row["max_normalization_error"] = s.normalization_err;
        rows.push_back(std::move(row));
        worst.permanent_dev = std::max(worst.permanent_dev, s.permanent_dev);
        worst.determinant_dev = std::max(worst.determinant_dev, s.determinant_dev);
        worst.normalization_err = std::max(worst.normalization_err, s.normalization_err);
        worst.transitions += s.transitions;
    };
    if (cfg.sources() == 1) {
        const Matrix u = load_matrix(cfg);
        GridStats s;
        verify_matrix(u, cfg.m_max, s);
        record(u.ports(), nullptr, s);
    } else {
        for (int k = 2; k <= cfg.k_max; ++k) {
            for (int s = 0; s < cfg.seeds; ++s) {
                const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(s);
                GridStats stats;
                verify_matrix(random_unitary(k, seed), cfg.m_max, stats);
                record(k, seed, stats);
            }
        }
    }
    const bool pass = worst.permanent_dev < cfg.max_deviation && worst.determinant_dev < cfg.max_deviation &&
                      worst.normalization_err <= cfg.max_deviation;
    json doc;
    doc["command"] = "verify";
    doc["matrix"] = describe_source(cfg);
    doc["k_max"] = cfg.k_max;
    doc["m_max"] = cfg.m_max;
    doc["tolerance"] = cfg.max_deviation;
    doc["transitions"] = worst.transitions;
    doc["max_permanent_deviation"] = worst.permanent_dev;
    doc["max_determinant_deviation"] = worst.determinant_dev;
    doc["max_normalization_error"] = worst.normalization_err;
    doc["pass"] = pass;
    doc["rows"] = std::move(rows);
    emit(doc, cfg, out);
    return pass ? kOk : kVerificationFailure;
}

int cmd_suppress(const RunConfig& cfg, std::ostream& out) {
    const Matrix u = load_matrix(cfg);
    const Composition n = load_input(cfg, u);
    json rows = json::array();
    bool all_confirmed = true;
    for (const auto& rec : scan_suppressed(u, n, cfg.threshold)) {
        const double oracle = p_via_permanent(u, n, rec.output);
        const bool confirmed = oracle < cfg.threshold;
        all_confirmed = all_confirmed && confirmed;
        json row;
        row["output"] = counts(rec.output);
        row["probability"] = clamp_for_report(rec.probability);
        row["oracle_probability"] = clamp_for_report(oracle);
        row["confirmed"] = confirmed;
        row["rule"] = rec.predicted_by_rule ? json(std::string(to_string(*rec.predicted_by_rule))) : json(nullptr);
        rows.push_back(std::move(row));
    }
    json doc;
    doc["command"] = "suppress";
    doc["matrix"] = describe_source(cfg);
    doc["input"] = counts(n);
    doc["threshold"] = cfg.threshold;
    doc["rows"] = std::move(rows);
    emit(doc, cfg, out);
    return all_confirmed ? kOk : kVerificationFailure;
}

void add_matrix_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--bs", cfg.bs, "Beam splitter with transmittance T");
    cmd->add_option("--fourier", cfg.fourier_k, "k-port Fourier (DFT) interferometer");
    cmd->add_option("--tritter", cfg.tritter, "Tritter theta12,theta13,theta23,phase (radians)");
    cmd->add_option("--matrix", cfg.matrix_path, "JSON matrix file {k, re, im}");
    cmd->add_flag("--allow-nonunitary", cfg.allow_nonunitary, "Skip the unitarity check for --matrix");
    cmd->add_option("--tol", cfg.tolerance, "Unitarity tolerance (default from QMN_TOLERANCE or 1e-10)");
    cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Exact photon-number statistics of linear interferometers", "qmn"};
    app.require_subcommand(1);

    try {
        cfg.tolerance = default_tolerance();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    auto* dist = app.add_subcommand("dist", "Output distribution for bosons, distinguishable particles and fermions");
    auto* moments = app.add_subcommand("moments", "Factorial moments, cumulants and covariances of one output mode");
    auto* verify = app.add_subcommand("verify", "Routing-class probabilities against the permanent oracle");
    auto* suppress = app.add_subcommand("suppress", "List suppressed output compositions");
    for (auto* cmd : {dist, moments, verify, suppress}) add_matrix_options(cmd, cfg);
    for (auto* cmd : {dist, moments, suppress}) cmd->add_option("--input", cfg.input, "Input composition, e.g. 1,2")->required();
    moments->add_option("--mode", cfg.mode, "Output mode, 1-based");
    suppress->add_option("--threshold", cfg.threshold, "Absolute probability threshold");
    verify->add_option("--k", cfg.k_max, "Largest port count on the random grid");
    verify->add_option("--m", cfg.m_max, "Largest photon number");
    verify->add_option("--seeds", cfg.seeds, "Random unitaries per port count");
    verify->add_option("--seed", cfg.seed, "First seed");
    verify->add_option("--max-deviation", cfg.max_deviation, "Pass threshold for deviations");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (dist->parsed()) return cmd_dist(cfg, out);
        if (moments->parsed()) return cmd_moments(cfg, out);
        if (verify->parsed()) return cmd_verify(cfg, out);
        if (suppress->parsed()) return cmd_suppress(cfg, out);
        return kConfigError;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return kCapacityError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const UnitarityError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

} // namespace qmn::cli
