// Copyright 2026 The dqkd Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dqkd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "dqkd/errors.hpp"
#include "dqkd/optimizer.hpp"
#include "dqkd/protosim.hpp"
#include "dqkd/serialize.hpp"
#include "dqkd/verify.hpp"

namespace dqkd::cli {

std::string to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::E:
        return "e";
    case SweepVariable::Xi:
        return "xi";
    case SweepVariable::BackwardNoise:
        return "backward_noise";
    }
    return "?";
}

SweepVariable sweep_variable_from_string(const std::string &name) {
    if (name == "e") {
        return SweepVariable::E;
    }
    if (name == "xi") {
        return SweepVariable::Xi;
    }
    if (name == "backward_noise") {
        return SweepVariable::BackwardNoise;
    }
    throw InvalidArgument("unknown sweep variable '" + name + "'");
}

void validate(const SweepSpec &spec) {
    if (!std::isfinite(spec.start) || !std::isfinite(spec.stop) || !(spec.start < spec.stop)) {
        throw InvalidArgument("sweep: need finite start < stop");
    }
    if (spec.steps < 2) {
        throw InvalidArgument("sweep: steps must be >= 2");
    }
}

std::vector<SweepRow> run_sweep(const SweepSpec &spec) {
    validate(spec);
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(spec.steps));
    for (int k = 0; k < spec.steps; ++k) {
        // Pin the last point to stop exactly.
        const double value = k + 1 == spec.steps
                                 ? spec.stop
                                 : spec.start + (spec.stop - spec.start) * k / (spec.steps - 1);
        double xi = 0.0;
        double e = 0.0;
        switch (spec.variable) {
        case SweepVariable::E:
            e = value;
            xi = spec.xi.value_or(1.0 - 2.0 * e);
            break;
        case SweepVariable::Xi:
            xi = value;
            e = spec.e;
            break;
        case SweepVariable::BackwardNoise: {
            // A backward bit flip with probability b composes with the
            // forward error: the decoded bit is wrong if exactly one flips.
            const double ef = spec.forward_error;
            e = ef * (1.0 - value) + (1.0 - ef) * value;
            xi = spec.xi.value_or(1.0 - 2.0 * ef);
            break;
        }
        }
        rows.push_back({to_string(spec.variable), value, final_rate(xi, e)});
    }
    return rows;
}

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
    out << kSweepHeader << '\n';
    for (const SweepRow &row : rows) {
        const KeyRateReport &r = row.report;
        out << row.var << ',' << format_number(row.value) << ',' << format_number(r.xi) << ','
            << format_number(r.e) << ',' << format_number(r.r_pa) << ','
            << format_number(r.r_final) << ',' << format_number(r.r_final_raw) << ','
            << format_number(r.r_bb84) << ',' << (r.aborted ? 1 : 0) << '\n';
    }
}

namespace {

double parse_field(const std::string &text, const char *field) {
    if (text == "nan") {
        return std::nan("");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw ParseError(field, "not a number: '" + text + "'");
    }
    if (used != text.size()) {
        throw ParseError(field, "trailing characters in '" + text + "'");
    }
    return v;
}

} // namespace

std::vector<SweepRow> read_sweep_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kSweepHeader) {
        throw ParseError("header", "expected '" + std::string(kSweepHeader) + "'");
    }
    static constexpr const char *kFields[] = {"var",    "value",       "xi",     "e",      "r_pa",
                                              "r_final", "r_final_raw", "r_bb84", "aborted"};
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 9) {
            throw ParseError("row", "expected 9 cells, got " + std::to_string(cells.size()));
        }
        SweepRow row;
        row.var = cells[0];
        row.value = parse_field(cells[1], kFields[1]);
        KeyRateReport &r = row.report;
        r.xi = parse_field(cells[2], kFields[2]);
        r.e = parse_field(cells[3], kFields[3]);
        r.r_pa = parse_field(cells[4], kFields[4]);
        r.r_final = parse_field(cells[5], kFields[5]);
        r.r_final_raw = parse_field(cells[6], kFields[6]);
        r.r_bb84 = parse_field(cells[7], kFields[7]);
        if (cells[8] != "0" && cells[8] != "1") {
            throw ParseError(kFields[8], "expected 0 or 1");
        }
        r.aborted = cells[8] == "1";
        r.boundary_ok = boundary_satisfied(r.xi);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

/// Raised for unwritable or unreadable paths.
struct IoError : Error {
    using Error::Error;
};

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f << content;
    f.flush();
    if (!f) {
        throw IoError("write to '" + path + "' failed");
    }
}

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void render_pairs(std::ostream &out,
                  const std::vector<std::pair<std::string, std::string>> &rows) {
    std::size_t width = 0;
    for (const auto &[k, v] : rows) {
        width = std::max(width, k.size());
    }
    for (const auto &[k, v] : rows) {
        out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
    }
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

void render_report(std::ostream &out, const KeyRateReport &r) {
    render_pairs(out, {{"xi", format_number(r.xi)},
                       {"e", format_number(r.e)},
                       {"r_pa", format_number(r.r_pa)},
                       {"r_final", format_number(r.r_final)},
                       {"r_final_raw", format_number(r.r_final_raw)},
                       {"r_bb84", format_number(r.r_bb84)},
                       {"boundary_ok", yes_no(r.boundary_ok)},
                       {"aborted", yes_no(r.aborted)}});
}

void render_stats(std::ostream &out, const ProtocolStats &s) {
    render_pairs(out, {{"n", std::to_string(s.n)},
                       {"raw_key_rounds", std::to_string(s.m)},
                       {"check_rounds", std::to_string(s.check_count)},
                       {"discarded", std::to_string(s.discard_count)},
                       {"announced", std::to_string(s.announced_count)}});
    out << '\n'
        << std::left << std::setw(10) << "quantity" << std::setw(18) << "value" << std::setw(18)
        << "se" << "n_used" << '\n';
    const std::pair<const char *, const Estimate *> est[] = {
        {"f0", &s.f0}, {"f1", &s.f1}, {"fplus", &s.fplus}, {"fminus", &s.fminus}, {"e", &s.e}};
    for (const auto &[name, e] : est) {
        out << std::left << std::setw(10) << name << std::setw(18) << format_number(e->value)
            << std::setw(18) << format_number(e->se) << e->n_used << '\n';
    }
    out << std::left << std::setw(10) << "xi" << std::setw(18) << format_number(s.xi)
        << std::setw(18) << format_number(s.xi_se) << s.check_count << '\n'
        << '\n';
    render_pairs(out, {{"k_est", std::to_string(s.k_est)},
                       {"insufficient_data", yes_no(s.insufficient_data)},
                       {"aborted", yes_no(s.aborted)}});
}

void render_opt(std::ostream &out, const OptResult &r) {
    render_pairs(out, {{"best_entropy", format_number(r.best_entropy)},
                       {"closed_form_entropy", format_number(r.closed_form_entropy)},
                       {"gap", format_number(r.gap)},
                       {"iterations", std::to_string(r.iterations)},
                       {"converged", yes_no(r.converged)},
                       {"counterexample", yes_no(r.counterexample)},
                       {"slice_deviation", format_number(r.slice_deviation)},
                       {"constraint_residual", format_number(r.constraint_residual)}});
}

std::string dump(const Json &doc) { return doc.dump(2) + "\n"; }

struct KeyrateOpts {
    double xi = 1.0;
    double e = 0.0;
    bool json = false;
};

struct SweepOpts {
    std::string var = "e";
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;
    std::optional<double> xi;
    bool symmetric = false;
    double e = 0.0;
    double forward_error = 0.0;
    std::string out;
};

struct OptimizeOpts {
    double f01 = 1.0;
    double fpm = 1.0;
    int budget = 20000;
    std::uint64_t seed = 0;
    std::string out;
    bool json = false;
};

struct SimulateOpts {
    std::string config;
    std::string attack = "identity";
    double attack_e = 0.0;
    std::int64_t n = 100000;
    double check_fraction = 0.5;
    double announce_fraction = 0.5;
    double backward_noise = 0.0;
    std::uint64_t seed = 0;
    bool permute = false;
    double abort_slack_z = 0.0;
    unsigned workers = 0;
    std::string out;
    bool json = false;
};

struct VerifyOpts {
    int trials = 100;
    std::uint64_t seed = 0;
    std::vector<std::string> checks;
    std::vector<std::string> tolerances;
    bool json = false;
};

int do_keyrate(const KeyrateOpts &o, std::ostream &out) {
    const KeyRateReport r = final_rate(o.xi, o.e);
    if (o.json) {
        out << dump(to_json(r));
    } else {
        render_report(out, r);
    }
    return kOk;
}

int do_sweep(const SweepOpts &o, std::ostream &out) {
    SweepSpec spec;
    spec.variable = sweep_variable_from_string(o.var);
    spec.start = o.start;
    spec.stop = o.stop;
    spec.steps = o.steps;
    if (o.symmetric && o.xi) {
        throw InvalidArgument("sweep: --xi and --symmetric are exclusive");
    }
    if (spec.variable == SweepVariable::E && !o.symmetric && !o.xi) {
        throw InvalidArgument("sweep over e needs --xi or --symmetric");
    }
    spec.xi = o.xi;
    spec.e = o.e;
    spec.forward_error = o.forward_error;
    std::ostringstream csv;
    write_sweep_csv(csv, run_sweep(spec));
    if (o.out.empty()) {
        out << csv.str();
    } else {
        write_file(o.out, csv.str());
    }
    return kOk;
}

int do_optimize(const OptimizeOpts &o, std::ostream &out) {
    const OptResult r = maximize_s_be({o.f01, o.fpm}, o.budget, o.seed);
    const std::string doc = dump(to_json(r));
    if (!o.out.empty()) {
        write_file(o.out, doc);
    }
    if (o.json) {
        out << doc;
    } else {
        render_opt(out, r);
    }
    return kOk;
}

int do_simulate(const SimulateOpts &o, std::ostream &out) {
    ProtocolConfig cfg;
    if (!o.config.empty()) {
        Json doc;
        try {
            doc = Json::parse(read_file(o.config));
        } catch (const Json::parse_error &ex) {
            throw ParseError("<root>", ex.what());
        }
        cfg = config_from_json(doc);
    } else {
        cfg.attack = named_attack(named_attack_from_string(o.attack), o.attack_e);
        cfg.n = o.n;
        cfg.check_fraction = o.check_fraction;
        cfg.announce_fraction = o.announce_fraction;
        cfg.backward_noise = o.backward_noise;
        cfg.seed = o.seed;
        cfg.permute = o.permute;
        cfg.abort_slack_z = o.abort_slack_z;
    }
    const ProtocolResult res = run_protocol(cfg, o.workers);
    Json doc;
    doc["config"] = to_json(cfg);
    doc["stats"] = to_json(res.stats);
    doc["report"] = to_json(res.report);
    const std::string text = dump(doc);
    if (!o.out.empty()) {
        write_file(o.out, text);
    }
    if (o.json) {
        out << text;
    } else {
        render_stats(out, res.stats);
        out << '\n';
        render_report(out, res.report);
    }
    return kOk;
}

int do_verify(const VerifyOpts &o, std::ostream &out) {
    std::map<std::string, double> overrides;
    for (const std::string &t : o.tolerances) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("--tolerance expects name=value, got '" + t + "'");
        }
        overrides[t.substr(0, eq)] = parse_field(t.substr(eq + 1), "tolerance");
    }
    const VerifyReport rep = run_verification(o.trials, o.seed, overrides, o.checks);
    if (o.json) {
        Json doc = Json::array();
        for (const VerifyCheck &c : rep.checks) {
            doc.push_back({{"name", c.name},
                           {"max_deviation", c.max_deviation},
                           {"tolerance", c.tolerance},
                           {"trials", c.trials},
                           {"skipped", c.skipped},
                           {"pass", c.pass}});
        }
        out << dump(doc);
    } else {
        for (const VerifyCheck &c : rep.checks) {
            out << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(28) << c.name
                << "max_dev=" << std::setw(20) << format_number(c.max_deviation)
                << "tol=" << std::setw(8) << format_number(c.tolerance) << c.description;
            if (c.skipped > 0) {
                out << " (" << c.skipped << " skipped)";
            }
            out << '\n';
        }
    }
    return rep.all_pass() ? kOk : kVerificationFailed;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Security analysis toolkit for four-state two-way DQKD"};
    app.name("dqkd");
    app.require_subcommand(1);

    KeyrateOpts kr;
    auto *keyrate = app.add_subcommand("keyrate", "Asymptotic key rate for observed xi and e");
    keyrate->add_option("--xi", kr.xi, "Forward-channel indistinguishability")->required();
    keyrate->add_option("--e", kr.e, "QBER of the announced encoding rounds")->required();
    keyrate->add_flag("--json", kr.json, "Print JSON");

    SweepOpts sw;
    auto *sweep = app.add_subcommand("sweep", "Tabulate key rates along one variable as CSV");
    sweep->add_option("--var", sw.var, "e | xi | backward_noise")
        ->check(CLI::IsMember({"e", "xi", "backward_noise"}));
    sweep->add_option("--start", sw.start)->required();
    sweep->add_option("--stop", sw.stop)->required();
    sweep->add_option("--steps", sw.steps)->required();
    sweep->add_option("--xi", sw.xi, "Fixed xi");
    sweep->add_flag("--symmetric", sw.symmetric, "Use xi = 1 - 2e (symmetric attack)");
    sweep->add_option("--e", sw.e, "Fixed QBER for an xi sweep");
    sweep->add_option("--forward-error", sw.forward_error,
                      "Forward QBER for a backward_noise sweep");
    sweep->add_option("--out", sw.out, "CSV path (stdout when omitted)");

    OptimizeOpts op;
    auto *optimize = app.add_subcommand("optimize", "Maximize S(rho_BE) under observed fidelities");
    optimize->add_option("--f01", op.f01, "Observed Z-basis fidelity")->required();
    optimize->add_option("--fpm", op.fpm, "Observed X-basis fidelity")->required();
    optimize->add_option("--budget", op.budget, "Objective evaluations");
    optimize->add_option("--seed", op.seed);
    optimize->add_option("--out", op.out, "JSON path");
    optimize->add_flag("--json", op.json, "Print JSON");

    SimulateOpts si;
    auto *simulate = app.add_subcommand("simulate", "Monte-Carlo run of the full protocol");
    simulate->add_option("--config", si.config, "JSON config file");
    simulate->add_option("--attack", si.attack, "identity | measure_z | measure_x | symmetric");
    simulate->add_option("--attack-e", si.attack_e, "Error parameter of the symmetric attack");
    simulate->add_option("--n", si.n, "Rounds");
    simulate->add_option("--check-fraction", si.check_fraction);
    simulate->add_option("--announce-fraction", si.announce_fraction);
    simulate->add_option("--backward-noise", si.backward_noise);
    simulate->add_option("--seed", si.seed);
    simulate->add_flag("--permute", si.permute);
    simulate->add_option("--abort-slack-z", si.abort_slack_z);
    simulate->add_option("--workers", si.workers, "Threads (0 = all cores)");
    simulate->add_option("--out", si.out, "JSON path");
    simulate->add_flag("--json", si.json, "Print JSON");

    VerifyOpts ve;
    auto *verify = app.add_subcommand("verify", "Certify the analysis identities on random attacks");
    verify->add_option("--trials", ve.trials);
    verify->add_option("--seed", ve.seed);
    verify->add_option("--checks", ve.checks, "Subset of checks")->delimiter(',');
    verify->add_option("--tolerance", ve.tolerances, "Override as name=value");
    verify->add_flag("--json", ve.json, "Print JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    try {
        if (*keyrate) {
            return do_keyrate(kr, out);
        }
        if (*sweep) {
            return do_sweep(sw, out);
        }
        if (*optimize) {
            return do_optimize(op, out);
        }
        if (*simulate) {
            return do_simulate(si, out);
        }
        if (*verify) {
            return do_verify(ve, out);
        }
    } catch (const IoError &ex) {
        err << "error: " << ex.what() << '\n';
        return kIoError;
    } catch (const BoundaryViolation &ex) {
        err << "boundary violation: " << ex.what() << '\n';
        return kInvalidInput;
    } catch (const Error &ex) {
        err << "error: " << ex.what() << '\n';
        return kInvalidInput;
    }
    return kInvalidInput;
}

} // namespace dqkd::cli
