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

#include "dqkd/serialize.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dqkd/errors.hpp"

namespace dqkd {

namespace {

const Json &require(const Json &doc, const std::string &key, const std::string &path) {
    if (!doc.is_object()) {
        throw ParseError(path.empty() ? "<root>" : path, "expected an object");
    }
    const auto it = doc.find(key);
    if (it == doc.end()) {
        throw ParseError(path + key, "missing");
    }
    return *it;
}

double number(const Json &doc, const std::string &key, const std::string &path = "") {
    const Json &v = require(doc, key, path);
    if (v.is_null()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (!v.is_number()) {
        throw ParseError(path + key, "expected a number");
    }
    return v.get<double>();
}

bool boolean(const Json &doc, const std::string &key, const std::string &path = "") {
    const Json &v = require(doc, key, path);
    if (!v.is_boolean()) {
        throw ParseError(path + key, "expected true or false");
    }
    return v.get<bool>();
}

template <typename Int> Int integer(const Json &doc, const std::string &key) {
    const Json &v = require(doc, key, "");
    if (!v.is_number_integer()) {
        throw ParseError(key, "expected an integer");
    }
    if constexpr (std::is_unsigned_v<Int>) {
        if (v.is_number_unsigned()) {
            return v.get<Int>();
        }
        if (v.get<std::int64_t>() < 0) {
            throw ParseError(key, "expected a non-negative integer");
        }
    }
    return static_cast<Int>(v.get<std::int64_t>());
}

Json estimate_json(const Estimate &e) {
    return Json{{"value", e.value}, {"se", e.se}, {"n_used", e.n_used}};
}

} // namespace

Json to_json(const AttackParams &a) {
    Json overlaps = Json::array();
    for (OverlapName name : kOverlapNames) {
        const Complex z = a.overlap(name);
        overlaps.push_back({{"name", std::string(to_string(name))}, {"re", z.real()}, {"im", z.imag()}});
    }
    return Json{{"c00", a.c00}, {"c01", a.c01}, {"c11", a.c11}, {"c10", a.c10},
                {"overlaps", overlaps}};
}

AttackParams attack_from_json(const Json &doc) {
    AttackParams a;
    a.c00 = number(doc, "c00", "attack.");
    a.c01 = number(doc, "c01", "attack.");
    a.c11 = number(doc, "c11", "attack.");
    a.c10 = number(doc, "c10", "attack.");
    for (OverlapName name : kOverlapNames) {
        a.overlap(name) = 0.0;
    }
    const Json &list = require(doc, "overlaps", "attack.");
    if (!list.is_array()) {
        throw ParseError("attack.overlaps", "expected an array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = "attack.overlaps[" + std::to_string(i) + "].";
        const Json &entry = list[i];
        const Json &name = require(entry, "name", path);
        if (!name.is_string()) {
            throw ParseError(path + "name", "expected a string");
        }
        OverlapName which{};
        try {
            which = overlap_from_string(name.get<std::string>());
        } catch (const InvalidArgument &) {
            throw ParseError(path + "name", "must be one of s,u,p,r,v,q");
        }
        a.overlap(which) = Complex(number(entry, "re", path), number(entry, "im", path));
    }
    return a;
}

Json to_json(const ChannelFidelities &f) {
    return Json{{"f0", f.f0},   {"f1", f.f1},   {"fplus", f.fplus}, {"fminus", f.fminus},
                {"f01", f.f01}, {"fpm", f.fpm}, {"xi", f.xi}};
}

Json to_json(const KeyRateReport &r) {
    return Json{{"xi", r.xi},
                {"e", r.e},
                {"r_pa", r.r_pa},
                {"r_final", r.r_final},
                {"r_final_raw", std::isfinite(r.r_final_raw) ? Json(r.r_final_raw) : Json()},
                {"r_bb84", r.r_bb84},
                {"boundary_ok", r.boundary_ok},
                {"aborted", r.aborted}};
}

KeyRateReport report_from_json(const Json &doc) {
    KeyRateReport r;
    r.xi = number(doc, "xi");
    r.e = number(doc, "e");
    r.r_pa = number(doc, "r_pa");
    r.r_final = number(doc, "r_final");
    r.r_final_raw = number(doc, "r_final_raw");
    r.r_bb84 = number(doc, "r_bb84");
    r.boundary_ok = boolean(doc, "boundary_ok");
    r.aborted = boolean(doc, "aborted");
    return r;
}

Json to_json(const OptResult &r) {
    return Json{{"best_params", to_json(r.best_params)},
                {"best_entropy", r.best_entropy},
                {"closed_form_entropy", r.closed_form_entropy},
                {"gap", r.gap},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"counterexample", r.counterexample},
                {"slice_deviation", r.slice_deviation},
                {"constraint_residual", r.constraint_residual}};
}

Json to_json(const ProtocolStats &s) {
    Json doc{{"n", s.n},
             {"m", s.m},
             {"check_count", s.check_count},
             {"discard_count", s.discard_count},
             {"announced_count", s.announced_count},
             {"est_f0", estimate_json(s.f0)},
             {"est_f1", estimate_json(s.f1)},
             {"est_fplus", estimate_json(s.fplus)},
             {"est_fminus", estimate_json(s.fminus)},
             {"est_e", estimate_json(s.e)},
             {"est_f01", s.f01},
             {"est_fpm", s.fpm},
             {"est_xi", s.xi},
             {"est_xi_se", s.xi_se},
             {"true_error_count", s.true_error_count},
             {"k_est", s.k_est},
             {"insufficient_data", s.insufficient_data},
             {"aborted", s.aborted}};
    for (int i = 0; i < 4; ++i) {
        const auto prep = static_cast<PrepState>(i);
        for (int b = 0; b < 2; ++b) {
            const auto basis = static_cast<Basis>(b);
            for (int o = 0; o < 2; ++o) {
                const PrepState outcome =
                    basis == Basis::Z ? static_cast<PrepState>(o) : static_cast<PrepState>(2 + o);
                const std::string key = "count_" + std::string(to_string(prep)) + "_" +
                                        std::string(to_string(basis)) + "_" +
                                        std::string(to_string(outcome));
                doc[key] = s.counts[i][b][o];
            }
        }
    }
    return doc;
}

Json to_json(const ProtocolConfig &c) {
    return Json{{"attack", to_json(c.attack)},
                {"n", c.n},
                {"check_fraction", c.check_fraction},
                {"announce_fraction", c.announce_fraction},
                {"backward_noise", c.backward_noise},
                {"seed", c.seed},
                {"permute", c.permute},
                {"abort_slack_z", c.abort_slack_z}};
}

ProtocolConfig config_from_json(const Json &doc) {
    if (!doc.is_object()) {
        throw ParseError("<root>", "expected an object");
    }
    ProtocolConfig c;
    const Json &attack = require(doc, "attack", "");
    if (attack.is_object() && attack.contains("named")) {
        const Json &name = attack["named"];
        if (!name.is_string()) {
            throw ParseError("attack.named", "expected a string");
        }
        NamedAttack which{};
        try {
            which = named_attack_from_string(name.get<std::string>());
        } catch (const InvalidArgument &) {
            throw ParseError("attack.named",
                             "must be one of identity, measure_z, measure_x, symmetric");
        }
        const double e = attack.contains("e") ? number(attack, "e", "attack.") : 0.0;
        try {
            c.attack = named_attack(which, e);
        } catch (const InvalidArgument &ex) {
            throw ParseError("attack.e", ex.what());
        }
    } else {
        c.attack = attack_from_json(attack);
    }
    c.n = integer<std::int64_t>(doc, "n");
    c.check_fraction = number(doc, "check_fraction");
    c.announce_fraction = number(doc, "announce_fraction");
    c.backward_noise = number(doc, "backward_noise");
    c.seed = integer<std::uint64_t>(doc, "seed");
    c.permute = boolean(doc, "permute");
    if (doc.contains("abort_slack_z")) {
        c.abort_slack_z = number(doc, "abort_slack_z");
    }
    if (c.n < 1) {
        throw ParseError("n", "must be >= 1");
    }
    if (!(c.check_fraction > 0.0 && c.check_fraction < 1.0)) {
        throw ParseError("check_fraction", "must lie in (0, 1)");
    }
    if (!(c.announce_fraction > 0.0 && c.announce_fraction < 1.0)) {
        throw ParseError("announce_fraction", "must lie in (0, 1)");
    }
    if (!(c.backward_noise >= 0.0 && c.backward_noise <= 0.5)) {
        throw ParseError("backward_noise", "must lie in [0, 1/2]");
    }
    if (!(c.abort_slack_z >= 0.0) || !std::isfinite(c.abort_slack_z)) {
        throw ParseError("abort_slack_z", "must be a non-negative number");
    }
    try {
        validate(c.attack);
    } catch (const ValidationError &ex) {
        throw ParseError("attack", ex.what());
    }
    return c;
}

} // namespace dqkd
