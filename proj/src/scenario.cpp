// Copyright 2026 The qmetro Authors
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

#include "qmetro/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qmetro/error.hpp"

namespace qmetro {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string &where, const std::string &what) {
    throw Error(ErrorCode::ParseError, where + ": " + what);
}

/// Typed access to one JSON object; `finish` rejects keys nobody asked for.
class ObjectReader {
   public:
    ObjectReader(const json &j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) {
            parse_fail(where_, "expected an object");
        }
    }

    bool has(const std::string &key) const {
        return j_.contains(key);
    }

    template <typename T>
    std::optional<T> get(const std::string &key) {
        seen_.insert(key);
        if (!j_.contains(key) || j_.at(key).is_null()) {
            return std::nullopt;
        }
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception &e) {
            parse_fail(where_ + "." + key, e.what());
        }
    }

    template <typename T>
    T require(const std::string &key) {
        auto v = get<T>(key);
        if (!v) {
            parse_fail(where_, "missing required key '" + key + "'");
        }
        return *v;
    }

    const json &raw(const std::string &key) {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const {
        for (const auto &item : j_.items()) {
            if (!seen_.count(item.key())) {
                parse_fail(where_, "unknown key '" + item.key() + "'");
            }
        }
    }

   private:
    const json &j_;
    std::string where_;
    std::set<std::string> seen_;
};

struct FamilySignature {
    std::vector<std::string> required;
    std::vector<std::string> optional;
    bool needs_direction = false;
};

const std::map<std::string, FamilySignature> &families() {
    static const std::map<std::string, FamilySignature> table = {
        {"msps_state", {{}, {"assignment", "targets"}, false}},
        {"meps_state", {{"total", "targets"}, {}, false}},
        {"mspe_noon_product", {{"particles"}, {}, false}},
        {"mepe_multinoon", {{"particles"}, {}, true}},
        {"p_producible_noon_chain", {{"particles", "P"}, {}, false}},
        {"lambda_sep_multinoon", {{"particles", "partition"}, {}, true}},
        {"block_multinoon", {{"total", "me", "pe"}, {}, true}},
        {"sample", {{"class", "total"}, {"seed"}, false}},
    };
    return table;
}

StateSpec parse_state(const json &j) {
    ObjectReader r(j, "state");
    StateSpec s;
    s.family = r.require<std::string>("family");
    auto it = families().find(s.family);
    if (it == families().end()) {
        parse_fail("state", "unknown state family '" + s.family + "'");
    }
    const auto &sig = it->second;
    std::set<std::string> allowed(sig.required.begin(), sig.required.end());
    allowed.insert(sig.optional.begin(), sig.optional.end());
    allowed.insert("family");
    allowed.insert("basis");
    for (const auto &item : j.items()) {
        if (!allowed.count(item.key())) {
            parse_fail("state", "parameter '" + item.key() + "' is not part of family '" + s.family + "'");
        }
    }
    for (const auto &key : sig.required) {
        if (!j.contains(key)) {
            parse_fail("state", "family '" + s.family + "' requires '" + key + "'");
        }
    }
    s.assignment = r.get<std::vector<int>>("assignment");
    s.targets = r.get<std::vector<double>>("targets");
    s.total = r.get<int>("total");
    s.particles = r.get<std::vector<int>>("particles");
    s.P = r.get<std::vector<int>>("P");
    s.partition = r.get<std::vector<std::vector<int>>>("partition");
    s.me = r.get<int>("me");
    s.pe = r.get<int>("pe");
    s.sample_class = r.get<std::string>("class");
    s.seed = r.get<std::uint64_t>("seed");
    s.basis = r.get<std::string>("basis");
    r.finish();
    if (s.family == "msps_state" && s.assignment.has_value() == s.targets.has_value()) {
        parse_fail("state", "msps_state takes exactly one of 'assignment' and 'targets'");
    }
    if (s.sample_class) {
        try {
            parse_sample_class(*s.sample_class);
        } catch (const Error &e) {
            parse_fail("state.class", e.what());
        }
    }
    if (s.basis && *s.basis != "native" && *s.basis != "distinguishable") {
        parse_fail("state.basis", "expected 'native' or 'distinguishable'");
    }
    return s;
}

std::vector<std::vector<double>> parse_modes(const json &j) {
    if (j.is_number_integer()) {
        int m = j.get<int>();
        if (m < 1) {
            parse_fail("modes", "need at least one mode");
        }
        return std::vector<std::vector<double>>(static_cast<std::size_t>(m), {0.5, -0.5});
    }
    ObjectReader r(j, "modes");
    auto spectra = r.require<std::vector<std::vector<double>>>("spectra");
    r.finish();
    return spectra;
}

PovmSpec parse_povm(const json &j) {
    ObjectReader r(j, "povm");
    PovmSpec p;
    p.kind = r.require<std::string>("kind");
    if (p.kind != "noon_parity" && p.kind != "computational" && p.kind != "vectors") {
        parse_fail("povm.kind", "unknown POVM kind '" + p.kind + "'");
    }
    if (p.kind == "vectors") {
        p.vectors = r.require<std::vector<std::vector<std::pair<double, double>>>>("vectors");
        p.complete = r.get<bool>("complete").value_or(true);
    }
    r.finish();
    return p;
}

}  // namespace

std::string CheckSpec::to_string() const {
    return saturated ? bound + ":saturated" : bound;
}

const std::vector<std::string> &known_bounds() {
    static const std::vector<std::string> names = {
        "4Gamma",      "F_SN",     "F_MS",     "F_P",        "F_HL",           "F_HL_prime",
        "F_Lambda",    "particle_sep", "mode_sep", "lambda_sep", "cauchy_schwarz", "transform",
    };
    return names;
}

CheckSpec parse_check(std::string_view text) {
    CheckSpec c;
    std::string_view name = text;
    if (auto colon = text.find(':'); colon != std::string_view::npos) {
        std::string_view suffix = text.substr(colon + 1);
        if (suffix != "saturated") {
            parse_fail("checks", "unknown check modifier '" + std::string(suffix) + "'");
        }
        c.saturated = true;
        name = text.substr(0, colon);
    }
    c.bound = std::string(name);
    const auto &names = known_bounds();
    if (std::find(names.begin(), names.end(), c.bound) == names.end()) {
        parse_fail("checks", "unknown check '" + c.bound + "'");
    }
    return c;
}

ModeConfig Scenario::config() const {
    return ModeConfig(spectra);
}

Scenario parse_scenario(const json &doc) {
    ObjectReader r(doc, "scenario");
    Scenario s;
    s.name = r.get<std::string>("name").value_or("");
    if (!r.has("modes")) {
        parse_fail("scenario", "missing required key 'modes'");
    }
    s.spectra = parse_modes(r.raw("modes"));
    try {
        ModeConfig check(s.spectra);
    } catch (const Error &e) {
        parse_fail("modes", e.what());
    }
    if (!r.has("state")) {
        parse_fail("scenario", "missing required key 'state'");
    }
    s.state = parse_state(r.raw("state"));
    s.direction = r.get<std::vector<double>>("direction");
    if (r.has("entanglement")) {
        ObjectReader e(r.raw("entanglement"), "entanglement");
        s.P = e.get<std::vector<int>>("P");
        s.partition = e.get<std::vector<std::vector<int>>>("partition");
        e.finish();
    }
    s.weights = r.get<std::vector<std::vector<double>>>("weights");
    if (r.has("moments")) {
        ObjectReader m(r.raw("moments"), "moments");
        s.moments = MomentSpec{m.require<std::vector<double>>("first"),
                               m.require<std::vector<std::vector<double>>>("second")};
        m.finish();
    }
    for (const auto &c : r.get<std::vector<std::string>>("checks").value_or(std::vector<std::string>{})) {
        s.checks.push_back(parse_check(c));
    }
    if (r.has("povm")) {
        s.povm = parse_povm(r.raw("povm"));
    }
    s.theta = r.get<std::vector<double>>("theta");
    if (r.has("grid")) {
        ObjectReader g(r.raw("grid"), "grid");
        GridSpec grid;
        grid.half_width = g.get<double>("half_width").value_or(grid.half_width);
        grid.points = g.get<int>("points").value_or(grid.points);
        g.finish();
        s.grid = grid;
    }
    s.seed = r.get<std::uint64_t>("seed");
    s.dimension_cap = r.get<std::size_t>("dimension_cap");
    if (r.has("output")) {
        ObjectReader o(r.raw("output"), "output");
        s.output.report = o.get<std::string>("report");
        s.output.estimates = o.get<std::string>("estimates");
        s.output.summary = o.get<std::string>("summary");
        o.finish();
    }
    r.finish();

    const auto m = static_cast<std::size_t>(s.modes());
    auto sized = [&](const auto &v, const char *what) {
        if (v && v->size() != m) {
            parse_fail(what, "expected " + std::to_string(m) + " entries");
        }
    };
    sized(s.direction, "direction");
    sized(s.theta, "theta");
    sized(s.P, "entanglement.P");
    sized(s.state.particles, "state.particles");
    sized(s.state.targets, "state.targets");
    sized(s.state.P, "state.P");
    if (s.weights) {
        sized(s.weights, "weights");
        for (const auto &row : *s.weights) {
            if (row.size() != m) {
                parse_fail("weights", "rows must have " + std::to_string(m) + " entries");
            }
        }
    }
    if (families().at(s.state.family).needs_direction && !s.direction) {
        parse_fail("state", "family '" + s.state.family + "' needs a 'direction'");
    }
    return s;
}

Scenario parse_scenario_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        parse_fail("scenario", e.what());
    }
    return parse_scenario(doc);
}

Scenario load_scenario(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        parse_fail(path, "cannot open scenario file");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

json to_json(const Scenario &s) {
    json j;
    if (!s.name.empty()) {
        j["name"] = s.name;
    }
    j["modes"] = {{"spectra", s.spectra}};
    json state = {{"family", s.state.family}};
    auto put = [](json &target, const char *key, const auto &value) {
        if (value) {
            target[key] = *value;
        }
    };
    put(state, "assignment", s.state.assignment);
    put(state, "targets", s.state.targets);
    put(state, "total", s.state.total);
    put(state, "particles", s.state.particles);
    put(state, "P", s.state.P);
    put(state, "partition", s.state.partition);
    put(state, "me", s.state.me);
    put(state, "pe", s.state.pe);
    put(state, "class", s.state.sample_class);
    put(state, "seed", s.state.seed);
    put(state, "basis", s.state.basis);
    j["state"] = state;
    put(j, "direction", s.direction);
    if (s.P || s.partition) {
        json e = json::object();
        put(e, "P", s.P);
        put(e, "partition", s.partition);
        j["entanglement"] = e;
    }
    put(j, "weights", s.weights);
    if (s.moments) {
        j["moments"] = {{"first", s.moments->first}, {"second", s.moments->second}};
    }
    if (!s.checks.empty()) {
        json checks = json::array();
        for (const auto &c : s.checks) {
            checks.push_back(c.to_string());
        }
        j["checks"] = checks;
    }
    if (s.povm) {
        json p = {{"kind", s.povm->kind}};
        if (s.povm->kind == "vectors") {
            p["vectors"] = s.povm->vectors;
            p["complete"] = s.povm->complete;
        }
        j["povm"] = p;
    }
    put(j, "theta", s.theta);
    if (s.grid) {
        j["grid"] = {{"half_width", s.grid->half_width}, {"points", s.grid->points}};
    }
    put(j, "seed", s.seed);
    put(j, "dimension_cap", s.dimension_cap);
    json out = json::object();
    put(out, "report", s.output.report);
    put(out, "estimates", s.output.estimates);
    put(out, "summary", s.output.summary);
    if (!out.empty()) {
        j["output"] = out;
    }
    return j;
}

std::optional<Direction> scenario_direction(const Scenario &s) {
    if (!s.direction) {
        return std::nullopt;
    }
    RVector n(s.modes());
    for (int k = 0; k < s.modes(); ++k) {
        n(k) = (*s.direction)[static_cast<std::size_t>(k)];
    }
    return Direction{n}.normalized();
}

EntanglementSpec scenario_entanglement(const Scenario &s) {
    EntanglementSpec spec;
    if (s.P) {
        spec.P = *s.P;
    }
    if (s.partition) {
        spec.partition = *s.partition;
    }
    if (s.state.me) {
        spec.mode_groups_size = *s.state.me;
    }
    if (s.state.pe) {
        spec.particle_groups_size = *s.state.pe;
    }
    return spec;
}

QuantumState build_state(const Scenario &s) {
    const ModeConfig config = s.config();
    const StateSpec &st = s.state;
    const std::size_t cap = s.dimension_cap.value_or(kDefaultDimensionCap);
    auto direction = scenario_direction(s);
    auto build = [&]() -> QuantumState {
        if (st.family == "msps_state") {
            return st.assignment ? msps_state(config, *st.assignment) : msps_state_for_targets(config, *st.targets);
        }
        if (st.family == "meps_state") {
            return meps_state(config, *st.total, *st.targets);
        }
        if (st.family == "mspe_noon_product") {
            return mspe_noon_product(config, *st.particles);
        }
        if (st.family == "mepe_multinoon") {
            return mepe_multinoon(config, *st.particles, *direction);
        }
        if (st.family == "p_producible_noon_chain") {
            return p_producible_noon_chain(config, *st.particles, *st.P, cap);
        }
        if (st.family == "lambda_sep_multinoon") {
            return lambda_sep_multinoon(config, *st.particles, *st.partition, *direction);
        }
        if (st.family == "block_multinoon") {
            return block_multinoon(config, *st.total, *st.me, *st.pe, *direction, cap);
        }
        return sample_state(config, *st.total, parse_sample_class(*st.sample_class), scenario_entanglement(s),
                            st.seed.value_or(s.seed.value_or(0)), cap);
    };
    QuantumState state = build();
    if (st.basis.value_or("native") == "distinguishable" && !state.basis().is_distinguishable()) {
        return symmetrize_embed(state.is_structured() ? state.densified() : state, cap);
    }
    return state;
}

Povm build_povm(const PovmSpec &spec, const Basis &basis) {
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    if (spec.kind == "computational") {
        std::vector<CVector> vectors;
        for (Eigen::Index i = 0; i < dim; ++i) {
            vectors.push_back(CVector::Unit(dim, i));
        }
        return Povm::from_vectors(vectors, false);
    }
    if (spec.kind == "vectors") {
        std::vector<CVector> vectors;
        for (const auto &entries : spec.vectors) {
            if (static_cast<Eigen::Index>(entries.size()) != dim) {
                throw Error(ErrorCode::DimensionMismatch, "POVM vector length " + std::to_string(entries.size()) +
                                                              " differs from basis dimension " + std::to_string(dim));
            }
            CVector v(dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                v(i) = complex(entries[static_cast<std::size_t>(i)].first, entries[static_cast<std::size_t>(i)].second);
            }
            vectors.push_back(v);
        }
        return Povm::from_vectors(vectors, spec.complete);
    }
    // noon_parity: product over modes of projectors onto |N_k,+> +- |N_k,->.
    const auto *sectors = std::get_if<FockSectors>(&basis.tag());
    const ModeConfig &config = basis.config();
    if (sectors == nullptr || static_cast<int>(sectors->modes.size()) != config.modes()) {
        throw Error(ErrorCode::BasisUnsupported, "noon_parity needs a fixed-number Fock basis over all modes");
    }
    std::vector<std::pair<std::size_t, std::size_t>> extremes;
    std::vector<int> active;
    for (int pos = 0; pos < config.modes(); ++pos) {
        if (sectors->totals[static_cast<std::size_t>(pos)].size() != 1) {
            throw Error(ErrorCode::BasisUnsupported, "noon_parity needs a fixed particle number in every mode");
        }
        const int k = sectors->modes[static_cast<std::size_t>(pos)];
        const int n = sectors->totals[static_cast<std::size_t>(pos)][0];
        std::size_t up = 0, down = 0;
        for (std::size_t local = 0; local < basis.fock_local_count(pos); ++local) {
            auto occ = basis.fock_local_occupation(pos, local);
            if (occ[static_cast<std::size_t>(config.plus_index(k))] == n) {
                up = local;
            }
            if (occ[static_cast<std::size_t>(config.minus_index(k))] == n) {
                down = local;
            }
        }
        extremes.emplace_back(up, down);
        if (n > 0) {
            active.push_back(pos);
        }
    }
    std::vector<CVector> vectors;
    const std::size_t patterns = std::size_t{1} << active.size();
    for (std::size_t pattern = 0; pattern < patterns; ++pattern) {
        CVector v = CVector::Zero(dim);
        for (std::size_t choice = 0; choice < patterns; ++choice) {
            std::vector<std::size_t> locals;
            for (const auto &e : extremes) {
                locals.push_back(e.first);
            }
            double sign = 1.0;
            for (std::size_t a = 0; a < active.size(); ++a) {
                if (choice >> a & 1) {
                    locals[static_cast<std::size_t>(active[a])] = extremes[static_cast<std::size_t>(active[a])].second;
                    if (pattern >> a & 1) {
                        sign = -sign;
                    }
                }
            }
            v(static_cast<Eigen::Index>(basis.fock_index(locals))) = sign;
        }
        vectors.push_back(v);
    }
    return Povm::from_vectors(vectors, true);
}

}  // namespace qmetro
