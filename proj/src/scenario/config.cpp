#include "ptbec/scenario/config.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "ptbec/errors.hpp"

namespace ptbec::scenario {

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::stationary: return "stationary";
        case ScenarioKind::oscillatory: return "oscillatory";
        case ScenarioKind::collapse: return "collapse";
        case ScenarioKind::adiabatic_fewmode: return "adiabatic_fewmode";
        case ScenarioKind::adiabatic_variational: return "adiabatic_variational";
        case ScenarioKind::compare: return "compare";
    }
    return "unknown";
}

bool is_physical(ScenarioKind kind) {
    return kind == ScenarioKind::adiabatic_fewmode || kind == ScenarioKind::adiabatic_variational;
}

ScenarioConfig ScenarioConfig::defaults(ScenarioKind kind) {
    ScenarioConfig c;
    c.scenario = kind;
    c.integrator.rel_tol = 1e-10;
    c.integrator.abs_tol = 1e-12;
    switch (kind) {
        case ScenarioKind::stationary:
            c.psi2 = 1.0 / std::sqrt(2.0);
            c.psi0_real = c.psi3_real = 2.0;
            break;
        case ScenarioKind::oscillatory:
            c.psi1 = std::sqrt(0.6);
            c.psi2 = std::sqrt(0.4);
            c.psi0_real = 3.0;
            c.psi3_real = -2.0;
            break;
        case ScenarioKind::collapse:
            c.c = -1.0;
            c.perturbation = 0.5;
            c.psi2 = 1.0 / std::sqrt(2.0);
            c.psi0_real = c.psi3_real = 1.5;
            break;
        default: break;
    }
    return c;
}

namespace {

enum Mask : unsigned {
    kStat = 1,
    kOsc = 2,
    kColl = 4,
    kFew = 8,
    kVar = 16,
    kCmp = 32,
    kAbstract = kStat | kOsc | kColl,
    kPhysical = kFew | kVar,
    kRuns = kAbstract | kPhysical,
    kAll = kRuns | kCmp,
};

unsigned mask_of(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::stationary: return kStat;
        case ScenarioKind::oscillatory: return kOsc;
        case ScenarioKind::collapse: return kColl;
        case ScenarioKind::adiabatic_fewmode: return kFew;
        case ScenarioKind::adiabatic_variational: return kVar;
        case ScenarioKind::compare: return kCmp;
    }
    return 0;
}

struct KeySpec {
    std::string_view section;
    std::string_view key;
    unsigned scenarios;
};

constexpr std::array<KeySpec, 34> kKeys{{
    {"", "scenario", kAll},
    {"run", "t_end", kRuns},
    {"run", "gamma", kRuns},
    {"run", "t_f", kPhysical},
    {"run", "d", kAbstract},
    {"run", "c", kAbstract},
    {"run", "max_condition", kAbstract | kFew},
    {"run", "transform", kPhysical},
    {"initial", "psi1", kAbstract},
    {"initial", "psi2", kAbstract},
    {"initial", "psi0_real", kAbstract},
    {"initial", "psi3_real", kAbstract},
    {"initial", "perturbation", kAbstract},
    {"trap", "depths", kPhysical},
    {"trap", "spacing", kPhysical},
    {"trap", "wx", kPhysical},
    {"trap", "wy", kPhysical},
    {"trap", "wz", kPhysical},
    {"units", "w_z", kPhysical},
    {"units", "N", kPhysical},
    {"units", "a_scat", kPhysical},
    {"units", "mass", kPhysical},
    {"integrator", "rel_tol", kRuns},
    {"integrator", "abs_tol", kRuns},
    {"integrator", "max_step", kRuns},
    {"controller", "dt", kVar},
    {"controller", "tolerance", kVar},
    {"controller", "current_floor", kVar},
    {"controller", "max_iterations", kVar},
    {"output", "dir", kAll},
    {"output", "stride", kRuns},
    {"output", "emit_plots", kAll},
    {"compare", "a", kCmp},
    {"compare", "b", kCmp},
}};

const KeySpec* find_key(std::string_view section, std::string_view key) {
    for (const auto& k : kKeys)
        if (k.section == section && k.key == key) return &k;
    return nullptr;
}

bool known_section(std::string_view s) {
    for (const auto& k : kKeys)
        if (k.section == s) return true;
    return false;
}

struct Entry {
    std::string value;
    int line = 0;
    int column = 0;
    int key_column = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

int column_of(std::string_view line, std::string_view part) {
    return static_cast<int>(part.data() - line.data()) + 1;
}

struct Quantity {
    double value;
    std::string unit;
};

class Document {
public:
    std::map<std::string, Entry> entries;

    const Entry* get(const std::string& name) const {
        auto it = entries.find(name);
        return it == entries.end() ? nullptr : &it->second;
    }
    const Entry& require(const std::string& name) const {
        const Entry* e = get(name);
        if (!e) throw MissingKey("missing required key '" + name + "'");
        return *e;
    }
};

[[noreturn]] void fail(const Entry& e, const std::string& what) { throw ParseError(what, e.line, e.column); }

Quantity quantity(const Entry& e, std::string_view text) {
    const std::string s(trim(text));
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || !std::isfinite(v)) fail(e, "expected a number, got '" + s + "'");
    return {v, std::string(trim(std::string_view(end)))};
}

std::vector<Quantity> quantity_list(const Entry& e) {
    std::vector<Quantity> out;
    std::string_view rest(e.value);
    for (;;) {
        const auto comma = rest.find(',');
        out.push_back(quantity(e, rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
        if (!out[i].unit.empty()) fail(e, "a unit may only follow the last list element");
    return out;
}

[[noreturn]] void unit_error(const Entry& e, const std::string& name, const std::string& unit) {
    throw UnitError("line " + std::to_string(e.line) + ": unit '" + unit + "' not accepted for '" + name + "'");
}

double plain(const Entry& e, const std::string& name) {
    const Quantity q = quantity(e, e.value);
    if (!q.unit.empty()) unit_error(e, name, q.unit);
    return q.value;
}

struct Converter {
    bool physical = false;
    gauss::UnitSystem units;

    double energy(const Entry& e, const std::string& name, const Quantity& q) const {
        if (!physical) {
            if (q.unit.empty() || q.unit == "J12") return q.value;
        } else {
            if (q.unit.empty() || q.unit == "E0") return q.value;
            const double e0_hz = units.E0() / gauss::UnitSystem::planck;
            if (q.unit == "Hz") return q.value / e0_hz;
            if (q.unit == "kHz") return 1e3 * q.value / e0_hz;
        }
        unit_error(e, name, q.unit);
    }
    double time(const Entry& e, const std::string& name) const {
        const Quantity q = quantity(e, e.value);
        if (!physical) {
            if (q.unit.empty() || q.unit == "hbar/J12") return q.value;
        } else {
            if (q.unit.empty() || q.unit == "t0") return q.value;
            if (q.unit == "s") return q.value / units.t0();
            if (q.unit == "ms") return 1e-3 * q.value / units.t0();
            if (q.unit == "us") return 1e-6 * q.value / units.t0();
        }
        unit_error(e, name, q.unit);
    }
    double length(const Entry& e, const std::string& name) const {
        const Quantity q = quantity(e, e.value);
        if (q.unit.empty() || q.unit == "w_z") return q.value;
        if (q.unit == "m") return q.value / units.w_z;
        if (q.unit == "um") return 1e-6 * q.value / units.w_z;
        if (q.unit == "nm") return 1e-9 * q.value / units.w_z;
        unit_error(e, name, q.unit);
    }
};

double si_length(const Entry& e, const std::string& name, bool bare_is_bohr) {
    const Quantity q = quantity(e, e.value);
    if (q.unit == "m") return q.value;
    if (q.unit == "um") return 1e-6 * q.value;
    if (q.unit == "nm") return 1e-9 * q.value;
    if (bare_is_bohr && (q.unit.empty() || q.unit == "a_B")) return q.value * gauss::UnitSystem::bohr_radius;
    unit_error(e, name, q.unit.empty() ? "(none)" : q.unit);
}

bool boolean(const Entry& e) {
    const std::string v(trim(e.value));
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    fail(e, "expected a boolean, got '" + v + "'");
}

Document read_document(std::string_view text) {
    Document doc;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        std::string_view body = raw;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        const std::string_view t = trim(body);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError("unterminated section header", line_no, column_of(raw, t));
            const std::string_view name = trim(t.substr(1, t.size() - 2));
            if (!known_section(name))
                throw ParseError("unknown section '" + std::string(name) + "'", line_no, column_of(raw, name));
            section = std::string(name);
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, column_of(raw, t));
        const std::string_view key = trim(t.substr(0, eq));
        const std::string_view value = trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key before '='", line_no, column_of(raw, t));
        if (!find_key(section, key)) {
            const std::string where = section.empty() ? "at top level" : "in [" + section + "]";
            throw ParseError("unknown key '" + std::string(key) + "' " + where, line_no, column_of(raw, key));
        }
        if (value.empty())
            throw ParseError("missing value for '" + std::string(key) + "'", line_no, column_of(raw, t) + static_cast<int>(eq) + 1);
        const std::string name = section.empty() ? std::string(key) : section + "." + std::string(key);
        if (doc.entries.count(name)) throw ParseError("duplicate key '" + name + "'", line_no, column_of(raw, key));
        doc.entries[name] = Entry{std::string(value), line_no, column_of(raw, value), column_of(raw, key)};
    }
    return doc;
}

ScenarioKind parse_kind(const Entry& e) {
    const std::string v(trim(e.value));
    for (ScenarioKind k : {ScenarioKind::stationary, ScenarioKind::oscillatory, ScenarioKind::collapse,
                           ScenarioKind::adiabatic_fewmode, ScenarioKind::adiabatic_variational, ScenarioKind::compare})
        if (to_string(k) == v) return k;
    fail(e, "unknown scenario '" + v + "'");
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
    const Document doc = read_document(text);
    const ScenarioKind kind = parse_kind(doc.require("scenario"));
    const unsigned mask = mask_of(kind);
    for (const auto& [name, e] : doc.entries) {
        const auto dot = name.find('.');
        const std::string section = dot == std::string::npos ? "" : name.substr(0, dot);
        const std::string key = dot == std::string::npos ? name : name.substr(dot + 1);
        if (!(find_key(section, key)->scenarios & mask))
            throw ParseError("key '" + name + "' is not used by scenario " + std::string(to_string(kind)), e.line,
                             e.key_column);
    }

    ScenarioConfig c = ScenarioConfig::defaults(kind);
    auto has = [&](const char* n) { return doc.get(n) != nullptr; };
    auto at = [&](const char* n) -> const Entry& { return *doc.get(n); };
    auto positive = [&](const char* n, double v) {
        if (!(v > 0.0)) fail(at(n), std::string("'") + n + "' must be positive");
        return v;
    };

    Converter conv;
    conv.physical = is_physical(kind);
    if (conv.physical) {
        double w_z = c.units.w_z, N = c.units.N, a = c.units.a_scat, mass = c.units.mass;
        if (has("units.w_z")) w_z = positive("units.w_z", si_length(at("units.w_z"), "units.w_z", false));
        if (has("units.a_scat")) a = si_length(at("units.a_scat"), "units.a_scat", true);
        if (has("units.N")) N = positive("units.N", plain(at("units.N"), "units.N"));
        if (has("units.mass")) {
            const Entry& e = at("units.mass");
            const Quantity q = quantity(e, e.value);
            if (q.unit.empty() || q.unit == "u")
                mass = q.value * 1.66053906660e-27;
            else if (q.unit == "kg")
                mass = q.value;
            else
                unit_error(e, "units.mass", q.unit);
            positive("units.mass", mass);
        }
        c.units.w_z = w_z;
        c.units.N = N;
        c.units.a_scat = a;
        c.units.mass = mass;
        conv.units = c.units;
    }

    if (kind != ScenarioKind::compare) c.t_end = positive("run.t_end", conv.time(doc.require("run.t_end"), "run.t_end"));
    if (has("run.gamma")) {
        const Entry& e = at("run.gamma");
        const Quantity q = quantity(e, e.value);
        if (conv.physical) {
            if (!q.unit.empty() && q.unit != "J12") unit_error(e, "run.gamma", q.unit);
            c.gamma = q.value;
        } else {
            c.gamma = conv.energy(e, "run.gamma", q);
        }
        if (!(c.gamma >= 0.0)) fail(e, "'run.gamma' must be non-negative");
    }
    if (has("run.t_f")) c.t_f = positive("run.t_f", conv.time(at("run.t_f"), "run.t_f"));
    if (has("run.d")) {
        c.d = plain(at("run.d"), "run.d");
        if (c.d == 0.0) fail(at("run.d"), "'run.d' must be non-zero");
    }
    if (has("run.c")) c.c = conv.energy(at("run.c"), "run.c", quantity(at("run.c"), at("run.c").value));
    if (has("run.max_condition")) c.max_condition = positive("run.max_condition", plain(at("run.max_condition"), "run.max_condition"));
    if (has("run.transform")) {
        const std::string v(trim(at("run.transform").value));
        if (v == "nearest_neighbor")
            c.transform = gauss::AmplitudeTransform::nearest_neighbor;
        else if (v == "exact")
            c.transform = gauss::AmplitudeTransform::exact;
        else
            fail(at("run.transform"), "transform must be nearest_neighbor or exact");
    }

    if (has("initial.psi1")) {
        const auto l = quantity_list(at("initial.psi1"));
        if (l.size() > 2 || !l.back().unit.empty()) fail(at("initial.psi1"), "psi1 takes 're' or 're, im'");
        c.psi1 = std::complex<double>(l[0].value, l.size() == 2 ? l[1].value : 0.0);
    }
    if (has("initial.psi2")) c.psi2 = plain(at("initial.psi2"), "initial.psi2");
    if (has("initial.psi0_real")) c.psi0_real = plain(at("initial.psi0_real"), "initial.psi0_real");
    if (has("initial.psi3_real")) c.psi3_real = plain(at("initial.psi3_real"), "initial.psi3_real");
    if (has("initial.perturbation")) c.perturbation = plain(at("initial.perturbation"), "initial.perturbation");

    if (conv.physical) {
        const Entry& de = doc.require("trap.depths");
        Eigen::VectorXd depths;
        const auto l = quantity_list(de);
        depths.resize(static_cast<Eigen::Index>(l.size()));
        for (std::size_t i = 0; i < l.size(); ++i)
            depths(static_cast<Eigen::Index>(i)) = conv.energy(de, "trap.depths", {l[i].value, l.back().unit});
        const double spacing = positive("trap.spacing", conv.length(doc.require("trap.spacing"), "trap.spacing"));
        const double wx = positive("trap.wx", conv.length(doc.require("trap.wx"), "trap.wx"));
        const double wy = positive("trap.wy", conv.length(doc.require("trap.wy"), "trap.wy"));
        const double wz = has("trap.wz") ? positive("trap.wz", conv.length(at("trap.wz"), "trap.wz")) : 1.0;
        if (depths.size() != 4) fail(de, "the four-well scenarios need exactly four depths");
        try {
            c.trap = gauss::WellPotentialSpec::chain(depths, spacing, wx, wy, wz);
            c.trap.validate();
        } catch (const InvalidArgument& ex) {
            fail(de, ex.what());
        }
    }

    if (has("integrator.rel_tol")) c.integrator.rel_tol = positive("integrator.rel_tol", plain(at("integrator.rel_tol"), "integrator.rel_tol"));
    if (has("integrator.abs_tol")) c.integrator.abs_tol = positive("integrator.abs_tol", plain(at("integrator.abs_tol"), "integrator.abs_tol"));
    if (has("integrator.max_step")) c.integrator.max_step = positive("integrator.max_step", conv.time(at("integrator.max_step"), "integrator.max_step"));
    if (has("controller.dt")) c.controller.dt = positive("controller.dt", conv.time(at("controller.dt"), "controller.dt"));
    if (has("controller.tolerance")) c.controller.tolerance = positive("controller.tolerance", plain(at("controller.tolerance"), "controller.tolerance"));
    if (has("controller.current_floor")) c.controller.current_floor = positive("controller.current_floor", plain(at("controller.current_floor"), "controller.current_floor"));
    if (has("controller.max_iterations")) {
        const double v = positive("controller.max_iterations", plain(at("controller.max_iterations"), "controller.max_iterations"));
        if (v != std::floor(v)) fail(at("controller.max_iterations"), "'controller.max_iterations' must be an integer");
        c.controller.max_iterations = static_cast<int>(v);
    }
    c.controller.integrator = c.integrator;

    if (has("output.dir")) c.output_dir = std::string(trim(at("output.dir").value));
    if (has("output.stride")) c.stride = positive("output.stride", conv.time(at("output.stride"), "output.stride"));
    if (has("output.emit_plots")) c.emit_plots = boolean(at("output.emit_plots"));

    if (kind == ScenarioKind::compare) {
        c.compare_a = std::string(trim(doc.require("compare.a").value));
        c.compare_b = std::string(trim(doc.require("compare.b").value));
    }
    if (kind == ScenarioKind::adiabatic_variational) {
        const double ratio = c.stride / c.controller.dt;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0)
            throw ParseError("output.stride must be a multiple of controller.dt", has("output.stride") ? at("output.stride").line : 0,
                             has("output.stride") ? at("output.stride").column : 0);
    }
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace ptbec::scenario
