#include "tentlab/suite.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>

#include "tentlab/numfmt.hpp"
#include "tentlab/operators.hpp"

namespace tentlab {

namespace {

// ---------------------------------------------------------------------------
// Diagnostics helpers: byte offset -> 1-based line, and locating each element
// of the top-level "checks" array in the raw text (valid JSON only, which is
// guaranteed because these run after a successful parse).
// ---------------------------------------------------------------------------

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

std::vector<std::size_t> check_element_offsets(const std::string& text) {
    std::vector<std::size_t> out;
    bool instr = false, esc = false;
    int depth = 0;
    long checks_depth = -1;  // depth of elements inside the checks array; <0 = inactive
    std::string cur, last_key;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (instr) {
            if (esc) {
                esc = false;
                cur.push_back(c);
            } else if (c == '\\') {
                esc = true;
            } else if (c == '"') {
                instr = false;
            } else {
                cur.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                instr = true;
                cur.clear();
                break;
            case ':':
                if (depth == 1 && checks_depth == -1) last_key = cur;
                break;
            case '[':
                if (depth == 1 && checks_depth == -1 && last_key == "checks") checks_depth = depth + 1;
                ++depth;
                break;
            case '{':
                if (checks_depth == depth) out.push_back(i);
                ++depth;
                break;
            case ']':
            case '}':
                --depth;
                if (checks_depth > 0 && depth < checks_depth) checks_depth = -2;
                break;
            default:
                break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Typed parameter extraction (messages are wrapped with file/line context by
// the caller).
// ---------------------------------------------------------------------------

using ojson = nlohmann::ordered_json;

double req_num(const ojson& o, const std::string& key) {
    if (!o.contains(key)) throw ConfigError("missing required parameter '" + key + "'");
    if (!o.at(key).is_number()) throw ConfigError("parameter '" + key + "' must be a number");
    return o.at(key).get<double>();
}

double get_num(const ojson& o, const std::string& key, double def) {
    return o.contains(key) ? req_num(o, key) : def;
}

long req_int(const ojson& o, const std::string& key) {
    if (!o.contains(key)) throw ConfigError("missing required parameter '" + key + "'");
    if (!o.at(key).is_number_integer()) throw ConfigError("parameter '" + key + "' must be an integer");
    return o.at(key).get<long>();
}

long get_int(const ojson& o, const std::string& key, long def) {
    return o.contains(key) ? req_int(o, key) : def;
}

std::string req_str(const ojson& o, const std::string& key) {
    if (!o.contains(key)) throw ConfigError("missing required parameter '" + key + "'");
    if (!o.at(key).is_string()) throw ConfigError("parameter '" + key + "' must be a string");
    return o.at(key).get<std::string>();
}

std::vector<double> get_numlist(const ojson& o, const std::string& key, std::vector<double> def) {
    if (!o.contains(key)) return def;
    if (!o.at(key).is_array()) throw ConfigError("parameter '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : o.at(key)) {
        if (!v.is_number()) throw ConfigError("parameter '" + key + "' must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::string> get_strlist(const ojson& o, const std::string& key,
                                     std::vector<std::string> def) {
    if (!o.contains(key)) return def;
    if (!o.at(key).is_array()) throw ConfigError("parameter '" + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : o.at(key)) {
        if (!v.is_string()) throw ConfigError("parameter '" + key + "' must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

const ojson& req_objlist(const ojson& o, const std::string& key) {
    if (!o.contains(key)) throw ConfigError("missing required parameter '" + key + "'");
    if (!o.at(key).is_array() || o.at(key).empty())
        throw ConfigError("parameter '" + key + "' must be a non-empty array of objects");
    for (const auto& v : o.at(key))
        if (!v.is_object()) throw ConfigError("parameter '" + key + "' must be an array of objects");
    return o.at(key);
}

// ---------------------------------------------------------------------------
// Check registry: known names, their allowed parameter keys, validation, and
// dispatch into the verify layer.
// ---------------------------------------------------------------------------

const std::vector<std::pair<std::string, std::vector<std::string>>>& registry() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> reg = {
        {"double_average", {"samples"}},
        {"averaged_weight_class", {"weight", "p", "t_list"}},
        {"fubini", {"instances", "rs"}},
        {"maximal_tent_strong", {"p", "r", "weight", "probes"}},
        {"maximal_tent_weak", {"r", "weight", "p", "probes"}},
        {"extrapolation", {"operator", "p0", "w0s", "targets", "probes"}},
        {"coifman_fefferman_tent", {"r", "targets", "probes"}},
        {"fractional", {"alpha", "p", "q", "r", "weights", "probes"}},
        {"offdiag_decay", {"operator", "r", "M_claim", "targets", "probes"}},
        {"rdf_properties", {"triples", "depth"}},
    };
    return reg;
}

void validate_weight_descriptor(const SuiteConfig& cfg, const std::string& wd) {
    try {
        (void)Weight::from_descriptor(wd, Box(cfg.dim, cfg.half_width, 4));
    } catch (const std::exception& e) {
        throw ConfigError("bad weight descriptor '" + wd + "': " + e.what());
    }
}

OpSpec parse_op_spec(const SuiteConfig& cfg, const std::string& text) {
    OpSpec spec;
    if (text == "identity") {
        spec.kind = OpSpec::Kind::Identity;
    } else if (text == "maximal") {
        spec.kind = OpSpec::Kind::MaximalDyadic;
    } else if (text == "hilbert") {
        if (cfg.dim != 1) throw ConfigError("operator 'hilbert' requires dim = 1");
        spec.kind = OpSpec::Kind::Hilbert;
    } else if (text.rfind("riesz:", 0) == 0) {
        spec.kind = OpSpec::Kind::Riesz;
        try {
            spec.alpha = std::stod(text.substr(6));
        } catch (const std::exception&) {
            throw ConfigError("bad operator '" + text + "': expected riesz:<alpha>");
        }
        if (!(spec.alpha > 0.0) || !(spec.alpha < cfg.dim))
            throw ConfigError("operator '" + text + "': need 0 < alpha < n");
    } else {
        throw ConfigError("unknown operator '" + text +
                          "' (expected identity, maximal, hilbert, or riesz:<alpha>)");
    }
    return spec;
}

OperatorFamily parse_scale_family(const std::string& text) {
    if (text == "averaging") return OperatorFamily::averaging();
    if (text == "heat") return OperatorFamily::heat();
    if (text == "identity") return OperatorFamily::identity();
    throw ConfigError("unknown operator '" + text + "' (expected averaging, heat, or identity)");
}

void validate_invocation(const SuiteConfig& cfg, const CheckInvocation& inv) {
    const auto& reg = registry();
    const auto it = std::find_if(reg.begin(), reg.end(),
                                 [&](const auto& e) { return e.first == inv.name; });
    if (it == reg.end()) throw ConfigError("unknown check name '" + inv.name + "'");
    for (const auto& [k, v] : inv.params.items()) {
        (void)v;
        if (k == "name" || k == "expect" || k == "seed") continue;
        if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
            throw ConfigError("unknown parameter '" + k + "'");
    }
    if (inv.params.contains("seed") && !inv.params.at("seed").is_number_integer())
        throw ConfigError("parameter 'seed' must be an integer");
    const ojson& o = inv.params;

    if (inv.name == "double_average") {
        if (get_int(o, "samples", 1000) < 1) throw ConfigError("need samples >= 1");
    } else if (inv.name == "averaged_weight_class") {
        validate_weight_descriptor(cfg, req_str(o, "weight"));
        if (!(req_num(o, "p") >= 1.0)) throw ConfigError("need p >= 1");
        for (double t : get_numlist(o, "t_list", {0.25, 0.5, 1.0}))
            if (!(t > 0.0)) throw ConfigError("need every t > 0");
    } else if (inv.name == "fubini") {
        if (get_int(o, "instances", 10) < 1) throw ConfigError("need instances >= 1");
        for (double r : get_numlist(o, "rs", {1.5, 2.0, 3.0}))
            if (!(r > 0.0)) throw ConfigError("need every r > 0");
    } else if (inv.name == "maximal_tent_strong") {
        if (!(req_num(o, "p") > 1.0) || !(req_num(o, "r") > 1.0))
            throw ConfigError("need p, r > 1");
        validate_weight_descriptor(cfg, req_str(o, "weight"));
    } else if (inv.name == "maximal_tent_weak") {
        if (!(req_num(o, "r") > 1.0)) throw ConfigError("need r > 1");
        if (!(get_num(o, "p", 1.0) > 0.0)) throw ConfigError("need p > 0");
        validate_weight_descriptor(cfg, req_str(o, "weight"));
    } else if (inv.name == "extrapolation") {
        (void)parse_op_spec(cfg, req_str(o, "operator"));
        if (!(get_num(o, "p0", 2.0) >= 1.0)) throw ConfigError("need p0 >= 1");
        for (const auto& wd : get_strlist(o, "w0s", {"const:1", "power:0.5"}))
            validate_weight_descriptor(cfg, wd);
        for (const auto& tj : req_objlist(o, "targets")) {
            if (!(req_num(tj, "p") > 1.0) || !(req_num(tj, "r") > 1.0))
                throw ConfigError("targets need p, r > 1");
            validate_weight_descriptor(cfg, req_str(tj, "weight"));
        }
    } else if (inv.name == "coifman_fefferman_tent") {
        if (cfg.dim != 1) throw ConfigError("this check requires dim = 1");
        if (!(get_num(o, "r", 2.0) > 0.0)) throw ConfigError("need r > 0");
        for (const auto& tj : req_objlist(o, "targets")) {
            if (!(req_num(tj, "p") >= 0.5) || !(req_num(tj, "s") >= 0.5))
                throw ConfigError("targets need p, s >= 1/2");
            validate_weight_descriptor(cfg, req_str(tj, "weight"));
        }
    } else if (inv.name == "fractional") {
        const double alpha = req_num(o, "alpha");
        const double p = req_num(o, "p"), q = req_num(o, "q");
        if (!(alpha > 0.0) || !(alpha < cfg.dim)) throw ConfigError("need 0 < alpha < n");
        if (std::abs(1.0 / p - 1.0 / q - alpha / cfg.dim) > 1e-12)
            throw ConfigError("exponent relation 1/p - 1/q = alpha/n violated");
        if (!(p > 1.0) || !(q >= p)) throw ConfigError("need 1 < p <= q");
        if (!(get_num(o, "r", 2.0) > 0.0)) throw ConfigError("need r > 0");
        for (const auto& wd : get_strlist(o, "weights", {"power:0.125"}))
            validate_weight_descriptor(cfg, wd);
    } else if (inv.name == "offdiag_decay") {
        (void)parse_scale_family(req_str(o, "operator"));
        const double r = get_num(o, "r", 2.0);
        if (!(r > 1.0)) throw ConfigError("need r > 1");
        const double m = req_num(o, "M_claim");
        if (!(m > cfg.dim / r)) throw ConfigError("need M_claim > n/r");
        for (const auto& tj : req_objlist(o, "targets")) {
            if (!(req_num(tj, "p") > cfg.dim / m)) throw ConfigError("targets need p > n/M_claim");
            validate_weight_descriptor(cfg, req_str(tj, "weight"));
        }
    } else if (inv.name == "rdf_properties") {
        if (get_int(o, "triples", 20) < 1) throw ConfigError("need triples >= 1");
        if (get_int(o, "depth", 14) < 0) throw ConfigError("need depth >= 0");
    }
}

CheckReport run_invocation(const SuiteConfig& cfg, const CheckInvocation& inv) {
    LadderParams lp = cfg.ladder_params();
    const ojson& o = inv.params;
    if (o.contains("seed")) lp.seed = o.at("seed").get<std::uint64_t>();

    if (inv.name == "double_average")
        return run_double_average(lp, static_cast<int>(get_int(o, "samples", 1000)));

    if (inv.name == "averaged_weight_class")
        return run_averaged_weight_class(lp, req_str(o, "weight"), req_num(o, "p"),
                                         get_numlist(o, "t_list", {0.25, 0.5, 1.0}));

    if (inv.name == "fubini") {
        const Rung fin = cfg.ladder.back();
        const auto instances = make_fubini_instances(
            cfg.dim, cfg.half_width, fin.cells, fin.levels, cfg.t_min, cfg.t_max,
            get_numlist(o, "rs", {1.5, 2.0, 3.0}), static_cast<int>(get_int(o, "instances", 10)),
            lp.seed);
        CheckReport rep = check_fubini(instances);
        rep.param("n", static_cast<long>(cfg.dim));
        rep.param("N", static_cast<long>(fin.cells));
        rep.param("K", static_cast<long>(fin.levels));
        rep.param("seed", static_cast<long>(static_cast<long long>(lp.seed)));
        return rep;
    }

    if (inv.name == "maximal_tent_strong")
        return run_maximal_tent_strong(
            lp, {StrongTarget{req_num(o, "p"), req_num(o, "r"), req_str(o, "weight")}},
            static_cast<int>(get_int(o, "probes", 12)))[0];

    if (inv.name == "maximal_tent_weak")
        return run_maximal_tent_weak(lp, {WeakTarget{req_num(o, "r"), req_str(o, "weight")}},
                                     static_cast<int>(get_int(o, "probes", 12)),
                                     get_num(o, "p", 1.0))[0];

    if (inv.name == "extrapolation") {
        std::vector<ExtrapTarget> targets;
        for (const auto& tj : req_objlist(o, "targets"))
            targets.push_back(
                ExtrapTarget{req_num(tj, "p"), req_num(tj, "r"), req_str(tj, "weight")});
        return run_extrapolation(lp, parse_op_spec(cfg, req_str(o, "operator")),
                                 get_num(o, "p0", 2.0),
                                 get_strlist(o, "w0s", {"const:1", "power:0.5"}), targets,
                                 static_cast<int>(get_int(o, "probes", 10)));
    }

    if (inv.name == "coifman_fefferman_tent") {
        std::vector<ControlTarget> targets;
        for (const auto& tj : req_objlist(o, "targets"))
            targets.push_back(
                ControlTarget{req_num(tj, "p"), req_num(tj, "s"), req_str(tj, "weight")});
        return run_control_by_maximal(lp, targets, get_num(o, "r", 2.0),
                                      static_cast<int>(get_int(o, "probes", 10)));
    }

    if (inv.name == "fractional")
        return run_fractional(lp, req_num(o, "alpha"), req_num(o, "p"), req_num(o, "q"),
                              get_num(o, "r", 2.0), get_strlist(o, "weights", {"power:0.125"}),
                              static_cast<int>(get_int(o, "probes", 8)));

    if (inv.name == "offdiag_decay") {
        std::vector<OffdiagTarget> targets;
        for (const auto& tj : req_objlist(o, "targets"))
            targets.push_back(OffdiagTarget{req_num(tj, "p"), req_str(tj, "weight")});
        return run_offdiag_decay(lp, parse_scale_family(req_str(o, "operator")),
                                 get_num(o, "r", 2.0), req_num(o, "M_claim"), targets,
                                 static_cast<int>(get_int(o, "probes", 8)));
    }

    if (inv.name == "rdf_properties")
        return run_rdf_properties(lp, static_cast<int>(get_int(o, "triples", 20)),
                                  static_cast<int>(get_int(o, "depth", 14)));

    throw ConfigError("unknown check name '" + inv.name + "'");
}

// ---------------------------------------------------------------------------
// Deterministic JSON emission
// ---------------------------------------------------------------------------

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

std::string json_number(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    return fmt_g17(v);
}

double number_from(const ojson& v) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf") return kInfinity;
        if (s == "-inf") return -kInfinity;
        if (s == "nan") return std::nan("");
        throw std::invalid_argument("report: non-numeric value '" + s + "'");
    }
    return v.get<double>();
}

void append_report(std::string& out, const CheckReport& r, bool with_runtime) {
    out += "    {\n      \"name\": ";
    append_escaped(out, r.name);
    out += ",\n      \"expect_fail\": ";
    out += r.expect_fail ? "true" : "false";
    out += ",\n      \"status\": ";
    append_escaped(out, to_string(r.status));
    out += ",\n      \"bound\": " + json_number(r.bound);
    out += ",\n      \"slack\": " + json_number(r.slack);
    out += ",\n      \"params\": {";
    for (std::size_t i = 0; i < r.params.size(); ++i) {
        out += i ? ",\n        " : "\n        ";
        append_escaped(out, r.params[i].first);
        out += ": ";
        append_escaped(out, r.params[i].second);
    }
    out += r.params.empty() ? "}" : "\n      }";
    out += ",\n      \"measured\": {";
    for (std::size_t i = 0; i < r.measured.size(); ++i) {
        out += i ? ",\n        " : "\n        ";
        append_escaped(out, r.measured[i].first);
        out += ": " + json_number(r.measured[i].second);
    }
    out += r.measured.empty() ? "}" : "\n      }";
    out += ",\n      \"notes\": [";
    for (std::size_t i = 0; i < r.notes.size(); ++i) {
        out += i ? ",\n        " : "\n        ";
        append_escaped(out, r.notes[i]);
    }
    out += r.notes.empty() ? "]" : "\n      ]";
    out += ",\n      \"traces\": [";
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
        const Trace& t = r.traces[i];
        out += i ? ",\n        {" : "\n        {";
        out += "\n          \"name\": ";
        append_escaped(out, t.name);
        out += ",\n          \"x_label\": ";
        append_escaped(out, t.x_label);
        out += ",\n          \"y_label\": ";
        append_escaped(out, t.y_label);
        out += ",\n          \"points\": [";
        for (std::size_t j = 0; j < t.points.size(); ++j) {
            out += j ? ", " : "";
            out += "[" + json_number(t.points[j][0]) + ", " + json_number(t.points[j][1]) + "]";
        }
        out += "]\n        }";
    }
    out += r.traces.empty() ? "]" : "\n      ]";
    if (with_runtime) out += ",\n      \"runtime_sec\": " + json_number(r.runtime_sec);
    out += "\n    }";
}

std::string sanitize_token(const std::string& s) {
    std::string out;
    for (const char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')
                   ? c
                   : '_';
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

std::vector<Rung> parse_ladder(const std::string& text) {
    std::vector<Rung> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string tok = text.substr(pos, comma - pos);
        const std::size_t x = tok.find('x');
        bool ok = x != std::string::npos && x > 0 && x + 1 < tok.size();
        int cells = 0, levels = 0;
        if (ok) {
            try {
                std::size_t used = 0;
                cells = std::stoi(tok.substr(0, x), &used);
                ok = used == x;
                std::size_t used2 = 0;
                levels = std::stoi(tok.substr(x + 1), &used2);
                ok = ok && used2 == tok.size() - x - 1;
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok || cells < 2 || levels < 1)
            throw ConfigError("bad resolution ladder entry '" + tok +
                              "' (expected <cells>x<levels>, e.g. 64x8)");
        out.push_back(Rung{cells, levels});
        if (comma == text.size()) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ConfigError("resolution ladder must have at least one entry");
    return out;
}

SuiteConfig SuiteConfig::from_json_text(const std::string& text, const std::string& source_name) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(source_name + ":" + std::to_string(line_of_byte(text, e.byte)) + ": " +
                          e.what());
    }
    if (!j.is_object()) throw ConfigError(source_name + ": top level must be a JSON object");

    SuiteConfig cfg;
    static const std::vector<std::string> top_keys = {
        "seed",       "dim",    "half_width", "t_min", "t_max", "resolution_ladder",
        "output_dir", "format", "timing",     "jobs",  "checks"};
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (std::find(top_keys.begin(), top_keys.end(), k) == top_keys.end())
            throw ConfigError(source_name + ": unknown key '" + k + "'");
    }
    try {
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
                throw ConfigError("'seed' must be a nonnegative integer");
            cfg.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("dim")) {
            if (!j.at("dim").is_number_integer()) throw ConfigError("'dim' must be 1 or 2");
            cfg.dim = j.at("dim").get<int>();
            if (cfg.dim != 1 && cfg.dim != 2) throw ConfigError("'dim' must be 1 or 2");
        }
        if (j.contains("half_width")) {
            cfg.half_width = req_num(j, "half_width");
            if (!(cfg.half_width > 0.0)) throw ConfigError("'half_width' must be positive");
        }
        if (j.contains("t_min")) cfg.t_min = req_num(j, "t_min");
        if (j.contains("t_max")) cfg.t_max = req_num(j, "t_max");
        if (!(cfg.t_min > 0.0) || !(cfg.t_max > cfg.t_min))
            throw ConfigError("need 0 < t_min < t_max");
        if (j.contains("resolution_ladder")) {
            if (!j.at("resolution_ladder").is_string())
                throw ConfigError("'resolution_ladder' must be a string like \"64x8,128x16\"");
            cfg.ladder = parse_ladder(j.at("resolution_ladder").get<std::string>());
        }
        if (j.contains("output_dir")) cfg.output_dir = req_str(j, "output_dir");
        if (j.contains("format")) {
            const std::string f = req_str(j, "format");
            if (f == "json") {
                cfg.emit_json = true;
                cfg.emit_csv = false;
            } else if (f == "csv") {
                cfg.emit_json = false;
                cfg.emit_csv = true;
            } else if (f == "both") {
                cfg.emit_json = cfg.emit_csv = true;
            } else {
                throw ConfigError("'format' must be json, csv, or both");
            }
        }
        if (j.contains("timing")) {
            if (!j.at("timing").is_boolean()) throw ConfigError("'timing' must be a boolean");
            cfg.timing = j.at("timing").get<bool>();
        }
        if (j.contains("jobs")) {
            cfg.jobs = static_cast<int>(req_int(j, "jobs"));
            if (cfg.jobs < 0) throw ConfigError("'jobs' must be >= 0");
        }
    } catch (const ConfigError& e) {
        // Re-wrap with the source name when the message lacks it.
        const std::string msg(e.what());
        if (msg.rfind(source_name, 0) == 0) throw;
        throw ConfigError(source_name + ": " + msg);
    }

    if (j.contains("checks")) {
        if (!j.at("checks").is_array())
            throw ConfigError(source_name + ": 'checks' must be an array");
        const auto offsets = check_element_offsets(text);
        const bool have_lines = offsets.size() == j.at("checks").size();
        std::size_t i = 0;
        for (const auto& cj : j.at("checks")) {
            std::string ctx = source_name;
            if (have_lines) ctx += ":" + std::to_string(line_of_byte(text, offsets[i]));
            ctx += ": checks[" + std::to_string(i) + "]";
            if (!cj.is_object()) throw ConfigError(ctx + ": must be an object");
            CheckInvocation inv;
            inv.params = cj;
            try {
                inv.name = req_str(cj, "name");
                if (cj.contains("expect")) {
                    if (req_str(cj, "expect") != "fail")
                        throw ConfigError("'expect' may only be \"fail\"");
                    inv.expect_fail = true;
                }
                validate_invocation(cfg, inv);
            } catch (const ConfigError& e) {
                const std::string who = inv.name.empty() ? "" : " (" + inv.name + ")";
                throw ConfigError(ctx + who + ": " + e.what());
            }
            cfg.checks.push_back(std::move(inv));
            ++i;
        }
    }
    return cfg;
}

LadderParams SuiteConfig::ladder_params() const {
    LadderParams lp;
    lp.dim = dim;
    lp.half_width = half_width;
    lp.ladder = ladder;
    lp.seed = seed;
    lp.t_min = t_min;
    lp.t_max = t_max;
    return lp;
}

SuiteResult run_suite(const SuiteConfig& config) {
    SuiteResult result;
    result.reports.resize(config.checks.size());
    std::atomic<std::size_t> next{0};

    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= config.checks.size()) return;
            const CheckInvocation& inv = config.checks[i];
            CheckReport rep;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                rep = run_invocation(config, inv);
            } catch (const std::exception& e) {
                rep = CheckReport{};
                rep.name = inv.name;
                rep.status = CheckStatus::Error;
                rep.notes.push_back(std::string("runtime error: ") + e.what());
            }
            rep.expect_fail = inv.expect_fail;
            if (inv.expect_fail && rep.status == CheckStatus::Fail)
                rep.notes.push_back("expected-fail: pass");
            if (config.timing)
                rep.runtime_sec =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            result.reports[i] = std::move(rep);
        }
    };

    std::size_t width = config.jobs > 0 ? static_cast<std::size_t>(config.jobs)
                                        : std::max(1u, std::thread::hardware_concurrency());
    width = std::min(width, config.checks.size());
    if (width <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(width);
        for (std::size_t t = 0; t < width; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (const CheckReport& r : result.reports)
        if (!r.as_designed()) result.exit_code = 1;
    return result;
}

std::string report_json_text(const SuiteConfig& config, const std::vector<CheckReport>& reports) {
    std::string out = "{\n  \"meta\": {\n    \"version\": \"1.0.0\",\n    \"seed\": ";
    out += std::to_string(config.seed);
    if (config.timing) {
        char buf[32];
        const std::time_t now = std::time(nullptr);
        std::tm tm_utc{};
        gmtime_r(&now, &tm_utc);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        out += ",\n    \"timestamp\": \"";
        out += buf;
        out += "\"";
    }
    out += "\n  },\n  \"checks\": [";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        out += i ? ",\n" : "\n";
        append_report(out, reports[i], config.timing);
    }
    out += reports.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string report_csv_text(const std::vector<CheckReport>& reports) {
    std::string out = "name,status,expect_fail,as_designed,bound,slack\n";
    for (const CheckReport& r : reports) {
        out += r.name + "," + to_string(r.status) + "," + (r.expect_fail ? "true" : "false") +
               "," + (r.as_designed() ? "true" : "false") + "," + fmt_g17(r.bound) + "," +
               fmt_g17(r.slack) + "\n";
    }
    return out;
}

std::vector<CheckReport> parse_report_json(const std::string& text, std::uint64_t* seed_out) {
    const ojson j = ojson::parse(text);
    if (seed_out) *seed_out = j.at("meta").at("seed").get<std::uint64_t>();
    std::vector<CheckReport> out;
    for (const auto& cj : j.at("checks")) {
        CheckReport r;
        r.name = cj.at("name").get<std::string>();
        r.expect_fail = cj.at("expect_fail").get<bool>();
        r.status = status_from_string(cj.at("status").get<std::string>());
        r.bound = number_from(cj.at("bound"));
        r.slack = number_from(cj.at("slack"));
        for (const auto& [k, v] : cj.at("params").items())
            r.params.emplace_back(k, v.get<std::string>());
        for (const auto& [k, v] : cj.at("measured").items()) r.measured.emplace_back(k, number_from(v));
        for (const auto& v : cj.at("notes")) r.notes.push_back(v.get<std::string>());
        for (const auto& tj : cj.at("traces")) {
            Trace t;
            t.name = tj.at("name").get<std::string>();
            t.x_label = tj.at("x_label").get<std::string>();
            t.y_label = tj.at("y_label").get<std::string>();
            for (const auto& pj : tj.at("points"))
                t.points.push_back({number_from(pj.at(0)), number_from(pj.at(1))});
            r.traces.push_back(std::move(t));
        }
        if (cj.contains("runtime_sec")) r.runtime_sec = number_from(cj.at("runtime_sec"));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::string> write_report_files(const SuiteConfig& config,
                                            const std::vector<CheckReport>& reports) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    std::vector<std::string> written;
    if (config.emit_json) {
        const std::string path = (fs::path(config.output_dir) / "report.json").string();
        std::ofstream(path, std::ios::binary) << report_json_text(config, reports);
        written.push_back(path);
    }
    if (config.emit_csv) {
        const std::string path = (fs::path(config.output_dir) / "summary.csv").string();
        std::ofstream(path, std::ios::binary) << report_csv_text(reports);
        written.push_back(path);
    }
    return written;
}

std::vector<std::string> emit_plot_data(const std::vector<CheckReport>& reports,
                                        const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const CheckReport& r = reports[i];
        for (std::size_t ti = 0; ti < r.traces.size(); ++ti) {
            const Trace& t = r.traces[ti];
            std::string rows;
            for (const auto& pt : t.points) {
                if (t.name == "offdiag" && !(pt[1] > 0.0)) continue;  // keep log-plottable rows
                rows += fmt_g17(pt[0]) + " " + fmt_g17(pt[1]) + "\n";
            }
            char idx[16];
            std::snprintf(idx, sizeof idx, "check%02zu", i);
            const std::string path =
                (fs::path(out_dir) /
                 (std::string(idx) + "_" + sanitize_token(r.name) + "_" + sanitize_token(t.name) +
                  (r.traces.size() > 1 && t.name == r.traces[0].name && ti > 0
                       ? std::to_string(ti)
                       : "") +
                  ".dat"))
                    .string();
            if (written.empty()) fs::create_directories(out_dir);
            std::ofstream(path, std::ios::binary)
                << "# " << t.x_label << " " << t.y_label << "\n"
                << rows;
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace tentlab
