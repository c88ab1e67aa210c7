#include "gridsync/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gridsync/errors.hpp"

namespace gridsync {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, std::size_t line, const std::string& msg) {
    fail(Errc::config_parse, origin + ":" + std::to_string(line) + ": " + msg);
}

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;
    const std::string& origin;
    std::size_t line;

    bool done() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    void skip_ws() {
        while (!done() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n')) ++pos;
    }
};

ConfigValue parse_value(Cursor& c);

std::string parse_bare_key(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.pos;
    while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_'))
        ++c.pos;
    if (c.pos == start) parse_fail(c.origin, c.line, "expected a key");
    return c.s.substr(start, c.pos - start);
}

ConfigValue parse_number(Cursor& c) {
    std::size_t start = c.pos;
    while (!c.done() && (std::isdigit(static_cast<unsigned char>(c.peek())) || c.peek() == '+' ||
                         c.peek() == '-' || c.peek() == '.' || c.peek() == 'e' || c.peek() == 'E'))
        ++c.pos;
    const std::string tok = c.s.substr(start, c.pos - start);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty())
        parse_fail(c.origin, c.line, "malformed number '" + tok + "'");
    ConfigValue out;
    out.kind = ConfigValue::Kind::number;
    out.num = v;
    return out;
}

ConfigValue parse_value(Cursor& c) {
    c.skip_ws();
    if (c.done()) parse_fail(c.origin, c.line, "expected a value");
    ConfigValue out;
    const char ch = c.peek();
    if (ch == '"') {
        ++c.pos;
        std::size_t start = c.pos;
        while (!c.done() && c.peek() != '"') ++c.pos;
        if (c.done()) parse_fail(c.origin, c.line, "unterminated string");
        out.kind = ConfigValue::Kind::string;
        out.str = c.s.substr(start, c.pos - start);
        ++c.pos;
        return out;
    }
    if (ch == '[') {
        ++c.pos;
        out.kind = ConfigValue::Kind::array;
        c.skip_ws();
        if (!c.done() && c.peek() == ']') {
            ++c.pos;
            return out;
        }
        while (true) {
            out.items.push_back(parse_value(c));
            c.skip_ws();
            if (!c.done() && c.peek() == ',') {
                ++c.pos;
                c.skip_ws();
                if (!c.done() && c.peek() == ']') { // trailing comma
                    ++c.pos;
                    return out;
                }
                continue;
            }
            if (!c.done() && c.peek() == ']') {
                ++c.pos;
                return out;
            }
            parse_fail(c.origin, c.line, "expected ',' or ']' in array");
        }
    }
    if (ch == '{') {
        ++c.pos;
        out.kind = ConfigValue::Kind::table;
        c.skip_ws();
        if (!c.done() && c.peek() == '}') {
            ++c.pos;
            return out;
        }
        while (true) {
            const std::string key = parse_bare_key(c);
            c.skip_ws();
            if (c.done() || c.peek() != '=')
                parse_fail(c.origin, c.line, "expected '=' after key '" + key + "'");
            ++c.pos;
            out.fields[key] = parse_value(c);
            c.skip_ws();
            if (!c.done() && c.peek() == ',') {
                ++c.pos;
                continue;
            }
            if (!c.done() && c.peek() == '}') {
                ++c.pos;
                return out;
            }
            parse_fail(c.origin, c.line, "expected ',' or '}' in inline table");
        }
    }
    if (c.s.compare(c.pos, 4, "true") == 0) {
        c.pos += 4;
        out.kind = ConfigValue::Kind::boolean;
        out.flag = true;
        return out;
    }
    if (c.s.compare(c.pos, 5, "false") == 0) {
        c.pos += 5;
        out.kind = ConfigValue::Kind::boolean;
        out.flag = false;
        return out;
    }
    return parse_number(c);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

int bracket_balance(const std::string& line) {
    int depth = 0;
    bool in_string = false;
    for (char ch : line) {
        if (ch == '"') in_string = !in_string;
        if (in_string) continue;
        if (ch == '[' || ch == '{') ++depth;
        if (ch == ']' || ch == '}') --depth;
    }
    return depth;
}

} // namespace

ConfigDoc parse_config(const std::string& text, const std::string& origin) {
    ConfigDoc doc;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string logical = strip_comment(raw);
        const std::size_t start_line = lineno;
        int depth = bracket_balance(logical);
        while (depth > 0) {
            std::string more;
            if (!std::getline(in, more))
                parse_fail(origin, start_line, "unbalanced brackets at end of file");
            ++lineno;
            logical += "\n" + strip_comment(more);
            depth = bracket_balance(logical);
        }
        if (depth < 0) parse_fail(origin, start_line, "unbalanced closing bracket");

        std::size_t first = logical.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;

        Cursor c{logical, 0, origin, start_line};
        const std::string key = parse_bare_key(c);
        c.skip_ws();
        if (c.done() || c.peek() != '=')
            parse_fail(origin, start_line, "expected '=' after key '" + key + "'");
        ++c.pos;
        ConfigValue value = parse_value(c);
        c.skip_ws();
        // allow trailing \r from CRLF files
        while (!c.done() && (c.peek() == '\r')) ++c.pos;
        if (!c.done()) parse_fail(origin, start_line, "trailing characters after value of '" + key + "'");
        if (doc.count(key)) parse_fail(origin, start_line, "duplicate key '" + key + "'");
        doc[key] = std::move(value);
    }
    return doc;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::config_parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double need_number(const ConfigDoc& doc, const std::string& key, const std::string& origin) {
    auto it = doc.find(key);
    if (it == doc.end()) fail(Errc::config_parse, origin + ": missing field '" + key + "'");
    if (it->second.kind != ConfigValue::Kind::number)
        fail(Errc::config_parse, origin + ": field '" + key + "' must be a number");
    return it->second.num;
}

Vec need_vector(const ConfigDoc& doc, const std::string& key, std::size_t n,
                const std::string& origin) {
    auto it = doc.find(key);
    if (it == doc.end()) fail(Errc::config_parse, origin + ": missing field '" + key + "'");
    const ConfigValue& v = it->second;
    if (v.kind != ConfigValue::Kind::array)
        fail(Errc::config_parse, origin + ": field '" + key + "' must be an array");
    Vec out;
    for (const auto& item : v.items) {
        if (item.kind != ConfigValue::Kind::number)
            fail(Errc::config_parse, origin + ": field '" + key + "' must contain numbers");
        out.push_back(item.num);
    }
    if (out.size() != n)
        fail(Errc::config_parse, origin + ": field '" + key + "' has " +
                                     std::to_string(out.size()) + " entries, expected " +
                                     std::to_string(n));
    return out;
}

Mat need_matrix(const ConfigValue& v, const std::string& key, std::size_t n,
                const std::string& origin) {
    if (v.kind != ConfigValue::Kind::array || v.items.size() != n)
        fail(Errc::config_parse,
             origin + ": field '" + key + "' must be an array of " + std::to_string(n) + " rows");
    Mat m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const ConfigValue& row = v.items[i];
        if (row.kind != ConfigValue::Kind::array || row.items.size() != n)
            fail(Errc::config_parse, origin + ": row " + std::to_string(i + 1) + " of '" + key +
                                         "' must have " + std::to_string(n) + " entries");
        for (std::size_t j = 0; j < n; ++j) {
            if (row.items[j].kind != ConfigValue::Kind::number)
                fail(Errc::config_parse, origin + ": '" + key + "' must contain numbers");
            m(i, j) = row.items[j].num;
        }
    }
    return m;
}

bool get_flag(const ConfigDoc& doc, const std::string& key, bool fallback,
              const std::string& origin) {
    auto it = doc.find(key);
    if (it == doc.end()) return fallback;
    if (it->second.kind != ConfigValue::Kind::boolean)
        fail(Errc::config_parse, origin + ": field '" + key + "' must be true or false");
    return it->second.flag;
}

} // namespace

CouplingNetwork load_network(const std::string& path) {
    const ConfigDoc doc = parse_config(read_file(path), path);
    const double n_raw = need_number(doc, "n", path);
    if (n_raw < 1 || n_raw != std::floor(n_raw))
        fail(Errc::config_parse, path + ": 'n' must be a positive integer");
    const std::size_t n = static_cast<std::size_t>(n_raw);
    const bool degrees = get_flag(doc, "degrees", false, path);
    const bool symmetric = get_flag(doc, "symmetric", false, path);
    const double angle_scale = degrees ? kPi / 180.0 : 1.0;

    CouplingNetwork net;
    net.n = n;
    net.damping = need_vector(doc, "D", n, path);
    net.natural_freq = need_vector(doc, "omega", n, path);
    if (doc.count("M")) net.inertia = need_vector(doc, "M", n, path);
    net.coupling = Mat(n, n, 0.0);
    net.phase_shift = Mat(n, n, 0.0);

    const bool has_dense = doc.count("P") > 0;
    const bool has_edges = doc.count("edges") > 0;
    if (has_dense == has_edges)
        fail(Errc::config_parse, path + ": provide exactly one of 'P' or 'edges'");

    if (has_dense) {
        net.coupling = need_matrix(doc.at("P"), "P", n, path);
        if (doc.count("phi")) {
            net.phase_shift = need_matrix(doc.at("phi"), "phi", n, path);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) net.phase_shift(i, j) *= angle_scale;
        }
    } else {
        const ConfigValue& edges = doc.at("edges");
        if (edges.kind != ConfigValue::Kind::array)
            fail(Errc::config_parse, path + ": 'edges' must be an array of tables");
        for (const auto& e : edges.items) {
            if (e.kind != ConfigValue::Kind::table)
                fail(Errc::config_parse, path + ": each edge must be an inline table");
            auto field = [&](const char* name, bool required, double fallback) {
                auto it = e.fields.find(name);
                if (it == e.fields.end()) {
                    if (required)
                        fail(Errc::config_parse,
                             path + ": edge missing field '" + std::string(name) + "'");
                    return fallback;
                }
                if (it->second.kind != ConfigValue::Kind::number)
                    fail(Errc::config_parse,
                         path + ": edge field '" + std::string(name) + "' must be a number");
                return it->second.num;
            };
            const double fi = field("i", true, 0.0), fj = field("j", true, 0.0);
            const double p = field("p", true, 0.0);
            const double phi = field("phi", false, 0.0) * angle_scale;
            if (fi < 1 || fi > static_cast<double>(n) || fi != std::floor(fi) || fj < 1 ||
                fj > static_cast<double>(n) || fj != std::floor(fj))
                fail(Errc::config_parse, path + ": edge indices must be integers in [1, n]");
            const std::size_t i = static_cast<std::size_t>(fi) - 1;
            const std::size_t j = static_cast<std::size_t>(fj) - 1;
            if (i == j) fail(Errc::config_parse, path + ": self-loop edges are not allowed");
            net.coupling(i, j) = p;
            net.phase_shift(i, j) = phi;
            if (symmetric) {
                net.coupling(j, i) = p;
                net.phase_shift(j, i) = phi;
            }
        }
    }

    if (symmetric && !is_symmetric(net))
        fail(Errc::network_invalid, path + ": declared symmetric but P or phi is not");
    validate(net);
    return net;
}

RunConfig load_run_config(const std::string& path) {
    const ConfigDoc doc = parse_config(read_file(path), path);
    RunConfig cfg;

    auto it = doc.find("network");
    if (it == doc.end() || it->second.kind != ConfigValue::Kind::string)
        fail(Errc::config_parse, path + ": missing string field 'network'");
    std::filesystem::path np(it->second.str);
    if (np.is_relative()) np = std::filesystem::path(path).parent_path() / np;
    cfg.network_path = np.string();
    cfg.net = load_network(cfg.network_path);

    if (doc.count("model")) {
        const ConfigValue& m = doc.at("model");
        if (m.kind != ConfigValue::Kind::string)
            fail(Errc::config_parse, path + ": 'model' must be a string");
        if (m.str == "kuramoto")
            cfg.model = Model::kuramoto;
        else if (m.str == "swing")
            cfg.model = Model::swing;
        else if (m.str == "grounded")
            cfg.model = Model::grounded;
        else if (m.str == "sp_form")
            cfg.model = Model::sp_form;
        else
            fail(Errc::config_parse, path + ": unknown model '" + m.str + "'");
    }

    cfg.t_end = need_number(doc, "t_end", path);
    if (!(cfg.t_end > 0.0)) fail(Errc::config_parse, path + ": 't_end' must be positive");

    if (doc.count("method")) {
        const ConfigValue& m = doc.at("method");
        if (m.kind != ConfigValue::Kind::string || (m.str != "rk4" && m.str != "rk45"))
            fail(Errc::config_parse, path + ": 'method' must be \"rk4\" or \"rk45\"");
        cfg.opts.method = m.str == "rk4" ? StepMethod::rk4 : StepMethod::rk45;
    }
    if (doc.count("dt")) cfg.opts.dt = need_number(doc, "dt", path);
    if (doc.count("rtol")) cfg.opts.rtol = need_number(doc, "rtol", path);
    if (doc.count("atol")) cfg.opts.atol = need_number(doc, "atol", path);
    if (doc.count("stride")) {
        const double s = need_number(doc, "stride", path);
        if (s < 1 || s != std::floor(s))
            fail(Errc::config_parse, path + ": 'stride' must be a positive integer");
        cfg.opts.stride = static_cast<std::size_t>(s);
    }
    if (!(cfg.opts.dt > 0.0)) fail(Errc::config_parse, path + ": 'dt' must be positive");
    if (doc.count("seed")) {
        const double s = need_number(doc, "seed", path);
        if (s < 0 || s != std::floor(s))
            fail(Errc::config_parse, path + ": 'seed' must be a non-negative integer");
        cfg.seed = static_cast<std::uint64_t>(s);
    }

    const bool degrees = get_flag(doc, "degrees", false, path);
    const double angle_scale = degrees ? kPi / 180.0 : 1.0;

    std::string init = "explicit";
    if (doc.count("init")) {
        const ConfigValue& v = doc.at("init");
        if (v.kind != ConfigValue::Kind::string)
            fail(Errc::config_parse, path + ": 'init' must be a string");
        init = v.str;
    }
    const std::size_t state_dim =
        (cfg.model == Model::grounded || cfg.model == Model::sp_form) ? cfg.net.n - 1 : cfg.net.n;
    if (init == "explicit") {
        cfg.init = RunConfig::Init::explicit_values;
        cfg.theta0 = need_vector(doc, "theta0", state_dim, path);
        for (double& a : cfg.theta0) a *= angle_scale;
    } else if (init == "arc") {
        cfg.init = RunConfig::Init::arc_uniform;
        cfg.gamma = need_number(doc, "gamma", path) * angle_scale;
    } else if (init == "ball") {
        cfg.init = RunConfig::Init::two_norm_ball;
        cfg.radius = need_number(doc, "radius", path);
    } else {
        fail(Errc::config_parse, path + ": 'init' must be \"explicit\", \"arc\" or \"ball\"");
    }

    if (cfg.model == Model::swing || cfg.model == Model::sp_form) {
        if (doc.count("dtheta0"))
            cfg.dtheta0 = need_vector(doc, "dtheta0", cfg.net.n, path);
        else
            cfg.dtheta0.assign(cfg.net.n, 0.0);
    }

    if (doc.count("output")) {
        const ConfigValue& v = doc.at("output");
        if (v.kind != ConfigValue::Kind::string)
            fail(Errc::config_parse, path + ": 'output' must be a string");
        cfg.output = v.str;
    }
    return cfg;
}

} // namespace gridsync
