#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "wgqed/errors.hpp"

namespace wgqed::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config field '" + path + "': " + msg);
}

// Walks one JSON object, remembering which keys were read so leftovers can be
// reported as unknown.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) config_fail(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) config_fail(field(key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) config_fail(field(key), "must be finite");
        }
    }

    void integer(const std::string& key, int& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) config_fail(field(key), "expected an integer");
            out = v->get<int>();
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) config_fail(field(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) config_fail(field(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void strings(const std::string& key, std::vector<std::string>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) config_fail(field(key), "expected an array of strings");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_string()) config_fail(field(key), "expected an array of strings");
                out.push_back(e.get<std::string>());
            }
        }
    }

    void numbers(const std::string& key, std::vector<double>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) config_fail(field(key), "expected an array of numbers");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) config_fail(field(key), "expected an array of numbers");
                out.push_back(e.get<double>());
            }
        }
    }

    void energy(const std::string& key, json& out) {
        if (const json* v = find(key)) {
            if (!v->is_number() && !v->is_string()) {
                config_fail(field(key), "expected a number or an energy name");
            }
            out = *v;
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) config_fail(field(it.key()), "unknown key");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_params(const json& j, const std::string& path, SystemParams& p) {
    Reader r(j, path);
    r.number("omega_c", p.omega_c);
    r.number("Omega", p.Omega);
    r.number("g", p.g);
    r.number("v_tilde", p.v_tilde);
    r.finish();
}

json params_json(const SystemParams& p) {
    return {{"omega_c", p.omega_c}, {"Omega", p.Omega}, {"g", p.g}, {"v_tilde", p.v_tilde}};
}

void check_params(const SystemParams& p, const std::string& path, bool allow_closed) {
    try {
        if (allow_closed) {
            p.validate_allow_closed();
        } else {
            p.validate();
        }
    } catch (const DomainError& e) {
        config_fail(path, e.what());
    }
}

void require_positive(int v, const std::string& path) {
    if (v < 1) config_fail(path, "must be >= 1");
}

void check_channel(const std::string& c, const std::string& path) {
    if (c != "RR" && c != "LL" && c != "LR") config_fail(path, "channel must be RR, LL or LR");
}

}  // namespace

const char* to_string(Command c) {
    switch (c) {
        case Command::spectrum: return "spectrum";
        case Command::single: return "single";
        case Command::wavefunction: return "wavefunction";
        case Command::fluorescence: return "fluorescence";
        case Command::g2: return "g2";
        case Command::oracle_check: return "oracle-check";
    }
    return "?";
}

Command command_from_string(const std::string& s) {
    for (Command c : {Command::spectrum, Command::single, Command::wavefunction,
                      Command::fluorescence, Command::g2, Command::oracle_check}) {
        if (s == to_string(c)) return c;
    }
    throw ConfigError("unknown command '" + s + "'");
}

double resolve_energy(const json& spec, const SystemParams& params, const std::string& field) {
    if (spec.is_number()) return spec.get<double>();
    if (!spec.is_string()) config_fail(field, "expected a number or an energy name");
    std::string s = spec.get<std::string>();
    double factor = 1.0;
    if (s.rfind("2*", 0) == 0) {
        factor *= 2.0;
        s = s.substr(2);
    }
    if (s.size() > 2 && s.compare(s.size() - 2, 2, "/2") == 0) {
        factor *= 0.5;
        s = s.substr(0, s.size() - 2);
    }
    double base = 0.0;
    if (s == "omega_c") {
        base = params.omega_c;
    } else if (s == "Omega") {
        base = params.Omega;
    } else if (s == "bare_lambda1+" || s == "bare_lambda1-" || s == "bare_lambda2+" ||
               s == "bare_lambda2-") {
        try {
            const auto pair = dressed_pair(params, s[11] == '1' ? 1 : 2);
            base = s[12] == '+' ? pair.bare_plus : pair.bare_minus;
        } catch (const Error& e) {
            config_fail(field, e.what());
        }
    } else {
        config_fail(field, "unknown energy name '" + spec.get<std::string>() + "'");
    }
    return factor * base;
}

bool RunConfig::wants(const std::string& format) const {
    return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

json to_json(const RunConfig& c) {
    json curves = json::array();
    for (const auto& cv : c.g2.curves) {
        curves.push_back(
            {{"channel", cv.channel}, {"e_half", cv.e_half}, {"normalization", cv.normalization}});
    }
    json cases = json::array();
    for (const auto& tc : c.oracle.t_matrix) {
        cases.push_back({{"label", tc.label},
                         {"params", params_json(tc.params)},
                         {"k1", tc.k1},
                         {"k2", tc.k2},
                         {"p1", tc.p1}});
    }
    const auto& l1 = c.oracle.lattice_one;
    const auto& l2 = c.oracle.lattice_two;
    return {
        {"command", to_string(c.command)},
        {"preset", c.preset},
        {"params", params_json(c.params)},
        {"spectrum", {{"n_max", c.spectrum.n_max}}},
        {"single", {{"k_min", c.single.k_min}, {"k_max", c.single.k_max}, {"points", c.single.points}}},
        {"wavefunction",
         {{"channels", c.wavefunction.channels},
          {"e_half", c.wavefunction.e_half},
          {"delta_k", c.wavefunction.delta_k},
          {"x_min", c.wavefunction.x_min},
          {"x_max", c.wavefunction.x_max},
          {"points", c.wavefunction.points},
          {"center", c.wavefunction.center}}},
        {"fluorescence",
         {{"energies", c.fluorescence.energies},
          {"delta_max", c.fluorescence.delta_max},
          {"points", c.fluorescence.points}}},
        {"g2",
         {{"mode", c.g2.mode},
          {"channels", c.g2.channels},
          {"e_half_min", c.g2.e_half_min},
          {"e_half_max", c.g2.e_half_max},
          {"points", c.g2.points},
          {"curves", curves},
          {"tau_max", c.g2.tau_max},
          {"tau_points", c.g2.tau_points},
          {"bg_tol", c.g2.bg_tol},
          {"l_reg", c.g2.l_reg}}},
        {"oracle",
         {{"t_matrix", cases},
          {"t_tolerance", c.oracle.t_tolerance},
          {"lattice_one",
           {{"enabled", l1.enabled},
            {"carriers", l1.carriers},
            {"modes", l1.modes},
            {"tolerance", l1.tolerance}}},
          {"lattice_two",
           {{"enabled", l2.enabled},
            {"carrier", l2.carrier},
            {"modes", l2.modes},
            {"wing_half_width", l2.wing_half_width},
            {"wing_stride", l2.wing_stride},
            {"x_max", l2.x_max},
            {"x_points", l2.x_points},
            {"tolerance", l2.tolerance}}}}},
        {"output", {{"dir", c.output.dir}, {"formats", c.output.formats}}},
        {"threads", c.threads},
    };
}

RunConfig config_from_json(const json& j, Command command) {
    RunConfig c;
    c.command = command;
    Reader root(j, "");
    if (const json* v = root.find("command")) {
        if (!v->is_string() || v->get<std::string>() != to_string(command)) {
            config_fail("command", std::string("config is for '") + v->dump() +
                                       "', not '" + to_string(command) + "'");
        }
    }
    root.string("preset", c.preset);
    if (const json* v = root.find("params")) read_params(*v, "params", c.params);
    check_params(c.params, "params", command == Command::spectrum);

    if (const json* v = root.find("spectrum")) {
        Reader r(*v, "spectrum");
        r.integer("n_max", c.spectrum.n_max);
        r.finish();
        require_positive(c.spectrum.n_max, "spectrum.n_max");
    }
    if (const json* v = root.find("single")) {
        Reader r(*v, "single");
        r.number("k_min", c.single.k_min);
        r.number("k_max", c.single.k_max);
        r.integer("points", c.single.points);
        r.finish();
    }
    if (!(c.single.k_min > 0.0)) config_fail("single.k_min", "must be > 0");
    if (!(c.single.k_max > c.single.k_min)) config_fail("single.k_max", "must exceed k_min");
    require_positive(c.single.points, "single.points");

    if (const json* v = root.find("wavefunction")) {
        Reader r(*v, "wavefunction");
        r.strings("channels", c.wavefunction.channels);
        r.energy("e_half", c.wavefunction.e_half);
        r.number("delta_k", c.wavefunction.delta_k);
        r.number("x_min", c.wavefunction.x_min);
        r.number("x_max", c.wavefunction.x_max);
        r.integer("points", c.wavefunction.points);
        r.number("center", c.wavefunction.center);
        r.finish();
    }
    for (const auto& ch : c.wavefunction.channels) check_channel(ch, "wavefunction.channels");
    if (!(c.wavefunction.x_max > c.wavefunction.x_min)) {
        config_fail("wavefunction.x_max", "must exceed x_min");
    }
    require_positive(c.wavefunction.points, "wavefunction.points");

    if (const json* v = root.find("fluorescence")) {
        Reader r(*v, "fluorescence");
        if (const json* e = r.find("energies")) {
            if (!e->is_array() || e->empty()) {
                config_fail("fluorescence.energies", "expected a non-empty array");
            }
            c.fluorescence.energies.assign(e->begin(), e->end());
        }
        r.number("delta_max", c.fluorescence.delta_max);
        r.integer("points", c.fluorescence.points);
        r.finish();
    }
    if (!(c.fluorescence.delta_max > 0.0)) config_fail("fluorescence.delta_max", "must be > 0");
    if (c.fluorescence.points < 3) config_fail("fluorescence.points", "must be >= 3");

    if (const json* v = root.find("g2")) {
        Reader r(*v, "g2");
        r.string("mode", c.g2.mode);
        r.strings("channels", c.g2.channels);
        r.number("e_half_min", c.g2.e_half_min);
        r.number("e_half_max", c.g2.e_half_max);
        r.integer("points", c.g2.points);
        if (const json* cv = r.find("curves")) {
            if (!cv->is_array()) config_fail("g2.curves", "expected an array");
            c.g2.curves.clear();
            for (std::size_t i = 0; i < cv->size(); ++i) {
                const std::string path = "g2.curves[" + std::to_string(i) + "]";
                Reader cr((*cv)[i], path);
                CurveSpec spec;
                cr.string("channel", spec.channel);
                cr.energy("e_half", spec.e_half);
                cr.string("normalization", spec.normalization);
                cr.finish();
                check_channel(spec.channel, path + ".channel");
                if (spec.channel == "LR") config_fail(path + ".channel", "g2 needs RR or LL");
                if (spec.normalization != "asymptotic" && spec.normalization != "box" &&
                    spec.normalization != "auto") {
                    config_fail(path + ".normalization", "must be asymptotic, box or auto");
                }
                c.g2.curves.push_back(spec);
            }
        }
        r.number("tau_max", c.g2.tau_max);
        r.integer("tau_points", c.g2.tau_points);
        r.number("bg_tol", c.g2.bg_tol);
        r.number("l_reg", c.g2.l_reg);
        r.finish();
    }
    if (c.g2.mode != "zero_delay" && c.g2.mode != "curves") {
        config_fail("g2.mode", "must be zero_delay or curves");
    }
    for (const auto& ch : c.g2.channels) {
        check_channel(ch, "g2.channels");
        if (ch == "LR") config_fail("g2.channels", "g2 needs RR or LL");
    }
    if (!(c.g2.e_half_min > 0.0)) config_fail("g2.e_half_min", "must be > 0");
    if (!(c.g2.e_half_max >= c.g2.e_half_min)) config_fail("g2.e_half_max", "must be >= e_half_min");
    require_positive(c.g2.points, "g2.points");
    if (!(c.g2.tau_max >= 0.0)) config_fail("g2.tau_max", "must be >= 0");
    require_positive(c.g2.tau_points, "g2.tau_points");
    if (!(c.g2.bg_tol >= 0.0)) config_fail("g2.bg_tol", "must be >= 0");

    if (const json* v = root.find("oracle")) {
        Reader r(*v, "oracle");
        if (const json* tm = r.find("t_matrix")) {
            if (!tm->is_array()) config_fail("oracle.t_matrix", "expected an array");
            c.oracle.t_matrix.clear();
            for (std::size_t i = 0; i < tm->size(); ++i) {
                const std::string path = "oracle.t_matrix[" + std::to_string(i) + "]";
                Reader cr((*tm)[i], path);
                TMatrixCase tc;
                tc.params = c.params;
                cr.string("label", tc.label);
                if (const json* p = cr.find("params")) read_params(*p, path + ".params", tc.params);
                cr.numbers("k1", tc.k1);
                cr.numbers("k2", tc.k2);
                cr.numbers("p1", tc.p1);
                cr.finish();
                check_params(tc.params, path + ".params", false);
                for (const auto* g : {&tc.k1, &tc.k2, &tc.p1}) {
                    for (double x : *g) {
                        if (!(x > 0.0)) config_fail(path, "momenta must be > 0");
                    }
                }
                c.oracle.t_matrix.push_back(tc);
            }
        }
        r.number("t_tolerance", c.oracle.t_tolerance);
        if (const json* l = r.find("lattice_one")) {
            Reader lr(*l, "oracle.lattice_one");
            lr.boolean("enabled", c.oracle.lattice_one.enabled);
            lr.numbers("carriers", c.oracle.lattice_one.carriers);
            lr.integer("modes", c.oracle.lattice_one.modes);
            lr.number("tolerance", c.oracle.lattice_one.tolerance);
            lr.finish();
        }
        if (const json* l = r.find("lattice_two")) {
            Reader lr(*l, "oracle.lattice_two");
            auto& l2 = c.oracle.lattice_two;
            lr.boolean("enabled", l2.enabled);
            lr.number("carrier", l2.carrier);
            lr.integer("modes", l2.modes);
            lr.number("wing_half_width", l2.wing_half_width);
            lr.integer("wing_stride", l2.wing_stride);
            lr.number("x_max", l2.x_max);
            lr.integer("x_points", l2.x_points);
            lr.number("tolerance", l2.tolerance);
            lr.finish();
        }
        r.finish();
    }
    if (c.oracle.lattice_one.modes < 2) config_fail("oracle.lattice_one.modes", "must be >= 2");
    if (c.oracle.lattice_two.modes < 2) config_fail("oracle.lattice_two.modes", "must be >= 2");
    require_positive(c.oracle.lattice_two.wing_stride, "oracle.lattice_two.wing_stride");
    if (c.oracle.lattice_two.x_points < 2) config_fail("oracle.lattice_two.x_points", "must be >= 2");

    if (const json* v = root.find("output")) {
        Reader r(*v, "output");
        r.string("dir", c.output.dir);
        r.strings("formats", c.output.formats);
        r.finish();
    }
    for (const auto& f : c.output.formats) {
        if (f != "csv" && f != "json" && f != "plot") {
            config_fail("output.formats", "unknown format '" + f + "' (csv, json, plot)");
        }
    }
    if (const json* v = root.find("threads")) {
        if (!v->is_number_unsigned() || v->get<unsigned>() < 1) config_fail("threads", "must be >= 1");
        c.threads = v->get<unsigned>();
    }
    root.finish();
    return c;
}

json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line:column.
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << path << ":" << line << ":" << col << ": " << e.what();
        throw ConfigError(os.str());
    }
}

std::vector<std::string> preset_names() {
    return {"fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b",
            "fig3c", "fig3d", "quick", "lattice"};
}

namespace {

std::vector<double> around(double center, double half, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(center - half + 2.0 * half * i / (n - 1));
    return v;
}

}  // namespace

RunConfig preset(const std::string& name) {
    RunConfig c;
    c.preset = name;
    if (name.size() == 5 && name.rfind("fig", 0) == 0 && (name[3] == '2' || name[3] == '3')) {
        c.params = name[3] == '2' ? SystemParams::strong_coupling() : SystemParams::weak_coupling();
        c.output.formats = {"csv", "json", "plot"};
        switch (name[4]) {
            case 'a':
                c.command = Command::fluorescence;
                c.fluorescence.energies = {"bare_lambda2+", "bare_lambda2-"};
                return c;
            case 'b':
                c.command = Command::g2;
                c.g2.mode = "zero_delay";
                c.g2.channels = {"LL", "RR"};
                return c;
            case 'c':
                c.command = Command::g2;
                c.g2.mode = "curves";
                c.g2.curves = {{"LL", "bare_lambda1-", "auto"},
                               {"LL", "bare_lambda1+", "auto"},
                               {"RR", "Omega", "auto"}};
                return c;
            case 'd':
                c.command = Command::g2;
                c.g2.mode = "curves";
                c.g2.curves = {{"LL", "Omega", "auto"},
                               {"RR", "bare_lambda1-", "auto"},
                               {"RR", "bare_lambda1+", "auto"}};
                return c;
            default:
                break;
        }
    }
    if (name == "quick") {
        c.command = Command::oracle_check;
        c.oracle.t_matrix = {
            {"strong", SystemParams::strong_coupling(), around(5.5, 0.5, 5), around(4.5, 0.5, 5),
             around(5.0, 1.0, 5)},
            {"weak", SystemParams::weak_coupling(), around(10.3, 0.3, 5), around(9.7, 0.3, 5),
             around(9.9, 0.5, 5)},
        };
        c.oracle.lattice_one.enabled = true;
        return c;
    }
    if (name == "lattice") {
        c.command = Command::oracle_check;
        c.oracle.lattice_one.enabled = true;
        c.oracle.lattice_two.enabled = true;
        return c;
    }
    std::string known;
    for (const auto& n : preset_names()) known += " " + n;
    throw ConfigError("unknown preset '" + name + "' (known:" + known + ")");
}

}  // namespace wgqed::cli
