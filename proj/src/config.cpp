#include "wgnls/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace wgnls {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_double_list(const std::string& value, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("config: bad number '" + item + "' in " + key);
        }
    }
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

class KeyReader {
  public:
    explicit KeyReader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string str(const std::string& key, const std::string& fallback) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        used_.insert(key);
        return it->second;
    }

    double num(const std::string& key, double fallback) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        used_.insert(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument(it->second);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config: bad number for " + key + ": '" + it->second + "'");
        }
    }

    long integer(const std::string& key, long fallback) {
        const double v = num(key, static_cast<double>(fallback));
        const long r = std::lround(v);
        if (v != static_cast<double>(r)) throw ConfigError("config: " + key + " must be an integer");
        return r;
    }

    bool flag(const std::string& key, bool fallback) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        used_.insert(key);
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw ConfigError("config: " + key + " must be true or false");
    }

    std::vector<double> list(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError("config: missing required key " + key);
        used_.insert(key);
        return parse_double_list(it->second, key);
    }

    void fail_on_unused() const {
        for (const auto& [key, value] : kv_) {
            if (!used_.count(key))
                throw ConfigError("config: unknown key '" + key + "'");
        }
    }

  private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
};

std::map<std::string, std::string> tokenize(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) + " is not key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: empty key or value on line " + std::to_string(line_no));
        if (kv.count(key))
            throw ConfigError("config: duplicate key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

SimConfig from_reader(KeyReader& reader) {
    SimConfig cfg;
    cfg.curve_name = reader.str("curve_name", cfg.curve_name);
    cfg.curve_a = reader.num("curve_a", cfg.curve_a);
    cfg.curve_n = static_cast<int>(reader.integer("curve_n", cfg.curve_n));

    std::string kind = reader.str("domain_kind", cfg.curve_name == "line" ? "open" : "closed");
    if (kind == "closed") cfg.domain_kind = DomainKind::ClosedCurve;
    else if (kind == "open") cfg.domain_kind = DomainKind::OpenCurve;
    else throw ConfigError("config: domain_kind must be closed or open");
    cfg.l_box = reader.num("L_box", cfg.l_box);

    cfg.eps_list = reader.list("eps_list");
    cfg.lambda = reader.num("lambda", cfg.lambda);
    cfg.alpha = reader.num("alpha", cfg.alpha);
    cfg.eps0_cap = reader.num("eps0_cap", cfg.eps0_cap);

    cfg.n1 = static_cast<int>(reader.integer("n1", cfg.n1));
    cfg.n2 = static_cast<int>(reader.integer("n2", cfg.n2));
    const std::string dt = reader.str("dt", "auto");
    const std::string dt_rule = reader.str("dt_rule", "");
    if (!dt_rule.empty()) {
        if (dt_rule != "auto" && dt_rule != "stability")
            throw ConfigError("config: dt_rule must be auto or stability");
        if (reader.has("dt")) throw ConfigError("config: give dt or dt_rule, not both");
        cfg.dt_auto = true;
    } else if (dt == "auto") {
        cfg.dt_auto = true;
    } else {
        cfg.dt_auto = false;
        try {
            cfg.dt = std::stod(dt);
        } catch (const std::exception&) {
            throw ConfigError("config: dt must be a number or 'auto'");
        }
        if (!(cfg.dt > 0.0)) throw ConfigError("config: dt must be positive");
    }
    cfg.t_end = reader.num("t_end", cfg.t_end);
    cfg.snapshot_count = static_cast<int>(reader.integer("snapshot_count", cfg.snapshot_count));
    if (reader.has("snapshot_times")) {
        cfg.snapshot_times = reader.list("snapshot_times");
    }

    const std::string family = reader.str("data_family", "tensor_smooth");
    if (family == "tensor_smooth") cfg.data.family = DataFamily::TensorSmooth;
    else if (family == "tensor_plus_excited") cfg.data.family = DataFamily::TensorPlusExcited;
    else if (family == "rough_h1") cfg.data.family = DataFamily::RoughH1;
    else throw ConfigError("config: unknown data_family '" + family + "'");

    const std::string profile = reader.str("theta0_profile", "plane_wave");
    if (profile == "plane_wave") cfg.data.theta0.kind = Theta0Profile::Kind::PlaneWave;
    else if (profile == "modulated") cfg.data.theta0.kind = Theta0Profile::Kind::Modulated;
    else if (profile == "ring_bump") cfg.data.theta0.kind = Theta0Profile::Kind::RingBump;
    else if (profile == "bump") cfg.data.theta0.kind = Theta0Profile::Kind::Bump;
    else throw ConfigError("config: unknown theta0_profile '" + profile + "'");

    cfg.data.theta0.amplitude = reader.num("theta0_amplitude", cfg.data.theta0.amplitude);
    cfg.data.theta0.mode = static_cast<int>(reader.integer("theta0_mode", cfg.data.theta0.mode));
    cfg.data.theta0.modulation = reader.num("theta0_modulation", cfg.data.theta0.modulation);
    cfg.data.theta0.width = reader.num("theta0_width", cfg.data.theta0.width);
    cfg.data.theta0.center = reader.num("theta0_center", cfg.data.theta0.center);
    cfg.data.excited_amplitude = reader.num("excited_amplitude", cfg.data.excited_amplitude);
    cfg.data.excited_mode = static_cast<int>(reader.integer("excited_mode", cfg.data.excited_mode));
    cfg.data.rough_s = reader.num("rough_s", cfg.data.rough_s);

    cfg.mass_drift_abort = reader.num("mass_drift_abort", cfg.mass_drift_abort);
    cfg.dealias = reader.flag("dealias", cfg.dealias);
    cfg.output_dir = reader.str("output_dir", cfg.output_dir);
    cfg.seed = static_cast<std::uint64_t>(reader.integer("seed", 0));
    cfg.data.seed = cfg.seed;

    reader.fail_on_unused();
    cfg.validate_and_finalize();
    return cfg;
}

} // namespace

CurveSpec SimConfig::make_curve() const {
    if (curve_name == "circle") return CurveSpec::circle();
    if (curve_name == "line") return CurveSpec::line(l_box);
    if (curve_name == "perturbed_circle") return CurveSpec::perturbed_circle(curve_a, curve_n);
    throw ConfigError("config: unknown curve_name '" + curve_name + "'");
}

void SimConfig::validate_and_finalize() {
    if (alpha != 1.0)
        throw ConfigError("config: alpha is fixed to the critical value 1");
    if (eps_list.empty()) throw ConfigError("config: eps_list must not be empty");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw ConfigError("config: eps_list must be strictly decreasing");

    const CurveSpec curve = make_curve();
    curve.validate();
    if (domain_kind != curve.domain_kind)
        throw ConfigError("config: domain_kind inconsistent with curve_name");

    const double sup = curve.kappa_sup();
    const double eps0 = sup > 0.0 ? std::min(eps0_cap, 0.99 / sup) : eps0_cap;
    for (double eps : eps_list)
        if (!(eps > 0.0) || eps >= eps0)
            throw ConfigError("config: eps " + std::to_string(eps) + " outside (0, " +
                              std::to_string(eps0) + ")");

    make_grid().validate();
    if (t_end < 0.0) throw ConfigError("config: t_end must be >= 0");

    if (snapshot_times.empty()) {
        if (snapshot_count < 1) throw ConfigError("config: snapshot_count must be >= 1");
        if (snapshot_count == 1) {
            snapshot_times = {t_end};
        } else {
            snapshot_times.resize(snapshot_count);
            for (int i = 0; i < snapshot_count; ++i)
                snapshot_times[i] = t_end * i / (snapshot_count - 1);
        }
    }
    std::sort(snapshot_times.begin(), snapshot_times.end());
    for (double t : snapshot_times)
        if (t < -1e-12 || t > t_end + 1e-12)
            throw ConfigError("config: snapshot time outside [0, t_end]");
}

SimConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    KeyReader reader(tokenize(in));
    return from_reader(reader);
}

SimConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    KeyReader reader(tokenize(in));
    return from_reader(reader);
}

} // namespace wgnls
