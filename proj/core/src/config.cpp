#include "aoilab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "aoilab/errors.hpp"
#include "aoilab/mathutil.hpp"

namespace aoilab {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
};

// section -> key -> entry
using RawConfig = std::map<std::string, std::map<std::string, RawEntry>>;

const std::map<std::string, std::vector<std::string>>& schema() {
    static const std::map<std::string, std::vector<std::string>> s = {
        {"channel", {"variant", "K", "N", "epsilon", "W", "T", "gain", "tau_min", "tau_max"}},
        {"traffic", {"lambda", "model"}},
        {"policy", {"policy", "t_s", "h", "tau_a", "tau_b", "h_a"}},
        {"solver",
         {"a_max", "tol", "max_iter", "betas", "pc_grid", "stride", "prop3_form", "horizon", "warmup",
          "de_population", "de_weight", "de_crossover", "de_generations", "coherence_times"}},
    };
    return s;
}

std::string section_of(const std::string& key, const std::string& origin, int line) {
    for (const auto& [section, keys] : schema())
        if (std::find(keys.begin(), keys.end(), key) != keys.end()) return section;
    std::ostringstream msg;
    msg << origin << ":" << line << ": unknown key '" << key << "'";
    throw ConfigError(msg.str());
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void insert_entry(RawConfig& raw, const std::string& section_hint, const std::string& key, const std::string& value,
                  const std::string& origin, int line) {
    const std::string section = section_of(key, origin, line);
    if (!section_hint.empty() && section_hint != section) {
        std::ostringstream msg;
        msg << origin << ":" << line << ": key '" << key << "' belongs to section [" << section << "], not ["
            << section_hint << "]";
        throw ConfigError(msg.str());
    }
    auto [it, inserted] = raw[section].emplace(key, RawEntry{value, line});
    if (!inserted) {
        std::ostringstream msg;
        msg << origin << ":" << line << ": duplicate key '" << key << "' (first set on line " << it->second.line
            << ")";
        throw ConfigError(msg.str());
    }
}

RawConfig parse_ini(const std::string& text, const std::string& origin) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (schema().find(section) == schema().end())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
        insert_entry(raw, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), origin, lineno);
    }
    return raw;
}

std::string json_scalar_to_string(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    if (v.is_array()) {  // lists map onto the comma syntax of the text format
        std::string out;
        for (const auto& e : v) {
            if (!out.empty()) out += ',';
            out += json_scalar_to_string(e);
        }
        return out;
    }
    throw ConfigError("config: unsupported JSON value type");
}

RawConfig parse_json(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(origin + ": JSON parse error: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(origin + ": top-level JSON value must be an object");
    RawConfig raw;
    for (const auto& [key, value] : doc.items()) {
        if (value.is_object()) {
            if (schema().find(key) == schema().end()) throw ConfigError(origin + ": unknown section '" + key + "'");
            for (const auto& [k2, v2] : value.items()) insert_entry(raw, key, k2, json_scalar_to_string(v2), origin, 0);
        } else {
            insert_entry(raw, "", key, json_scalar_to_string(value), origin, 0);
        }
    }
    return raw;
}

class ConfigReader {
  public:
    ConfigReader(RawConfig raw, std::string origin) : raw_(std::move(raw)), origin_(std::move(origin)) {}

    bool has(const std::string& section, const std::string& key) const {
        const auto s = raw_.find(section);
        return s != raw_.end() && s->second.find(key) != s->second.end();
    }

    std::string require(const std::string& section, const std::string& key) {
        if (!has(section, key)) throw ConfigError(origin_ + ": missing required key '" + key + "'");
        return take(section, key);
    }

    std::string get(const std::string& section, const std::string& key, const std::string& fallback) {
        return has(section, key) ? take(section, key) : fallback;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) {
        return has(section, key) ? to_double(section, key, take(section, key)) : fallback;
    }

    long long get_int(const std::string& section, const std::string& key, long long fallback) {
        return has(section, key) ? to_int(section, key, take(section, key)) : fallback;
    }

    double require_double(const std::string& section, const std::string& key) {
        return to_double(section, key, require(section, key));
    }

    long long require_int(const std::string& section, const std::string& key) {
        return to_int(section, key, require(section, key));
    }

    std::vector<double> get_double_list(const std::string& section, const std::string& key) {
        std::vector<double> out;
        if (!has(section, key)) return out;
        std::istringstream in(take(section, key));
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(to_double(section, key, trim(item)));
        return out;
    }

    std::vector<int> get_int_list(const std::string& section, const std::string& key) {
        std::vector<int> out;
        if (!has(section, key)) return out;
        std::istringstream in(take(section, key));
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(static_cast<int>(to_int(section, key, trim(item))));
        return out;
    }

  private:
    std::string take(const std::string& section, const std::string& key) { return raw_[section][key].value; }

    double to_double(const std::string& section, const std::string& key, const std::string& value) const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError(origin_ + ":" + std::to_string(line(section, key)) + ": key '" + key +
                              "' expects a number, got '" + value + "'");
        }
    }

    long long to_int(const std::string& section, const std::string& key, const std::string& value) const {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError(origin_ + ":" + std::to_string(line(section, key)) + ": key '" + key +
                              "' expects an integer, got '" + value + "'");
        }
    }

    int line(const std::string& section, const std::string& key) const {
        const auto s = raw_.find(section);
        if (s == raw_.end()) return 0;
        const auto k = s->second.find(key);
        return k == s->second.end() ? 0 : k->second.line;
    }

    RawConfig raw_;
    std::string origin_;
};

std::string canonical_dump(const RunConfig& cfg) {
    std::ostringstream os;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "channel.variant=" << static_cast<int>(cfg.scenario.channel.variant()) << "\n";
    os << "channel.digest=" << cfg.scenario.channel.digest() << "\n";
    os << "traffic.lambda=" << num(cfg.scenario.lambda) << "\n";
    os << "traffic.epsilon=" << num(cfg.scenario.epsilon) << "\n";
    os << "traffic.model=" << to_string(cfg.scenario.model) << "\n";
    os << "policy.kind=" << cfg.policy.kind << "\n";
    os << "policy.t_s=" << cfg.policy.t_s << "\n";
    os << "policy.h=" << cfg.policy.h << "\n";
    os << "policy.tau_a=" << cfg.policy.tau_a << "\n";
    os << "policy.tau_b=" << cfg.policy.tau_b << "\n";
    os << "policy.h_a=" << cfg.policy.h_a << "\n";
    os << "solver.a_max=" << cfg.solver.a_max << "\n";
    os << "solver.tol=" << num(cfg.solver.tol) << "\n";
    os << "solver.max_iter=" << cfg.solver.max_iter << "\n";
    os << "solver.betas=";
    for (double b : cfg.solver.betas) os << num(b) << ",";
    os << "\n";
    os << "solver.pc_grid=" << cfg.solver.pc_grid << "\n";
    os << "solver.stride=" << cfg.solver.stride << "\n";
    os << "solver.prop3_statement_form=" << cfg.solver.prop3_statement_form << "\n";
    os << "solver.horizon=" << cfg.solver.horizon << "\n";
    os << "solver.warmup=" << cfg.solver.warmup << "\n";
    os << "solver.de_population=" << cfg.solver.de_population << "\n";
    os << "solver.de_weight=" << num(cfg.solver.de_weight) << "\n";
    os << "solver.de_crossover=" << num(cfg.solver.de_crossover) << "\n";
    os << "solver.de_generations=" << cfg.solver.de_generations << "\n";
    os << "solver.coherence_times=";
    for (int t : cfg.solver.coherence_times) os << t << ",";
    os << "\n";
    return os.str();
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    const bool is_json = first != std::string::npos && text[first] == '{';
    ConfigReader reader(is_json ? parse_json(text, origin) : parse_ini(text, origin), origin);

    const int k_bits = static_cast<int>(reader.require_int("channel", "K"));
    const double noise = reader.require_double("channel", "N");
    const double epsilon = reader.require_double("channel", "epsilon");
    const int tau_min = static_cast<int>(reader.require_int("channel", "tau_min"));
    const int tau_max = static_cast<int>(reader.require_int("channel", "tau_max"));
    const double lambda = reader.require_double("traffic", "lambda");
    const std::string model_name = reader.require("traffic", "model");

    GenerationModel model;
    if (model_name == "NP")
        model = GenerationModel::kNP;
    else if (model_name == "P")
        model = GenerationModel::kP;
    else if (model_name == "AT")
        model = GenerationModel::kAT;
    else
        throw ConfigError(origin + ": key 'model' must be NP, P or AT, got '" + model_name + "'");

    const std::string variant = reader.get("channel", "variant", "normal_approx");
    const std::string gain_name = reader.get("channel", "gain", "rayleigh");
    GainModel gain;
    if (gain_name == "rayleigh")
        gain = GainModel::kRayleigh;
    else if (gain_name == "unit")
        gain = GainModel::kUnitGain;
    else
        throw ConfigError(origin + ": key 'gain' must be rayleigh or unit, got '" + gain_name + "'");

    RunConfig cfg;
    cfg.gain = gain;
    try {
        if (variant == "normal_approx") {
            AwgnParams params{k_bits, noise, epsilon, 0.0};
            cfg.channel_params = params;
            cfg.scenario = make_scenario(lambda, epsilon, model, ChannelModel::normal_approx(params, tau_min, tau_max));
        } else if (variant == "shannon") {
            AwgnParams params{k_bits, noise, epsilon, reader.require_double("channel", "W")};
            cfg.channel_params = params;
            cfg.scenario = make_scenario(lambda, epsilon, model, ChannelModel::shannon(params, tau_min, tau_max));
        } else if (variant == "block_fading") {
            const int coherence = static_cast<int>(reader.require_int("channel", "T"));
            FadingParams params{k_bits, noise, epsilon, coherence, gain};
            cfg.channel_params = AwgnParams{k_bits, noise, epsilon, 0.0};
            cfg.coherence_time = coherence;
            const int l_min = std::max(1, (tau_min + coherence - 1) / coherence);
            const int l_max = tau_max / coherence;
            if (l_min > l_max)
                throw ConfigError(origin + ": no multiples of T=" + std::to_string(coherence) + " inside [tau_min, tau_max]");
            cfg.scenario = make_scenario(lambda, epsilon, model, ChannelModel::block_fading(params, l_min, l_max));
        } else {
            throw ConfigError(origin + ": key 'variant' must be normal_approx, shannon or block_fading, got '" +
                              variant + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    cfg.policy.kind = reader.get("policy", "policy", "ftt");
    cfg.policy.t_s = static_cast<int>(reader.get_int("policy", "t_s", -1));
    cfg.policy.h = static_cast<int>(reader.get_int("policy", "h", 0));
    cfg.policy.tau_a = static_cast<int>(reader.get_int("policy", "tau_a", -1));
    cfg.policy.tau_b = static_cast<int>(reader.get_int("policy", "tau_b", -1));
    cfg.policy.h_a = static_cast<int>(reader.get_int("policy", "h_a", -1));

    cfg.solver.a_max = static_cast<int>(reader.get_int("solver", "a_max", -1));
    cfg.solver.tol = reader.get_double("solver", "tol", 1e-8);
    cfg.solver.max_iter = static_cast<int>(reader.get_int("solver", "max_iter", 100000));
    cfg.solver.betas = reader.get_double_list("solver", "betas");
    cfg.solver.pc_grid = static_cast<int>(reader.get_int("solver", "pc_grid", 20));
    cfg.solver.stride = static_cast<int>(reader.get_int("solver", "stride", 1));
    const std::string form = reader.get("solver", "prop3_form", "proof");
    if (form == "proof")
        cfg.solver.prop3_statement_form = false;
    else if (form == "statement")
        cfg.solver.prop3_statement_form = true;
    else
        throw ConfigError(origin + ": key 'prop3_form' must be proof or statement, got '" + form + "'");
    cfg.solver.horizon = reader.get_int("solver", "horizon", 1'000'000);
    cfg.solver.warmup = reader.get_int("solver", "warmup", -1);
    cfg.solver.de_population = static_cast<int>(reader.get_int("solver", "de_population", 30));
    cfg.solver.de_weight = reader.get_double("solver", "de_weight", 0.7);
    cfg.solver.de_crossover = reader.get_double("solver", "de_crossover", 0.9);
    cfg.solver.de_generations = static_cast<int>(reader.get_int("solver", "de_generations", 300));
    if (const auto ts = reader.get_int_list("solver", "coherence_times"); !ts.empty()) cfg.solver.coherence_times = ts;

    cfg.digest = fnv1a64(canonical_dump(cfg));
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

Scenario load_scenario(const std::string& path) { return parse_config_file(path).scenario; }

PolicySpec resolve_policy(const RunConfig& cfg) {
    const int tmin = cfg.scenario.tau_min();
    const int tmax = cfg.scenario.tau_max();
    const int t_s = cfg.policy.t_s > 0 ? cfg.policy.t_s : tmin;
    PolicySpec spec = FttPolicy{t_s};
    if (cfg.policy.kind == "ftt") {
        if (cfg.scenario.model == GenerationModel::kAT)
            spec = AtFixedPolicy{cfg.policy.h_a >= 0 ? cfg.policy.h_a : t_s, t_s};
    } else if (cfg.policy.kind == "threshold") {
        spec = ThresholdPolicy{cfg.policy.h, cfg.policy.tau_a > 0 ? cfg.policy.tau_a : tmax,
                               cfg.policy.tau_b > 0 ? cfg.policy.tau_b : tmin};
    } else if (cfg.policy.kind == "at") {
        spec = AtFixedPolicy{cfg.policy.h_a >= 0 ? cfg.policy.h_a : t_s, t_s};
    } else {
        throw ConfigError("config: key 'policy' must be ftt, threshold or at, got '" + cfg.policy.kind + "'");
    }
    try {
        validate_policy(spec, cfg.scenario);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: invalid policy: ") + e.what());
    }
    return spec;
}

std::string default_config_text() {
    return R"(# aoilab scenario configuration (defaults; required keys are marked)
[channel]
variant = normal_approx   # normal_approx | shannon | block_fading
K = 8                     # REQUIRED - packet length, bits
N = 10                    # REQUIRED - noise power, mW
epsilon = 0.01            # REQUIRED - per-transmission error probability
tau_min = 24              # REQUIRED - smallest transmission duration, slots
tau_max = 138             # REQUIRED - largest transmission duration, slots
# W = 50                  # bandwidth, Hz (shannon variant only)
# T = 10                  # coherence time, slots (block_fading variant only)
gain = rayleigh           # rayleigh | unit (block_fading variant only)

[traffic]
lambda = 0.1              # REQUIRED - generation probability per slot
model = NP                # REQUIRED - NP | P | AT

[policy]
policy = ftt              # ftt | threshold | at
# t_s = 24                # default: tau_min
# h = 0                   # threshold policy age threshold
# tau_a = 138             # default: tau_max
# tau_b = 24              # default: tau_min
# h_a = 24                # AT generation threshold; default: t_s

[solver]
# a_max = -1              # SMDP truncation; -1 = tau_max + ceil(20/lambda)
tol = 1e-8                # value-iteration span tolerance
max_iter = 100000
# betas = 0,0.1,1,10,100,1000,10000,100000,1000000
pc_grid = 20              # number of power-budget points for `bounds`
stride = 1                # action-grid stride for the numerical lower bound
prop3_form = proof        # proof | statement numerator form
horizon = 1000000         # simulation horizon, slots
# warmup = -1             # discarded slots; -1 = 10% of horizon
de_population = 30
de_weight = 0.7
de_crossover = 0.9
de_generations = 300
coherence_times = 2,10,50 # T sweep for the `fading` subcommand
)";
}

}  // namespace aoilab
