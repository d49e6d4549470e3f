#include "enkit/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace enkit::harness {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& v) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return out;
}

std::size_t parse_size(const std::string& key, const std::string& v, std::size_t min = 0) {
    long long n = parse_int(key, v);
    if (n < static_cast<long long>(min))
        throw ConfigError(key + ": must be at least " + std::to_string(min));
    return static_cast<std::size_t>(n);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return out;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<factory::Policy> parse_schedule(const std::string& key, const std::string& v) {
    std::vector<factory::Policy> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item == "rigid")
            out.push_back(factory::Policy::Rigid);
        else if (item == "ml")
            out.push_back(factory::Policy::Ml);
        else
            throw ConfigError(key + ": entries must be rigid|ml, got '" + item + "'");
    }
    if (out.empty()) throw ConfigError(key + ": empty schedule");
    return out;
}

std::string render_schedule(const std::vector<factory::Policy>& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += factory::to_string(s[i]);
    }
    return out;
}

struct Key {
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

// Schema order is render order; grouped scenario first, harness second.
const std::vector<std::pair<std::string, Key>>& schema() {
    auto int_key = [](auto member) {
        return Key{[member](ExperimentConfig& c, const std::string& k, const std::string& v) {
                       c.scenario.*member = static_cast<int>(parse_int(k, v));
                   },
                   [member](const ExperimentConfig& c) {
                       return std::to_string(c.scenario.*member);
                   }};
    };
    auto size_key = [](auto member, std::size_t min) {
        return Key{[member, min](ExperimentConfig& c, const std::string& k, const std::string& v) {
                       c.scenario.*member = parse_size(k, v, min);
                   },
                   [member](const ExperimentConfig& c) {
                       return std::to_string(c.scenario.*member);
                   }};
    };
    static const std::vector<std::pair<std::string, Key>> keys = {
        {"shifts_count", size_key(&factory::ScenarioConfig::shifts_count, 1)},
        {"workers_per_shift", size_key(&factory::ScenarioConfig::workers_per_shift, 1)},
        {"standbys_per_shift", size_key(&factory::ScenarioConfig::standbys_per_shift, 0)},
        {"global_standbys",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.scenario.global_standbys = parse_bool(k, v);
          },
          [](const ExperimentConfig& c) { return c.scenario.global_standbys ? "true" : "false"; }}},
        {"late_fraction",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              double f = parse_double(k, v);
              if (f < 0.0 || f > 1.0) throw ConfigError(k + ": must lie in [0, 1]");
              c.scenario.late_fraction = f;
          },
          [](const ExperimentConfig& c) {
              std::ostringstream os;
              os << c.scenario.late_fraction;
              return os.str();
          }}},
        {"bus_offset_business", int_key(&factory::ScenarioConfig::bus_offset_business)},
        {"bus_offset_weekend", int_key(&factory::ScenarioConfig::bus_offset_weekend)},
        {"late_bus_business", int_key(&factory::ScenarioConfig::late_bus_business)},
        {"late_bus_weekend", int_key(&factory::ScenarioConfig::late_bus_weekend)},
        {"delay_mean",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              double m = parse_double(k, v);
              if (m < 0.0) throw ConfigError(k + ": must be nonnegative");
              c.scenario.delay_mean = m;
          },
          [](const ExperimentConfig& c) {
              std::ostringstream os;
              os << c.scenario.delay_mean;
              return os.str();
          }}},
        {"standby_travel_time", int_key(&factory::ScenarioConfig::standby_travel_time)},
        {"rigid_cutoff", int_key(&factory::ScenarioConfig::rigid_cutoff)},
        {"gate_to_dispenser", int_key(&factory::ScenarioConfig::gate_to_dispenser)},
        {"dispenser_to_workplace", int_key(&factory::ScenarioConfig::dispenser_to_workplace)},
        {"shift_start_minute", int_key(&factory::ScenarioConfig::shift_start_minute)},
        {"shift_length", int_key(&factory::ScenarioConfig::shift_length)},
        {"day_margin", int_key(&factory::ScenarioConfig::day_margin)},
        {"collection_lead", int_key(&factory::ScenarioConfig::collection_lead)},
        {"seed",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.scenario.seed = static_cast<std::uint64_t>(parse_int(k, v));
          },
          [](const ExperimentConfig& c) { return std::to_string(c.scenario.seed); }}},
        {"weeks",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.weeks = parse_size(k, v, 1);
          },
          [](const ExperimentConfig& c) { return std::to_string(c.weeks); }}},
        {"policy_schedule",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.policy_schedule = parse_schedule(k, v);
          },
          [](const ExperimentConfig& c) { return render_schedule(c.policy_schedule); }}},
        {"epochs",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.training.epochs = parse_size(k, v, 0);
          },
          [](const ExperimentConfig& c) { return std::to_string(c.training.epochs); }}},
        {"batch",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.training.batch = parse_size(k, v, 1);
          },
          [](const ExperimentConfig& c) { return std::to_string(c.training.batch); }}},
        {"learning_rate",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              double r = parse_double(k, v);
              if (r <= 0.0) throw ConfigError(k + ": must be positive");
              c.training.learning_rate = r;
          },
          [](const ExperimentConfig& c) {
              std::ostringstream os;
              os << c.training.learning_rate;
              return os.str();
          }}},
        {"full_retrain",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.full_retrain = parse_bool(k, v);
          },
          [](const ExperimentConfig& c) { return c.full_retrain ? "true" : "false"; }}},
        {"out_dir",
         {[](ExperimentConfig& c, const std::string&, const std::string& v) { c.out_dir = v; },
          [](const ExperimentConfig& c) { return c.out_dir; }}},
        {"dump_dataset",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.dump_dataset = parse_bool(k, v);
          },
          [](const ExperimentConfig& c) { return c.dump_dataset ? "true" : "false"; }}},
        {"verbose",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.verbose = parse_bool(k, v);
          },
          [](const ExperimentConfig& c) { return c.verbose ? "true" : "false"; }}},
    };
    return keys;
}

}  // namespace

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& [name, handlers] : schema())
        if (name == key) {
            handlers.set(cfg, key, value);
            return;
        }
    throw ConfigError("unknown config key: '" + key + "'");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        apply_override(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string render_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [name, handlers] : schema()) out += name + " = " + handlers.get(cfg) + "\n";
    return out;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : schema()) out.push_back(name);
        return out;
    }();
    return names;
}

}  // namespace enkit::harness
