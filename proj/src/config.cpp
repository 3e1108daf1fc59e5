#include "graphrl/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "graphrl/env.hpp"
#include "graphrl/inference.hpp"

namespace graphrl {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
    T out{};
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || value.empty()) {
        throw ConfigError("bad value '" + value + "' for " + key);
    }
    return out;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ',';
        out += s;
    }
    return out;
}

std::string fmt_double(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    auto& t = train;
    if (key == "schema_version") {
        if (parse_value<int>(key, value) != kConfigSchemaVersion) {
            throw ConfigError("unsupported schema_version " + value + " (expected " +
                              std::to_string(kConfigSchemaVersion) + ")");
        }
    } else if (key == "problem") {
        make_problem(value);
        problem = value;
    } else if (key == "K") {
        t.embed_dim = parse_value<int>(key, value);
    } else if (key == "L") {
        t.layers = parse_value<int>(key, value);
    } else if (key == "batch_size") {
        t.batch_size = parse_value<std::size_t>(key, value);
    } else if (key == "tau") {
        t.tau = parse_value<int>(key, value);
    } else if (key == "gamma") {
        t.gamma = parse_value<double>(key, value);
    } else if (key == "learning_rate") {
        t.learning_rate = parse_value<double>(key, value);
    } else if (key == "replay_capacity") {
        t.replay_capacity = parse_value<std::size_t>(key, value);
    } else if (key == "epsilon_start") {
        t.epsilon_start = parse_value<double>(key, value);
    } else if (key == "epsilon_end") {
        t.epsilon_end = parse_value<double>(key, value);
    } else if (key == "epsilon_decay_steps") {
        t.epsilon_decay_steps = parse_value<std::uint64_t>(key, value);
    } else if (key == "init_scale") {
        t.init_scale = parse_value<double>(key, value);
    } else if (key == "seed") {
        t.seed = parse_value<std::uint64_t>(key, value);
    } else if (key == "eval_every") {
        t.eval_every = parse_value<std::uint64_t>(key, value);
    } else if (key == "max_steps") {
        t.max_steps = parse_value<std::uint64_t>(key, value);
    } else if (key == "episodes") {
        if (value == "unlimited") {
            t.episodes.reset();
        } else {
            t.episodes = parse_value<std::size_t>(key, value);
        }
    } else if (key == "workers") {
        workers = parse_value<int>(key, value);
    } else if (key == "train_data") {
        train_data = split_list(value);
    } else if (key == "eval_data") {
        eval_data = split_list(value);
    } else if (key == "d_schedule") {
        SelectionSchedule::parse(value);
        d_schedule = value;
    } else if (key == "exact_limit") {
        exact_limit = parse_value<std::uint32_t>(key, value);
    } else if (key == "output_dir") {
        output_dir = value;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void RunConfig::validate() const {
    train.validate();
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (exact_limit > 64) throw ConfigError("exact_limit must be <= 64");
    SelectionSchedule::parse(d_schedule);
}

std::string RunConfig::to_text() const {
    const auto& t = train;
    std::ostringstream out;
    out << "schema_version = " << kConfigSchemaVersion << '\n'
        << "problem = " << problem << '\n'
        << "K = " << t.embed_dim << '\n'
        << "L = " << t.layers << '\n'
        << "batch_size = " << t.batch_size << '\n'
        << "tau = " << t.tau << '\n'
        << "gamma = " << fmt_double(t.gamma) << '\n'
        << "learning_rate = " << fmt_double(t.learning_rate) << '\n'
        << "replay_capacity = " << t.replay_capacity << '\n'
        << "epsilon_start = " << fmt_double(t.epsilon_start) << '\n'
        << "epsilon_end = " << fmt_double(t.epsilon_end) << '\n'
        << "epsilon_decay_steps = " << t.epsilon_decay_steps << '\n'
        << "init_scale = " << fmt_double(t.init_scale) << '\n'
        << "seed = " << t.seed << '\n'
        << "eval_every = " << t.eval_every << '\n'
        << "max_steps = " << t.max_steps << '\n'
        << "episodes = " << (t.episodes ? std::to_string(*t.episodes) : "unlimited") << '\n'
        << "workers = " << workers << '\n'
        << "train_data = " << join(train_data) << '\n'
        << "eval_data = " << join(eval_data) << '\n'
        << "d_schedule = " << d_schedule << '\n'
        << "exact_limit = " << exact_limit << '\n';
    if (!output_dir.empty()) out << "output_dir = " << output_dir << '\n';
    return out.str();
}

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source_name) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto where = source_name + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "empty key");
        if (!out.emplace(key, value).second) throw ConfigError(where + "duplicate key '" + key + "'");
    }
    return out;
}

RunConfig parse_config(std::istream& in, const std::string& source_name) {
    const auto kv = parse_key_values(in, source_name);
    const auto version = kv.find("schema_version");
    if (version == kv.end()) throw ConfigError(source_name + ": missing schema_version");
    RunConfig cfg;
    for (const auto& [key, value] : kv) {
        try {
            cfg.set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(source_name + ": " + e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source_name + ": " + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, path.string());
}

}  // namespace graphrl
