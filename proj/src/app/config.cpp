#include "gibbs_tv/app/config.hpp"

#include "gibbs_tv/app/observation_io.hpp"
#include "gibbs_tv/rng.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace gibbs_tv::app {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::Bound, "bound"},
    {Command::Degrade, "degrade"},
    {Command::Restore, "restore"},
    {Command::Contraction, "contraction"},
    {Command::Certificate, "certificate"},
    {Command::Collector, "collector"},
    {Command::Verify, "verify"},
}};

std::string_view scheme_name(Neighborhood n) { return n == Neighborhood::N4 ? "N4" : "N8"; }

} // namespace

Command parse_command(std::string_view name) {
  for (const auto& [cmd, text] : kCommands) {
    if (text == name) {
      return cmd;
    }
  }
  throw std::invalid_argument("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command command) {
  for (const auto& [cmd, text] : kCommands) {
    if (cmd == command) {
      return text;
    }
  }
  return "unknown";
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
    return parse_seed(env);
  }
  return kBuiltinSeed;
}

void ExperimentConfig::validate() const {
  if (replicas < 1) {
    throw std::invalid_argument("replicas must be at least 1");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1)");
  }
  if (width == 0 || height == 0) {
    throw std::invalid_argument("width and height must be positive");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("sigma must be positive");
  }
  if (!(gamma >= 0.0)) {
    throw std::invalid_argument("gamma must be nonnegative");
  }
  if (init != "extremal" && init != "identical") {
    throw std::invalid_argument("init must be 'extremal' or 'identical'");
  }
  for (const double e : collector_epsilons) {
    if (!(e > 0.0 && e < 1.0)) {
      throw std::invalid_argument("collector epsilons must lie in (0,1)");
    }
  }
  for (const auto n : collector_sizes) {
    if (n == 0) {
      throw std::invalid_argument("collector sizes must be positive");
    }
  }
}

ExperimentConfig merge_config(ExperimentConfig c, const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw std::invalid_argument("config must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "mode") {
      c.mode = parse_command(value.get<std::string>());
    } else if (key == "width") {
      c.width = value.get<std::size_t>();
    } else if (key == "height") {
      c.height = value.get<std::size_t>();
    } else if (key == "scheme") {
      c.scheme = parse_neighborhood(value.get<std::string>());
    } else if (key == "gamma") {
      c.gamma = value.get<double>();
    } else if (key == "sigma") {
      c.sigma = value.get<double>();
    } else if (key == "y_const") {
      c.y_const = value.get<double>();
    } else if (key == "y") {
      c.y = value.get<std::vector<double>>();
    } else if (key == "graph_file") {
      c.graph_file = value.get<std::string>();
    } else if (key == "params_file") {
      c.params_file = value.get<std::string>();
    } else if (key == "observation") {
      c.observation = value.get<std::string>();
    } else if (key == "epsilon") {
      c.epsilon = value.get<double>();
    } else if (key == "replicas") {
      c.replicas = value.get<std::uint64_t>();
    } else if (key == "seed") {
      c.seed = value.is_string() ? parse_seed(value.get<std::string>())
                                 : value.get<std::uint64_t>();
    } else if (key == "threads") {
      c.threads = value.get<unsigned>();
    } else if (key == "input") {
      c.input = value.get<std::string>();
    } else if (key == "output_dir") {
      c.output_dir = value.get<std::string>();
    } else if (key == "steps") {
      c.steps = value.get<std::uint64_t>();
    } else if (key == "record_every") {
      c.record_every = value.get<std::uint64_t>();
    } else if (key == "init") {
      c.init = value.get<std::string>();
    } else if (key == "max_steps") {
      c.max_steps = value.get<std::uint64_t>();
    } else if (key == "average_steps") {
      c.average_steps = value.get<std::uint64_t>();
    } else if (key == "iterations") {
      c.iterations = value.get<std::uint64_t>();
    } else if (key == "trials") {
      c.trials = value.get<std::uint64_t>();
    } else if (key == "collector_sizes") {
      c.collector_sizes = value.get<std::vector<std::size_t>>();
    } else if (key == "collector_epsilons") {
      c.collector_epsilons = value.get<std::vector<double>>();
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config " + path.string());
  }
  try {
    return merge_config(std::move(base), nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json doc = {
      {"mode", command_name(c.mode)},
      {"width", c.width},
      {"height", c.height},
      {"scheme", scheme_name(c.scheme)},
      {"gamma", c.gamma},
      {"sigma", c.sigma},
      {"y_const", c.y_const},
      {"epsilon", c.epsilon},
      {"replicas", c.replicas},
      {"seed", c.seed},
      {"threads", c.threads},
      {"steps", c.steps},
      {"record_every", c.record_every},
      {"init", c.init},
      {"max_steps", c.max_steps},
      {"average_steps", c.average_steps},
      {"iterations", c.iterations},
      {"trials", c.trials},
      {"collector_sizes", c.collector_sizes},
      {"collector_epsilons", c.collector_epsilons},
  };
  if (!c.y.empty()) {
    doc["y"] = c.y;
  }
  if (!c.graph_file.empty()) {
    doc["graph_file"] = c.graph_file.string();
  }
  if (!c.params_file.empty()) {
    doc["params_file"] = c.params_file.string();
  }
  if (!c.observation.empty()) {
    doc["observation"] = c.observation.string();
  }
  if (!c.input.empty()) {
    doc["input"] = c.input.string();
  }
  return doc;
}

Model build_model(const ExperimentConfig& config) {
  std::optional<Observation> obs;
  if (!config.observation.empty()) {
    obs = read_observation(config.observation);
  }

  NeighborhoodGraph graph = [&] {
    if (!config.graph_file.empty()) {
      return load_graph(config.graph_file);
    }
    if (obs) {
      return build_grid_graph(obs->width, obs->height, config.scheme);
    }
    return build_grid_graph(config.width, config.height, config.scheme);
  }();

  ModelParams params;
  if (!config.params_file.empty()) {
    params = load_params(config.params_file);
  } else {
    params.gamma = config.gamma;
    params.sigma = config.sigma;
    if (obs) {
      params.y = obs->y;
    } else if (!config.y.empty()) {
      params.y = config.y;
    } else {
      params.y.assign(graph.num_sites(), config.y_const);
    }
  }
  params.validate(graph);
  return {std::move(graph), std::move(params)};
}

} // namespace gibbs_tv::app
