#include "dentseg/run_config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace dentseg {

namespace {

using nlohmann::json;

std::string pointer_of(const std::string& dotted) {
  std::string ptr;
  for (char c : dotted) ptr += (c == '.') ? '/' : c;
  return "/" + ptr;
}

void set_field(const ConfigField& field, const json& value) {
  switch (field.kind) {
    case ConfigField::Kind::kDouble:
      *static_cast<double*>(field.target) = value.get<double>();
      break;
    case ConfigField::Kind::kInt:
      *static_cast<int*>(field.target) = value.get<int>();
      break;
    case ConfigField::Kind::kUint64:
      *static_cast<std::uint64_t*>(field.target) = value.get<std::uint64_t>();
      break;
    case ConfigField::Kind::kString:
      *static_cast<std::string*>(field.target) = value.get<std::string>();
      break;
  }
}

json get_field(const ConfigField& field) {
  switch (field.kind) {
    case ConfigField::Kind::kDouble:
      return *static_cast<const double*>(field.target);
    case ConfigField::Kind::kInt:
      return *static_cast<const int*>(field.target);
    case ConfigField::Kind::kUint64:
      return *static_cast<const std::uint64_t*>(field.target);
    case ConfigField::Kind::kString:
      return *static_cast<const std::string*>(field.target);
  }
  return {};
}

void flatten(const json& node, const std::string& prefix,
             std::vector<std::pair<std::string, const json*>>& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else {
    out.emplace_back(prefix, &node);
  }
}

}  // namespace

const std::vector<std::string>& regime_names() {
  static const std::vector<std::string> names = {
      "isolated_with_aug",
      "isolated_without_aug",
      "continuous_with_aug",
      "continuous_without_aug",
  };
  return names;
}

bool is_valid_regime(const std::string& name) {
  for (const auto& known : regime_names()) {
    if (name == known) return true;
  }
  return false;
}

Regime parse_regime(const std::string& name) {
  if (!is_valid_regime(name)) {
    std::string known;
    for (const auto& n : regime_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown regime '" + name + "' (expected one of " +
                                known + ")");
  }
  return {name.rfind("continuous", 0) == 0, name.find("without") == std::string::npos};
}

std::vector<ConfigField> config_fields(RunConfig& c) {
  using K = ConfigField::Kind;
  return {
      {"paths.checkpoint", K::kString, &c.paths.checkpoint},
      {"paths.output_dir", K::kString, &c.paths.output_dir},
      {"rate", K::kDouble, &c.rate},
      {"radii.small_factor", K::kDouble, &c.radii.small_factor},
      {"radii.large_factor", K::kDouble, &c.radii.large_factor},
      {"refiner.lambda", K::kDouble, &c.refiner.lambda},
      {"refiner.sigma", K::kDouble, &c.refiner.sigma},
      {"transfer.k", K::kInt, &c.transfer.k},
      {"transfer.cell_ceiling", K::kInt, &c.transfer.cell_ceiling},
      {"hyperparameters.learning_rate", K::kDouble, &c.hyperparameters.learning_rate},
      {"hyperparameters.beta1", K::kDouble, &c.hyperparameters.beta1},
      {"hyperparameters.beta2", K::kDouble, &c.hyperparameters.beta2},
      {"hyperparameters.eps", K::kDouble, &c.hyperparameters.eps},
      {"hyperparameters.weight_decay", K::kDouble, &c.hyperparameters.weight_decay},
      {"hyperparameters.batch_size", K::kInt, &c.hyperparameters.batch_size},
      {"hyperparameters.epochs", K::kInt, &c.hyperparameters.epochs},
      {"hyperparameters.dropout_rate", K::kDouble, &c.hyperparameters.dropout_rate},
      {"widths.encoder", K::kInt, &c.widths.encoder},
      {"widths.context1", K::kInt, &c.widths.context1},
      {"widths.context2", K::kInt, &c.widths.context2},
      {"widths.holistic", K::kInt, &c.widths.holistic},
      {"widths.fusion", K::kInt, &c.widths.fusion},
      {"augment.factor", K::kInt, &c.augment.factor},
      {"augment.rotation_deg.lo", K::kDouble, &c.augment.rotation_deg.lo},
      {"augment.rotation_deg.hi", K::kDouble, &c.augment.rotation_deg.hi},
      {"augment.scale.lo", K::kDouble, &c.augment.scale.lo},
      {"augment.scale.hi", K::kDouble, &c.augment.scale.hi},
      {"augment.translation.lo", K::kDouble, &c.augment.translation.lo},
      {"augment.translation.hi", K::kDouble, &c.augment.translation.hi},
      {"regime", K::kString, &c.regime},
      {"seed", K::kUint64, &c.seed},
  };
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open config");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }

  RunConfig config;
  auto fields = config_fields(config);
  std::vector<std::pair<std::string, const json*>> leaves;
  flatten(doc, "", leaves);
  for (const auto& [name, value] : leaves) {
    bool known = false;
    for (const auto& field : fields) {
      if (field.name == name) {
        try {
          set_field(field, *value);
        } catch (const json::exception& e) {
          throw std::runtime_error(path.string() + ": bad value for " + name + ": " +
                                   e.what());
        }
        known = true;
        break;
      }
    }
    if (!known) throw std::runtime_error(path.string() + ": unknown config key " + name);
  }
  if (!is_valid_regime(config.regime)) parse_regime(config.regime);  // throws
  return config;
}

void save_run_config(const RunConfig& config, const std::filesystem::path& path) {
  json doc;
  auto fields = config_fields(const_cast<RunConfig&>(config));
  for (const auto& field : fields) {
    doc[json::json_pointer(pointer_of(field.name))] = get_field(field);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << doc.dump(2) << "\n";
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("override must look like name=value: " + assignment);
  }
  const std::string name = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  for (const auto& field : config_fields(config)) {
    if (field.name != name) continue;
    try {
      if (field.kind == ConfigField::Kind::kString) {
        set_field(field, json(value));
      } else {
        set_field(field, json::parse(value));
      }
    } catch (const json::exception&) {
      throw std::invalid_argument("bad value for " + name + ": " + value);
    }
    return;
  }
  throw std::invalid_argument("unknown config key " + name);
}

}  // namespace dentseg
