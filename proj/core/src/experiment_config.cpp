// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/experiment_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace hmimo {
namespace {

template <class E>
using NameTable = std::vector<std::pair<std::string_view, E>>;

const NameTable<SweepVariable> kSweepNames{{"snr_db", SweepVariable::snr_db},
                                           {"M", SweepVariable::num_elements},
                                           {"K", SweepVariable::num_users},
                                           {"csi_error_db", SweepVariable::csi_error_db}};
const NameTable<SnrReference> kSnrRefNames{{"transmit", SnrReference::transmit},
                                           {"received", SnrReference::received}};
const NameTable<ErrorReference> kErrRefNames{{"relative", ErrorReference::relative},
                                             {"absolute", ErrorReference::absolute}};
const NameTable<Placement> kPlacementNames{{"resampled", Placement::resampled},
                                           {"fixed", Placement::fixed},
                                           {"equal_gain", Placement::equal_gain}};
const NameTable<ArrayMode> kArrayModeNames{{"fixed_spacing", ArrayMode::fixed_spacing},
                                           {"fixed_aperture", ArrayMode::fixed_aperture}};
const NameTable<ArrayShape> kShapeNames{{"square", ArrayShape::square},
                                        {"rectangle", ArrayShape::rectangle},
                                        {"line", ArrayShape::line}};
const NameTable<SincConvention> kSincNames{{"unnormalized", SincConvention::unnormalized},
                                           {"normalized", SincConvention::normalized}};
const NameTable<MfScaling> kScalingNames{{"per_element", MfScaling::per_element},
                                         {"total_power", MfScaling::total_power}};
const NameTable<NoCsiInterference> kNoCsiNames{{"single_term", NoCsiInterference::single_term},
                                               {"shared_beam", NoCsiInterference::shared_beam}};
const NameTable<EtaConvention> kEtaNames{{"matched", EtaConvention::matched},
                                         {"coefficient", EtaConvention::coefficient}};
const NameTable<BetaMode> kBetaNames{{"row_sums", BetaMode::row_sums},
                                     {"literal", BetaMode::literal}};
const NameTable<MomentMatching> kMomentNames{{"exact", MomentMatching::exact},
                                             {"literal", MomentMatching::literal}};

template <class E>
std::string_view name_of(const NameTable<E>& table, E value) {
  for (const auto& [n, v] : table) {
    if (v == value) return n;
  }
  return "?";
}

template <class E>
E value_of(const NameTable<E>& table, std::string_view key, std::string_view text) {
  for (const auto& [n, v] : table) {
    if (n == text) return v;
  }
  std::string choices;
  for (const auto& [n, v] : table) choices += (choices.empty() ? "" : ", ") + std::string(n);
  throw InvalidArgument(std::string(key) + ": unknown value '" + std::string(text) + "' (expected " +
                        choices + ")");
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(std::string_view key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw InvalidArgument(std::string(key) + ": '" + text + "' is not a finite number");
  }
  return v;
}

long parse_long(std::string_view key, const std::string& text) {
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument(std::string(key) + ": '" + text + "' is not an integer");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument(std::string(key) + ": '" + text + "' is not an unsigned integer");
  }
  return v;
}

bool parse_bool(std::string_view key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw InvalidArgument(std::string(key) + ": '" + text + "' is not a boolean");
}

std::vector<int> to_ints(std::string_view key, const std::vector<double>& values) {
  std::vector<int> out;
  for (double v : values) {
    if (v != std::round(v) || v < 1.0 || v > 1e6) {
      throw InvalidArgument(std::string(key) + ": expected positive integers");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// Shortest text that reads back to the same double.
std::string format_number(double v) {
  char buf[40];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ", ";
    if constexpr (std::is_same_v<T, CsiMode>) {
      out += to_string(v);
    } else {
      out += format_number(static_cast<double>(v));
    }
  }
  return out;
}

bool strictly_monotone(const std::vector<double>& v) {
  if (v.size() < 2) return true;
  const bool up = v[1] > v[0];
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (up ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
  }
  return true;
}

struct Entry {
  std::string summary;
  std::function<void(ExperimentConfig&)> apply;
};

const std::map<std::string, Entry, std::less<>>& catalog() {
  static const std::map<std::string, Entry, std::less<>> entries{
      {"snr-sweep",
       {"Average throughput against transmit SNR for full, partial and no CSI matched filters, "
        "analytic and Monte Carlo, M in {16, 128}, K = 8, users resampled every trial.",
        [](ExperimentConfig& c) {
          c.sweep = SweepVariable::snr_db;
          c.sweep_values = parse_number_list("-10:5:40");
          c.num_elements = {16, 128};
          c.modes = {CsiMode::full, CsiMode::partial, CsiMode::none};
          c.trials = 10000;
          c.analytic = true;
        }}},
      {"aperture-coupling",
       {"Full-CSI matched filter throughput as more elements are packed into a fixed 1 m square "
        "aperture (M in {4, 9, 16, 25}). At 1.6 GHz the spacing stays above 1.3 wavelengths over this range.",
        [](ExperimentConfig& c) {
          c.sweep = SweepVariable::num_elements;
          c.sweep_values = {4, 9, 16, 25};
          c.array_mode = ArrayMode::fixed_aperture;
          c.array_shape = ArrayShape::square;
          c.placement = Placement::equal_gain;
          c.modes = {CsiMode::full, CsiMode::optimal};
          c.mf_scaling = MfScaling::per_element;
          c.trials = 2000;
          c.analytic = true;
        }}},
      {"mf-vs-optimal",
       {"Matched filter against max-min optimal beamforming with full CSI, throughput against M "
        "for several K, cell-edge users, total-power normalized matched filter.",
        [](ExperimentConfig& c) {
          c.sweep = SweepVariable::num_elements;
          c.sweep_values = {16, 32, 64, 128};
          c.num_users = {2, 4, 8};
          c.placement = Placement::equal_gain;
          c.modes = {CsiMode::full, CsiMode::optimal};
          c.mf_scaling = MfScaling::total_power;
          c.trials = 1000;
        }}},
      {"csi-error",
       {"Matched filter against max-min beamforming when both are built from a noisy channel "
        "estimate, throughput against estimation error in dB relative to the mean entry power of H.",
        [](ExperimentConfig& c) {
          c.sweep = SweepVariable::csi_error_db;
          c.sweep_values = parse_number_list("-30:2.5:20");
          c.num_elements = {32, 128};
          c.placement = Placement::equal_gain;
          c.modes = {CsiMode::full, CsiMode::optimal};
          c.mf_scaling = MfScaling::total_power;
          c.trials = 1000;
        }}},
      {"snr-levels",
       {"Matched filter against max-min beamforming against M at fixed received SNR levels.",
        [](ExperimentConfig& c) {
          c.sweep = SweepVariable::num_elements;
          c.sweep_values = {16, 32, 64, 128};
          c.snr_db = {-10, 2, 10};
          c.snr_reference = SnrReference::received;
          c.placement = Placement::equal_gain;
          c.modes = {CsiMode::full, CsiMode::optimal};
          c.mf_scaling = MfScaling::total_power;
          c.trials = 1000;
        }}},
      {"validate",
       {"Runs the oracle suite (special functions, closed forms against quadrature, solver "
        "self-consistency, distributional equivalence) and prints one line per check.",
        [](ExperimentConfig& c) {
          c.sweep_values = {10};
          c.trials = 100;
        }}},
  };
  return entries;
}

const Entry& entry(std::string_view id) {
  const auto& cat = catalog();
  const auto it = cat.find(id);
  if (it == cat.end()) {
    std::string ids;
    for (const auto& [k, v] : cat) ids += (ids.empty() ? "" : ", ") + k;
    throw InvalidArgument("unknown experiment '" + std::string(id) + "' (known: " + ids + ")");
  }
  return it->second;
}

}  // namespace

std::string_view to_string(SweepVariable v) { return name_of(kSweepNames, v); }

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : catalog()) out.push_back(k);
    return out;
  }();
  return ids;
}

std::string describe_experiment(std::string_view id) { return entry(id).summary; }

ExperimentConfig default_config(std::string_view id) {
  ExperimentConfig c;
  c.experiment = std::string(id);
  c.name = c.experiment;
  entry(id).apply(c);
  return c;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw InvalidArgument("empty item in list '" + std::string(text) + "'");
    if (item.find(':') == std::string::npos) {
      out.push_back(parse_double("list", item));
      continue;
    }
    std::array<double, 3> r{};
    std::stringstream parts(item);
    std::string p;
    int n = 0;
    while (std::getline(parts, p, ':')) {
      if (n == 3) throw InvalidArgument("range '" + item + "' must be start:step:stop");
      r[static_cast<std::size_t>(n++)] = parse_double("range", trim(p));
    }
    if (n != 3) throw InvalidArgument("range '" + item + "' must be start:step:stop");
    const auto [lo, step, hi] = r;
    if (step == 0.0 || (hi - lo) / step < 0.0) {
      throw InvalidArgument("range '" + item + "' never reaches its stop value");
    }
    const double count = std::floor((hi - lo) / step + 1e-9);
    if (count > 1e6) throw InvalidArgument("range '" + item + "' is too long");
    // Multiply rather than accumulate so grid points are exact where possible.
    for (long i = 0; i <= static_cast<long>(count); ++i) out.push_back(lo + static_cast<double>(i) * step);
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

void ExperimentConfig::validate() const {
  entry(experiment);
  require(!name.empty() && name.find_first_of("/\\") == std::string::npos,
          "experiment.name must be a plain file stem");
  require(trials >= 100, "experiment.trials must be at least 100");
  require(!sweep_values.empty(), "sweep.values must not be empty");
  require(strictly_monotone(sweep_values), "sweep.values must be strictly monotone");
  require(!num_elements.empty() && !num_users.empty() && !snr_db.empty(),
          "system.M, system.K and system.snr_db need at least one value");
  if (sweep == SweepVariable::num_elements || sweep == SweepVariable::num_users) {
    to_ints("sweep.values", sweep_values);
  }
  require(!modes.empty(), "precoding.modes must not be empty");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = i + 1; j < modes.size(); ++j) {
      require(modes[i] != modes[j], "precoding.modes lists a mode twice");
    }
  }
  require(carrier_ghz > 0.0, "system.carrier_ghz must be positive");
  require(pathloss_exponent > 0.0 && pathloss_reference_m > 0.0, "pathloss parameters must be positive");
  require(cell_radius_m > min_distance_m && min_distance_m > 0.0,
          "need 0 < system.min_distance_m < system.cell_radius_m");
  require(spacing_wavelengths > 0.0 && aperture_m > 0.0, "array dimensions must be positive");
  require(maxmin_tolerance > 0.0 && maxmin_tolerance < 1.0, "precoding.maxmin_tolerance must be in (0, 1)");
  require(analytic_layouts >= 1, "analytic.layouts must be positive");
}

ExperimentConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  const auto id = tree.get_optional<std::string>("experiment.id");
  if (!id) throw InvalidArgument("config: missing required key experiment.id");
  ExperimentConfig c = default_config(trim(*id));

  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> keys{
      {"experiment.id", [](const std::string&) {}},
      {"experiment.name", [&](const std::string& v) { c.name = v; }},
      {"experiment.seed", [&](const std::string& v) { c.seed = parse_u64("experiment.seed", v); }},
      {"experiment.trials", [&](const std::string& v) { c.trials = parse_long("experiment.trials", v); }},
      {"experiment.output_dir", [&](const std::string& v) { c.output_dir = v; }},
      {"sweep.variable", [&](const std::string& v) { c.sweep = value_of(kSweepNames, "sweep.variable", v); }},
      {"sweep.values", [&](const std::string& v) { c.sweep_values = parse_number_list(v); }},
      {"system.M", [&](const std::string& v) { c.num_elements = to_ints("system.M", parse_number_list(v)); }},
      {"system.K", [&](const std::string& v) { c.num_users = to_ints("system.K", parse_number_list(v)); }},
      {"system.snr_db", [&](const std::string& v) { c.snr_db = parse_number_list(v); }},
      {"system.snr_reference",
       [&](const std::string& v) { c.snr_reference = value_of(kSnrRefNames, "system.snr_reference", v); }},
      {"system.csi_error_db",
       [&](const std::string& v) {
         if (v == "none") {
           c.csi_error_db.clear();
         } else {
           c.csi_error_db = parse_number_list(v);
         }
       }},
      {"system.error_reference",
       [&](const std::string& v) { c.error_reference = value_of(kErrRefNames, "system.error_reference", v); }},
      {"system.noise_dbm", [&](const std::string& v) { c.noise_dbm = parse_double("system.noise_dbm", v); }},
      {"system.carrier_ghz",
       [&](const std::string& v) { c.carrier_ghz = parse_double("system.carrier_ghz", v); }},
      {"system.pathloss_exponent",
       [&](const std::string& v) { c.pathloss_exponent = parse_double("system.pathloss_exponent", v); }},
      {"system.pathloss_reference_m",
       [&](const std::string& v) { c.pathloss_reference_m = parse_double("system.pathloss_reference_m", v); }},
      {"system.cell_radius_m",
       [&](const std::string& v) { c.cell_radius_m = parse_double("system.cell_radius_m", v); }},
      {"system.min_distance_m",
       [&](const std::string& v) { c.min_distance_m = parse_double("system.min_distance_m", v); }},
      {"system.placement",
       [&](const std::string& v) { c.placement = value_of(kPlacementNames, "system.placement", v); }},
      {"array.mode", [&](const std::string& v) { c.array_mode = value_of(kArrayModeNames, "array.mode", v); }},
      {"array.shape", [&](const std::string& v) { c.array_shape = value_of(kShapeNames, "array.shape", v); }},
      {"array.spacing_wavelengths",
       [&](const std::string& v) { c.spacing_wavelengths = parse_double("array.spacing_wavelengths", v); }},
      {"array.aperture_m", [&](const std::string& v) { c.aperture_m = parse_double("array.aperture_m", v); }},
      {"array.sinc", [&](const std::string& v) { c.sinc = value_of(kSincNames, "array.sinc", v); }},
      {"precoding.modes",
       [&](const std::string& v) {
         c.modes.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) c.modes.push_back(csi_mode_from_string(trim(item)));
       }},
      {"precoding.mf_scaling",
       [&](const std::string& v) { c.mf_scaling = value_of(kScalingNames, "precoding.mf_scaling", v); }},
      {"precoding.no_csi", [&](const std::string& v) { c.no_csi = value_of(kNoCsiNames, "precoding.no_csi", v); }},
      {"precoding.maxmin_tolerance",
       [&](const std::string& v) { c.maxmin_tolerance = parse_double("precoding.maxmin_tolerance", v); }},
      {"analytic.enabled", [&](const std::string& v) { c.analytic = parse_bool("analytic.enabled", v); }},
      {"analytic.layouts",
       [&](const std::string& v) { c.analytic_layouts = parse_long("analytic.layouts", v); }},
      {"analytic.eta", [&](const std::string& v) { c.eta = value_of(kEtaNames, "analytic.eta", v); }},
      {"analytic.beta", [&](const std::string& v) { c.beta = value_of(kBetaNames, "analytic.beta", v); }},
      {"analytic.moments",
       [&](const std::string& v) { c.moments = value_of(kMomentNames, "analytic.moments", v); }},
  };

  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw InvalidArgument("config: key '" + section + "' must be inside a [section]");
    }
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      const auto it = keys.find(full);
      if (it == keys.end()) throw InvalidArgument("config: unknown key '" + full + "'");
      it->second(trim(node.data()));
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_ini(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[experiment]\n"
    << "id = " << c.experiment << "\n"
    << "name = " << c.name << "\n"
    << "seed = " << c.seed << "\n"
    << "trials = " << c.trials << "\n"
    << "output_dir = " << c.output_dir.generic_string() << "\n\n"
    << "[sweep]\n"
    << "variable = " << to_string(c.sweep) << "\n"
    << "values = " << join(c.sweep_values) << "\n\n"
    << "[system]\n"
    << "M = " << join(c.num_elements) << "\n"
    << "K = " << join(c.num_users) << "\n"
    << "snr_db = " << join(c.snr_db) << "\n"
    << "snr_reference = " << name_of(kSnrRefNames, c.snr_reference) << "\n"
    << "csi_error_db = " << (c.csi_error_db.empty() ? std::string("none") : join(c.csi_error_db)) << "\n"
    << "error_reference = " << name_of(kErrRefNames, c.error_reference) << "\n"
    << "noise_dbm = " << format_number(c.noise_dbm) << "\n"
    << "carrier_ghz = " << format_number(c.carrier_ghz) << "\n"
    << "pathloss_exponent = " << format_number(c.pathloss_exponent) << "\n"
    << "pathloss_reference_m = " << format_number(c.pathloss_reference_m) << "\n"
    << "cell_radius_m = " << format_number(c.cell_radius_m) << "\n"
    << "min_distance_m = " << format_number(c.min_distance_m) << "\n"
    << "placement = " << name_of(kPlacementNames, c.placement) << "\n\n"
    << "[array]\n"
    << "mode = " << name_of(kArrayModeNames, c.array_mode) << "\n"
    << "shape = " << name_of(kShapeNames, c.array_shape) << "\n"
    << "spacing_wavelengths = " << format_number(c.spacing_wavelengths) << "\n"
    << "aperture_m = " << format_number(c.aperture_m) << "\n"
    << "sinc = " << name_of(kSincNames, c.sinc) << "\n\n"
    << "[precoding]\n"
    << "modes = " << join(c.modes) << "\n"
    << "mf_scaling = " << name_of(kScalingNames, c.mf_scaling) << "\n"
    << "no_csi = " << name_of(kNoCsiNames, c.no_csi) << "\n"
    << "maxmin_tolerance = " << format_number(c.maxmin_tolerance) << "\n\n"
    << "[analytic]\n"
    << "enabled = " << (c.analytic ? "true" : "false") << "\n"
    << "layouts = " << c.analytic_layouts << "\n"
    << "eta = " << name_of(kEtaNames, c.eta) << "\n"
    << "beta = " << name_of(kBetaNames, c.beta) << "\n"
    << "moments = " << name_of(kMomentNames, c.moments) << "\n";
  return o.str();
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_ini(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hmimo
