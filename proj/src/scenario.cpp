#include "camid/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "camid/rng.hpp"
#include "json.hpp"

namespace camid {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(ThetaScheme s) {
  return s == ThetaScheme::random_uniform ? "random" : "distance";
}

ThetaScheme theta_scheme_from_string(const std::string& name) {
  if (name == "random") return ThetaScheme::random_uniform;
  if (name == "distance") return ThetaScheme::distance_based;
  throw std::invalid_argument("unknown theta scheme: " + name);
}

RuleParams make_rule(const NeighborhoodSpec& spec, ThetaScheme scheme,
                     std::uint64_t seed) {
  const auto offsets = spec.offsets();
  std::vector<double> w(offsets.size());

  if (scheme == ThetaScheme::random_uniform) {
    Rng rng(seed);
    double sum = 0.0;
    do {
      sum = 0.0;
      for (double& v : w) {
        v = draw::u01(rng);
        sum += v;
      }
    } while (sum == 0.0);  // probability-zero guard
    for (double& v : w) v /= sum;
  } else {
    double sum = 0.0;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const int ady = std::abs(offsets[j].dy);
      const int adx = std::abs(offsets[j].dx);
      const int d = spec.topology == Topology::manhattan ? ady + adx
                                                         : std::max(ady, adx);
      w[j] = 1.0 / (1.0 + d);
      sum += w[j];
    }
    for (double& v : w) v /= sum;
  }
  return RuleParams(spec, std::move(w));
}

std::vector<Configuration> add_noise(const std::vector<Configuration>& traj,
                                     double snr_db, std::uint64_t seed,
                                     NoiseStats* stats) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("snr_db must be finite");

  double signal_power = 0.0;
  std::size_t n = 0;
  for (const auto& cfg : traj) {
    for (double p : cfg.cells()) signal_power += p * p;
    n += cfg.size();
  }
  signal_power /= static_cast<double>(n);
  const double sigma = std::sqrt(signal_power / std::pow(10.0, snr_db / 10.0));

  Rng rng(seed);
  double noise_power = 0.0;
  std::size_t clamped = 0;
  std::vector<Configuration> out;
  out.reserve(traj.size());
  for (const auto& cfg : traj) {
    std::vector<double> cells(cfg.cells());
    for (double& p : cells) {
      const double e = sigma * draw::standard_normal(rng);
      noise_power += e * e;
      double v = p + e;
      if (v < 0.0 || v > 1.0) {
        v = v < 0.0 ? 0.0 : 1.0;
        ++clamped;
      }
      p = v;
    }
    out.emplace_back(cfg.height(), cfg.width(), std::move(cells));
  }

  if (stats) {
    noise_power /= static_cast<double>(n);
    stats->sigma = sigma;
    stats->empirical_snr_db = 10.0 * std::log10(signal_power / noise_power);
    stats->clamped_fraction = static_cast<double>(clamped) / static_cast<double>(n);
  }
  return out;
}

std::string ScenarioSpec::name() const {
  std::ostringstream out;
  out << to_string(topology) << "-r" << radius << '-' << to_string(theta_scheme);
  return out.str();
}

void ScenarioSpec::validate() const {
  if (radius < 1) throw std::invalid_argument("scenario radius must be >= 1");
  if (steps < 1) throw std::invalid_argument("scenario steps must be >= 1");
  if (height < 2 * radius + 1 || width < 2 * radius + 1)
    throw std::invalid_argument("lattice must be at least (2r+1) per side");
  if (snr_db && !std::isfinite(*snr_db))
    throw std::invalid_argument("snr_db must be finite");
}

ObservedDataset build_dataset(const ScenarioSpec& spec) {
  spec.validate();
  const std::uint64_t init_seed =
      spec.init_seed ? *spec.init_seed : seeds::derive(spec.seed, "init");
  const std::uint64_t theta_seed = seeds::derive(spec.seed, "theta");
  const std::uint64_t noise_seed = seeds::derive(spec.seed, "noise");

  ObservedDataset data;
  data.spec = spec;
  data.truth = make_rule(spec.neighborhood(), spec.theta_scheme, theta_seed);
  data.clean = evolve(random_configuration(spec.height, spec.width, init_seed),
                      data.truth, spec.steps);
  if (spec.snr_db) {
    NoiseStats stats;
    data.observed = add_noise(data.clean, *spec.snr_db, noise_seed, &stats);
    data.noise = stats;
  } else {
    data.observed = data.clean;
  }
  return data;
}

namespace {

json spec_to_json_obj(const ScenarioSpec& s) {
  json j{{"topology", to_string(s.topology)},
         {"radius", s.radius},
         {"theta_scheme", to_string(s.theta_scheme)},
         {"height", s.height},
         {"width", s.width},
         {"steps", s.steps},
         {"seed", s.seed}};
  j["snr_db"] = s.snr_db ? json(*s.snr_db) : json(nullptr);
  if (s.init_seed) j["init_seed"] = *s.init_seed;
  return j;
}

ScenarioSpec spec_from_json_obj(const json& j) {
  ScenarioSpec s;
  s.topology = topology_from_string(j.at("topology").get<std::string>());
  s.radius = j.at("radius").get<int>();
  s.theta_scheme = theta_scheme_from_string(j.at("theta_scheme").get<std::string>());
  s.height = j.value("height", 51);
  s.width = j.value("width", 51);
  s.steps = j.value("steps", 10);
  if (j.contains("snr_db") && !j.at("snr_db").is_null())
    s.snr_db = j.at("snr_db").get<double>();
  else if (!j.contains("snr_db"))
    s.snr_db = 40.0;
  else
    s.snr_db.reset();
  s.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("init_seed") && !j.at("init_seed").is_null())
    s.init_seed = j.at("init_seed").get<std::uint64_t>();
  return s;
}

std::string step_file(const char* prefix, int t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_t%03d.csv", prefix, t);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string scenario_to_json(const ScenarioSpec& spec) {
  return spec_to_json_obj(spec).dump(2);
}

void write_dataset_archive(const ObservedDataset& data, const fs::path& dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["schema"] = "camid-dataset/1";
  manifest["scenario"] = spec_to_json_obj(data.spec);
  manifest["name"] = data.spec.name();
  manifest["k"] = data.truth.size();
  manifest["truth_theta"] = data.truth.weights();
  manifest["seeds"] = {
      {"init", data.spec.init_seed ? *data.spec.init_seed
                                   : seeds::derive(data.spec.seed, "init")},
      {"theta", seeds::derive(data.spec.seed, "theta")},
      {"noise", seeds::derive(data.spec.seed, "noise")}};
  if (data.noise) {
    manifest["noise"] = {{"sigma", data.noise->sigma},
                         {"empirical_snr_db", data.noise->empirical_snr_db},
                         {"clamped_fraction", data.noise->clamped_fraction}};
  }
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  for (std::size_t t = 0; t < data.clean.size(); ++t) {
    write_text(dir / step_file("clean", static_cast<int>(t)), data.clean[t].to_csv());
    write_text(dir / step_file("observed", static_cast<int>(t)),
               data.observed[t].to_csv());
  }
}

ObservedDataset read_dataset_archive(const fs::path& dir) {
  const json manifest = json::parse(read_text(dir / "manifest.json"));
  ObservedDataset data;
  data.spec = spec_from_json_obj(manifest.at("scenario"));
  data.truth = RuleParams(data.spec.neighborhood(),
                          manifest.at("truth_theta").get<std::vector<double>>());
  for (int t = 0; t <= data.spec.steps; ++t) {
    data.clean.push_back(
        Configuration::from_csv_string(read_text(dir / step_file("clean", t))));
    data.observed.push_back(Configuration::from_csv_string(
        read_text(dir / step_file("observed", t))));
  }
  if (manifest.contains("noise")) {
    NoiseStats stats;
    stats.sigma = manifest["noise"].at("sigma").get<double>();
    stats.empirical_snr_db = manifest["noise"].at("empirical_snr_db").get<double>();
    stats.clamped_fraction = manifest["noise"].at("clamped_fraction").get<double>();
    data.noise = stats;
  }
  return data;
}

}  // namespace camid
