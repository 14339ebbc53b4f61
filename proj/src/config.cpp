#include "fermsea/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace fermsea {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

Real parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    Real v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw config_error("cannot parse number '" + s + "' for " + what);
  }
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw config_error("cannot parse integer '" + s + "' for " + what);
  }
}

VectorR parse_vector(const std::string& s, char sep, const std::string& what) {
  auto parts = split(s, sep);
  VectorR v(static_cast<Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i)
    v[static_cast<Index>(i)] = parse_real(parts[i], what);
  return v;
}

VectorR broadcast(VectorR v, int d, const std::string& what) {
  if (v.size() == d) return v;
  if (v.size() == 1) return VectorR::Constant(d, v[0]);
  throw config_error(what + ": expected 1 or " + std::to_string(d) +
                     " components, got " + std::to_string(v.size()));
}

HoppingModel model_from_keys(const std::map<std::string, std::string>& kv,
                             int dimension) {
  Real mu = 0.0;
  std::map<Offset, Complex> hoppings;
  for (const auto& [key, value] : kv) {
    if (key == "model.mu") {
      mu = parse_real(value, "model.mu");
    } else if (key.rfind("model.hopping.", 0) == 0) {
      const std::string off_str = key.substr(std::string("model.hopping.").size());
      auto comps = split(off_str, ',');
      if (static_cast<int>(comps.size()) != dimension)
        throw config_error("hopping offset '" + off_str + "' has " +
                           std::to_string(comps.size()) + " components, need " +
                           std::to_string(dimension));
      Offset off(dimension);
      for (int i = 0; i < dimension; ++i)
        off[i] = parse_int(comps[i], "hopping offset");
      auto amp = split(value, ',');
      if (amp.empty() || amp.size() > 2)
        throw config_error("hopping amplitude must be 're' or 're,im'");
      Complex t(parse_real(amp[0], "hopping re"),
                amp.size() == 2 ? parse_real(amp[1], "hopping im") : 0.0);
      hoppings[off] = t;
    } else if (key.rfind("model.", 0) == 0 && key != "model.dimension") {
      throw config_error("unknown model key '" + key + "'");
    }
  }
  return HoppingModel(dimension, std::move(hoppings), mu);
}

SeaDefinition sea_from_keys(const std::map<std::string, std::string>& kv) {
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto require = [&](const std::string& key) -> std::string {
    auto v = get(key);
    if (!v) throw config_error("missing key '" + key + "'");
    return *v;
  };

  const int d = parse_int(require("sea.dimension"), "sea.dimension");
  if (d < 1) throw config_error("sea.dimension must be >= 1");
  const std::string variant = require("sea.variant");

  SeaDefinition def{FermiSea::empty(d), std::nullopt};
  if (variant == "interval") {
    VectorR kf = broadcast(parse_vector(require("sea.kf"), ',', "sea.kf"), d,
                           "sea.kf");
    VectorR center = VectorR::Zero(d);
    if (auto c = get("sea.center"))
      center = broadcast(parse_vector(*c, ',', "sea.center"), d, "sea.center");
    def.sea = FermiSea::interval_product(kf, center);
  } else if (variant == "balls") {
    std::vector<std::pair<VectorR, Real>> balls;
    for (const std::string& grp : split(require("sea.balls"), ';')) {
      if (grp.empty()) continue;
      VectorR row = parse_vector(grp, ',', "sea.balls");
      if (row.size() != d + 1)
        throw config_error("sea.balls: each group needs d center components "
                           "and a radius");
      balls.emplace_back(row.head(d), row[d]);
    }
    def.sea = FermiSea::ball_union(d, std::move(balls));
  } else if (variant == "checkerboard") {
    if (d != 2) throw config_error("checkerboard sea requires dimension 2");
    def.sea = FermiSea::checkerboard(parse_int(require("sea.m"), "sea.m"));
  } else if (variant == "grid") {
    const int res = parse_int(require("sea.resolution"), "sea.resolution");
    const std::string cells_str = require("sea.cells");
    std::vector<std::uint8_t> cells;
    cells.reserve(cells_str.size());
    for (char c : cells_str) {
      if (c == '0' || c == '1')
        cells.push_back(static_cast<std::uint8_t>(c - '0'));
      else if (!std::isspace(static_cast<unsigned char>(c)))
        throw config_error("sea.cells must contain only 0/1 digits");
    }
    def.sea = FermiSea::grid(d, res, std::move(cells));
  } else if (variant == "dispersion") {
    HoppingModel model = model_from_keys(kv, d);
    def.model = model;
    def.sea = FermiSea::from_dispersion(std::move(model));
  } else if (variant == "empty") {
    def.sea = FermiSea::empty(d);
  } else if (variant == "full") {
    def.sea = FermiSea::full(d);
  } else {
    throw config_error("unknown sea variant '" + variant + "'");
  }

  if (auto c = get("sea.complement")) {
    const int flip = parse_int(*c, "sea.complement");
    if (flip != 0 && flip != 1)
      throw config_error("sea.complement must be 0 or 1");
    if (flip) def.sea = def.sea.complement();
  }
  return def;
}

}  // namespace

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) +
                         ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error(path + ": empty key");
    if (kv.count(key)) throw config_error(path + ": duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

SeaDefinition sea_from_file(const std::string& path) {
  return sea_from_keys(read_key_value_file(path));
}

SeaDefinition sea_from_inline(const std::string& spec, int dimension) {
  if (dimension < 1) throw config_error("--d must be >= 1");
  const std::size_t colon = spec.find(':');
  const std::string variant = colon == std::string::npos ? spec : spec.substr(0, colon);
  std::map<std::string, std::vector<std::string>> args;
  if (colon != std::string::npos) {
    for (const std::string& pair : split(spec.substr(colon + 1), ',')) {
      if (pair.empty()) continue;
      std::size_t eq = pair.find('=');
      if (eq == std::string::npos)
        throw config_error("inline sea: expected key=value in '" + pair + "'");
      args[trim(pair.substr(0, eq))].push_back(trim(pair.substr(eq + 1)));
    }
  }
  auto single = [&](const std::string& key) -> std::optional<std::string> {
    auto it = args.find(key);
    if (it == args.end()) return std::nullopt;
    if (it->second.size() != 1)
      throw config_error("inline sea: key '" + key + "' given more than once");
    return it->second[0];
  };

  SeaDefinition def{FermiSea::empty(dimension), std::nullopt};
  if (variant == "interval") {
    auto kf = single("kf");
    if (!kf) throw config_error("interval sea needs kf=");
    VectorR w = broadcast(parse_vector(*kf, ';', "kf"), dimension, "kf");
    VectorR c = VectorR::Zero(dimension);
    if (auto cs = single("center"))
      c = broadcast(parse_vector(*cs, ';', "center"), dimension, "center");
    def.sea = FermiSea::interval_product(w, c);
  } else if (variant == "ball") {
    auto cit = args.find("center");
    auto rit = args.find("r");
    if (cit == args.end() || rit == args.end() ||
        cit->second.size() != rit->second.size())
      throw config_error("ball sea needs matching center=/r= pairs");
    std::vector<std::pair<VectorR, Real>> balls;
    for (std::size_t i = 0; i < cit->second.size(); ++i) {
      VectorR c = parse_vector(cit->second[i], ';', "center");
      if (c.size() != dimension)
        throw config_error("ball center needs " + std::to_string(dimension) +
                           " components");
      balls.emplace_back(c, parse_real(rit->second[i], "r"));
    }
    def.sea = FermiSea::ball_union(dimension, std::move(balls));
  } else if (variant == "checkerboard") {
    if (dimension != 2) throw config_error("checkerboard sea requires --d 2");
    auto m = single("m");
    if (!m) throw config_error("checkerboard sea needs m=");
    def.sea = FermiSea::checkerboard(parse_int(*m, "m"));
  } else if (variant == "nn") {
    Real t = 1.0, t0 = 0.0, mu = 0.0;
    if (auto v = single("t")) t = parse_real(*v, "t");
    if (auto v = single("t0")) t0 = parse_real(*v, "t0");
    if (auto v = single("mu")) mu = parse_real(*v, "mu");
    HoppingModel model =
        HoppingModel::nearest_neighbor(dimension, Complex(t, 0.0), t0, mu);
    def.model = model;
    def.sea = FermiSea::from_dispersion(std::move(model));
  } else if (variant == "dispersion" || variant == "grid") {
    auto file = single("file");
    if (!file)
      throw config_error(variant + " inline sea needs file=<config path>");
    def = sea_from_file(*file);
    if (def.sea.dimension() != dimension)
      throw config_error("sea file dimension does not match --d");
  } else if (variant == "empty") {
    def.sea = FermiSea::empty(dimension);
  } else if (variant == "full") {
    def.sea = FermiSea::full(dimension);
  } else {
    throw config_error("unknown inline sea variant '" + variant + "'");
  }

  if (auto c = single("complement")) {
    if (*c == "1" || *c == "true")
      def.sea = def.sea.complement();
    else if (*c != "0" && *c != "false")
      throw config_error("complement must be 0/1");
  }
  return def;
}

}  // namespace fermsea
