#include "symlik/symbol_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace symlik {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json to_json(const Symbol& s) {
  ordered_json j;
  j["type"] = symbol_type_name(s);
  j["n"] = symbol_count(s);
  if (const auto* v = std::get_if<IntervalSymbol>(&s)) {
    j["s_l"] = v->s_l;
    j["s_u"] = v->s_u;
    j["l"] = v->l;
    j["u"] = v->u;
  } else if (const auto* v = std::get_if<RectMinMaxSymbol>(&s)) {
    j["s_min"] = v->s_min;
    j["s_max"] = v->s_max;
    j["p"] = v->p;
    auto locs = ordered_json::array();
    for (const auto& pt : v->locations) locs.push_back({pt[0], pt[1]});
    j["locations"] = locs;
  } else if (const auto* v = std::get_if<OrderRectSymbol>(&s)) {
    j["s_l"] = v->s_l;
    j["s_u"] = v->s_u;
    j["l"] = v->l;
    j["u"] = v->u;
    switch (v->construction) {
      case RectConstruction::Marginal: j["construction"] = "marginal"; break;
      case RectConstruction::SeqNest: j["construction"] = "seq_nest"; break;
      case RectConstruction::IterSeg: j["construction"] = "iter_seg"; break;
    }
    j["axis_order"] = v->axis_order;
  } else if (const auto* v = std::get_if<FixedBinHistogramSymbol>(&s)) {
    j["grids"] = v->grids;
    j["counts"] = v->counts;  // row-major over bin extents
  } else if (const auto* v = std::get_if<RandomBinHistogramSymbol>(&s)) {
    j["s"] = v->s;
    j["k"] = v->k;
  }
  return j;
}

Symbol from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  const int n = j.at("n").get<int>();
  if (type == "interval") {
    IntervalSymbol v;
    v.n = n;
    v.s_l = j.at("s_l").get<double>();
    v.s_u = j.at("s_u").get<double>();
    v.l = j.at("l").get<int>();
    v.u = j.at("u").get<int>();
    return v;
  }
  if (type == "rect_minmax") {
    RectMinMaxSymbol v;
    v.n = n;
    v.s_min = j.at("s_min").get<std::vector<double>>();
    v.s_max = j.at("s_max").get<std::vector<double>>();
    v.p = j.at("p").get<int>();
    for (const auto& pt : j.at("locations"))
      v.locations.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
    return v;
  }
  if (type == "rect_order") {
    OrderRectSymbol v;
    v.n = n;
    v.s_l = j.at("s_l").get<std::vector<double>>();
    v.s_u = j.at("s_u").get<std::vector<double>>();
    v.l = j.at("l").get<std::vector<int>>();
    v.u = j.at("u").get<std::vector<int>>();
    const std::string c = j.at("construction").get<std::string>();
    if (c == "marginal") v.construction = RectConstruction::Marginal;
    else if (c == "seq_nest") v.construction = RectConstruction::SeqNest;
    else if (c == "iter_seg") v.construction = RectConstruction::IterSeg;
    else throw DataError("symbol json: unknown construction '" + c + "'");
    v.axis_order = j.at("axis_order").get<std::vector<int>>();
    return v;
  }
  if (type == "hist_fixed") {
    FixedBinHistogramSymbol v;
    v.n = n;
    v.grids = j.at("grids").get<std::vector<std::vector<double>>>();
    v.counts = j.at("counts").get<std::vector<long>>();
    std::size_t total = 1;
    for (int b : v.bin_extents()) total *= static_cast<std::size_t>(b);
    if (v.counts.size() != total) throw DataError("symbol json: counts size mismatch");
    return v;
  }
  if (type == "hist_random") {
    RandomBinHistogramSymbol v;
    v.n = n;
    v.s = j.at("s").get<std::vector<double>>();
    v.k = j.at("k").get<std::vector<int>>();
    if (v.s.size() != v.k.size()) throw DataError("symbol json: s/k size mismatch");
    return v;
  }
  throw DataError("symbol json: unknown type '" + type + "'");
}

}  // namespace

std::string symbols_to_json(const std::vector<Symbol>& symbols) {
  auto arr = ordered_json::array();
  for (const auto& s : symbols) arr.push_back(to_json(s));
  return arr.dump(2) + "\n";
}

std::vector<Symbol> symbols_from_json(const std::string& text) {
  json parsed;
  try {
    parsed = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("symbol json: parse failure: ") + e.what());
  }
  if (!parsed.is_array()) throw DataError("symbol json: expected a top-level array");
  std::vector<Symbol> out;
  try {
    for (const auto& j : parsed) out.push_back(from_json(j));
  } catch (const json::exception& e) {
    throw DataError(std::string("symbol json: schema violation: ") + e.what());
  }
  return out;
}

void write_symbols_file(const std::string& path, const std::vector<Symbol>& symbols) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot open for writing: " + path);
  f << symbols_to_json(symbols);
}

std::vector<Symbol> read_symbols_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return symbols_from_json(ss.str());
}

}  // namespace symlik
