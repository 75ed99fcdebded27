#include "ogclab/catalog_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ogclab/errors.hpp"
#include "ogclab/graph_json.hpp"

namespace ogclab {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "ogclab-catalog/1";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError(p.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void save_catalog(const fs::path& dir, const GraphCatalog& cat) {
  fs::create_directories(dir / "graphs");
  ojson idx;
  idx["format"] = kFormat;
  idx["flavor"] = flavor_name(cat.flavor);
  idx["g"] = cat.genus;
  idx["labels"] = cat.labels;
  idx["profile"] = cat.profile.name();
  idx["generator_version"] = cat.generator_version;
  idx["total"] = cat.size();
  ojson strata = ojson::array();
  ojson entries = ojson::array();
  for (const auto& [k, list] : cat.strata) {
    std::size_t zeros = 0;
    fs::create_directories(dir / "graphs" / std::to_string(k));
    for (std::size_t i = 0; i < list.size(); ++i) {
      const CatalogEntry& e = list[i];
      const std::string rel = "graphs/" + std::to_string(k) + "/" + std::to_string(i) + ".json";
      save_graph(dir / rel, e.graph);
      zeros += e.zero_generator ? 1 : 0;
      ojson ej;
      ej["stratum"] = k;
      ej["index"] = i;
      ej["file"] = rel;
      ej["code"] = code_hex(e.code);
      ej["zero_generator"] = e.zero_generator;
      ej["aut_order"] = e.aut_order;
      entries.push_back(ej);
    }
    strata.push_back(ojson{{"key", k}, {"count", list.size()}, {"zero_generators", zeros}});
  }
  idx["strata"] = strata;
  idx["entries"] = entries;
  std::ofstream out(dir / "index.json", std::ios::binary);
  if (!out) throw ValidationError((dir / "index.json").string() + ": cannot open for writing");
  out << idx.dump(1) << '\n';
}

GraphCatalog load_catalog(const fs::path& dir) {
  const fs::path index_path = dir / "index.json";
  ojson idx;
  try {
    idx = ojson::parse(read_file(index_path));
  } catch (const ojson::exception& ex) {
    throw ValidationError(index_path.string() + ": " + ex.what());
  }
  GraphCatalog cat;
  try {
    if (idx.at("format").get<std::string>() != kFormat) throw ValidationError(index_path.string() + ": unknown format");
    cat.flavor = flavor_from_name(idx.at("flavor").get<std::string>());
    cat.genus = idx.at("g").get<int>();
    cat.labels = idx.at("labels").get<std::vector<int>>();
    cat.profile = StabilityProfile::from_name(idx.at("profile").get<std::string>());
    cat.generator_version = idx.at("generator_version").get<std::string>();
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ValidationError(index_path.string() + ": " + ex.what());
  }
  const bool directed = cat.flavor == Flavor::Oriented;
  for (const auto& ej : idx.at("entries")) {
    const std::string rel = ej.at("file").get<std::string>();
    const fs::path file = dir / rel;
    HalfEdgeGraph g = load_graph(file, directed);
    auto fail = [&](const std::string& why) { return ValidationError(file.string() + ": " + why); };
    if (g.is_directed() != directed) throw fail("graph flavor does not match the catalog");
    if (g.labels() != cat.labels) throw fail("markings differ from the catalog's label set");
    if (genus(g) != cat.genus) throw fail("wrong genus");
    if (!is_stable(g, cat.profile)) throw fail("graph is not stable for profile " + cat.profile.name());
    if (directed && !is_acyclic(g)) throw fail("graph has a directed cycle");
    const CanonicalForm cf = canonical_form(g);
    if (code_hex(cf.code) != ej.at("code").get<std::string>()) throw fail("canonical code does not match the index");
    if (!(cf.graph == g)) throw fail("graph is not stored in canonical form");
    CatalogEntry e;
    e.graph = std::move(g);
    e.code = cf.code;
    e.aut_order = cf.aut_order;
    e.zero_generator = directed ? cf.odd_on_vertices : cf.odd_on_edges;
    if (e.zero_generator != ej.at("zero_generator").get<bool>()) throw fail("zero-generator flag does not match");
    const int key = ej.at("stratum").get<int>();
    if (key != cat.stratum_of(e.graph)) throw fail("graph filed under the wrong stratum");
    auto& list = cat.strata[key];
    if (ej.at("index").get<std::size_t>() != list.size()) throw fail("entries out of order in the index");
    if (!list.empty() && !(list.back().code < e.code)) throw fail("entries not sorted by canonical code");
    list.push_back(std::move(e));
  }
  cat.reindex();
  return cat;
}

std::string catalog_cache_key(Flavor flavor, int g, const std::vector<int>& labels, const StabilityProfile& profile) {
  std::string key = flavor_name(flavor) + "_g" + std::to_string(g) + "_S";
  for (std::size_t i = 0; i < labels.size(); ++i) key += (i ? "-" : "") + std::to_string(labels[i]);
  return key + "_" + profile.name();
}

GraphCatalog cached_generate(Flavor flavor, int g, const std::vector<int>& labels, const StabilityProfile& profile,
                             const GenerateOptions& opts, std::optional<fs::path> cache_root) {
  if (!cache_root) {
    if (const char* env = std::getenv("OGCLAB_CACHE"); env && *env) cache_root = fs::path(env);
  }
  if (!cache_root) return generate(flavor, g, labels, profile, opts);
  std::vector<int> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  const fs::path dir = *cache_root / catalog_cache_key(flavor, g, sorted, profile);
  if (fs::exists(dir / "index.json")) return load_catalog(dir);
  GraphCatalog cat = generate(flavor, g, labels, profile, opts);
  const fs::path tmp = dir.string() + ".partial";
  fs::remove_all(tmp);
  save_catalog(tmp, cat);
  fs::remove_all(dir);
  fs::rename(tmp, dir);
  return cat;
}

}  // namespace ogclab
