#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ogclab/catalog_io.hpp"
#include "ogclab/complex.hpp"
#include "ogclab/errors.hpp"
#include "ogclab/report.hpp"
#include "ogclab/sparse_matrix.hpp"
#include "ogclab/zivkovic.hpp"

namespace ogclab::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct UsageError : Error {
  using Error::Error;
};

// "3" or "1-4" (inclusive).
std::pair<int, int> parse_range(const std::string& text, const char* what) {
  auto number = [&](std::string_view s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 0)
      throw UsageError(std::string(what) + ": expected a non-negative integer or a range a-b, got '" + text + "'");
    return v;
  };
  const auto dash = text.find('-');
  if (dash == std::string::npos) {
    const int v = number(text);
    return {v, v};
  }
  const int lo = number(std::string_view(text).substr(0, dash));
  const int hi = number(std::string_view(text).substr(dash + 1));
  if (lo > hi) throw UsageError(std::string(what) + ": empty range '" + text + "'");
  return {lo, hi};
}

struct Job {
  std::string genus = "1";
  std::string markings = "1";
  std::vector<int> labels;  // explicit label set; overrides --markings
  std::string flavor = "both";
  std::string profile = "oriented";
  std::uint64_t seed = 0x5eed;
  int threads = 1;
  std::uint64_t max_cells = 0;
  double max_minutes = 0;
  std::string out;
  std::string format = "csv";
  std::string cache;

  struct Pair {
    int g;
    std::vector<int> labels;
  };

  [[nodiscard]] std::vector<Pair> pairs() const {
    const auto [g0, g1] = parse_range(genus, "--genus");
    std::vector<std::vector<int>> label_sets;
    if (!labels.empty()) {
      std::vector<int> s = labels;
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw UsageError("--labels: repeated label");
      label_sets.push_back(s);
    } else {
      const auto [n0, n1] = parse_range(markings, "--markings");
      for (int n = n0; n <= n1; ++n) {
        std::vector<int> s;
        for (int i = 1; i <= n; ++i) s.push_back(i);
        label_sets.push_back(s);
      }
    }
    std::vector<Pair> out_pairs;
    for (int g = g0; g <= g1; ++g)
      for (const auto& s : label_sets) {
        check_stable_range(g, s.size());
        out_pairs.push_back({g, s});
      }
    return out_pairs;
  }

  [[nodiscard]] std::vector<Flavor> flavors() const {
    if (flavor == "both") return {Flavor::Marked, Flavor::Oriented};
    return {flavor_from_name(flavor)};
  }

  [[nodiscard]] StabilityProfile profile_for(Flavor f) const {
    if (f == Flavor::Marked) return StabilityProfile::marked();
    const StabilityProfile p = StabilityProfile::from_name(profile);
    if (p.name() == "marked") throw UsageError("--profile marked does not apply to the oriented flavor");
    return p;
  }

  [[nodiscard]] GenerateOptions generate_options() const {
    GenerateOptions o;
    o.threads = threads;
    o.max_cells = max_cells;
    if (max_minutes > 0)
      o.deadline = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double, std::ratio<60>>(max_minutes));
    return o;
  }

  [[nodiscard]] std::optional<fs::path> cache_root() const {
    if (!cache.empty()) return fs::path(cache);
    return std::nullopt;  // cached_generate falls back to $OGCLAB_CACHE
  }

  [[nodiscard]] BettiOptions betti_options() const {
    BettiOptions o;
    o.strategy = RankStrategy::consensus(3, seed);
    return o;
  }
};

std::string pair_name(const Job::Pair& p) {
  std::string s = "g" + std::to_string(p.g) + "_S";
  for (std::size_t i = 0; i < p.labels.size(); ++i) s += (i ? "-" : "") + std::to_string(p.labels[i]);
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << text;
}

// Either the --out file or stdout.
void emit(const Job& job, const std::string& text, std::ostream& out) {
  if (job.out.empty()) out << text;
  else write_text(job.out, text);
}

std::shared_ptr<const GraphCatalog> catalog_for(const Job& job, Flavor f, const Job::Pair& p,
                                                const GenerateOptions& gopts) {
  return std::make_shared<const GraphCatalog>(
      cached_generate(f, p.g, p.labels, job.profile_for(f), gopts, job.cache_root()));
}

GradedComplex complex_for(const Job& job, Flavor f, const Job::Pair& p, const GenerateOptions& gopts) {
  BuildOptions b;
  b.threads = job.threads;
  return build_complex(catalog_for(job, f, p, gopts), b);
}

// --- enumerate --------------------------------------------------------------

// Catalogs already on disk are listed in <out>/state.json and skipped on a
// rerun, so an interrupted job resumes where it stopped.
int cmd_enumerate(const Job& job, std::ostream& out) {
  if (job.out.empty()) throw UsageError("enumerate needs --out DIR");
  const fs::path root(job.out);
  fs::create_directories(root);
  const auto pairs = job.pairs();
  const GenerateOptions gopts = job.generate_options();
  ojson done = ojson::array();
  auto save_state = [&](const std::string& status, const std::string& reason) {
    ojson st;
    st["status"] = status;
    if (!reason.empty()) st["reason"] = reason;
    st["genus"] = job.genus;
    st["markings"] = job.labels.empty() ? ojson(job.markings) : ojson(job.labels);
    st["flavor"] = job.flavor;
    st["profile"] = job.profile;
    st["completed"] = done;
    write_text(root / "state.json", st.dump(2) + "\n");
  };
  for (const auto& p : pairs)
    for (Flavor f : job.flavors()) {
      const std::string name = flavor_name(f) + "_" + pair_name(p);
      const fs::path dir = root / name;
      GraphCatalog cat;
      if (fs::exists(dir / "index.json")) {
        cat = load_catalog(dir);
      } else {
        try {
          cat = cached_generate(f, p.g, p.labels, job.profile_for(f), gopts, job.cache_root());
        } catch (const ResourceCapError& ex) {
          save_state("incomplete", ex.what());
          throw;
        }
        const fs::path tmp = dir.string() + ".partial";
        fs::remove_all(tmp);
        save_catalog(tmp, cat);
        fs::rename(tmp, dir);
      }
      done.push_back(name);
      out << name << ": " << cat.size() << " graphs";
      for (const auto& [k, list] : cat.strata) out << " [" << k << "]=" << list.size();
      out << "\n";
    }
  save_state("complete", "");
  return kPass;
}

// --- betti ------------------------------------------------------------------

int cmd_betti(const Job& job, std::ostream& out) {
  if (job.format != "csv" && job.format != "json") throw UsageError("--format must be csv or json");
  const GenerateOptions gopts = job.generate_options();
  std::vector<BettiTable> tables;
  for (const auto& p : job.pairs())
    for (Flavor f : job.flavors()) {
      const GradedComplex c = complex_for(job, f, p, gopts);  // d^2 is checked while building
      tables.push_back(betti(c, job.betti_options()));
    }
  emit(job, job.format == "csv" ? betti_csv(tables) : betti_json(tables), out);
  return kPass;
}

// --- verify-zivkovic --------------------------------------------------------

int cmd_verify(const Job& job, std::ostream& out, std::ostream& err) {
  const GenerateOptions gopts = job.generate_options();
  ojson reports = ojson::array();
  bool all_ok = true;
  for (const auto& p : job.pairs()) {
    const GradedComplex marked = complex_for(job, Flavor::Marked, p, gopts);
    const GradedComplex oriented = complex_for(job, Flavor::Oriented, p, gopts);
    auto [psi, chain] = select_psi_convention(marked, oriented, job.threads);
    VerifyOutcome o;
    o.chain = std::move(chain);
    o.quasi = verify_quasi_iso(psi, marked, oriented, o.chain.epsilon, job.betti_options());
    o.primes = random_primes(3, job.seed);
    all_ok = all_ok && o.ok();
    reports.push_back(ojson::parse(verify_report_json(marked, oriented, o)));
    err << verify_summary(marked, o) << "\n";
  }
  const std::string text = (reports.size() == 1 ? reports.front() : reports).dump(2) + "\n";
  emit(job, text, out);
  return all_ok ? kPass : kMathFailure;
}

// --- export -----------------------------------------------------------------

// <out>/<pair>/{marked,oriented}/catalog/..., D_<k>.mtx, psi/Psi_<k>.mtx, betti.csv
int cmd_export(const Job& job, std::ostream& out) {
  if (job.out.empty()) throw UsageError("export needs --out DIR");
  const fs::path root(job.out);
  const GenerateOptions gopts = job.generate_options();
  for (const auto& p : job.pairs()) {
    const fs::path base = root / pair_name(p);
    std::vector<BettiTable> tables;
    std::optional<GradedComplex> marked, oriented;
    for (Flavor f : job.flavors()) {
      GradedComplex c = complex_for(job, f, p, gopts);
      const fs::path dir = base / flavor_name(f);
      fs::remove_all(dir / "catalog");
      save_catalog(dir / "catalog", *c.catalog);
      for (const auto& [k, m] : c.boundary) write_text(dir / ("D_" + std::to_string(k) + ".mtx"), to_matrix_market(m));
      tables.push_back(betti(c, job.betti_options()));
      (f == Flavor::Marked ? marked : oriented) = std::move(c);
    }
    if (marked && oriented) {
      const PsiFamily psi = psi_matrix(*marked, *oriented, PsiConvention::ReversedImages, job.threads);
      for (const auto& [k, m] : psi.blocks)
        write_text(base / "psi" / ("Psi_" + std::to_string(k) + ".mtx"), to_matrix_market(m));
    }
    write_text(base / "betti.csv", betti_csv(tables));
    out << "exported " << base.string() << "\n";
  }
  return kPass;
}

void add_common(CLI::App* sc, Job& job, bool with_flavor, bool with_format) {
  sc->add_option("-g,--genus", job.genus, "genus or range a-b")->capture_default_str();
  sc->add_option("-n,--markings", job.markings, "number of markings |S| (labels 1..n) or range a-b")
      ->capture_default_str();
  sc->add_option("--labels", job.labels, "explicit marking labels, e.g. --labels 1,2,5")->delimiter(',');
  if (with_flavor)
    sc->add_option("--flavor", job.flavor, "marked, oriented or both")
        ->check(CLI::IsMember({"marked", "oriented", "both"}))
        ->capture_default_str();
  sc->add_option("--profile", job.profile, "oriented stability profile: oriented or oriented-strict")
      ->check(CLI::IsMember({"oriented", "oriented-strict"}))
      ->capture_default_str();
  sc->add_option("--seed", job.seed, "seed for the consensus primes")->capture_default_str();
  sc->add_option("--threads", job.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sc->add_option("--max-cells", job.max_cells, "cap on catalog size per (flavor, g, S); 0 = none")
      ->capture_default_str();
  sc->add_option("--max-minutes", job.max_minutes, "wall-clock cap; 0 = none")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sc->add_option("--out", job.out, "output file or directory");
  sc->add_option("--cache", job.cache, "catalog cache directory (default: $OGCLAB_CACHE)");
  if (with_format)
    sc->add_option("--format", job.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ogclab: weight-zero marked and oriented graph complexes"};
  app.require_subcommand(1);
  Job job;
  CLI::App* en = app.add_subcommand("enumerate", "enumerate graph catalogs into --out DIR");
  add_common(en, job, true, false);
  CLI::App* be = app.add_subcommand("betti", "Betti tables of the complexes");
  add_common(be, job, true, true);
  CLI::App* vz = app.add_subcommand("verify-zivkovic", "check that the forest map is a quasi-isomorphism");
  add_common(vz, job, false, false);
  CLI::App* ex = app.add_subcommand("export", "write catalogs, matrices and Betti tables under --out DIR");
  add_common(ex, job, true, false);

  std::vector<const char*> argv{"ogclab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*en) return cmd_enumerate(job, out);
    if (*be) return cmd_betti(job, out);
    if (*vz) return cmd_verify(job, out, err);
    return cmd_export(job, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const StructuralError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceCapError& e) {
    err << "resource cap: " << e.what() << "\n";
    return kResourceCap;
  } catch (const InternalCheckError& e) {
    err << "check failed: " << e.what() << "\n";
    return kMathFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kMathFailure;
  }
}

}  // namespace ogclab::cli
