#include "ogclab/report.hpp"

#include <sstream>

#include <json.hpp>

namespace ogclab {

using ojson = nlohmann::ordered_json;

namespace {

ojson betti_rows(const BettiTable& t) {
  ojson rows = ojson::array();
  for (const auto& [k, r] : t.rows)
    rows.push_back(ojson{{"cell_degree", r.cell_degree},
                         {"hc_degree", r.hc_degree},
                         {"dim_basis", r.dim},
                         {"rank_in", r.rank_in},
                         {"rank_out", r.rank_out},
                         {"betti", r.betti}});
  return rows;
}

}  // namespace

std::string verify_report_json(const GradedComplex& marked, const GradedComplex& oriented,
                               const VerifyOutcome& o) {
  ojson j;
  j["g"] = marked.genus;
  j["labels"] = marked.labels;
  j["result"] = o.ok() ? "pass" : "fail";
  j["direction"] = o.chain.direction;
  j["convention"] = convention_name(o.chain.convention);
  j["primes"] = o.primes;

  ojson chain;
  chain["pass"] = o.chain.ok;
  chain["epsilon"] = o.chain.epsilon;
  ojson degs = ojson::array();
  for (const auto& d : o.chain.degrees) {
    const char* status = d.sign == 2 ? "fail" : (d.sign == 0 ? "vacuous" : "pass");
    degs.push_back(ojson{{"marked_degree", d.k}, {"status", status}, {"sign", d.sign == 2 ? 0 : d.sign}});
  }
  chain["degrees"] = degs;
  if (o.chain.bad_degree) {
    ojson bad;
    bad["marked_degree"] = *o.chain.bad_degree;
    bad["column"] = *o.chain.bad_column;
    bad["generator"] = o.chain.bad_generator;
    ojson lhs = ojson::array(), rhs = ojson::array();
    for (const auto& [g, c] : o.chain.lhs_expansion) lhs.push_back(ojson{{"graph", g}, {"coef", c}});
    for (const auto& [g, c] : o.chain.rhs_expansion) rhs.push_back(ojson{{"graph", g}, {"coef", c}});
    bad["D_psi"] = lhs;
    bad["eps_psi_D"] = rhs;
    chain["offending_generator"] = bad;
  }
  j["chain_map"] = chain;

  ojson quasi;
  quasi["pass"] = o.quasi.ok;
  quasi["betti_match"] = o.quasi.betti_match;
  ojson cone = ojson::array();
  for (const auto& d : o.quasi.cone)
    cone.push_back(ojson{{"oriented_degree", d.m},
                         {"dim", d.dim},
                         {"rank_in", d.rank_in},
                         {"rank_out", d.rank_out},
                         {"homology", d.homology},
                         {"status", d.homology == 0 ? "iso" : "fail"}});
  quasi["cone"] = cone;
  j["quasi_iso"] = quasi;
  j["betti"] = ojson{{"marked", betti_rows(o.quasi.marked_betti)}, {"oriented", betti_rows(o.quasi.oriented_betti)}};
  j["dims"] = ojson{{"marked", marked.total_dim()}, {"oriented", oriented.total_dim()}};
  return j.dump(2) + "\n";
}

std::string verify_summary(const GradedComplex& marked, const VerifyOutcome& o) {
  std::ostringstream os;
  os << "(g,|S|)=(" << marked.genus << "," << marked.labels.size() << ") " << (o.ok() ? "pass" : "FAIL")
     << ": chain map " << (o.chain.ok ? "ok" : "broken") << " (eps=" << o.chain.epsilon << ", "
     << convention_name(o.chain.convention) << "), cone "
     << (o.quasi.ok ? "acyclic" : "not acyclic") << ", H = {";
  bool first = true;
  for (const auto& [d, b] : o.quasi.marked_betti.by_hc_degree()) {
    os << (first ? "" : ", ") << d << ":" << b;
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace ogclab
