#pragma once

#include <string>

#include "ogclab/complex.hpp"
#include "ogclab/rank.hpp"
#include "ogclab/zivkovic.hpp"

namespace ogclab {

struct VerifyOutcome {
  ChainMapReport chain;
  QuasiIsoReport quasi;
  std::vector<std::uint32_t> primes;  // consensus primes used for ranks
  [[nodiscard]] bool ok() const { return chain.ok && quasi.ok; }
};

/// Structured JSON report: pass/fail per degree, ranks and both Betti tables.
[[nodiscard]] std::string verify_report_json(const GradedComplex& marked, const GradedComplex& oriented,
                                             const VerifyOutcome& outcome);

/// One-line human summary.
[[nodiscard]] std::string verify_summary(const GradedComplex& marked, const VerifyOutcome& outcome);

}  // namespace ogclab
