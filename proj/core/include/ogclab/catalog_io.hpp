#pragma once

// On-disk catalogs: <dir>/index.json plus one JSON graph file per entry under
// <dir>/graphs/<stratum>/<index>.json.

#include <filesystem>
#include <optional>
#include <string>

#include "ogclab/enumerate.hpp"

namespace ogclab {

void save_catalog(const std::filesystem::path& dir, const GraphCatalog& cat);

/// Re-validates every file (canonical code, stability, genus, markings,
/// zero-generator flag); ValidationError names the offending file.
[[nodiscard]] GraphCatalog load_catalog(const std::filesystem::path& dir);

/// Directory name used inside a cache root, e.g. "oriented_g1_S1-2-3_oriented".
[[nodiscard]] std::string catalog_cache_key(Flavor flavor, int g, const std::vector<int>& labels,
                                            const StabilityProfile& profile);

/// Loads from `cache_root` when present (falling back to $OGCLAB_CACHE when
/// cache_root is empty and the variable is set); otherwise generates and, if a
/// cache root is known, stores the result.
[[nodiscard]] GraphCatalog cached_generate(Flavor flavor, int g, const std::vector<int>& labels,
                                           const StabilityProfile& profile, const GenerateOptions& opts = {},
                                           std::optional<std::filesystem::path> cache_root = std::nullopt);

}  // namespace ogclab
