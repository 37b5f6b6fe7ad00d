#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crparallax/germ.hpp"
#include "crparallax/surface.hpp"

namespace crparallax {

struct CatalogEntry {
    std::string name;
    std::string text;
    std::string description;
    std::string region_note;
    /// Default sampling center (z1, z2, v).
    BasePoint<GaussianRational> center;
};

inline constexpr std::uint64_t kDefaultTubeSeed = 1;

/// Built-in surfaces. The random tube is regenerated from `tube_seed`.
std::vector<CatalogEntry> catalog_entries(std::uint64_t tube_seed = kDefaultTubeSeed);

std::optional<CatalogEntry> find_catalog_entry(const std::string& name, std::uint64_t tube_seed = kDefaultTubeSeed);

/// F = re(z2) * g(re(z1)/re(z2)) with g a seeded rational quartic and g''(1) != 0.
std::string random_tube_text(std::uint64_t seed);

/// A catalog name or a path to a surface file.
SurfaceSpec resolve_surface(const std::string& name_or_path, std::uint64_t tube_seed = kDefaultTubeSeed);

} // namespace crparallax
