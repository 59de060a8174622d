// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#include "otafc/topology.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "otafc/errors.hpp"
#include "otafc/rng.hpp"

namespace otafc {

int Topology::total_relays() const {
  return std::accumulate(group_sizes.begin(), group_sizes.end(), 0);
}

int Topology::group_size(int l) const {
  if (l < 1 || l > num_groups()) {
    throw ValidationError("group index " + std::to_string(l) + " out of range");
  }
  return group_sizes[static_cast<std::size_t>(l - 1)];
}

void Topology::validate() const {
  if (n_tx < 1 || n_rx < 1 || n_stream < 1) {
    throw ValidationError("antenna and stream counts must be >= 1");
  }
  if (group_sizes.empty()) {
    throw ValidationError("at least one relay group is required");
  }
  for (int k : group_sizes) {
    if (k < 1) {
      throw ValidationError("every relay group needs at least one device");
    }
  }
  if (!(area_width > 0.0) || !(area_depth > 0.0)) {
    throw ValidationError("area dimensions must be positive");
  }
}

Topology Topology::uniform(int n, int num_groups, int per_group, double d_max,
                           bool direct_link) {
  Topology t;
  t.n_tx = t.n_rx = t.n_stream = n;
  t.group_sizes.assign(static_cast<std::size_t>(num_groups), per_group);
  t.direct_link_present = direct_link;
  t.area_width = t.area_depth = d_max;
  return t;
}

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

Placement generate_placement(const Topology& topology, std::uint64_t seed) {
  topology.validate();
  Rng rng(seed);
  const double slab = topology.area_depth / topology.num_groups();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Placement p;
  p.bs = {0.0, topology.area_width / 2.0, topology.bs_height};
  p.rx = {topology.area_depth, topology.area_width / 2.0, topology.rx_height};
  p.relays.resize(topology.group_sizes.size());
  for (int l = 1; l <= topology.num_groups(); ++l) {
    auto& group = p.relays[static_cast<std::size_t>(l - 1)];
    const double x0 = (l - 1) * slab;
    for (int k = 0; k < topology.group_size(l); ++k) {
      const double x = x0 + slab * unit(rng);
      const double y = topology.area_width * unit(rng);
      group.push_back({x, y, topology.relay_height});
    }
  }
  return p;
}

bool in_region(const Topology& topology, int l, const Position& p) {
  const double slab = topology.area_depth / topology.num_groups();
  return p.x >= (l - 1) * slab && p.x <= l * slab && p.y >= 0.0 &&
         p.y <= topology.area_width;
}

}  // namespace otafc
