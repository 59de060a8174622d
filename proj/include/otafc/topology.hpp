// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <cstdint>
#include <vector>

namespace otafc {

/// Dimensions and grouping of the BS -> relay groups -> Rx chain.
///
/// Groups are numbered 1..L in transmission order. The service area is
/// area_depth meters along the BS-Rx axis (x) and area_width meters across it (y).
struct Topology {
  int n_tx = 49;
  int n_rx = 49;
  int n_stream = 49;
  std::vector<int> group_sizes{40, 40, 40};
  bool direct_link_present = false;
  double area_width = 200.0;
  double area_depth = 200.0;
  double bs_height = 5.0;
  double rx_height = 5.0;
  double relay_height = 1.5;

  int num_groups() const { return static_cast<int>(group_sizes.size()); }
  int total_relays() const;
  /// K_l for l in 1..L.
  int group_size(int l) const;

  /// Throws ValidationError on a malformed topology.
  void validate() const;

  /// Square N x N system with L equal groups, the layout used throughout the experiments.
  static Topology uniform(int n, int num_groups, int per_group, double d_max,
                          bool direct_link = false);
};

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Position& a, const Position& b);

struct Placement {
  Position bs;
  Position rx;
  /// relays[l - 1] holds the K_l positions of group l.
  std::vector<std::vector<Position>> relays;
};

/// BS at (0, W/2, h_bs), Rx at (D, W/2, h_rx); group l is drawn uniformly in the
/// slab x in [(l-1) D/L, l D/L], y in [0, W]. Deterministic in seed.
Placement generate_placement(const Topology& topology, std::uint64_t seed);

/// True when p lies inside the slab assigned to group l.
bool in_region(const Topology& topology, int l, const Position& p);

}  // namespace otafc
