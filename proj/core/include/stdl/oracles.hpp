// Model-based oracles. They decide realizability of atomic networks by
// building or enumerating concrete models, independently of the
// composition tables, and are used to generate and check those tables.
#pragma once

#include <string>
#include <vector>

#include "stdl/algebra.hpp"

namespace stdl::oracle {

// rel[i*n+j] is the atom holding from variable i to variable j (i != j).
// Both directions are read; a mismatching converse is simply unrealizable.
using AtomMatrix = std::vector<int>;

// RCC8 over adjacency spaces: regions are vertex sets of a graph, contact is
// shared vertex or an edge. Decided through the maximal canonical model.
bool rcc8_realizable(int n, const AtomMatrix& rel);

// CDA over points of an integer grid, checked axis by axis.
bool cda_realizable(int n, const AtomMatrix& rel);

bool binary_realizable(AlgebraId a, int n, const AtomMatrix& rel);

// CYC_b relation b(y,x) of orientation y relative to x on a grid of
// `units` steps per full turn.
CycB cycb_of_angles(int theta_x, int theta_y, int units);
int cyct_atom_of_angles(int tx, int ty, int tz, int units);

// atom[(i*n+j)*n+k] for i<j<k, other entries ignored. Enumerates
// orientations on a 24-step grid, which realizes every arrangement of up to
// 12 orientations (each needs one line through the origin).
bool cyct_realizable(int n, const std::vector<int>& atom);

// Regenerates every shipped table file from the oracles above.
std::vector<TableFile> generate_tables();

}  // namespace stdl::oracle
