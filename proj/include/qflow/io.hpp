#pragma once
#include <string>

#include "qflow/scheme.hpp"

// Snapshot format: one ASCII header line
//   QFLOW1 <kind> <nx> <ny> <d> <bc> <lx> <ly> <t>
// followed by raw little-endian f64 blocks in storage order. Kinds:
//   q     cell Q coefficients, nx*ny*ncoef(d) values
//   p     cell scalar, nx*ny values
//   state q block, then u ((nx+1)*ny) and v (nx*(ny+1)) face blocks

namespace qflow {

void write_qfield(const std::string& path, const QField& Q, double t = 0.0);
QField read_qfield(const std::string& path);

void write_scalar(const std::string& path, const ScalarField& f);
ScalarField read_scalar(const std::string& path);

void write_state(const std::string& path, const State& s);
State read_state(const std::string& path);

// cell-centered CSV: i,j,x,y,u,v,q0..  (velocity averaged to centers)
void write_cells_csv(const std::string& path, const State& s);

}  // namespace qflow
