#pragma once

namespace logos {

// Numerical tolerances used across the library. Defaults are sized for
// double precision on spaces of dimension <= 16; everything is overridable.
struct Tolerances {
  double norm = 1e-10;         // unit-norm defect of state vectors
  double herm = 1e-10;         // Hermiticity defect (Frobenius)
  double idem = 1e-10;         // idempotence / involution defect
  double psd = 1e-9;           // eigenvalue floor, Born-value clamping window
  double trace = 1e-9;         // trace deviation, purity threshold
  double recon = 1e-8;         // reconstruction error, identity resolution
  double commutation = 1e-9;   // commutator norm below which powers are adjacent
  double relation = 1e-7;      // relation checks (conditional states divide by
                               // small probabilities, so looser than the core)
  double value_match = 1e-9;   // potentia matching in the isomorphism search
  double prob_floor = 1e-10;   // outcomes below this never occur
  double chsh_bound = 1e-9;    // slack on the classical CHSH bound
};

}  // namespace logos
