#pragma once

#include "lvsg/randmat.hpp"

namespace lvsg {

/// Ecosystem parameters shared by the SDE and the Gibbs measure.
struct ModelParams {
    InteractionMatrix sigma = InteractionMatrix::zero(1);
    double phi = 1.0;         ///< immigration rate, >= 0
    double temperature = 0.5; ///< demographic noise T, >= 0 for the SDE

    int n() const { return sigma.n(); }
    double beta() const { return 1.0 / temperature; }

    /// SDE-level checks: phi >= 0, T >= 0, finite values.
    void validate() const;
    /// Gibbs-level checks: additionally 0 < T < phi (so phi beta > 1).
    void validate_gibbs() const;
};

} // namespace lvsg
