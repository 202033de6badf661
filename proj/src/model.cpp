#include "lvsg/model.hpp"

#include "lvsg/error.hpp"

#include <cmath>
#include <string>

namespace lvsg {

void ModelParams::validate() const
{
    require(std::isfinite(phi) && phi >= 0.0, "phi must be a nonnegative number");
    require(std::isfinite(temperature) && temperature >= 0.0, "temperature must be a nonnegative number");
}

void ModelParams::validate_gibbs() const
{
    validate();
    require(temperature > 0.0, "the Gibbs measure needs temperature > 0");
    require(temperature < phi, "the Gibbs measure needs T < phi (got T = " + std::to_string(temperature)
                                   + ", phi = " + std::to_string(phi) + ")");
}

} // namespace lvsg
