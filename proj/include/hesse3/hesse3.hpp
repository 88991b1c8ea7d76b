#pragma once

#include "hesse3/error.hpp"
#include "hesse3/field.hpp"
#include "hesse3/poly.hpp"
#include "hesse3/factor.hpp"
#include "hesse3/projective.hpp"
#include "hesse3/cubic.hpp"
#include "hesse3/elliptic.hpp"
#include "hesse3/torsion.hpp"
#include "hesse3/pencil.hpp"
#include "hesse3/symplectic.hpp"
#include "hesse3/parse.hpp"
