#pragma once

#include "cospectral/cotree.hpp"
#include "cospectral/diagonalizer.hpp"
#include "cospectral/families.hpp"
#include "cospectral/oracle.hpp"
#include "cospectral/recognition.hpp"
#include "cospectral/scalar.hpp"
#include "cospectral/spectral.hpp"
