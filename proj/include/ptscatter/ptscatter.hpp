#pragma once

#include "ptscatter/cell.hpp"
#include "ptscatter/chebyshev.hpp"
#include "ptscatter/core.hpp"
#include "ptscatter/limits.hpp"
#include "ptscatter/oracle.hpp"
#include "ptscatter/scattering.hpp"
#include "ptscatter/stack.hpp"
