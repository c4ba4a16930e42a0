#pragma once

#include "hvp/banded.hpp"
#include "hvp/model.hpp"
#include "hvp/pade.hpp"
#include "hvp/report.hpp"
#include "hvp/scalar.hpp"
#include "hvp/series.hpp"
#include "hvp/spectral.hpp"
