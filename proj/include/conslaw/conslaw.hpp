#pragma once

#include "conslaw/baseline.hpp"
#include "conslaw/conserve.hpp"
#include "conslaw/integrate.hpp"
#include "conslaw/objective.hpp"
#include "conslaw/spectral.hpp"
#include "conslaw/trace.hpp"
#include "conslaw/types.hpp"
