#pragma once

#include "tunnel/barrier.hpp"
#include "tunnel/errors.hpp"
#include "tunnel/optimize.hpp"
#include "tunnel/packet.hpp"
#include "tunnel/quadrature.hpp"
#include "tunnel/report.hpp"
#include "tunnel/series.hpp"
#include "tunnel/spectral.hpp"
